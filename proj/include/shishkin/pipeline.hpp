#pragma once

#include <memory>

#include "shishkin/block_solver.hpp"
#include "shishkin/discretization.hpp"
#include "shishkin/mesh.hpp"
#include "shishkin/problem.hpp"

namespace shishkin {

struct SolveSettings {
  MeshOrder order = MeshOrder::First;
  int sample_count = kDefaultSampleCount;
  double safety = kDefaultSafety;
  /// Build the b = 0 (uniform) mesh whatever the eps are.
  bool force_uniform = false;
  bool refine_once = false;
};

struct ProblemSolution {
  double alpha = 0.0;
  /// max sqrt(eps_i) <= sqrt(alpha)/4; when false the rate guarantee does not
  /// apply but the solve still runs.
  bool eps_condition = false;
  std::shared_ptr<const Mesh> mesh;
  DiscreteSystem system;
  StructureReport structure;
  SolutionGrid grid;
};

/// Validates the problem, chooses alpha, builds the mesh for N, assembles,
/// re-checks the sign structure on the mesh and solves.
/// Throws ProblemError when validation or the structure check fails.
ProblemSolution solve_problem(const ProblemSpec& spec, int N, const SolveSettings& settings);

/// Mesh of solve_problem without solving (validation included).
std::shared_ptr<const Mesh> problem_mesh(const ProblemSpec& spec, int N,
                                         const SolveSettings& settings,
                                         double* alpha_out = nullptr);

/// Assemble, structure-check and solve on a given mesh.
ProblemSolution solve_on_mesh(const ProblemSpec& spec, std::shared_ptr<const Mesh> mesh,
                              double alpha, const SolveSettings& settings);

/// Alpha for the problem (validation included); throws ProblemError with the
/// first violation when the conditions on A fail.
double validated_alpha(const ProblemSpec& spec, const SolveSettings& settings);

}  // namespace shishkin
