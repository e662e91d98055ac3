#pragma once

#include <memory>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "shishkin/discretization.hpp"

namespace shishkin {

/// Discrete solution U_i(x_j); values is (N+1) x n with row j = U(x_j).
struct SolutionGrid {
  Eigen::MatrixXd values;
  std::shared_ptr<const Mesh> mesh;
  double residual_norm = 0.0;
  /// Set when the residual exceeds 1e-6 * scale.
  std::optional<std::string> warning;

  double operator()(std::size_t j, std::size_t i) const {
    return values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  }
};

struct SolveOptions {
  /// One step of iterative refinement with the stored factorisation.
  bool refine_once = false;
};

/// Pivots smaller than this in magnitude make a block singular.
inline constexpr double kSingularPivot = 1e-300;

/// Block LU (block Thomas) over the N+1 block rows, dense partial-pivoting LU
/// inside each n x n block. Throws SolverError naming the block row whose
/// reduced diagonal block is singular.
SolutionGrid solve(const DiscreteSystem& system, const SolveOptions& options = {});

/// max norm of apply_operator(system, values).
double residual_norm(const DiscreteSystem& system, const Eigen::MatrixXd& values);
inline double residual_norm(const DiscreteSystem& system, const SolutionGrid& grid) {
  return residual_norm(system, grid.values);
}

}  // namespace shishkin
