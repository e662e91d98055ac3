#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shishkin/pipeline.hpp"
#include "shishkin/problem.hpp"

namespace shishkin {

/// How D_N was measured.
enum class Estimator {
  Exact,    ///< max |U - u| against a known solution
  TwoMesh,  ///< max |U^N - U^2N| on the coarse points of a bisected mesh
};

std::string_view to_string(Estimator e);

struct ConvergenceRow {
  int N = 0;
  double D = 0.0;
  std::optional<double> p;  ///< log2(D_N / D_2N); absent for the last N
  double residual = 0.0;    ///< largest solver residual behind D
};

/// One (eps, N) measurement of a sweep.
struct SweepCell {
  std::size_t eps_id = 0;
  ConvergenceRow row;
  std::optional<std::string> error;  ///< set when the cell failed
};

struct ConvergenceReport {
  MeshOrder method_order = MeshOrder::First;
  Estimator estimator = Estimator::TwoMesh;
  /// Worst (largest) D over the sweep for each N, with its orders.
  std::vector<ConvergenceRow> rows;
  std::vector<std::vector<double>> eps_sweep;
  /// Per-eps measurements, eps-major then increasing N.
  std::vector<SweepCell> cells;
  /// min over eps of the order at the largest N where one is defined; NaN if
  /// no order is defined.
  double uniform_order_estimate = 0.0;

  /// Cells of one eps vector in increasing N.
  std::vector<ConvergenceRow> rows_for(std::size_t eps_id) const;
};

/// Closed-form solution of -eps u'' + a u = f on (0,1), u(0) = u0, u(1) = u1,
/// constant a > 0 and f:
///   u = f/a + c1 exp(-x sqrt(a/eps)) + c2 exp(-(1-x) sqrt(a/eps)).
/// Returns u0 at x = 0 and u1 at x = 1 exactly.
double exact_scalar_solution(double eps, double a, double f_const, double u0, double u1,
                             double x);

/// Throws MeshError unless Ns is nonempty, admissible for n and each entry
/// doubles the previous.
void check_doubling(std::span<const int> Ns, std::size_t n);

/// p_N = log2(D_N / D_2N) for consecutive entries; the last N and entries
/// with a zero or non-finite ratio have no order. Throws MeshError when the
/// N values do not double.
std::vector<std::pair<int, std::optional<double>>> convergence_order(
    std::span<const std::pair<int, double>> Ds);

/// Exact solution component i at x.
using ExactSolution = std::function<double(std::size_t i, double x)>;

/// E_N = max_{i,j} |U_i(x_j) - u_i(x_j)| on the order-appropriate mesh.
ConvergenceReport exact_error_study(const ProblemSpec& spec, const ExactSolution& exact,
                                    std::span<const int> Ns, const SolveSettings& settings);

/// The n = 1 constant-coefficient problem against exact_scalar_solution.
ConvergenceReport exact_error_study(double eps, double a, double f_const, double u0,
                                    double u1, std::span<const int> Ns,
                                    const SolveSettings& settings);

struct TwoMeshResult {
  double D = 0.0;
  double residual = 0.0;
};

/// D_N = max over coarse points of ||U^N - U^2N||, the 2N mesh bisecting the
/// N mesh (same transition points).
TwoMeshResult two_mesh_difference(const ProblemSpec& spec, int N,
                                  const SolveSettings& settings);

/// Two-mesh study of `spec_template` with each eps vector of `eps_grid`.
/// Cells are independent and run on up to `workers` threads; a failing cell
/// is recorded and the rest of the sweep continues.
ConvergenceReport parameter_sweep(const ProblemSpec& spec_template,
                                  const std::vector<std::vector<double>>& eps_grid,
                                  std::span<const int> Ns, const SolveSettings& settings,
                                  unsigned workers = 1);

/// N^-1 ln N (first order) or its square (second order).
double rate_bound(MeshOrder order, int N);

/// Smallest C with D_N <= C * rate_bound(N) over the given rows.
double fitted_rate_constant(std::span<const ConvergenceRow> rows, MeshOrder order);

inline const std::vector<int> kDefaultNs{64, 128, 256, 512, 1024};

}  // namespace shishkin
