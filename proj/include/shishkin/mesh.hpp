#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace shishkin {

/// First-order (sigma) or second-order (tau) transition parameters.
enum class MeshOrder { First, Second };

std::string_view to_string(MeshOrder order);
/// Accepts "first" / "second". Throws MeshError otherwise.
MeshOrder parse_mesh_order(std::string_view text);

/**
 * Transition parameters of the piecewise-uniform mesh.
 *
 *   First:  s_n = min{1/4,   sqrt(eps_n/alpha) ln N},  s_i = min{s_{i+1}/2,   sqrt(eps_i/alpha) ln N}
 *   Second: t_n = min{1/4, 2 sqrt(eps_n/alpha) ln N},  t_i = min{t_{i+1}/2, 2 sqrt(eps_i/alpha) ln N}
 *
 * b[i] is true when the ln N branch is the strict minimum, i.e. the
 * parameter sits where the i-th layer function has decayed to N^-1 (first
 * order) or N^-2 (second order). Ties resolve to the cap branch.
 */
struct TransitionParams {
  MeshOrder order = MeshOrder::First;
  std::vector<double> sigma;
  std::vector<bool> b;
  double alpha = 0.0;
  int N = 0;
  double ln_N = 0.0;
};

/// N must equal 2^n * k with k a power of two and k >= 4, i.e. N is a power
/// of two with N >= 2^(n+2).
bool is_admissible_N(int N, std::size_t n);

/// Throws MeshError for inadmissible N, alpha <= 0 or an invalid eps vector.
TransitionParams transition_parameters(std::span<const double> eps, double alpha, int N,
                                       MeshOrder order);

/// Parameters with b = 0 forced: sigma_i = 2^-(n-i) / 4, giving the uniform
/// mesh with spacing 1/N.
TransitionParams uniform_parameters(std::size_t n, double alpha, int N, MeshOrder order);

/**
 * Piecewise-uniform mesh on [0,1] with 2n+1 bands
 *
 *   [0,s_1] (s_1,s_2] ... (s_{n-1},s_n] (s_n,1-s_n] (1-s_n,1-s_{n-1}] ... (1-s_1,1]
 *
 * holding N/2^(n+1), N/2^(n-i+2) (i = 1..n-1), N/2, mirrored, intervals.
 * Transition points are stored exactly; x_{N-j} = 1 - x_j.
 */
class Mesh {
 public:
  const std::vector<double>& points() const { return points_; }
  const std::vector<int>& band_counts() const { return band_counts_; }
  const TransitionParams& params() const { return params_; }

  /// Number of intervals (points().size() - 1).
  int intervals() const { return static_cast<int>(points_.size()) - 1; }
  /// h_j = x_j - x_{j-1}, j >= 1.
  double h(std::size_t j) const { return points_[j] - points_[j - 1]; }
  /// (h_j + h_{j+1}) / 2, interior j.
  double h_bar(std::size_t j) const { return 0.5 * (points_[j + 1] - points_[j - 1]); }
  /// Band holding the interval (x_{j-1}, x_j]; band 0 for j = 0.
  int band_of_point(std::size_t j) const;

  /// Every interval split at its midpoint. Transition points (and all
  /// existing points) are kept, so points()[j] == bisect().points()[2j].
  /// The parameters are those of this mesh.
  Mesh bisect() const;

  friend Mesh build_mesh(const TransitionParams& params);

 private:
  Mesh() = default;
  std::vector<double> points_;
  std::vector<int> band_counts_;
  TransitionParams params_;
};

/// Throws MeshError if a band count is not an integer.
Mesh build_mesh(const TransitionParams& params);

enum class Side { Left, Right };

/// B^l_i(x) = exp(-x sqrt(alpha/eps_i)), B^r_i(x) = B^l_i(1-x). `i` is
/// zero-based.
double layer_function(Side side, std::size_t i, double x, std::span<const double> eps,
                      double alpha);

struct InteractionPoint {
  double x = 0.0;
  /// sqrt(eps_i) <= sqrt(eps_j)/2, under which the crossing points are known
  /// to lie in (0, 1/2] and to be ordered.
  bool ordering_hypothesis = false;
};

/// Point where B^l_i/sqrt(eps_i) and B^l_j/sqrt(eps_j) cross:
///   x_ij = ln(sqrt(eps_j)/sqrt(eps_i)) / (sqrt(alpha) (1/sqrt(eps_i) - 1/sqrt(eps_j))).
/// Zero-based i < j required; throws MeshError otherwise.
InteractionPoint interaction_point(std::size_t i, std::size_t j,
                                   std::span<const double> eps, double alpha);

}  // namespace shishkin
