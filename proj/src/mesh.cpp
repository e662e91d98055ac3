#include "shishkin/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shishkin/error.hpp"
#include "shishkin/problem.hpp"

namespace shishkin {

std::string_view to_string(MeshOrder order) {
  return order == MeshOrder::First ? "first" : "second";
}

MeshOrder parse_mesh_order(std::string_view text) {
  if (text == "first") return MeshOrder::First;
  if (text == "second") return MeshOrder::Second;
  throw MeshError("unknown mesh order '" + std::string(text) +
                  "' (expected 'first' or 'second')");
}

bool is_admissible_N(int N, std::size_t n) {
  if (N <= 0 || (N & (N - 1)) != 0) return false;
  if (n + 2 >= 31) return false;
  return N >= (1 << (n + 2));
}

namespace {

void require_admissible(int N, std::size_t n) {
  if (!is_admissible_N(N, n)) {
    throw MeshError("N = " + std::to_string(N) +
                    " is not admissible: need N = 2^n * k with k a power of two, "
                    "k >= 4 (n = " + std::to_string(n) + ")");
  }
}

}  // namespace

TransitionParams transition_parameters(std::span<const double> eps, double alpha, int N,
                                       MeshOrder order) {
  check_eps_vector(eps);
  const std::size_t n = eps.size();
  require_admissible(N, n);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw MeshError("alpha must be positive and finite");
  }

  TransitionParams p;
  p.order = order;
  p.alpha = alpha;
  p.N = N;
  p.ln_N = std::log(static_cast<double>(N));
  p.sigma.assign(n, 0.0);
  p.b.assign(n, false);

  const double width = order == MeshOrder::First ? 1.0 : 2.0;
  for (std::size_t k = n; k-- > 0;) {
    const double cap = k + 1 == n ? 0.25 : p.sigma[k + 1] / 2.0;
    const double layer = width * std::sqrt(eps[k] / alpha) * p.ln_N;
    if (layer < cap) {
      p.sigma[k] = layer;
      p.b[k] = true;
    } else {
      p.sigma[k] = cap;
    }
  }
  return p;
}

TransitionParams uniform_parameters(std::size_t n, double alpha, int N, MeshOrder order) {
  if (n == 0) throw MeshError("system size must be positive");
  require_admissible(N, n);
  TransitionParams p;
  p.order = order;
  p.alpha = alpha;
  p.N = N;
  p.ln_N = std::log(static_cast<double>(N));
  p.sigma.assign(n, 0.0);
  p.b.assign(n, false);
  p.sigma[n - 1] = 0.25;
  for (std::size_t k = n - 1; k-- > 0;) p.sigma[k] = p.sigma[k + 1] / 2.0;
  return p;
}

Mesh build_mesh(const TransitionParams& params) {
  const std::size_t n = params.sigma.size();
  const int N = params.N;
  if (n == 0) throw MeshError("transition parameters are empty");
  for (std::size_t k = 0; k < n; ++k) {
    const double upper = k + 1 == n ? 0.25 : params.sigma[k + 1];
    if (!(params.sigma[k] > 0.0 && params.sigma[k] <= upper) ||
        (k + 1 < n && !(params.sigma[k] < upper))) {
      throw MeshError("transition parameters must satisfy 0 < s_1 < ... < s_n <= 1/4");
    }
  }

  // Left bands: [0,s_1] gets N/2^(n+1); (s_i,s_{i+1}] gets N/2^(n-i+2).
  std::vector<int> left;
  auto count = [&](int shift) {
    if (shift >= 31 || N % (1 << shift) != 0) {
      throw MeshError("band count N/2^" + std::to_string(shift) +
                      " is not an integer for N = " + std::to_string(N));
    }
    return N >> shift;
  };
  left.push_back(count(static_cast<int>(n) + 1));
  for (std::size_t i = 1; i < n; ++i) left.push_back(count(static_cast<int>(n - i) + 2));
  const int middle = count(1);
  if (middle % 2 != 0) throw MeshError("middle band needs an even interval count");

  Mesh mesh;
  mesh.params_ = params;
  mesh.band_counts_ = left;
  mesh.band_counts_.push_back(middle);
  mesh.band_counts_.insert(mesh.band_counts_.end(), left.rbegin(), left.rend());

  std::vector<double>& x = mesh.points_;
  x.assign(static_cast<std::size_t>(N) + 1, 0.0);
  std::size_t j = 0;
  double start = 0.0;
  for (std::size_t band = 0; band < n; ++band) {
    const double end = params.sigma[band];
    const int c = left[band];
    const double step = (end - start) / c;
    for (int k = 1; k < c; ++k) x[++j] = start + k * step;
    x[++j] = end;
    start = end;
  }
  // Left half of the middle band, ending exactly at 1/2.
  const double step = (1.0 - 2.0 * start) / middle;
  for (int k = 1; k < middle / 2; ++k) x[++j] = start + k * step;
  x[++j] = 0.5;
  for (std::size_t k = 0; k < static_cast<std::size_t>(N) / 2; ++k) {
    x[static_cast<std::size_t>(N) - k] = 1.0 - x[k];
  }
  return mesh;
}

int Mesh::band_of_point(std::size_t j) const {
  if (j == 0) return 0;
  std::size_t cumulative = 0;
  for (std::size_t b = 0; b < band_counts_.size(); ++b) {
    cumulative += static_cast<std::size_t>(band_counts_[b]);
    if (j <= cumulative) return static_cast<int>(b);
  }
  return static_cast<int>(band_counts_.size()) - 1;
}

Mesh Mesh::bisect() const {
  Mesh fine;
  fine.params_ = params_;
  fine.band_counts_ = band_counts_;
  for (int& c : fine.band_counts_) c *= 2;
  const std::size_t m = points_.size() - 1;
  fine.points_.assign(2 * m + 1, 0.0);
  for (std::size_t j = 0; j <= m; ++j) fine.points_[2 * j] = points_[j];
  for (std::size_t j = 0; j < m / 2; ++j) {
    fine.points_[2 * j + 1] = 0.5 * (points_[j] + points_[j + 1]);
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (2 * k + 1 > m) fine.points_[2 * k + 1] = 1.0 - fine.points_[2 * m - 2 * k - 1];
  }
  return fine;
}

double layer_function(Side side, std::size_t i, double x, std::span<const double> eps,
                      double alpha) {
  const double t = side == Side::Left ? x : 1.0 - x;
  return std::exp(-t * std::sqrt(alpha / eps[i]));
}

InteractionPoint interaction_point(std::size_t i, std::size_t j,
                                   std::span<const double> eps, double alpha) {
  if (!(i < j) || j >= eps.size()) {
    throw MeshError("interaction point needs i < j <= n (got i = " +
                    std::to_string(i + 1) + ", j = " + std::to_string(j + 1) + ")");
  }
  const double si = std::sqrt(eps[i]);
  const double sj = std::sqrt(eps[j]);
  InteractionPoint p;
  p.x = std::log(sj / si) / (std::sqrt(alpha) * (1.0 / si - 1.0 / sj));
  p.ordering_hypothesis = si <= sj / 2.0;
  return p;
}

}  // namespace shishkin
