#include "shishkin/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "shishkin/error.hpp"

namespace shishkin {

double DiscreteSystem::rhs_norm() const {
  double m = 0.0;
  for (const auto& f : rhs) m = std::max(m, f.cwiseAbs().maxCoeff());
  return m;
}

double DiscreteSystem::scale() const {
  return 1.0 + boundary_left.cwiseAbs().maxCoeff() +
         boundary_right.cwiseAbs().maxCoeff() + rhs_norm();
}

DiscreteSystem assemble(const ProblemSpec& spec, std::shared_ptr<const Mesh> mesh) {
  const std::size_t n = spec.n();
  if (mesh->params().sigma.size() != n) {
    throw ProblemError("mesh was built for n = " +
                       std::to_string(mesh->params().sigma.size()) +
                       ", problem has n = " + std::to_string(n));
  }
  const int N = mesh->intervals();
  const auto& eps = spec.eps();

  DiscreteSystem sys;
  sys.N = N;
  sys.n = n;
  sys.boundary_left = Eigen::Map<const Eigen::VectorXd>(spec.u_left().data(),
                                                        static_cast<Eigen::Index>(n));
  sys.boundary_right = Eigen::Map<const Eigen::VectorXd>(spec.u_right().data(),
                                                         static_cast<Eigen::Index>(n));
  const auto rows = static_cast<std::size_t>(N - 1);
  sys.sub.reserve(rows);
  sys.diag.reserve(rows);
  sys.super.reserve(rows);
  sys.rhs.reserve(rows);

  const auto ni = static_cast<Eigen::Index>(n);
  std::vector<double> a(n * n);
  for (std::size_t j = 1; j < static_cast<std::size_t>(N); ++j) {
    const double x = mesh->points()[j];
    const double hl = mesh->h(j);
    const double hr = mesh->h(j + 1);
    const double hbar = mesh->h_bar(j);
    spec.eval_a(x, a);

    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::MatrixXd centre(ni, ni);
    Eigen::VectorXd f(ni);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double wl = eps[i] / (hbar * hl);
      const double wr = eps[i] / (hbar * hr);
      lower(ii, ii) = -wl;
      upper(ii, ii) = -wr;
      for (std::size_t k = 0; k < n; ++k) {
        centre(ii, static_cast<Eigen::Index>(k)) = a[i * n + k];
      }
      centre(ii, ii) += wl + wr;
      f(ii) = spec.eval_f(i, x);
    }
    sys.sub.push_back(std::move(lower));
    sys.diag.push_back(std::move(centre));
    sys.super.push_back(std::move(upper));
    sys.rhs.push_back(std::move(f));
  }
  sys.mesh = std::move(mesh);
  return sys;
}

Eigen::MatrixXd apply_operator(const DiscreteSystem& system, const Eigen::MatrixXd& values) {
  const auto N = static_cast<Eigen::Index>(system.N);
  if (values.rows() != N + 1 || values.cols() != static_cast<Eigen::Index>(system.n)) {
    throw ProblemError("grid dimensions do not match the discrete system");
  }
  Eigen::MatrixXd r(values.rows(), values.cols());
  r.row(0) = values.row(0) - system.boundary_left.transpose();
  r.row(N) = values.row(N) - system.boundary_right.transpose();
  for (Eigen::Index j = 1; j < N; ++j) {
    const auto k = static_cast<std::size_t>(j - 1);
    const Eigen::VectorXd lu = system.sub[k] * values.row(j - 1).transpose() +
                               system.diag[k] * values.row(j).transpose() +
                               system.super[k] * values.row(j + 1).transpose();
    r.row(j) = (lu - system.rhs[k]).transpose();
  }
  return r;
}

StructureReport check_sign_structure(const DiscreteSystem& system) {
  StructureReport report;
  report.min_dominance_margin = 1.0;  // boundary identity rows
  const std::size_t n = system.n;
  for (std::size_t j = 1; j < static_cast<std::size_t>(system.N); ++j) {
    const std::size_t k = j - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const std::size_t row = j * n + i;
      double off = 0.0;
      auto scan = [&](const Eigen::MatrixXd& block, std::size_t block_col, bool centre) {
        for (std::size_t c = 0; c < n; ++c) {
          if (centre && c == i) continue;
          const double v = block(ii, static_cast<Eigen::Index>(c));
          if (v > 0.0) report.violations.push_back({row, block_col * n + c, v, false});
          off += std::fabs(v);
        }
      };
      scan(system.sub[k], j - 1, false);
      scan(system.diag[k], j, true);
      scan(system.super[k], j + 1, false);
      const double d = system.diag[k](ii, ii);
      const double margin = d - off;
      report.min_dominance_margin = std::min(report.min_dominance_margin, margin);
      if (!(margin > 0.0)) report.violations.push_back({row, row, margin, true});
    }
  }
  report.ok = report.violations.empty();
  return report;
}

void write_matrix_coordinates(std::ostream& out, const DiscreteSystem& system) {
  const std::size_t n = system.n;
  const auto N = static_cast<std::size_t>(system.N);
  char buf[64];
  auto emit = [&](std::size_t row, std::size_t col, double v) {
    std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", row, col, v);
    out << buf;
  };
  for (std::size_t i = 0; i < n; ++i) emit(i, i, 1.0);
  for (std::size_t j = 1; j < N; ++j) {
    const std::size_t k = j - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      auto block = [&](const Eigen::MatrixXd& m, std::size_t block_col) {
        for (std::size_t c = 0; c < n; ++c) {
          const double v = m(ii, static_cast<Eigen::Index>(c));
          if (v != 0.0) emit(j * n + i, block_col * n + c, v);
        }
      };
      block(system.sub[k], j - 1);
      block(system.diag[k], j);
      block(system.super[k], j + 1);
    }
  }
  for (std::size_t i = 0; i < n; ++i) emit(N * n + i, N * n + i, 1.0);
}

}  // namespace shishkin
