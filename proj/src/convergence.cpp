#include "shishkin/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "shishkin/error.hpp"

namespace shishkin {

std::string_view to_string(Estimator e) {
  return e == Estimator::Exact ? "exact" : "two-mesh";
}

std::vector<ConvergenceRow> ConvergenceReport::rows_for(std::size_t eps_id) const {
  std::vector<ConvergenceRow> out;
  for (const SweepCell& c : cells) {
    if (c.eps_id == eps_id) out.push_back(c.row);
  }
  return out;
}

double exact_scalar_solution(double eps, double a, double f_const, double u0, double u1,
                             double x) {
  if (x == 0.0) return u0;
  if (x == 1.0) return u1;
  const double k = std::sqrt(a / eps);
  const double mu = std::exp(-k);
  const double reduced = f_const / a;
  const double d0 = u0 - reduced;
  const double d1 = u1 - reduced;
  const double det = 1.0 - mu * mu;
  const double c1 = (d0 - mu * d1) / det;
  const double c2 = (d1 - mu * d0) / det;
  return reduced + c1 * std::exp(-x * k) + c2 * std::exp(-(1.0 - x) * k);
}

void check_doubling(std::span<const int> Ns, std::size_t n) {
  if (Ns.empty()) throw MeshError("no mesh sizes given");
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    if (!is_admissible_N(Ns[k], n)) {
      throw MeshError("N = " + std::to_string(Ns[k]) + " is not admissible for n = " +
                      std::to_string(n));
    }
    if (k > 0 && Ns[k] != 2 * Ns[k - 1]) {
      throw MeshError("mesh sizes must double: " + std::to_string(Ns[k - 1]) +
                      " is followed by " + std::to_string(Ns[k]));
    }
  }
}

std::vector<std::pair<int, std::optional<double>>> convergence_order(
    std::span<const std::pair<int, double>> Ds) {
  std::vector<std::pair<int, std::optional<double>>> out;
  for (std::size_t k = 0; k < Ds.size(); ++k) {
    std::optional<double> p;
    if (k + 1 < Ds.size()) {
      if (Ds[k + 1].first != 2 * Ds[k].first) {
        throw MeshError("mesh sizes must double: " + std::to_string(Ds[k].first) +
                        " is followed by " + std::to_string(Ds[k + 1].first));
      }
      const double ratio = Ds[k].second / Ds[k + 1].second;
      if (Ds[k + 1].second > 0.0 && std::isfinite(ratio) && ratio > 0.0) {
        p = std::log2(ratio);
      }
    }
    out.emplace_back(Ds[k].first, p);
  }
  return out;
}

namespace {

void attach_orders(std::vector<ConvergenceRow>& rows) {
  std::vector<std::pair<int, double>> ds;
  for (const auto& r : rows) ds.emplace_back(r.N, r.D);
  const auto orders = convergence_order(ds);
  for (std::size_t k = 0; k < rows.size(); ++k) rows[k].p = orders[k].second;
}

double last_defined_order(const std::vector<ConvergenceRow>& rows) {
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->p) return *it->p;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string literal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConvergenceReport exact_error_study(const ProblemSpec& spec, const ExactSolution& exact,
                                    std::span<const int> Ns,
                                    const SolveSettings& settings) {
  check_doubling(Ns, spec.n());
  ConvergenceReport report;
  report.method_order = settings.order;
  report.estimator = Estimator::Exact;
  report.eps_sweep.push_back(spec.eps());
  for (int N : Ns) {
    const ProblemSolution sol = solve_problem(spec, N, settings);
    const auto& x = sol.mesh->points();
    double err = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (std::size_t i = 0; i < spec.n(); ++i) {
        err = std::max(err, std::fabs(sol.grid(j, i) - exact(i, x[j])));
      }
    }
    report.rows.push_back({N, err, std::nullopt, sol.grid.residual_norm});
  }
  attach_orders(report.rows);
  for (const auto& r : report.rows) report.cells.push_back({0, r, std::nullopt});
  report.uniform_order_estimate = last_defined_order(report.rows);
  return report;
}

ConvergenceReport exact_error_study(double eps, double a, double f_const, double u0,
                                    double u1, std::span<const int> Ns,
                                    const SolveSettings& settings) {
  if (!(a > 0.0)) throw ProblemError("reaction coefficient a must be positive");
  const ProblemSpec spec =
      ProblemSpec::create({eps}, {literal(a)}, {literal(f_const)}, {u0}, {u1});
  return exact_error_study(
      spec,
      [=](std::size_t, double x) { return exact_scalar_solution(eps, a, f_const, u0, u1, x); },
      Ns, settings);
}

TwoMeshResult two_mesh_difference(const ProblemSpec& spec, int N,
                                  const SolveSettings& settings) {
  double alpha = 0.0;
  auto coarse_mesh = problem_mesh(spec, N, settings, &alpha);
  auto fine_mesh = std::make_shared<const Mesh>(coarse_mesh->bisect());
  const ProblemSolution coarse = solve_on_mesh(spec, coarse_mesh, alpha, settings);
  const ProblemSolution fine = solve_on_mesh(spec, fine_mesh, alpha, settings);

  TwoMeshResult out;
  const auto points = coarse_mesh->points().size();
  for (std::size_t j = 0; j < points; ++j) {
    for (std::size_t i = 0; i < spec.n(); ++i) {
      out.D = std::max(out.D, std::fabs(coarse.grid(j, i) - fine.grid(2 * j, i)));
    }
  }
  out.residual = std::max(coarse.grid.residual_norm, fine.grid.residual_norm);
  return out;
}

ConvergenceReport parameter_sweep(const ProblemSpec& spec_template,
                                  const std::vector<std::vector<double>>& eps_grid,
                                  std::span<const int> Ns, const SolveSettings& settings,
                                  unsigned workers) {
  check_doubling(Ns, spec_template.n());
  if (eps_grid.empty()) throw ProblemError("empty eps grid");

  ConvergenceReport report;
  report.method_order = settings.order;
  report.estimator = Estimator::TwoMesh;
  report.eps_sweep = eps_grid;

  const std::size_t per_eps = Ns.size();
  report.cells.resize(eps_grid.size() * per_eps);
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    for (std::size_t k = 0; k < per_eps; ++k) {
      SweepCell& cell = report.cells[e * per_eps + k];
      cell.eps_id = e;
      cell.row.N = Ns[k];
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < report.cells.size(); c = next++) {
      SweepCell& cell = report.cells[c];
      try {
        const ProblemSpec spec = spec_template.with_eps(eps_grid[cell.eps_id]);
        const TwoMeshResult r = two_mesh_difference(spec, cell.row.N, settings);
        cell.row.D = r.D;
        cell.row.residual = r.residual;
      } catch (const std::exception& ex) {
        cell.error = ex.what();
        cell.row.D = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(report.cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  double estimate = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    std::vector<ConvergenceRow> rows;
    bool failed = false;
    for (std::size_t k = 0; k < per_eps; ++k) {
      const SweepCell& cell = report.cells[e * per_eps + k];
      failed = failed || cell.error.has_value();
      rows.push_back(cell.row);
    }
    if (failed) continue;
    attach_orders(rows);
    for (std::size_t k = 0; k < per_eps; ++k) report.cells[e * per_eps + k].row.p = rows[k].p;
    estimate = std::min(estimate, last_defined_order(rows));
  }
  report.uniform_order_estimate =
      std::isfinite(estimate) ? estimate : std::numeric_limits<double>::quiet_NaN();

  for (std::size_t k = 0; k < per_eps; ++k) {
    ConvergenceRow worst{Ns[k], 0.0, std::nullopt, 0.0};
    bool any = false;
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
      const SweepCell& cell = report.cells[e * per_eps + k];
      if (cell.error) continue;
      any = true;
      worst.D = std::max(worst.D, cell.row.D);
      worst.residual = std::max(worst.residual, cell.row.residual);
    }
    if (!any) worst.D = std::numeric_limits<double>::quiet_NaN();
    report.rows.push_back(worst);
  }
  attach_orders(report.rows);
  return report;
}

double rate_bound(MeshOrder order, int N) {
  const double g = std::log(static_cast<double>(N)) / static_cast<double>(N);
  return order == MeshOrder::First ? g : g * g;
}

double fitted_rate_constant(std::span<const ConvergenceRow> rows, MeshOrder order) {
  double c = 0.0;
  for (const auto& r : rows) c = std::max(c, r.D / rate_bound(order, r.N));
  return c;
}

}  // namespace shishkin
