#include "shishkin/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "shishkin/error.hpp"

namespace shishkin {

namespace {

std::string entry_name(std::size_t i, std::size_t j) {
  return "A(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

Expr parse_entry(const std::string& source, const std::string& name) {
  try {
    return parse(source);
  } catch (const ParseError& e) {
    throw ParseError(name + ": " + e.what(), e.offset(), e.expected());
  }
}

struct RowSumMinimum {
  double value = std::numeric_limits<double>::infinity();
  double x = 0.0;
  std::size_t row = 0;
};

RowSumMinimum min_row_sum(const ProblemSpec& spec, int sample_count) {
  const std::size_t n = spec.n();
  std::vector<double> a(n * n);
  RowSumMinimum best;
  for (double x : sample_points(sample_count)) {
    spec.eval_a(x, a);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += a[i * n + j];
      if (sum < best.value) best = {sum, x, i};
    }
  }
  return best;
}

}  // namespace

void check_eps_vector(std::span<const double> eps) {
  if (eps.empty()) throw ProblemError("eps must contain at least one entry");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "eps[" << i + 1 << "] = " << eps[i] << " is outside (0, 1]";
      throw ProblemError(msg.str());
    }
    if (i > 0 && eps[i] == eps[i - 1]) {
      std::ostringstream msg;
      msg << "eps[" << i << "] and eps[" << i + 1
          << "] coincide; coincident perturbation parameters are not supported";
      throw CoincidentEpsError(msg.str());
    }
    if (i > 0 && eps[i] < eps[i - 1]) {
      std::ostringstream msg;
      msg << "eps must be strictly increasing (eps[" << i << "] > eps[" << i + 1
          << "])";
      throw ProblemError(msg.str());
    }
  }
}

ProblemSpec ProblemSpec::create(std::vector<double> eps,
                                std::vector<std::string> a_sources,
                                std::vector<std::string> f_sources,
                                std::vector<double> u_left,
                                std::vector<double> u_right,
                                std::optional<double> alpha_override) {
  check_eps_vector(eps);
  const std::size_t n = eps.size();
  if (a_sources.size() != n * n) {
    throw ProblemError("A must have " + std::to_string(n * n) + " entries, got " +
                       std::to_string(a_sources.size()));
  }
  if (f_sources.size() != n) {
    throw ProblemError("f must have " + std::to_string(n) + " entries, got " +
                       std::to_string(f_sources.size()));
  }
  if (u_left.size() != n || u_right.size() != n) {
    throw ProblemError("boundary vectors must have " + std::to_string(n) +
                       " entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u_left[i]) || !std::isfinite(u_right[i])) {
      throw ProblemError("boundary data must be finite");
    }
  }
  if (alpha_override && !(*alpha_override > 0.0)) {
    throw ProblemError("alpha override must be positive");
  }

  ProblemSpec spec;
  spec.a_.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      spec.a_.push_back(parse_entry(a_sources[i * n + j], entry_name(i, j)));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    spec.f_.push_back(parse_entry(f_sources[i], "f(" + std::to_string(i + 1) + ")"));
  }
  spec.eps_ = std::move(eps);
  spec.a_sources_ = std::move(a_sources);
  spec.f_sources_ = std::move(f_sources);
  spec.u_left_ = std::move(u_left);
  spec.u_right_ = std::move(u_right);
  spec.alpha_override_ = alpha_override;
  return spec;
}

double ProblemSpec::eval_a(std::size_t i, std::size_t j, double x) const {
  try {
    return eval(a(i, j), x);
  } catch (const DomainError& e) {
    throw DomainError(entry_name(i, j) + ": " + e.what());
  }
}

double ProblemSpec::eval_f(std::size_t i, double x) const {
  try {
    return eval(f(i), x);
  } catch (const DomainError& e) {
    throw DomainError("f(" + std::to_string(i + 1) + "): " + e.what());
  }
}

void ProblemSpec::eval_a(double x, std::span<double> out) const {
  const std::size_t n = this->n();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = eval_a(i, j, x);
  }
}

ProblemSpec ProblemSpec::with_eps(std::vector<double> eps) const {
  if (eps.size() != n()) {
    throw ProblemError("eps vector has " + std::to_string(eps.size()) +
                       " entries, problem has n = " + std::to_string(n()));
  }
  check_eps_vector(eps);
  ProblemSpec copy = *this;
  copy.eps_ = std::move(eps);
  return copy;
}

std::vector<double> sample_points(int count) {
  if (count < 2) throw ProblemError("sample_count must be at least 2");
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    xs[static_cast<std::size_t>(k)] =
        static_cast<double>(k) / static_cast<double>(count - 1);
  }
  return xs;
}

ValidationReport validate_sign_dominance(const ProblemSpec& spec, int sample_count) {
  const std::size_t n = spec.n();
  ValidationReport report;
  report.worst_row_margin = std::numeric_limits<double>::infinity();
  std::vector<double> a(n * n);
  for (double x : sample_points(sample_count)) {
    spec.eval_a(x, a);
    for (std::size_t i = 0; i < n; ++i) {
      double off = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double aij = a[i * n + j];
        if (aij > 0.0) report.violations.push_back({"sign", x, i, j});
        off += std::fabs(aij);
      }
      const double margin = a[i * n + i] - off;
      report.worst_row_margin = std::min(report.worst_row_margin, margin);
      if (!(margin > 0.0)) report.violations.push_back({"dominance", x, i, {}});
    }
  }
  report.a1_holds = report.violations.empty();
  return report;
}

double compute_alpha(const ProblemSpec& spec, int sample_count, double safety) {
  if (!(safety > 0.0 && safety < 1.0)) {
    throw ProblemError("safety factor must lie in (0, 1)");
  }
  const RowSumMinimum m = min_row_sum(spec, sample_count);
  if (!(m.value > 0.0)) {
    std::ostringstream msg;
    msg << "minimum row sum of A is " << m.value << " (row " << m.row + 1
        << ", x = " << m.x << "); no positive alpha exists";
    throw ProblemError(msg.str());
  }
  if (const auto over = spec.alpha_override()) {
    if (!(*over < m.value)) {
      std::ostringstream msg;
      msg << "alpha override " << *over
          << " is not below the minimum row sum " << m.value;
      throw ProblemError(msg.str());
    }
    return *over;
  }
  return safety * m.value;
}

bool check_eps_condition(const ProblemSpec& spec, double alpha) {
  return std::sqrt(spec.eps().back()) <= std::sqrt(alpha) / 4.0;
}

ValidationReport validate(const ProblemSpec& spec, int sample_count, double safety) {
  ValidationReport report = validate_sign_dominance(spec, sample_count);
  const RowSumMinimum m = min_row_sum(spec, sample_count);
  if (!(m.value > 0.0)) {
    report.violations.push_back({"row_sum", m.x, m.row, {}});
  } else if (spec.alpha_override() && !(*spec.alpha_override() < m.value)) {
    report.violations.push_back({"alpha_override", m.x, m.row, {}});
  } else {
    report.a2_alpha = compute_alpha(spec, sample_count, safety);
  }
  if (report.a2_alpha > 0.0) {
    report.a3_holds = check_eps_condition(spec, report.a2_alpha);
  }
  return report;
}

}  // namespace shishkin
