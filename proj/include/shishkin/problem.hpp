#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shishkin/expr.hpp"

namespace shishkin {

/**
 * Data of the two-point boundary value problem
 *
 *   -E u''(x) + A(x) u(x) = f(x),  x in (0,1),  u(0), u(1) given,
 *
 * with E = diag(eps), 0 < eps_1 < ... < eps_n <= 1.
 *
 * Coefficients are expressions in x (see Expr). Construction through
 * ProblemSpec::create checks the invariants; a ProblemSpec is immutable.
 */
class ProblemSpec {
 public:
  /// `a_sources` is row-major n*n. Throws ProblemError (CoincidentEpsError for
  /// repeated eps) or ParseError.
  static ProblemSpec create(std::vector<double> eps,
                            std::vector<std::string> a_sources,
                            std::vector<std::string> f_sources,
                            std::vector<double> u_left,
                            std::vector<double> u_right,
                            std::optional<double> alpha_override = std::nullopt);

  std::size_t n() const { return eps_.size(); }
  const std::vector<double>& eps() const { return eps_; }
  const std::vector<double>& u_left() const { return u_left_; }
  const std::vector<double>& u_right() const { return u_right_; }
  std::optional<double> alpha_override() const { return alpha_override_; }

  const Expr& a(std::size_t i, std::size_t j) const { return a_[i * n() + j]; }
  const Expr& f(std::size_t i) const { return f_[i]; }
  const std::string& a_source(std::size_t i, std::size_t j) const {
    return a_sources_[i * n() + j];
  }
  const std::string& f_source(std::size_t i) const { return f_sources_[i]; }

  /// a_ij(x); DomainError messages are prefixed with the entry, e.g. "A(1,2)".
  double eval_a(std::size_t i, std::size_t j, double x) const;
  double eval_f(std::size_t i, double x) const;
  /// Row-major A(x) into `out` (size n*n).
  void eval_a(double x, std::span<double> out) const;

  /// Same coefficients and boundary data with a different eps vector.
  ProblemSpec with_eps(std::vector<double> eps) const;

 private:
  ProblemSpec() = default;

  std::vector<double> eps_;
  std::vector<std::string> a_sources_;
  std::vector<std::string> f_sources_;
  std::vector<Expr> a_;
  std::vector<Expr> f_;
  std::vector<double> u_left_;
  std::vector<double> u_right_;
  std::optional<double> alpha_override_;
};

/// Throws CoincidentEpsError / ProblemError unless 0 < eps_1 < ... < eps_n <= 1.
void check_eps_vector(std::span<const double> eps);

/// One failed structural check. Indices are zero-based; col is absent for
/// row-level conditions.
struct Violation {
  std::string condition;  ///< "sign", "dominance", "row_sum", "alpha_override"
  double x = 0.0;
  std::size_t row = 0;
  std::optional<std::size_t> col;
};

struct ValidationReport {
  bool a1_holds = false;     ///< sign pattern and strict diagonal dominance
  double a2_alpha = 0.0;     ///< accepted alpha; 0 when none could be chosen
  bool a3_holds = false;     ///< max sqrt(eps_i) <= sqrt(alpha)/4
  double worst_row_margin = 0.0;  ///< min over samples of a_ii - sum_{j!=i} |a_ij|
  std::vector<Violation> violations;

  /// Conditions on A hold and an alpha was accepted. The eps condition only
  /// affects whether the convergence guarantee applies.
  bool ok() const { return a1_holds && a2_alpha > 0.0 && violations.empty(); }
};

inline constexpr int kDefaultSampleCount = 1024;
inline constexpr double kDefaultSafety = 0.9;

/// `count` equispaced points k/(count-1) of [0,1].
std::vector<double> sample_points(int count);

/// Sign and dominance of A sampled at `sample_count` equispaced points.
/// Fills a1_holds, worst_row_margin and violations.
ValidationReport validate_sign_dominance(const ProblemSpec& spec, int sample_count);

/// alpha_override when it lies strictly below the sampled minimum row sum,
/// otherwise safety * (minimum row sum). Throws ProblemError when the minimum
/// row sum is not positive or the override is rejected.
double compute_alpha(const ProblemSpec& spec, int sample_count, double safety);

/// max_i sqrt(eps_i) <= sqrt(alpha)/4.
bool check_eps_condition(const ProblemSpec& spec, double alpha);

/// All three checks; never throws for structural failures (they become
/// violations), only for expression evaluation errors.
ValidationReport validate(const ProblemSpec& spec,
                          int sample_count = kDefaultSampleCount,
                          double safety = kDefaultSafety);

}  // namespace shishkin
