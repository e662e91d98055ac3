#include "shishkin/block_solver.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "shishkin/error.hpp"

namespace shishkin {

namespace {

// Forward-eliminated block rows: reduced diagonal blocks D'_j in factored
// form and C_j = D'_j^{-1} U_j. Row 0 and row N are the identity rows.
class BlockFactorization {
 public:
  explicit BlockFactorization(const DiscreteSystem& sys) : sys_(sys) {
    const auto N = static_cast<std::size_t>(sys.N);
    const auto n = static_cast<Eigen::Index>(sys.n);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
    lu_.reserve(N + 1);
    coupling_.reserve(N + 1);

    lu_.emplace_back(identity);
    coupling_.push_back(Eigen::MatrixXd::Zero(n, n));  // row 0 has no super block
    for (std::size_t j = 1; j < N; ++j) {
      const Eigen::MatrixXd reduced = sys.diag[j - 1] - sys.sub[j - 1] * coupling_[j - 1];
      factor(reduced, j);
      coupling_.push_back(lu_.back().solve(sys.super[j - 1]));
    }
    lu_.emplace_back(identity);  // row N: sub block is zero, D'_N = I
    coupling_.push_back(Eigen::MatrixXd::Zero(n, n));
  }

  /// Solves with rhs given per block row (row 0 and N are boundary data).
  Eigen::MatrixXd solve(const std::vector<Eigen::VectorXd>& rhs) const {
    const auto N = static_cast<std::size_t>(sys_.N);
    std::vector<Eigen::VectorXd> y(N + 1);
    y[0] = lu_[0].solve(rhs[0]);
    for (std::size_t j = 1; j < N; ++j) {
      y[j] = lu_[j].solve(rhs[j] - sys_.sub[j - 1] * y[j - 1]);
    }
    y[N] = rhs[N];
    Eigen::MatrixXd values(static_cast<Eigen::Index>(N + 1),
                           static_cast<Eigen::Index>(sys_.n));
    values.row(static_cast<Eigen::Index>(N)) = y[N].transpose();
    Eigen::VectorXd next = y[N];
    for (std::size_t j = N; j-- > 0;) {
      Eigen::VectorXd u = y[j] - coupling_[j] * next;
      values.row(static_cast<Eigen::Index>(j)) = u.transpose();
      next = std::move(u);
    }
    return values;
  }

 private:
  void factor(const Eigen::MatrixXd& block, std::size_t row) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
    const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(pivot >= kSingularPivot)) {
      std::ostringstream msg;
      msg << "numerically singular block at row " << row << " (pivot " << pivot << ")";
      throw SolverError(msg.str(), row);
    }
    lu_.push_back(std::move(lu));
  }

  const DiscreteSystem& sys_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  std::vector<Eigen::MatrixXd> coupling_;
};

std::vector<Eigen::VectorXd> block_rhs(const DiscreteSystem& sys) {
  std::vector<Eigen::VectorXd> rhs;
  rhs.reserve(static_cast<std::size_t>(sys.N) + 1);
  rhs.push_back(sys.boundary_left);
  rhs.insert(rhs.end(), sys.rhs.begin(), sys.rhs.end());
  rhs.push_back(sys.boundary_right);
  return rhs;
}

}  // namespace

double residual_norm(const DiscreteSystem& system, const Eigen::MatrixXd& values) {
  return apply_operator(system, values).cwiseAbs().maxCoeff();
}

SolutionGrid solve(const DiscreteSystem& system, const SolveOptions& options) {
  const BlockFactorization factors(system);
  SolutionGrid grid;
  grid.values = factors.solve(block_rhs(system));

  if (options.refine_once) {
    // Correction solves L d = -r, where r = L U - b including boundary rows.
    const Eigen::MatrixXd r = apply_operator(system, grid.values);
    std::vector<Eigen::VectorXd> correction_rhs;
    correction_rhs.reserve(static_cast<std::size_t>(r.rows()));
    for (Eigen::Index j = 0; j < r.rows(); ++j) {
      correction_rhs.push_back(-r.row(j).transpose());
    }
    grid.values += factors.solve(correction_rhs);
  }

  if (!grid.values.allFinite()) {
    throw SolverError("solution contains non-finite values", 0);
  }
  grid.mesh = system.mesh;
  grid.residual_norm = residual_norm(system, grid.values);
  const double limit = 1e-6 * system.scale();
  if (grid.residual_norm > limit) {
    std::ostringstream msg;
    msg << "residual " << grid.residual_norm << " exceeds " << limit
        << "; the system may be ill-conditioned";
    grid.warning = msg.str();
  }
  return grid;
}

}  // namespace shishkin
