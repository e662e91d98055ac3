#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "shishkin/mesh.hpp"
#include "shishkin/problem.hpp"

namespace shishkin {

/**
 * Block-tridiagonal form of L^N U = -E delta^2 U + A(x) U = f on a mesh,
 * with Dirichlet rows U(x_0) = u(0), U(x_N) = u(1).
 *
 * Interior row j (1 <= j <= N-1) is stored at index j-1:
 *   sub[j-1]   = diag(-eps_i / (hbar_j h_j))
 *   diag[j-1]  = diag(eps_i (1/(hbar_j h_j) + 1/(hbar_j h_{j+1}))) + A(x_j)
 *   super[j-1] = diag(-eps_i / (hbar_j h_{j+1}))
 *   rhs[j-1]   = f(x_j)
 * The boundary rows are identity rows and are implicit.
 */
struct DiscreteSystem {
  int N = 0;
  std::size_t n = 0;
  std::vector<Eigen::MatrixXd> sub;
  std::vector<Eigen::MatrixXd> diag;
  std::vector<Eigen::MatrixXd> super;
  std::vector<Eigen::VectorXd> rhs;
  Eigen::VectorXd boundary_left;
  Eigen::VectorXd boundary_right;
  std::shared_ptr<const Mesh> mesh;

  /// 1 + ||u(0)|| + ||u(1)|| + max_j ||f(x_j)||, the anchor for relative
  /// tolerances.
  double scale() const;
  /// max_j ||f(x_j)|| over interior rows.
  double rhs_norm() const;
};

/// Throws ProblemError if the mesh was built for a different n, DomainError
/// (naming the entry and x_j) if a coefficient cannot be evaluated.
DiscreteSystem assemble(const ProblemSpec& spec, std::shared_ptr<const Mesh> mesh);

/// r_j = (L^N U)(x_j) - f(x_j) for interior j; r_0 = U_0 - u(0), r_N = U_N - u(1).
/// `values` is (N+1) x n, row j holding U(x_j).
Eigen::MatrixXd apply_operator(const DiscreteSystem& system, const Eigen::MatrixXd& values);

struct SignViolation {
  std::size_t row = 0;  ///< global row j*n + i
  std::size_t col = 0;  ///< global column
  double value = 0.0;
  bool dominance = false;  ///< true: row not strictly dominant; col == row
};

struct StructureReport {
  bool ok = true;
  /// min over rows of (diagonal - sum |off-diagonal|), boundary rows included.
  double min_dominance_margin = 0.0;
  std::vector<SignViolation> violations;
};

/// Scans every entry of the assembled matrix for the M-matrix sign pattern
/// and strict row diagonal dominance.
StructureReport check_sign_structure(const DiscreteSystem& system);

/// Coordinate dump "row col value", one nonzero per line, rows in order;
/// global index j*n + i, boundary rows included.
void write_matrix_coordinates(std::ostream& out, const DiscreteSystem& system);

}  // namespace shishkin
