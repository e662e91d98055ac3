#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shishkin/block_solver.hpp"
#include "shishkin/convergence.hpp"
#include "shishkin/mesh.hpp"

namespace shishkin {

// All numbers are written with 17 significant digits ("%.17g"), so reading
// them back reproduces the doubles exactly. Lines end in '\n'.

/// Header "j,x_j,h_j,band_id"; h_0 is written as 0 and band_id is the band
/// of the interval ending at x_j (0 for j = 0).
void write_mesh_csv(std::ostream& out, const Mesh& mesh);

struct MeshTable {
  std::vector<double> x;
  std::vector<double> h;
  std::vector<int> band;
};
MeshTable read_mesh_csv(std::istream& in);

/// Header "j,x_j,U_1,...,U_n".
void write_solution_csv(std::ostream& out, const SolutionGrid& grid);

struct SolutionTable {
  std::vector<double> x;
  Eigen::MatrixXd values;
};
SolutionTable read_solution_csv(std::istream& in);

/// Header "order,eps_id,N,D_N,p_N,residual". One row per (eps, N) cell with
/// eps_id the zero-based index into the sweep; for sweeps over more than one
/// eps vector, the worst-case rows follow with eps_id "max". p_N is empty
/// where undefined.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);

struct ReportCsvRow {
  std::string order;
  std::string eps_id;
  int N = 0;
  double D = 0.0;
  std::optional<double> p;
  double residual = 0.0;
};
std::vector<ReportCsvRow> read_report_csv(std::istream& in);

/// Plot data: '#' comment lines naming the estimator and each eps vector,
/// then "N<TAB>D_0<TAB>D_1..." with one column per eps vector.
void write_plot_tsv(std::ostream& out, const ConvergenceReport& report);

/// "%.17g".
std::string format_number(double v);

}  // namespace shishkin
