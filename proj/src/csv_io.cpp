#include "shishkin/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "shishkin/error.hpp"

namespace shishkin {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

template <typename T>
T parse_field(const std::string& text, std::size_t line_no) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw IoError("line " + std::to_string(line_no) + ": cannot parse '" + text + "'");
  }
  return value;
}

std::vector<std::vector<std::string>> read_table(std::istream& in,
                                                 const std::string& expected_prefix,
                                                 std::vector<std::string>* header_out) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV input");
  if (line.rfind(expected_prefix, 0) != 0) {
    throw IoError("unexpected CSV header '" + line + "'");
  }
  const std::vector<std::string> header = split(line, ',');
  if (header_out) *header_out = header;
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(header.size()) + " fields");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

void write_mesh_csv(std::ostream& out, const Mesh& mesh) {
  out << "j,x_j,h_j,band_id\n";
  const auto& x = mesh.points();
  for (std::size_t j = 0; j < x.size(); ++j) {
    out << j << ',' << format_number(x[j]) << ',' << format_number(j ? mesh.h(j) : 0.0)
        << ',' << mesh.band_of_point(j) << '\n';
  }
}

MeshTable read_mesh_csv(std::istream& in) {
  MeshTable t;
  const auto rows = read_table(in, "j,x_j,h_j,band_id", nullptr);
  std::size_t line_no = 1;
  for (const auto& r : rows) {
    ++line_no;
    if (parse_field<std::size_t>(r[0], line_no) != t.x.size()) {
      throw IoError("line " + std::to_string(line_no) + ": mesh index out of sequence");
    }
    t.x.push_back(parse_field<double>(r[1], line_no));
    t.h.push_back(parse_field<double>(r[2], line_no));
    t.band.push_back(parse_field<int>(r[3], line_no));
  }
  return t;
}

void write_solution_csv(std::ostream& out, const SolutionGrid& grid) {
  const auto n = grid.values.cols();
  out << "j,x_j";
  for (Eigen::Index i = 0; i < n; ++i) out << ",U_" << i + 1;
  out << '\n';
  const auto& x = grid.mesh->points();
  for (std::size_t j = 0; j < x.size(); ++j) {
    out << j << ',' << format_number(x[j]);
    for (Eigen::Index i = 0; i < n; ++i) {
      out << ',' << format_number(grid.values(static_cast<Eigen::Index>(j), i));
    }
    out << '\n';
  }
}

SolutionTable read_solution_csv(std::istream& in) {
  std::vector<std::string> header;
  const auto rows = read_table(in, "j,x_j,U_1", &header);
  const auto n = static_cast<Eigen::Index>(header.size() - 2);
  SolutionTable t;
  t.values.resize(static_cast<Eigen::Index>(rows.size()), n);
  std::size_t line_no = 1;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    ++line_no;
    if (parse_field<std::size_t>(rows[j][0], line_no) != j) {
      throw IoError("line " + std::to_string(line_no) + ": mesh index out of sequence");
    }
    t.x.push_back(parse_field<double>(rows[j][1], line_no));
    for (Eigen::Index i = 0; i < n; ++i) {
      t.values(static_cast<Eigen::Index>(j), i) =
          parse_field<double>(rows[j][static_cast<std::size_t>(i) + 2], line_no);
    }
  }
  return t;
}

namespace {

void write_report_row(std::ostream& out, const ConvergenceReport& report,
                      const std::string& eps_id, const ConvergenceRow& row) {
  out << to_string(report.method_order) << ',' << eps_id << ',' << row.N << ','
      << format_number(row.D) << ',' << (row.p ? format_number(*row.p) : "") << ','
      << format_number(row.residual) << '\n';
}

}  // namespace

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "order,eps_id,N,D_N,p_N,residual\n";
  for (const SweepCell& cell : report.cells) {
    write_report_row(out, report, std::to_string(cell.eps_id), cell.row);
  }
  if (report.eps_sweep.size() > 1) {
    for (const ConvergenceRow& row : report.rows) write_report_row(out, report, "max", row);
  }
}

std::vector<ReportCsvRow> read_report_csv(std::istream& in) {
  std::vector<ReportCsvRow> out;
  const auto rows = read_table(in, "order,eps_id,N,D_N,p_N,residual", nullptr);
  std::size_t line_no = 1;
  for (const auto& r : rows) {
    ++line_no;
    ReportCsvRow row;
    row.order = r[0];
    row.eps_id = r[1];
    row.N = parse_field<int>(r[2], line_no);
    row.D = parse_field<double>(r[3], line_no);
    if (!r[4].empty()) row.p = parse_field<double>(r[4], line_no);
    row.residual = parse_field<double>(r[5], line_no);
    out.push_back(std::move(row));
  }
  return out;
}

void write_plot_tsv(std::ostream& out, const ConvergenceReport& report) {
  out << "# estimator: " << to_string(report.estimator)
      << "; order: " << to_string(report.method_order) << '\n';
  for (std::size_t e = 0; e < report.eps_sweep.size(); ++e) {
    out << "# eps_" << e << ':';
    for (double v : report.eps_sweep[e]) out << ' ' << format_number(v);
    out << '\n';
  }
  out << 'N';
  for (std::size_t e = 0; e < report.eps_sweep.size(); ++e) out << "\tD_" << e;
  out << '\n';
  std::vector<int> Ns;
  for (const auto& cell : report.cells) {
    if (cell.eps_id == 0) Ns.push_back(cell.row.N);
  }
  const std::size_t per_eps = Ns.size();
  for (std::size_t k = 0; k < per_eps; ++k) {
    out << Ns[k];
    for (std::size_t e = 0; e < report.eps_sweep.size(); ++e) {
      out << '\t' << format_number(report.cells[e * per_eps + k].row.D);
    }
    out << '\n';
  }
}

}  // namespace shishkin
