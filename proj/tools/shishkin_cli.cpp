// Command-line front end: validate problems, emit meshes, solve, and run
// convergence studies.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shishkin/convergence.hpp"
#include "shishkin/csv_io.hpp"
#include "shishkin/error.hpp"
#include "shishkin/pipeline.hpp"
#include "shishkin/problem_io.hpp"

namespace {

using namespace shishkin;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

struct RunConfig {
  std::string problem_path;
  std::string output_path;
  std::string plot_path;
  std::string matrix_path;
  std::string order = "first";
  std::string N_list;
  std::string eps_grid;
  std::vector<std::string> defines;
  int N = 64;
  int sample_count = kDefaultSampleCount;
  double safety = kDefaultSafety;
  unsigned workers = 1;
  bool force_uniform = false;
  bool refine_once = false;
};

std::vector<double> parse_number_list(const std::string& text, char sep) {
  std::vector<double> out;
  std::string item;
  std::istringstream s(text);
  while (std::getline(s, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ProblemError("empty entry in list '" + text + "'");
    item = item.substr(b, e - b + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw ProblemError("cannot parse number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_N_list(const std::string& text) {
  std::vector<int> Ns;
  for (double v : parse_number_list(text, ',')) {
    if (v != static_cast<int>(v)) throw MeshError("N must be an integer");
    Ns.push_back(static_cast<int>(v));
  }
  return Ns;
}

std::vector<std::vector<double>> parse_eps_grid(const std::string& text) {
  std::vector<std::vector<double>> grid;
  std::string vec;
  std::istringstream s(text);
  while (std::getline(s, vec, ';')) grid.push_back(parse_number_list(vec, ','));
  return grid;
}

Definitions parse_defines(const std::vector<std::string>& items) {
  Definitions defs;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ProblemError("definition '" + item + "' is not of the form name=value");
    }
    defs[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return defs;
}

SolveSettings settings_of(const RunConfig& cfg) {
  SolveSettings s;
  s.order = parse_mesh_order(cfg.order);
  s.sample_count = cfg.sample_count;
  s.safety = cfg.safety;
  s.force_uniform = cfg.force_uniform;
  s.refine_once = cfg.refine_once;
  return s;
}

/// Output stream: the named file, or stdout when the path is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish(const std::string& path) {
    stream().flush();
    if (!stream()) throw IoError("write to '" + (path.empty() ? "stdout" : path) + "' failed");
  }

 private:
  std::ofstream file_;
};

void warn_eps_condition(bool holds) {
  if (!holds) {
    std::cerr << "warning: max sqrt(eps_i) > sqrt(alpha)/4; the solve proceeds but the "
                 "parameter-uniform rate is not guaranteed\n";
  }
}

int run_validate(const RunConfig& cfg, std::string& stage) {
  stage = "problem_model.load";
  const ProblemSpec spec = load_problem(cfg.problem_path, parse_defines(cfg.defines));
  stage = "problem_model.validate";
  const ValidationReport report = validate(spec, cfg.sample_count, cfg.safety);

  std::cout << "conditions on A (sign, dominance): " << (report.a1_holds ? "hold" : "FAIL")
            << "\nworst row margin: " << format_number(report.worst_row_margin)
            << "\nalpha: " << format_number(report.a2_alpha)
            << "\neps condition: " << (report.a3_holds ? "holds" : "does not hold") << '\n';
  for (const Violation& v : report.violations) {
    std::cout << "violation: " << v.condition << " at x = " << format_number(v.x)
              << ", row " << v.row + 1;
    if (v.col) std::cout << ", col " << *v.col + 1;
    std::cout << '\n';
  }

  stage = "cli.write";
  const std::string json = report_to_json(report).dump(2);
  if (cfg.output_path.empty()) {
    std::cout << json << '\n';
  } else {
    Output out(cfg.output_path);
    out.stream() << json << '\n';
    out.finish(cfg.output_path);
  }
  if (report.ok()) warn_eps_condition(report.a3_holds);
  return report.ok() ? kExitOk : kExitValidation;
}

int run_mesh(const RunConfig& cfg, std::string& stage) {
  stage = "problem_model.load";
  const ProblemSpec spec = load_problem(cfg.problem_path, parse_defines(cfg.defines));
  stage = "shishkin_mesh.build_mesh";
  double alpha = 0.0;
  const auto mesh = problem_mesh(spec, cfg.N, settings_of(cfg), &alpha);
  warn_eps_condition(check_eps_condition(spec, alpha));
  std::cerr << "b =";
  for (bool b : mesh->params().b) std::cerr << ' ' << (b ? 1 : 0);
  std::cerr << "\nband counts =";
  for (int c : mesh->band_counts()) std::cerr << ' ' << c;
  std::cerr << '\n';

  stage = "cli.write";
  Output out(cfg.output_path);
  write_mesh_csv(out.stream(), *mesh);
  out.finish(cfg.output_path);
  return kExitOk;
}

int run_solve(const RunConfig& cfg, std::string& stage) {
  stage = "problem_model.load";
  const ProblemSpec spec = load_problem(cfg.problem_path, parse_defines(cfg.defines));
  stage = "block_solver.solve";
  const ProblemSolution sol = solve_problem(spec, cfg.N, settings_of(cfg));
  warn_eps_condition(sol.eps_condition);
  if (sol.grid.warning) std::cerr << "warning: " << *sol.grid.warning << '\n';
  std::cerr << "residual: " << format_number(sol.grid.residual_norm) << '\n';

  stage = "cli.write";
  if (!cfg.matrix_path.empty()) {
    Output dump(cfg.matrix_path);
    write_matrix_coordinates(dump.stream(), sol.system);
    dump.finish(cfg.matrix_path);
  }
  Output out(cfg.output_path);
  write_solution_csv(out.stream(), sol.grid);
  out.finish(cfg.output_path);
  return kExitOk;
}

int run_converge(const RunConfig& cfg, std::string& stage) {
  stage = "problem_model.load";
  const ProblemSpec spec = load_problem(cfg.problem_path, parse_defines(cfg.defines));
  const std::vector<int> Ns = cfg.N_list.empty() ? kDefaultNs : parse_N_list(cfg.N_list);
  std::vector<std::vector<double>> grid =
      cfg.eps_grid.empty() ? std::vector<std::vector<double>>{spec.eps()}
                           : parse_eps_grid(cfg.eps_grid);

  stage = "convergence_lab.parameter_sweep";
  const ConvergenceReport report =
      parameter_sweep(spec, grid, Ns, settings_of(cfg), cfg.workers);

  std::cerr << "estimator: " << to_string(report.estimator)
            << " (difference to the bisected mesh)\n";
  bool failed = false;
  for (const SweepCell& cell : report.cells) {
    if (cell.error) {
      failed = true;
      std::cerr << "cell eps_" << cell.eps_id << " N=" << cell.row.N
                << " failed: " << *cell.error << '\n';
    }
  }
  std::cerr << "uniform order estimate: " << format_number(report.uniform_order_estimate)
            << '\n';

  stage = "cli.write";
  Output out(cfg.output_path);
  write_report_csv(out.stream(), report);
  out.finish(cfg.output_path);

  std::string plot = cfg.plot_path;
  if (plot.empty() && !cfg.output_path.empty()) {
    plot = cfg.output_path;
    const auto dot = plot.rfind('.');
    const auto slash = plot.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
      plot.erase(dot);
    }
    plot += ".tsv";
  }
  if (!plot.empty()) {
    Output tsv(plot);
    write_plot_tsv(tsv.stream(), report);
    tsv.finish(plot);
  }
  return failed ? kExitSolver : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shishkin-mesh solver for singularly perturbed reaction-diffusion systems"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", cfg.problem_path, "Problem JSON file")->required();
    sub->add_option("-D,--define", cfg.defines,
                    "Substitute identifier NAME by VALUE in coefficient expressions "
                    "(NAME=VALUE, repeatable)");
    sub->add_option("--sample-count", cfg.sample_count,
                    "Equispaced samples for checking the conditions on A")
        ->check(CLI::Range(2, 1 << 24));
    sub->add_option("--safety", cfg.safety, "alpha = safety * min row sum of A")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("-o,--output", cfg.output_path, "Output file (default: stdout)");
  };
  auto add_mesh_options = [&](CLI::App* sub) {
    sub->add_option("--order", cfg.order, "Transition parameters: first or second")
        ->check(CLI::IsMember({"first", "second"}));
    sub->add_flag("--force-uniform-mesh", cfg.force_uniform,
                  "Use the uniform mesh (b = 0) regardless of eps");
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check the structural conditions");
  add_common(validate_cmd);

  auto* mesh_cmd = app.add_subcommand("mesh", "Write the piecewise-uniform mesh as CSV");
  add_common(mesh_cmd);
  add_mesh_options(mesh_cmd);
  mesh_cmd->add_option("--N", cfg.N, "Number of mesh intervals")->required();

  auto* solve_cmd = app.add_subcommand("solve", "Solve and write the solution CSV");
  add_common(solve_cmd);
  add_mesh_options(solve_cmd);
  solve_cmd->add_option("--N", cfg.N, "Number of mesh intervals")->required();
  solve_cmd->add_flag("--refine-once", cfg.refine_once, "One iterative refinement step");
  solve_cmd->add_option("--dump-matrix", cfg.matrix_path,
                        "Write the assembled matrix in coordinate format");

  auto* converge_cmd = app.add_subcommand("converge", "Two-mesh convergence study");
  add_common(converge_cmd);
  add_mesh_options(converge_cmd);
  converge_cmd->add_option("--N", cfg.N_list,
                           "Comma-separated doubling mesh sizes (default 64,...,1024)");
  converge_cmd->add_option("--eps-grid", cfg.eps_grid,
                           "eps vectors to sweep, e.g. '1e-6,1e-2;1e-8,1e-3' "
                           "(default: the problem's eps)");
  converge_cmd->add_flag("--refine-once", cfg.refine_once, "One iterative refinement step");
  converge_cmd->add_option("--plot", cfg.plot_path,
                           "Plot-data TSV (default: output path with .tsv)");
  converge_cmd->add_option("--workers", cfg.workers, "Worker threads for sweep cells")
      ->check(CLI::Range(1u, 256u));

  CLI11_PARSE(app, argc, argv);

  std::string stage = "cli";
  try {
    if (*validate_cmd) return run_validate(cfg, stage);
    if (*mesh_cmd) return run_mesh(cfg, stage);
    if (*solve_cmd) return run_solve(cfg, stage);
    if (*converge_cmd) return run_converge(cfg, stage);
  } catch (const IoError& e) {
    std::cerr << "error in " << stage << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const SolverError& e) {
    std::cerr << "error in " << stage << ": " << e.what() << '\n';
    return kExitSolver;
  } catch (const MeshError& e) {
    std::cerr << "error in " << stage << ": " << e.what() << '\n';
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "error in " << stage << ": " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
