#include "shishkin/pipeline.hpp"

#include <sstream>

#include "shishkin/error.hpp"

namespace shishkin {

double validated_alpha(const ProblemSpec& spec, const SolveSettings& settings) {
  const ValidationReport report = validate(spec, settings.sample_count, settings.safety);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "problem fails validation";
    if (!report.violations.empty()) {
      const Violation& v = report.violations.front();
      msg << ": " << v.condition << " at x = " << v.x << ", row " << v.row + 1;
      if (v.col) msg << ", col " << *v.col + 1;
      if (report.violations.size() > 1) {
        msg << " (and " << report.violations.size() - 1 << " more)";
      }
    }
    throw ProblemError(msg.str());
  }
  return report.a2_alpha;
}

std::shared_ptr<const Mesh> problem_mesh(const ProblemSpec& spec, int N,
                                         const SolveSettings& settings,
                                         double* alpha_out) {
  const double alpha = validated_alpha(spec, settings);
  if (alpha_out) *alpha_out = alpha;
  const TransitionParams params =
      settings.force_uniform ? uniform_parameters(spec.n(), alpha, N, settings.order)
                             : transition_parameters(spec.eps(), alpha, N, settings.order);
  return std::make_shared<const Mesh>(build_mesh(params));
}

ProblemSolution solve_on_mesh(const ProblemSpec& spec, std::shared_ptr<const Mesh> mesh,
                              double alpha, const SolveSettings& settings) {
  ProblemSolution out;
  out.alpha = alpha;
  out.eps_condition = check_eps_condition(spec, alpha);
  out.mesh = mesh;
  out.system = assemble(spec, std::move(mesh));
  out.structure = check_sign_structure(out.system);
  if (!out.structure.ok) {
    const SignViolation& v = out.structure.violations.front();
    const std::size_t j = v.row / spec.n();
    std::ostringstream msg;
    msg << "assembled matrix is not an M-matrix at mesh point x_" << j << " = "
        << out.mesh->points()[j] << " (row " << v.row << ", "
        << (v.dominance ? "row not diagonally dominant" : "positive off-diagonal")
        << ")";
    throw ProblemError(msg.str());
  }
  out.grid = solve(out.system, SolveOptions{settings.refine_once});
  return out;
}

ProblemSolution solve_problem(const ProblemSpec& spec, int N, const SolveSettings& settings) {
  double alpha = 0.0;
  auto mesh = problem_mesh(spec, N, settings, &alpha);
  return solve_on_mesh(spec, std::move(mesh), alpha, settings);
}

}  // namespace shishkin
