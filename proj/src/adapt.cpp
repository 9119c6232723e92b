#include "elgrat/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "elgrat/assembly.hpp"
#include "elgrat/errors.hpp"

namespace elgrat {

namespace {

void validate(const Problem& problem, const AdaptConfig& config) {
  validate_profile(problem.profile, problem.b);
  if (!(config.tolerance > 0.0)) throw config_error("tolerance must be positive");
  if (!(config.tau > 0.0 && config.tau < 1.0)) throw config_error("tau out of (0,1)");
  if (!(config.dtn_tol > 0.0)) throw config_error("dtn_tol must be positive");
  if (config.max_iterations < 1) throw config_error("max_iterations must be at least 1");
  if (config.max_dof < 1) throw config_error("max_dof must be at least 1");
  if (!(config.h0 > 0.0)) throw config_error("h0 must be positive");
}

}  // namespace

TruncationResult problem_truncation(const Problem& problem, double tol) {
  double alpha = incident_alpha(problem.medium, problem.wave);
  double area = domain_area(problem.profile, problem.b);
  double uinc = h1_norm_region(problem.medium, problem.wave, area);
  return select_truncation(problem.medium, alpha, problem.profile.period(), problem.b,
                           problem.profile.max_height(), tol, uinc);
}

MarkSet mark(const std::vector<double>& eta, double tau) {
  if (eta.empty()) throw config_error("mark: empty indicator list");
  if (!(tau > 0.0 && tau < 1.0)) throw config_error("mark: tau out of (0,1)");
  double threshold = tau * *std::max_element(eta.begin(), eta.end());
  MarkSet marked;
  for (int k = 0; k < static_cast<int>(eta.size()); ++k)
    if (eta[k] > threshold) marked.push_back(k);
  return marked;
}

SolveArtifacts solve_on_mesh(const Problem& problem, const Mesh& mesh, int N) {
  SolveArtifacts out;
  double alpha = incident_alpha(problem.medium, problem.wave);
  QuasiPeriodicParams qp = make_quasi_periodic(alpha, mesh.period);
  out.dofmap = build_dof_map(mesh, qp);
  out.op = build_dtn_operator(mesh, out.dofmap, problem.medium, N);
  LinearSystem system = assemble_system(mesh, out.dofmap, problem.medium, out.op, problem.wave);
  SolveResult solved = solve(system.matrix, system.rhs);
  out.field = apply_constraints(out.dofmap, solved.coefficients, system.dirichlet_values);
  out.relative_residual = solved.relative_residual;
  out.dof = 2 * out.dofmap.free_count;
  return out;
}

AdaptResult adaptive_solve(const Problem& problem, const AdaptConfig& config,
                           const ExactEvaluator& exact) {
  validate(problem, config);

  double dtn_tol = config.dtn_tol;
  TruncationResult truncation = problem_truncation(problem, dtn_tol);

  AdaptResult out;
  out.mesh = build_initial_mesh(problem.profile, problem.b, config.h0);
  out.truncation = truncation;

  for (int iteration = 0;; ++iteration) {
    auto start = std::chrono::steady_clock::now();
    SolveArtifacts solved = solve_on_mesh(problem, out.mesh, truncation.N);
    ErrorIndicators est =
        indicators(out.mesh, solved.dofmap, solved.field, solved.op, problem.medium);
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    IterationRecord record;
    record.iteration = iteration;
    record.dof = solved.dof;
    record.N = truncation.N;
    record.eps_N = truncation.eps_N;
    record.eps_h = est.eps_h;
    record.e_h = exact ? h1_error(out.mesh, solved.field, exact)
                       : std::numeric_limits<double>::quiet_NaN();
    record.seconds = elapsed.count();
    out.records.push_back(record);
    out.field = std::move(solved.field);
    out.eta = est.eta;
    out.truncation = truncation;

    if (est.eps_h <= config.tolerance) {
      out.cause = "tolerance";
      break;
    }
    if (static_cast<int>(out.records.size()) >= config.max_iterations) {
      out.cause = "max_iterations";
      break;
    }
    if (record.dof >= config.max_dof) {
      out.cause = "max_dof";
      break;
    }
    int k = static_cast<int>(out.records.size());
    if (k >= 4 && out.records[k - 1].eps_h > 0.99 * out.records[k - 4].eps_h) {
      out.cause = "stagnation";
      break;
    }

    MarkSet marked = mark(est.eta, config.tau);
    if (marked.empty()) {  // only possible when every indicator is zero
      out.cause = "stagnation";
      break;
    }
    out.mesh = bisect(out.mesh, marked);

    if (config.retighten) {
      double tightened = std::min(dtn_tol, 0.1 * est.eps_h);
      if (tightened < dtn_tol) {
        dtn_tol = tightened;
        truncation = problem_truncation(problem, dtn_tol);
      }
    }
  }
  return out;
}

}  // namespace elgrat
