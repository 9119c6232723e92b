#include "elgrat/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <vector>

#include "elgrat/assembly.hpp"
#include "elgrat/errors.hpp"
#include "elgrat/estimator.hpp"
#include "elgrat/io.hpp"

namespace elgrat {

namespace {

void write_plot_script(const std::string& path, const std::string& csv, int x_column,
                       const std::string& x_label,
                       const std::vector<std::pair<int, std::string>>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file '" + path + "'");
  out << "set datafile separator ','\n"
      << "set logscale xy\n"
      << "set xlabel '" << x_label << "'\n"
      << "set ylabel 'error'\n"
      << "set key top right\n"
      << "plot ";
  for (size_t k = 0; k < series.size(); ++k) {
    if (k) out << ", ";
    out << "'" << csv << "' skip 1 using " << x_column << ":" << series[k].first
        << " with linespoints title '" << series[k].second << "'";
  }
  out << "\n";
}

struct ArtifactSink {
  std::string directory;
  std::vector<std::string> names;

  std::string path(const std::string& name) {
    names.push_back(name);
    return directory + "/" + name;
  }
};

int run_solve(const RunConfig& config, ArtifactSink& sink) {
  const Problem& problem = config.problem;
  TruncationResult truncation = problem_truncation(problem, config.adapt.dtn_tol);
  Mesh mesh = build_initial_mesh(problem.profile, problem.b, config.adapt.h0);

  double alpha = incident_alpha(problem.medium, problem.wave);
  QuasiPeriodicParams qp = make_quasi_periodic(alpha, mesh.period);
  DofMap dofmap = build_dof_map(mesh, qp);
  DtnOperator op = build_dtn_operator(mesh, dofmap, problem.medium, truncation.N);
  LinearSystem system = assemble_system(mesh, dofmap, problem.medium, op, problem.wave);
  SolveResult solved = solve(system.matrix, system.rhs);
  std::vector<Vec2c> field = apply_constraints(dofmap, solved.coefficients, system.dirichlet_values);
  ErrorIndicators est = indicators(mesh, dofmap, field, op, problem.medium);

  if (config.output.vtk) write_vtk(sink.path("solution.vtk"), mesh, &field, &est.eta);
  if (config.output.matrix) {
    write_matrix_market(sink.path("matrix.mtx"), system.matrix);
    write_matrix_market(sink.path("rhs.mtx"), system.rhs);
    write_matrix_market(sink.path("solution.mtx"), solved.coefficients);
  }

  std::cout << "solve: dof=" << 2 * dofmap.free_count << " N=" << truncation.N
            << " eps_N=" << truncation.eps_N << " eps_h=" << est.eps_h
            << " residual=" << solved.relative_residual << "\n";
  return 0;
}

int run_adapt(const RunConfig& config, ArtifactSink& sink) {
  ExactEvaluator oracle = exact_oracle(config.problem);
  AdaptResult result = adaptive_solve(config.problem, config.adapt, oracle);

  if (config.output.csv) {
    write_convergence_csv(sink.path("convergence.csv"), result.records);
    write_plot_script(sink.path("plot.gp"), "convergence.csv", 2, "DoF",
                      oracle ? std::vector<std::pair<int, std::string>>{{5, "eps_h"}, {6, "e_h"}}
                             : std::vector<std::pair<int, std::string>>{{5, "eps_h"}});
  }
  if (config.output.vtk) write_vtk(sink.path("final.vtk"), result.mesh, &result.field, &result.eta);
  if (config.output.matrix) {
    double alpha = incident_alpha(config.problem.medium, config.problem.wave);
    QuasiPeriodicParams qp = make_quasi_periodic(alpha, result.mesh.period);
    DofMap dofmap = build_dof_map(result.mesh, qp);
    DtnOperator op = build_dtn_operator(result.mesh, dofmap, config.problem.medium,
                                        result.truncation.N);
    LinearSystem system =
        assemble_system(result.mesh, dofmap, config.problem.medium, op, config.problem.wave);
    write_matrix_market(sink.path("matrix.mtx"), system.matrix);
    write_matrix_market(sink.path("rhs.mtx"), system.rhs);
  }

  const IterationRecord& last = result.records.back();
  std::cout << "adapt: iterations=" << result.records.size() << " dof=" << last.dof
            << " N=" << last.N << " eps_h=" << last.eps_h;
  if (!std::isnan(last.e_h)) std::cout << " e_h=" << last.e_h;
  std::cout << " cause=" << result.cause << "\n";
  if (result.cause == "stagnation") {
    std::cerr << "adaptive loop stagnated: eps_h fell less than 1% over three iterations\n";
    return 2;
  }
  return 0;
}

int run_study(const RunConfig& config, ArtifactSink& sink) {
  const Problem& problem = config.problem;
  ExactEvaluator oracle = exact_oracle(problem);
  TruncationResult truncation = problem_truncation(problem, config.adapt.dtn_tol);

  std::vector<StudyRow> rows;
  Mesh mesh;
  std::vector<Vec2c> field;
  for (int level = 0; level < config.study_levels; ++level) {
    StudyRow row;
    row.level = level;
    row.h = config.adapt.h0 / std::pow(2.0, level);
    mesh = build_initial_mesh(problem.profile, problem.b, row.h);
    SolveArtifacts solved = solve_on_mesh(problem, mesh, truncation.N);
    row.dof = solved.dof;
    row.e_h = oracle ? h1_error(mesh, solved.field, oracle)
                     : std::numeric_limits<double>::quiet_NaN();
    row.rate = (level > 0 && !std::isnan(row.e_h) && !std::isnan(rows.back().e_h))
                   ? std::log2(rows.back().e_h / row.e_h)
                   : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
    field = std::move(solved.field);
    std::cout << "study: level=" << row.level << " h=" << row.h << " dof=" << row.dof;
    if (!std::isnan(row.e_h)) std::cout << " e_h=" << row.e_h;
    if (!std::isnan(row.rate)) std::cout << " rate=" << row.rate;
    std::cout << "\n";
  }

  if (config.output.csv) {
    write_study_csv(sink.path("study.csv"), rows);
    write_plot_script(sink.path("plot.gp"), "study.csv", 3, "DoF", {{4, "e_h"}});
  }
  if (config.output.vtk) write_vtk(sink.path("study_final.vtk"), mesh, &field);
  return 0;
}

}  // namespace

ExactEvaluator exact_oracle(const Problem& problem) {
  if (problem.wave.kind != WaveKind::Compressional) return nullptr;
  if (!problem.profile.flat() || problem.profile.max_height() != 0.0) return nullptr;
  ExactFlatSolution exact = exact_scattered_flat(problem.medium, problem.wave.theta);
  return [exact](const Vec2& x) { return exact.scattered(x); };
}

int run(const RunConfig& config) {
  ArtifactSink sink{config.output.directory, {}};
  std::filesystem::create_directories(sink.directory);
  try {
    int status = 0;
    switch (config.mode) {
      case RunMode::Solve:
        status = run_solve(config, sink);
        break;
      case RunMode::Adapt:
        status = run_adapt(config, sink);
        break;
      case RunMode::Study:
        status = run_study(config, sink);
        break;
    }
    write_manifest(sink.directory, sink.names);
    return status;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    try {
      std::vector<std::string> flushed;
      for (const std::string& name : sink.names)
        if (std::filesystem::exists(sink.directory + "/" + name)) flushed.push_back(name);
      write_manifest(sink.directory, flushed, err.what());
    } catch (const std::exception&) {
      // the directory may be unwritable; the primary diagnostic already went out
    }
    return 1;
  }
}

}  // namespace elgrat
