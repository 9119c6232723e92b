#ifndef ELGRAT_ADAPT_HPP
#define ELGRAT_ADAPT_HPP

#include <string>
#include <vector>

#include "elgrat/analytic.hpp"
#include "elgrat/dtn.hpp"
#include "elgrat/estimator.hpp"
#include "elgrat/geometry.hpp"
#include "elgrat/medium.hpp"
#include "elgrat/mesh.hpp"
#include "elgrat/space.hpp"

namespace elgrat {

// One scattering problem: periodic rigid profile, medium, incidence, and the
// height b of the transparent boundary.
struct Problem {
  SurfaceProfile profile;
  ElasticMedium medium;
  IncidentWave wave;
  double b = 0.0;
};

struct AdaptConfig {
  double tolerance = 1e-3;  // target eps_h
  double tau = 0.5;         // max-strategy parameter, in (0, 1)
  double dtn_tol = 1e-8;    // truncation tail tolerance
  int max_iterations = 50;
  int max_dof = 200000;  // safety cap on the dof count
  double h0 = 0.1;       // initial mesh size
  bool retighten = false;  // re-tighten dtn_tol to 0.1 eps_h each iteration
};

struct IterationRecord {
  int iteration = 0;
  int dof = 0;  // scalar unknowns: two per free vertex
  int N = 0;
  double eps_N = 0.0;
  double eps_h = 0.0;
  double e_h = 0.0;  // NaN when no exact solution is supplied
  double seconds = 0.0;
};

// Elements whose indicator strictly exceeds tau times the maximum.
MarkSet mark(const std::vector<double>& eta, double tau);

// Truncation order for the problem at the given tail tolerance: b' is the
// profile's highest point and the incident H1 norm is taken over the cell.
TruncationResult problem_truncation(const Problem& problem, double tol);

// One assemble/solve pass on a fixed mesh with truncation order N.
struct SolveArtifacts {
  DofMap dofmap;
  DtnOperator op;
  std::vector<Vec2c> field;  // per-vertex scattered displacement
  double relative_residual = 0.0;
  int dof = 0;
};

SolveArtifacts solve_on_mesh(const Problem& problem, const Mesh& mesh, int N);

struct AdaptResult {
  std::vector<IterationRecord> records;
  Mesh mesh;                  // final mesh
  std::vector<Vec2c> field;   // final per-vertex scattered displacement
  std::vector<double> eta;    // final indicators
  TruncationResult truncation;
  std::string cause;  // "tolerance" | "max_iterations" | "max_dof" | "stagnation"
};

// The adaptive loop: select N once from the tail bound, then solve, estimate,
// mark, bisect until eps_h <= tolerance or a budget is exhausted. A reduction
// of eps_h below 1% across three iterations aborts as stagnation. When an
// exact solution is supplied, each record carries the H1 error e_h.
AdaptResult adaptive_solve(const Problem& problem, const AdaptConfig& config,
                           const ExactEvaluator& exact = nullptr);

}  // namespace elgrat

#endif
