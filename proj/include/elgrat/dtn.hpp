#ifndef ELGRAT_DTN_HPP
#define ELGRAT_DTN_HPP

#include <vector>

#include "elgrat/medium.hpp"
#include "elgrat/mesh.hpp"
#include "elgrat/space.hpp"

namespace elgrat {

// Vertical wavenumber of mode alpha_n for wavenumber kappa: real nonnegative
// below cutoff, positive imaginary above. Rayleigh resonance |alpha_n| ==
// kappa is rejected at relative tolerance 1e-12.
cplx beta_coefficient(double kappa, double alpha_n);

// 2x2 transparent-boundary kernel M^(n) for one Fourier mode.
Mat2c dtn_matrix(const ElasticMedium& medium, double alpha_n);

// -(M + M^H)/2; positive definite for all large enough |n|.
Mat2c symmetrized_block(const Mat2c& M);

struct TruncationResult {
  int N = 0;
  double eps_N = 0.0;  // tail bound max_{|n|>N} |n| e^{-|beta2_n|(b-b')} * ||u_inc||_{H1}
};

// Smallest admissible truncation order whose tail bound meets tol. The scan
// starts at the first order past every propagating shear mode and walks each
// sign branch until the terms have decayed monotonically.
TruncationResult select_truncation(const ElasticMedium& medium, double alpha, double period,
                                   double b, double b_prime, double tol, double uinc_h1_norm);

struct EdgeMoments {
  cplx left;   // integral of the left-endpoint hat times e^{-i alpha_n x}
  cplx right;
};

// Exact moments of the two P1 hats on the edge [x0, x0 + h]; switches to a
// series for |alpha_n h| < 1/2 where the closed form cancels.
EdgeMoments edge_moments(double x0, double h, double alpha_n);

// Truncated transparent-boundary operator bound to one mesh and dof map:
// kernel matrices for |n| <= N plus hat-function moments on y = b. Moments
// fold the right corner onto its master with the quasi-periodic phase.
struct DtnOperator {
  ElasticMedium medium;
  QuasiPeriodicParams qp;
  int N = 0;
  double b = 0.0;
  std::vector<double> alpha_n;        // index n + N
  std::vector<Mat2c> modes;           // M^(n), index n + N
  std::vector<int> gamma_vertices;    // as in the dof map
  Eigen::MatrixXcd moments;           // (2N+1) x |gamma|, c_{i,n} at (n + N, i)
};

DtnOperator build_dtn_operator(const Mesh& mesh, const DofMap& dofmap,
                               const ElasticMedium& medium, int N);

// Fourier coefficients of the P1 trace on y = b: u_hat(n) = (1/period) *
// sum_i c_{i,n} u_i, exact for the piecewise linear trace.
std::vector<Vec2c> trace_coefficients(const DtnOperator& op, const std::vector<Vec2c>& field);

// T_N applied to the trace described by per-mode coefficients, at abscissa x.
Vec2c evaluate_TN(const DtnOperator& op, const std::vector<Vec2c>& coefficients, double x);

}  // namespace elgrat

#endif
