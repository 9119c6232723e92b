#include "elgrat/dtn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "elgrat/errors.hpp"

namespace elgrat {

namespace {
constexpr double kResonanceTol = 1e-12;
constexpr double kPi = 3.14159265358979323846;
}

cplx beta_coefficient(double kappa, double alpha_n) {
  if (!(kappa > 0.0)) throw std::invalid_argument("beta: kappa must be positive");
  const double a = std::abs(alpha_n);
  if (std::abs(a - kappa) <= kResonanceTol * std::max(a, kappa))
    throw std::invalid_argument("beta: Rayleigh resonance |alpha_n| == kappa at alpha_n = " +
                                std::to_string(alpha_n));
  if (a < kappa) return cplx(std::sqrt(kappa * kappa - alpha_n * alpha_n), 0.0);
  return cplx(0.0, std::sqrt(alpha_n * alpha_n - kappa * kappa));
}

Mat2c dtn_matrix(const ElasticMedium& medium, double alpha_n) {
  const double w2 = medium.omega * medium.omega;
  const cplx b1 = beta_coefficient(medium.kappa1(), alpha_n);
  const cplx b2 = beta_coefficient(medium.kappa2(), alpha_n);
  const cplx chi = alpha_n * alpha_n + b1 * b2;
  const double scale = alpha_n * alpha_n + std::abs(b1) * std::abs(b2);
  if (std::abs(chi) <= kResonanceTol * std::max(scale, 1.0))
    throw std::invalid_argument("dtn_matrix: chi vanishes (anomalous mode)");
  const cplx i(0.0, 1.0);
  Mat2c M;
  M(0, 0) = w2 * b1;
  M(0, 1) = medium.mu * alpha_n * chi - w2 * alpha_n;
  M(1, 0) = w2 * alpha_n - medium.mu * alpha_n * chi;
  M(1, 1) = w2 * b2;
  return (i / chi) * M;
}

Mat2c symmetrized_block(const Mat2c& M) { return -0.5 * (M + M.adjoint()); }

TruncationResult select_truncation(const ElasticMedium& medium, double alpha, double period,
                                   double b, double b_prime, double tol, double uinc_h1_norm) {
  if (!(b > b_prime)) throw std::invalid_argument("select_truncation: b must exceed max f");
  if (!(tol > 0.0)) throw std::invalid_argument("select_truncation: tol must be positive");
  if (!(period > 0.0)) throw std::invalid_argument("select_truncation: period must be positive");

  const double k2 = medium.kappa2();
  const double step = 2.0 * kPi / period;
  const double d = b - b_prime;
  const auto alpha_of = [&](long n) { return alpha + step * static_cast<double>(n); };

  // Largest |n| whose shear mode still propagates.
  int n_min = 0;
  {
    const long lo = static_cast<long>(std::floor((-k2 - alpha) / step)) - 1;
    const long hi = static_cast<long>(std::ceil((k2 - alpha) / step)) + 1;
    for (long n = lo; n <= hi; ++n)
      if (std::abs(alpha_of(n)) <= k2) n_min = std::max<int>(n_min, static_cast<int>(std::abs(n)));
  }

  const auto tail_bound = [&](int N) {
    double bound = 0.0;
    for (int sign : {1, -1}) {
      int decreasing = 0;
      double prev = std::numeric_limits<double>::infinity();
      for (long k = N + 1;; ++k) {
        const double an = alpha_of(sign * k);
        const double b2abs = std::abs(beta_coefficient(k2, an));
        const double term = static_cast<double>(k) * std::exp(-b2abs * d) * uinc_h1_norm;
        bound = std::max(bound, term);
        if (term == 0.0) break;
        if (term < prev) {
          if (++decreasing >= 3) break;
        } else {
          decreasing = 0;
        }
        prev = term;
        if (k > static_cast<long>(N) + 100000000L)
          throw solve_error("select_truncation: tail scan did not converge");
      }
    }
    return bound;
  };

  for (int N = n_min;; ++N) {
    const double eps = tail_bound(N);
    if (eps <= tol) return {N, eps};
    if (N > n_min + 10000000)
      throw solve_error("select_truncation: no admissible truncation order below the cap");
  }
}

EdgeMoments edge_moments(double x0, double h, double alpha_n) {
  if (!(h > 0.0)) throw std::invalid_argument("edge_moments: edge length must be positive");
  const cplx phase = std::exp(cplx(0.0, -alpha_n * x0));
  const cplx w(0.0, -alpha_n * h);
  EdgeMoments m;
  if (std::abs(alpha_n * h) < 0.5) {
    // left: sum_k w^k / (k! (k+1)(k+2)); right: sum_k w^k / (k! (k+2)).
    // The closed form below cancels two O(1/(alpha h)) terms, so it loses
    // about (alpha h)^-2 digits; 16 series terms reach full precision on
    // |w| < 1/2 where that loss would exceed roundoff.
    cplx term(1.0, 0.0);  // w^k / k!
    cplx left_sum(0.0, 0.0), right_sum(0.0, 0.0);
    for (int k = 0; k <= 15; ++k) {
      left_sum += term / static_cast<double>((k + 1) * (k + 2));
      right_sum += term / static_cast<double>(k + 2);
      term *= w / static_cast<double>(k + 1);
    }
    m.left = h * phase * left_sum;
    m.right = h * phase * right_sum;
  } else {
    const cplx z(0.0, -alpha_n);
    const cplx E = std::exp(w);
    const cplx r = (E - 1.0) / (h * z * z);
    m.left = phase * (-1.0 / z + r);
    m.right = phase * (E / z - r);
  }
  return m;
}

DtnOperator build_dtn_operator(const Mesh& mesh, const DofMap& dofmap,
                               const ElasticMedium& medium, int N) {
  if (N < 0) throw std::invalid_argument("dtn operator: N must be nonnegative");
  DtnOperator op;
  op.medium = medium;
  op.qp = dofmap.qp;
  op.N = N;
  op.b = mesh.top;
  op.gamma_vertices = dofmap.gamma_vertices;

  const double L = mesh.period;
  op.alpha_n.resize(2 * N + 1);
  op.modes.resize(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    op.alpha_n[n + N] = dofmap.qp.alpha + 2.0 * kPi * n / L;
    op.modes[n + N] = dtn_matrix(medium, op.alpha_n[n + N]);
  }

  std::vector<int> gamma_col(dofmap.kind.size(), -1);
  for (std::size_t i = 0; i < op.gamma_vertices.size(); ++i)
    gamma_col[op.gamma_vertices[i]] = static_cast<int>(i);

  op.moments = Eigen::MatrixXcd::Zero(2 * N + 1, static_cast<int>(op.gamma_vertices.size()));
  const auto deposit = [&](int vertex, int mode_row, cplx value) {
    cplx factor(1.0, 0.0);
    int v = vertex;
    if (dofmap.kind[v] == DofKind::Slave) {
      factor = dofmap.qp.phase;  // slave trace value is phase * master
      v = dofmap.index[v];
    }
    if (dofmap.kind[v] != DofKind::Free || gamma_col[v] < 0)
      throw mesh_error("dtn operator: top-boundary vertex is not a free gamma vertex");
    op.moments(mode_row, gamma_col[v]) += factor * value;
  };

  std::vector<std::array<int, 2>> top_edges;
  for (const auto& [key, tag] : mesh.boundary_edges) {
    if (tag != BoundaryTag::Top) continue;
    auto [a, b] = edge_key_vertices(key);
    if (mesh.vertices[a].x() > mesh.vertices[b].x()) std::swap(a, b);
    top_edges.push_back({a, b});
  }
  std::sort(top_edges.begin(), top_edges.end(), [&mesh](const auto& e1, const auto& e2) {
    return mesh.vertices[e1[0]].x() < mesh.vertices[e2[0]].x();
  });
  double covered = 0.0;
  for (const auto& e : top_edges) {
    const double xl = mesh.vertices[e[0]].x();
    const double h = mesh.vertices[e[1]].x() - xl;
    covered += h;
    for (int row = 0; row < 2 * N + 1; ++row) {
      const EdgeMoments m = edge_moments(xl, h, op.alpha_n[row]);
      deposit(e[0], row, m.left);
      deposit(e[1], row, m.right);
    }
  }
  if (std::abs(covered - L) > 1e-12 * L)
    throw mesh_error("dtn operator: top boundary edges do not cover one period");
  return op;
}

std::vector<Vec2c> trace_coefficients(const DtnOperator& op, const std::vector<Vec2c>& field) {
  const double L = op.qp.period;
  std::vector<Vec2c> coeff(2 * op.N + 1, Vec2c::Zero());
  for (int row = 0; row < 2 * op.N + 1; ++row) {
    Vec2c acc = Vec2c::Zero();
    for (std::size_t i = 0; i < op.gamma_vertices.size(); ++i)
      acc += op.moments(row, static_cast<int>(i)) * field[op.gamma_vertices[i]];
    coeff[row] = acc / L;
  }
  return coeff;
}

Vec2c evaluate_TN(const DtnOperator& op, const std::vector<Vec2c>& coefficients, double x) {
  if (coefficients.size() != static_cast<std::size_t>(2 * op.N + 1))
    throw std::invalid_argument("evaluate_TN: coefficient count does not match the operator");
  Vec2c acc = Vec2c::Zero();
  for (int row = 0; row < 2 * op.N + 1; ++row)
    acc += (op.modes[row] * coefficients[row]) * std::exp(cplx(0.0, op.alpha_n[row] * x));
  return acc;
}

}  // namespace elgrat
