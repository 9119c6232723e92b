#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "elgrat/analytic.hpp"
#include "elgrat/dtn.hpp"
#include "elgrat/errors.hpp"

using namespace elgrat;

namespace {

const double kPi = 3.14159265358979323846;

ElasticMedium example_medium() { return make_medium(2.0, 1.0, 2.0); }
double example_alpha() { return std::sqrt(3.0) / 2.0; }  // kappa1 sin(pi/3), kappa1 = 1

// Independent evaluation of the kernel formula, written out directly.
Mat2c kernel_reference(const ElasticMedium& m, double an) {
  const cplx b1 = beta_coefficient(m.kappa1(), an);
  const cplx b2 = beta_coefficient(m.kappa2(), an);
  const cplx chi = an * an + b1 * b2;
  const double w2 = m.omega * m.omega;
  Mat2c M;
  M(0, 0) = w2 * b1;
  M(0, 1) = m.mu * an * chi - w2 * an;
  M(1, 0) = w2 * an - m.mu * an * chi;
  M(1, 1) = w2 * b2;
  return (cplx(0.0, 1.0) / chi) * M;
}

// Tail term of the truncation bound at index n.
double tail_term(const ElasticMedium& m, double alpha, double period, double gap, double uinc,
                 long n) {
  const double an = alpha + 2.0 * kPi * static_cast<double>(n) / period;
  const double k2 = m.kappa2();
  REQUIRE(std::abs(an) > k2);  // only evanescent indices are meaningful
  const double decay = std::sqrt(an * an - k2 * k2);
  return std::abs(static_cast<double>(n)) * std::exp(-decay * gap) * uinc;
}

int scan_n_min(const ElasticMedium& m, double alpha, double period) {
  int n_min = 0;
  for (int n = -64; n <= 64; ++n) {
    const double an = alpha + 2.0 * kPi * n / period;
    if (std::abs(an) <= m.kappa2()) n_min = std::max(n_min, std::abs(n));
  }
  return n_min;
}

// Supremum over |n| > N: walk each sign branch until three consecutive strict
// decreases, keep the running maximum.
double scan_eps(const ElasticMedium& m, double alpha, double period, double gap, double uinc,
                int N) {
  double best = 0.0;
  for (int sign : {1, -1}) {
    int decreasing = 0;
    double prev = std::numeric_limits<double>::infinity();
    for (long k = N + 1; k < N + 2000; ++k) {
      const double t = tail_term(m, alpha, period, gap, uinc, sign * k);
      best = std::max(best, t);
      decreasing = t < prev ? decreasing + 1 : 0;
      prev = t;
      if (decreasing >= 3) break;
    }
  }
  return best;
}

EdgeMoments simpson_moments(double x0, double h, double an) {
  const int intervals = 10000;  // even
  cplx left = 0.0, right = 0.0;
  const double dx = h / intervals;
  for (int k = 0; k <= intervals; ++k) {
    const double t = k * dx;
    const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const cplx osc = std::exp(cplx(0.0, -an * (x0 + t)));
    left += w * (1.0 - t / h) * osc;
    right += w * (t / h) * osc;
  }
  return {left * dx / 3.0, right * dx / 3.0};
}

struct Fixture {
  Mesh mesh;
  DofMap dofmap;
  DtnOperator op;
};

Fixture make_fixture(double h0, double alpha, int N, bool refine_left = false) {
  Fixture f;
  f.mesh = build_initial_mesh(flat_profile(0.5), 0.25, h0);
  if (refine_left) {
    for (int round = 0; round < 2; ++round) {
      MarkSet marks;
      for (std::size_t t = 0; t < f.mesh.triangles.size(); ++t) {
        const Triangle& tri = f.mesh.triangles[t];
        Vec2 c = (f.mesh.vertices[tri.v[0]] + f.mesh.vertices[tri.v[1]] +
                  f.mesh.vertices[tri.v[2]]) /
                 3.0;
        if (c.x() < 0.2 && c.y() > 0.25 - 3.0 * h0) marks.push_back(static_cast<int>(t));
      }
      f.mesh = bisect(f.mesh, marks);
    }
  }
  f.dofmap = build_dof_map(f.mesh, make_quasi_periodic(alpha, 0.5));
  f.op = build_dtn_operator(f.mesh, f.dofmap, example_medium(), N);
  return f;
}

std::vector<Vec2c> mode_field(const Mesh& mesh, double an, const Vec2c& amp) {
  std::vector<Vec2c> field(mesh.vertices.size(), Vec2c::Zero());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    field[v] = amp * std::exp(cplx(0.0, an * mesh.vertices[v].x()));
  return field;
}

}  // namespace

TEST_CASE("vertical wavenumber branches") {
  // propagating: below cutoff, real nonnegative
  cplx beta = beta_coefficient(1.0, example_alpha());
  CHECK(beta.imag() == 0.0);
  CHECK(beta.real() == doctest::Approx(0.5).epsilon(1e-15));
  cplx gamma = beta_coefficient(2.0, example_alpha());
  CHECK(gamma.imag() == 0.0);
  CHECK(gamma.real() == doctest::Approx(std::sqrt(13.0) / 2.0).epsilon(1e-15));

  // evanescent: above cutoff, positive imaginary
  const double a1 = example_alpha() + 2.0 * kPi / 0.5;
  cplx ev = beta_coefficient(1.0, a1);
  CHECK(ev.real() == 0.0);
  CHECK(ev.imag() == doctest::Approx(std::sqrt(a1 * a1 - 1.0)).epsilon(1e-15));

  for (double an : {-5.0, -1.3, 0.0, 0.4, 1.7, 30.0}) {
    cplx b = beta_coefficient(2.0, an);
    if (std::abs(an) < 2.0) {
      CHECK(b.imag() == 0.0);
      CHECK(b.real() >= 0.0);
    } else {
      CHECK(b.real() == 0.0);
      CHECK(b.imag() > 0.0);
    }
    // the two branches agree with |kappa^2 - an^2| in magnitude
    CHECK(std::norm(b) == doctest::Approx(std::abs(4.0 - an * an)).epsilon(1e-14));
  }
}

TEST_CASE("Rayleigh resonance is rejected") {
  CHECK_THROWS_AS(beta_coefficient(2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(beta_coefficient(2.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(beta_coefficient(2.0, 2.0 * (1.0 + 1e-13)), std::invalid_argument);
  CHECK_NOTHROW(beta_coefficient(2.0, 2.0 * (1.0 + 1e-11)));
  CHECK_THROWS_AS(beta_coefficient(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("kernel at normal incidence is diagonal") {
  Mat2c M = dtn_matrix(example_medium(), 0.0);
  CHECK(std::abs(M(0, 0) - cplx(0.0, 2.0)) <= 1e-14);
  CHECK(std::abs(M(1, 1) - cplx(0.0, 4.0)) <= 1e-14);
  CHECK(std::abs(M(0, 1)) <= 1e-15);
  CHECK(std::abs(M(1, 0)) <= 1e-15);
}

TEST_CASE("kernel matches the reference formula and its printed values") {
  const ElasticMedium m = example_medium();
  const double a0 = example_alpha();
  Mat2c M = dtn_matrix(m, a0);
  Mat2c R = kernel_reference(m, a0);
  CHECK((M - R).norm() <= 1e-14 * R.norm());

  // propagating mode: purely imaginary entries, known to six figures
  CHECK(M(0, 0).real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(M(0, 0).imag() == doctest::Approx(1.211103).epsilon(1e-5));
  CHECK(M(0, 1).imag() == doctest::Approx(-1.231666).epsilon(1e-5));
  CHECK(M(1, 0).imag() == doctest::Approx(1.231666).epsilon(1e-5));
  CHECK(M(1, 1).imag() == doctest::Approx(4.366692).epsilon(1e-5));

  // the off-diagonal entries are exact negatives of each other
  CHECK(M(1, 0) == -M(0, 1));

  // evanescent modes match the reference too
  for (int n : {1, -1, 3, -7, 20}) {
    const double an = a0 + 2.0 * kPi * n / 0.5;
    Mat2c Mn = dtn_matrix(m, an);
    Mat2c Rn = kernel_reference(m, an);
    CHECK((Mn - Rn).norm() <= 1e-13 * Rn.norm());
    CHECK(Mn(1, 0) == -Mn(0, 1));
  }
}

TEST_CASE("symmetrized kernel block") {
  const ElasticMedium m = example_medium();
  const double a1 = example_alpha() + 2.0 * kPi / 0.5;
  Mat2c M = dtn_matrix(m, a1);
  Mat2c H = symmetrized_block(M);
  // definition: -(M + M^H)/2, Hermitian by construction
  Mat2c expected = -0.5 * (M + Mat2c(M.adjoint()));
  CHECK((H - expected).norm() <= 1e-15 * expected.norm());
  CHECK((H - Mat2c(H.adjoint())).norm() <= 1e-15 * H.norm());

  // evanescent modes are positive definite here (Example 1 data)
  for (int n : {1, -1, 2, -2, 10, -10, 100}) {
    const double an = example_alpha() + 2.0 * kPi * n / 0.5;
    Eigen::SelfAdjointEigenSolver<Mat2c> eig(symmetrized_block(dtn_matrix(m, an)));
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("truncation selection against an independent scan") {
  const ElasticMedium m = example_medium();
  const double alpha = example_alpha();
  const double gap = 0.25;  // b - b' with b' = 0
  const double uinc = 0.5;

  const int n_min = scan_n_min(m, alpha, 0.5);
  for (double tol : {1e-4, 1e-8, 1e-12}) {
    TruncationResult r = select_truncation(m, alpha, 0.5, 0.25, 0.0, tol, uinc);
    // smallest admissible N per the scan
    int expect = n_min;
    while (scan_eps(m, alpha, 0.5, gap, uinc, expect) > tol) ++expect;
    CHECK(r.N == expect);
    CHECK(r.eps_N ==
          doctest::Approx(scan_eps(m, alpha, 0.5, gap, uinc, r.N)).epsilon(1e-12));
    CHECK(r.eps_N <= tol);
    if (r.N > n_min) CHECK(scan_eps(m, alpha, 0.5, gap, uinc, r.N - 1) > tol);
  }
}

TEST_CASE("infinite tolerance returns the propagating cutoff") {
  const ElasticMedium m = example_medium();
  const double alpha = example_alpha();
  TruncationResult r = select_truncation(m, alpha, 0.5, 0.25, 0.0,
                                         std::numeric_limits<double>::infinity(), 0.5);
  CHECK(r.N == scan_n_min(m, alpha, 0.5));
}

TEST_CASE("a wider gap never increases the truncation order") {
  const ElasticMedium m = example_medium();
  const double alpha = example_alpha();
  TruncationResult narrow = select_truncation(m, alpha, 0.5, 0.25, 0.0, 1e-8, 0.5);
  TruncationResult wide = select_truncation(m, alpha, 0.5, 0.5, 0.0, 1e-8, 0.5);
  CHECK(wide.N <= narrow.N);
  CHECK(wide.eps_N <= 1e-8);
}

TEST_CASE("truncation input validation") {
  const ElasticMedium m = example_medium();
  CHECK_THROWS_AS(select_truncation(m, 0.5, 0.5, 0.25, 0.25, 1e-8, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(select_truncation(m, 0.5, 0.5, 0.2, 0.25, 1e-8, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(select_truncation(m, 0.5, 0.5, 0.25, 0.0, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(select_truncation(m, 0.5, 0.0, 0.25, 0.0, 1e-8, 0.5), std::invalid_argument);
}

TEST_CASE("edge moments") {
  SUBCASE("zero frequency gives half the edge to each hat") {
    EdgeMoments mm = edge_moments(0.3, 0.02, 0.0);
    CHECK(std::abs(mm.left - cplx(0.01, 0.0)) <= 1e-16);
    CHECK(std::abs(mm.right - cplx(0.01, 0.0)) <= 1e-16);
  }

  SUBCASE("quadrature oracle at a fast mode") {
    const double an = 4.0 * kPi + std::sqrt(3.0) / 2.0;
    EdgeMoments got = edge_moments(0.0, 0.1, an);
    EdgeMoments want = simpson_moments(0.0, 0.1, an);
    CHECK(std::abs(got.left - want.left) <= 1e-10 * std::abs(want.left));
    CHECK(std::abs(got.right - want.right) <= 1e-10 * std::abs(want.right));

    EdgeMoments shifted = edge_moments(0.37, 0.05, an);
    EdgeMoments shifted_want = simpson_moments(0.37, 0.05, an);
    CHECK(std::abs(shifted.left - shifted_want.left) <= 1e-10 * std::abs(shifted_want.left));
    CHECK(std::abs(shifted.right - shifted_want.right) <= 1e-10 * std::abs(shifted_want.right));
  }

  SUBCASE("series branch is continuous and correct") {
    const double h = 0.1;
    // spanning the series/closed-form switch at |alpha h| = 1/2, plus deep
    // cancellation territory where the closed form would lose ~(alpha h)^-2
    for (double arg : {1e-9, 1e-6, 1e-3, 0.05, 0.499, 0.501, 0.7}) {
      const double an = arg / h;
      EdgeMoments got = edge_moments(0.2, h, an);
      EdgeMoments want = simpson_moments(0.2, h, an);
      CHECK(std::abs(got.left - want.left) <= 1e-12 * std::abs(want.left));
      CHECK(std::abs(got.right - want.right) <= 1e-12 * std::abs(want.right));
    }
    EdgeMoments below = edge_moments(0.2, h, 0.4999 / h);
    EdgeMoments above = edge_moments(0.2, h, 0.5001 / h);
    CHECK(std::abs(below.left - above.left) <= 1e-3 * std::abs(below.left));
  }

  SUBCASE("hats on a partition tile the oscillation integral") {
    // sum over a uniform partition of one period: integral of e^{-i an x}
    const int cells = 16;
    const double L = 0.5, h = L / cells;
    for (int mode : {0, 1, -2}) {
      const double an = 2.0 * kPi * mode / L;
      cplx sum = 0.0;
      for (int k = 0; k < cells; ++k) {
        EdgeMoments mm = edge_moments(k * h, h, an);
        sum += mm.left + mm.right;
      }
      const cplx want = mode == 0 ? cplx(L, 0.0) : cplx(0.0, 0.0);
      CHECK(std::abs(sum - want) <= 1e-13 * L);
    }
  }

  SUBCASE("degenerate edge is rejected") {
    CHECK_THROWS_AS(edge_moments(0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(edge_moments(0.0, -0.1, 1.0), std::invalid_argument);
  }
}

TEST_CASE("operator construction sanity") {
  Fixture f = make_fixture(0.1, example_alpha(), 4);
  CHECK(f.op.N == 4);
  CHECK(f.op.alpha_n.size() == 9);
  CHECK(f.op.modes.size() == 9);
  CHECK(f.op.moments.rows() == 9);
  CHECK(f.op.moments.cols() == static_cast<int>(f.op.gamma_vertices.size()));
  CHECK(f.op.gamma_vertices == f.dofmap.gamma_vertices);
  for (int n = -4; n <= 4; ++n)
    CHECK(f.op.alpha_n[n + 4] ==
          doctest::Approx(example_alpha() + 2.0 * kPi * n / 0.5).epsilon(1e-15));
  CHECK_THROWS_AS(build_dtn_operator(f.mesh, f.dofmap, example_medium(), -1),
                  std::invalid_argument);
}

TEST_CASE("moment row zero at normal incidence tiles the period") {
  Fixture f = make_fixture(0.1, 0.0, 2);
  cplx row_sum = 0.0;
  for (int i = 0; i < f.op.moments.cols(); ++i) row_sum += f.op.moments(2, i);  // n = 0 slot
  CHECK(std::abs(row_sum - cplx(0.5, 0.0)) <= 1e-14);
}

TEST_CASE("trace coefficients") {
  SUBCASE("zero field has zero coefficients") {
    Fixture f = make_fixture(0.1, example_alpha(), 3);
    std::vector<Vec2c> zero(f.mesh.vertices.size(), Vec2c::Zero());
    auto coeffs = trace_coefficients(f.op, zero);
    REQUIRE(coeffs.size() == 7);
    for (const Vec2c& c : coeffs) CHECK(c.norm() == 0.0);
  }

  SUBCASE("constant trace at normal incidence is mode zero exactly") {
    Fixture f = make_fixture(0.05, 0.0, 3);
    const Vec2c amp(cplx(0.7, -0.2), cplx(0.0, 1.1));
    auto coeffs = trace_coefficients(f.op, mode_field(f.mesh, 0.0, amp));
    CHECK((coeffs[3] - amp).norm() <= 1e-14 * amp.norm());
    for (int n = -3; n <= 3; ++n)
      if (n != 0) CHECK(coeffs[n + 3].norm() <= 1e-13 * amp.norm());
  }

  SUBCASE("uniform grids alias higher modes to machine zero") {
    Fixture f = make_fixture(0.05, 0.0, 4);
    const double a1 = 2.0 * kPi / 0.5;
    auto coeffs = trace_coefficients(f.op, mode_field(f.mesh, a1, Vec2c(1.0, 0.0)));
    const double dominant = coeffs[1 + 4].norm();
    CHECK(dominant > 0.9);  // P1 sampling keeps nearly unit mass
    for (int n = -4; n <= 4; ++n)
      if (n != 1) CHECK(coeffs[n + 4].norm() <= 1e-12 * dominant);
  }

  SUBCASE("non-uniform grids leak at second order") {
    const double a1 = 2.0 * kPi / 0.5;
    double prev = 0.0;
    for (double h0 : {0.05, 0.025, 0.0125}) {
      Fixture f = make_fixture(h0, 0.0, 4, /*refine_left=*/true);
      auto coeffs = trace_coefficients(f.op, mode_field(f.mesh, a1, Vec2c(1.0, 0.0)));
      double off = 0.0;
      for (int n = -4; n <= 4; ++n)
        if (n != 1) off = std::max(off, coeffs[n + 4].norm());
      CHECK(off > 0.0);
      if (prev > 0.0) {
        const double ratio = prev / off;
        CHECK(ratio >= 2.8);
        CHECK(ratio <= 5.5);
      }
      prev = off;
    }
  }
}

TEST_CASE("applying the truncated operator") {
  Fixture f = make_fixture(0.1, example_alpha(), 3);

  SUBCASE("zero coefficients give zero") {
    std::vector<Vec2c> zero(7, Vec2c::Zero());
    CHECK(evaluate_TN(f.op, zero, 0.3).norm() == 0.0);
  }

  SUBCASE("a single mode reproduces the kernel action") {
    std::vector<Vec2c> coeffs(7, Vec2c::Zero());
    const Vec2c c(cplx(0.3, 0.1), cplx(-0.2, 0.0));
    coeffs[2 + 3] = c;
    const double x = 0.37;
    const double a2 = f.op.alpha_n[2 + 3];
    Vec2c want = dtn_matrix(example_medium(), a2) * c * std::exp(cplx(0.0, a2 * x));
    Vec2c got = evaluate_TN(f.op, coeffs, x);
    CHECK((got - want).norm() <= 1e-14 * want.norm());
  }

  SUBCASE("coefficient count must match") {
    std::vector<Vec2c> wrong(6, Vec2c::Zero());
    CHECK_THROWS_AS(evaluate_TN(f.op, wrong, 0.0), std::invalid_argument);
  }
}

TEST_CASE("kernel growth is at most linear in the mode index") {
  const ElasticMedium m = example_medium();
  const double a0 = example_alpha();
  const double c_at_16 = dtn_matrix(m, a0 + 2.0 * kPi * 16 / 0.5).norm() / 16.0;
  for (int n : {32, 100, 1000, 10000}) {
    const double an = a0 + 2.0 * kPi * n / 0.5;
    CHECK(dtn_matrix(m, an).norm() <= 4.0 * c_at_16 * n);
  }
}
