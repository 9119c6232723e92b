#include "elgrat/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"

namespace elgrat {

namespace {

// Plane wave c * v * e^{i q . x} with constant polarization v.
FieldSample plane_wave(const Vec2c& amplitude, const Vec2& q, const Vec2& x) {
  FieldSample s;
  const cplx e = std::exp(cplx(0.0, q.dot(x)));
  s.value = amplitude * e;
  s.gradient = (cplx(0.0, 1.0) * e) * (amplitude * q.transpose().cast<cplx>());
  return s;
}

}  // namespace

double incident_alpha(const ElasticMedium& medium, const IncidentWave& wave) {
  const double kappa = wave.kind == WaveKind::Compressional ? medium.kappa1() : medium.kappa2();
  return kappa * std::sin(wave.theta);
}

FieldSample incident_field(const ElasticMedium& medium, const IncidentWave& wave, const Vec2& x) {
  if (!(std::abs(wave.theta) < M_PI / 2.0))
    throw std::invalid_argument("incident wave: theta must lie in (-pi/2, pi/2)");
  const Vec2 d(std::sin(wave.theta), -std::cos(wave.theta));
  if (wave.kind == WaveKind::Compressional)
    return plane_wave(d.cast<cplx>(), medium.kappa1() * d, x);
  const Vec2 d_perp(std::cos(wave.theta), std::sin(wave.theta));
  return plane_wave(d_perp.cast<cplx>(), medium.kappa2() * d, x);
}

ExactFlatSolution exact_scattered_flat(const ElasticMedium& medium, double theta) {
  if (!(std::abs(theta) < M_PI / 2.0))
    throw std::invalid_argument("exact flat solution: theta must lie in (-pi/2, pi/2)");
  ExactFlatSolution s;
  s.kappa1 = medium.kappa1();
  s.alpha = s.kappa1 * std::sin(theta);
  s.beta = s.kappa1 * std::cos(theta);
  s.gamma = std::sqrt(medium.kappa2() * medium.kappa2() - s.alpha * s.alpha);
  const double denom = s.alpha * s.alpha + s.beta * s.gamma;
  s.r_p = (s.alpha * s.alpha - s.beta * s.gamma) / denom;
  s.r_s = 2.0 * s.alpha * s.beta / denom;
  return s;
}

FieldSample ExactFlatSolution::scattered(const Vec2& x) const {
  const Vec2c vp(alpha / kappa1, beta / kappa1);
  const Vec2c vs(gamma / kappa1, -alpha / kappa1);
  const FieldSample p = plane_wave(-r_p * vp, Vec2(alpha, beta), x);
  const FieldSample sh = plane_wave(-r_s * vs, Vec2(alpha, gamma), x);
  FieldSample out;
  out.value = p.value + sh.value;
  out.gradient = p.gradient + sh.gradient;
  return out;
}

double h1_error(const Mesh& mesh, const std::vector<Vec2c>& field, const ExactEvaluator& exact) {
  if (field.size() != mesh.vertices.size())
    throw std::invalid_argument("h1_error: field must cover every vertex");
  double acc = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.vertices[tri.v[0]];
    const Vec2 p1 = mesh.vertices[tri.v[1]];
    const Vec2 p2 = mesh.vertices[tri.v[2]];
    const double area = triangle_area(mesh, static_cast<int>(t));

    // P1 hat gradients and the constant field gradient on this triangle.
    const double inv2a = 1.0 / (2.0 * area);
    const Vec2 g0 = inv2a * Vec2(p1.y() - p2.y(), p2.x() - p1.x());
    const Vec2 g1 = inv2a * Vec2(p2.y() - p0.y(), p0.x() - p2.x());
    const Vec2 g2 = inv2a * Vec2(p0.y() - p1.y(), p1.x() - p0.x());
    Mat2c grad_h = Mat2c::Zero();
    grad_h += field[tri.v[0]] * g0.transpose().cast<cplx>();
    grad_h += field[tri.v[1]] * g1.transpose().cast<cplx>();
    grad_h += field[tri.v[2]] * g2.transpose().cast<cplx>();

    for (const auto& qp : quad::kTriDegree5) {
      const Vec2 x = qp.l0 * p0 + qp.l1 * p1 + qp.l2 * p2;
      const Vec2c uh =
          qp.l0 * field[tri.v[0]] + qp.l1 * field[tri.v[1]] + qp.l2 * field[tri.v[2]];
      const FieldSample ex = exact(x);
      const double dv = (ex.value - uh).squaredNorm();
      const double dg = (ex.gradient - grad_h).squaredNorm();
      acc += qp.weight * area * (dv + dg);
    }
  }
  return std::sqrt(acc);
}

double h1_norm_region(const ElasticMedium& medium, const IncidentWave& wave, double area) {
  if (!(area > 0.0)) throw std::invalid_argument("h1_norm_region: area must be positive");
  const double kappa = wave.kind == WaveKind::Compressional ? medium.kappa1() : medium.kappa2();
  return std::sqrt(area * (1.0 + kappa * kappa));
}

}  // namespace elgrat
