#ifndef ELGRAT_ANALYTIC_HPP
#define ELGRAT_ANALYTIC_HPP

#include <functional>

#include "elgrat/medium.hpp"
#include "elgrat/mesh.hpp"

namespace elgrat {

enum class WaveKind { Compressional, Shear };

struct IncidentWave {
  WaveKind kind = WaveKind::Compressional;
  double theta = 0.0;  // in (-pi/2, pi/2)
};

struct FieldSample {
  Vec2c value = Vec2c::Zero();
  Mat2c gradient = Mat2c::Zero();  // gradient(k, l) = d u_k / d x_l
};

// Quasi-momentum of the incident wave: kappa1 sin(theta) for P, kappa2
// sin(theta) for S.
double incident_alpha(const ElasticMedium& medium, const IncidentWave& wave);

FieldSample incident_field(const ElasticMedium& medium, const IncidentWave& wave, const Vec2& x);

// Closed-form scattered field above a flat rigid surface at y = 0 under
// compressional incidence. The displayed total field minus the incident
// wave; the total field vanishes on y = 0.
struct ExactFlatSolution {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double r_p = 0.0, r_s = 0.0;
  double kappa1 = 0.0;
  FieldSample scattered(const Vec2& x) const;
};

ExactFlatSolution exact_scattered_flat(const ElasticMedium& medium, double theta);

using ExactEvaluator = std::function<FieldSample(const Vec2&)>;

// Broken H1 norm of (exact - P1 field) summed over elements, degree-5 Gauss
// quadrature per triangle.
double h1_error(const Mesh& mesh, const std::vector<Vec2c>& field, const ExactEvaluator& exact);

// H1(Omega) norm of a unit-amplitude plane wave over a region of the given
// area: (area (1 + kappa^2))^{1/2}.
double h1_norm_region(const ElasticMedium& medium, const IncidentWave& wave, double area);

}  // namespace elgrat

#endif
