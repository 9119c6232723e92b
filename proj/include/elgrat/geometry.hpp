#ifndef ELGRAT_GEOMETRY_HPP
#define ELGRAT_GEOMETRY_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace elgrat {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;

// One period of a piecewise linear grating profile y = f(x), x in [0, L].
// Breakpoints have strictly increasing x, the first at x = 0, and the
// profile closes periodically: f(0) == f(L) exactly.
struct SurfaceProfile {
  std::vector<Vec2> points;

  double period() const { return points.back().x(); }
  double value(double x) const;
  double min_height() const;
  double max_height() const;  // b' in the transparent boundary placement
  bool flat() const;
};

SurfaceProfile flat_profile(double period, double height = 0.0);

// Throws std::invalid_argument with a diagnostic if the profile is not a
// valid single-period graph below the artificial boundary y = b.
void validate_profile(const SurfaceProfile& profile, double b);

// Area of the truncated cell { (x,y) : 0 < x < L, f(x) < y < b }.
double domain_area(const SurfaceProfile& profile, double b);

}  // namespace elgrat

#endif
