#include "elgrat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace elgrat {

double SurfaceProfile::value(double x) const {
  if (points.size() < 2) throw std::invalid_argument("profile needs at least two breakpoints");
  if (x <= points.front().x()) return points.front().y();
  if (x >= points.back().x()) return points.back().y();
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const Vec2& p = points[k];
    const Vec2& q = points[k + 1];
    if (x <= q.x()) {
      const double t = (x - p.x()) / (q.x() - p.x());
      return p.y() * (1.0 - t) + q.y() * t;
    }
  }
  return points.back().y();
}

double SurfaceProfile::min_height() const {
  double m = points.front().y();
  for (const Vec2& p : points) m = std::min(m, p.y());
  return m;
}

double SurfaceProfile::max_height() const {
  double m = points.front().y();
  for (const Vec2& p : points) m = std::max(m, p.y());
  return m;
}

bool SurfaceProfile::flat() const {
  for (const Vec2& p : points)
    if (p.y() != points.front().y()) return false;
  return true;
}

SurfaceProfile flat_profile(double period, double height) {
  SurfaceProfile prof;
  prof.points = {Vec2(0.0, height), Vec2(period, height)};
  return prof;
}

void validate_profile(const SurfaceProfile& profile, double b) {
  if (profile.points.size() < 2) throw std::invalid_argument("profile needs at least two breakpoints");
  if (profile.points.front().x() != 0.0)
    throw std::invalid_argument("profile must start at x = 0");
  for (std::size_t k = 0; k + 1 < profile.points.size(); ++k) {
    if (!(profile.points[k].x() < profile.points[k + 1].x()))
      throw std::invalid_argument("profile breakpoints must have strictly increasing x (breakpoint " +
                                  std::to_string(k + 1) + ")");
  }
  if (!(profile.period() > 0.0)) throw std::invalid_argument("profile period must be positive");
  if (profile.points.front().y() != profile.points.back().y())
    throw std::invalid_argument("profile must close periodically: f(0) == f(period) exactly");
  if (!(profile.max_height() < b))
    throw std::invalid_argument("artificial boundary y = b must lie strictly above the profile");
  for (const Vec2& p : profile.points)
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
      throw std::invalid_argument("profile breakpoints must be finite");
}

double domain_area(const SurfaceProfile& profile, double b) {
  // L*b minus the trapezoid areas under the profile.
  double under = 0.0;
  for (std::size_t k = 0; k + 1 < profile.points.size(); ++k) {
    const Vec2& p = profile.points[k];
    const Vec2& q = profile.points[k + 1];
    under += 0.5 * (p.y() + q.y()) * (q.x() - p.x());
  }
  return profile.period() * b - under;
}

}  // namespace elgrat
