#ifndef ELGRAT_MEDIUM_HPP
#define ELGRAT_MEDIUM_HPP

#include <cmath>

namespace elgrat {

// Homogeneous isotropic elastic medium at a fixed angular frequency.
// Requires mu > 0, lambda + mu > 0, omega > 0; then kappa2 > kappa1 > 0.
struct ElasticMedium {
  double lambda = 0.0;
  double mu = 0.0;
  double omega = 0.0;

  double kappa1() const { return omega / std::sqrt(lambda + 2.0 * mu); }  // compressional
  double kappa2() const { return omega / std::sqrt(mu); }                 // shear
};

ElasticMedium make_medium(double lambda, double mu, double omega);

}  // namespace elgrat

#endif
