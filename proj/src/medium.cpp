#include "elgrat/medium.hpp"

#include <stdexcept>

namespace elgrat {

ElasticMedium make_medium(double lambda, double mu, double omega) {
  if (!(mu > 0.0)) throw std::invalid_argument("medium: mu must be positive");
  if (!(lambda + mu > 0.0)) throw std::invalid_argument("medium: lambda + mu must be positive");
  if (!(omega > 0.0)) throw std::invalid_argument("medium: omega must be positive");
  return ElasticMedium{lambda, mu, omega};
}

}  // namespace elgrat
