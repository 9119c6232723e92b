#ifndef ELGRAT_QUADRATURE_HPP
#define ELGRAT_QUADRATURE_HPP

#include <array>

#include "elgrat/geometry.hpp"

namespace elgrat::quad {

struct TriPoint {
  double l0, l1, l2;  // barycentric
  double weight;      // sums to 1 over the rule
};

// Degree-5 rule, 7 points.
inline constexpr std::array<TriPoint, 7> kTriDegree5 = {{
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {0.05971587178976982, 0.47014206410511505, 0.47014206410511505, 0.13239415278850618},
    {0.47014206410511505, 0.05971587178976982, 0.47014206410511505, 0.13239415278850618},
    {0.47014206410511505, 0.47014206410511505, 0.05971587178976982, 0.13239415278850618},
    {0.7974269853530873, 0.10128650732345634, 0.10128650732345634, 0.12593918054482715},
    {0.10128650732345634, 0.7974269853530873, 0.10128650732345634, 0.12593918054482715},
    {0.10128650732345634, 0.10128650732345634, 0.7974269853530873, 0.12593918054482715},
}};

struct LinePoint {
  double t;  // on [-1, 1]
  double weight;
};

inline constexpr std::array<LinePoint, 4> kGauss4 = {{
    {-0.8611363115940526, 0.3478548451374538},
    {-0.3399810435848563, 0.6521451548625461},
    {0.3399810435848563, 0.6521451548625461},
    {0.8611363115940526, 0.3478548451374538},
}};

inline constexpr std::array<LinePoint, 8> kGauss8 = {{
    {-0.9602898564975363, 0.1012285362903763},
    {-0.7966664774136267, 0.2223810344533745},
    {-0.5255324099163290, 0.3137066458778873},
    {-0.1834346424956498, 0.3626837833783620},
    {0.1834346424956498, 0.3626837833783620},
    {0.5255324099163290, 0.3137066458778873},
    {0.7966664774136267, 0.2223810344533745},
    {0.9602898564975363, 0.1012285362903763},
}};

}  // namespace elgrat::quad

#endif
