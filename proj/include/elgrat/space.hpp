#ifndef ELGRAT_SPACE_HPP
#define ELGRAT_SPACE_HPP

#include <complex>
#include <vector>

#include "elgrat/mesh.hpp"

namespace elgrat {

// Quasi-periodicity data: u(x + period, y) = phase * u(x, y), phase = e^{i alpha period}.
struct QuasiPeriodicParams {
  double alpha = 0.0;
  double period = 0.0;
  cplx phase{1.0, 0.0};
};

QuasiPeriodicParams make_quasi_periodic(double alpha, double period);

enum class DofKind { Free, Dirichlet, Slave };

// Vertex classification for the P1 quasi-periodic space with the scattering
// surface eliminated. Free vertices carry two consecutive complex scalars
// (x component first); right-boundary vertices off the surface are slaves of
// their left partners; surface vertices are Dirichlet, corners included.
struct DofMap {
  QuasiPeriodicParams qp;
  std::vector<DofKind> kind;   // per vertex
  std::vector<int> index;      // Free: slot (scalars 2*slot, 2*slot+1); Slave: master vertex; else -1
  int free_count = 0;
  std::vector<int> gamma_vertices;    // free vertices on y = b, sorted by x
  std::vector<int> surface_vertices;  // Dirichlet vertices, ascending
};

DofMap build_dof_map(const Mesh& mesh, const QuasiPeriodicParams& qp);

// Expands free coefficients plus Dirichlet values (aligned with
// surface_vertices) into one complex 2-vector per mesh vertex. Slave values
// are phase * master exactly.
std::vector<Vec2c> apply_constraints(const DofMap& dofmap, const Eigen::VectorXcd& free_values,
                                     const std::vector<Vec2c>& dirichlet_values);

}  // namespace elgrat

#endif
