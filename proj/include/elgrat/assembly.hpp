#ifndef ELGRAT_ASSEMBLY_HPP
#define ELGRAT_ASSEMBLY_HPP

#include <Eigen/Sparse>
#include <utility>
#include <vector>

#include "elgrat/analytic.hpp"
#include "elgrat/dtn.hpp"
#include "elgrat/medium.hpp"
#include "elgrat/mesh.hpp"
#include "elgrat/space.hpp"

namespace elgrat {

using SparseCplx = Eigen::SparseMatrix<cplx>;

// Interior part of the sesquilinear form, mu (grad u, grad v) +
// (lambda + mu)(div u, div v) - omega^2 (u, v), exact P1 integration,
// quasi-periodic folding applied. Hermitian by construction.
SparseCplx assemble_interior(const Mesh& mesh, const DofMap& dofmap, const ElasticMedium& medium);

// Boundary block B with 2x2 entries B_ji = (1/period) sum_n conj(c_jn) M^(n) c_in
// on gamma DOFs. The system matrix is interior - B.
SparseCplx assemble_dtn(const DofMap& dofmap, const DtnOperator& op);

// Right-hand side -A[free, dirichlet] g for given Dirichlet values, ordered
// like dofmap.surface_vertices. Linear in g; the DtN block never touches S.
Eigen::VectorXcd assemble_lift_from(const Mesh& mesh, const DofMap& dofmap,
                                    const ElasticMedium& medium,
                                    const std::vector<Vec2c>& dirichlet_values);

// Dirichlet data g = -u_inc on the scattering surface and the matching
// right-hand side.
std::pair<Eigen::VectorXcd, std::vector<Vec2c>> assemble_lift(const Mesh& mesh,
                                                              const DofMap& dofmap,
                                                              const ElasticMedium& medium,
                                                              const IncidentWave& wave);

struct LinearSystem {
  SparseCplx matrix;
  Eigen::VectorXcd rhs;
  std::vector<Vec2c> dirichlet_values;
};

LinearSystem assemble_system(const Mesh& mesh, const DofMap& dofmap, const ElasticMedium& medium,
                             const DtnOperator& op, const IncidentWave& wave);

struct SolveResult {
  Eigen::VectorXcd coefficients;
  double relative_residual = 0.0;
};

// Direct sparse LU. Throws solve_error on a failed factorization or when the
// relative residual exceeds 1e-10.
SolveResult solve(const SparseCplx& matrix, const Eigen::VectorXcd& rhs);

}  // namespace elgrat

#endif
