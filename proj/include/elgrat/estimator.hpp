#ifndef ELGRAT_ESTIMATOR_HPP
#define ELGRAT_ESTIMATOR_HPP

#include <utility>
#include <vector>

#include "elgrat/dtn.hpp"
#include "elgrat/medium.hpp"
#include "elgrat/mesh.hpp"
#include "elgrat/space.hpp"

namespace elgrat {

// Local indicators eta_K = h_K ||R u|| + (1/2 sum_{e in dK} h_e ||J_e||^2)^{1/2}
// and the global estimate eps_h = (sum eta_K^2)^{1/2}.
struct ErrorIndicators {
  std::vector<double> eta;       // per triangle
  std::vector<double> residual;  // diagnostic: the h_K ||R u||_{L2(K)} part
  std::vector<double> jump;      // diagnostic: the edge-jump part
  double eps_h = 0.0;
};

// Constant gradient of the P1 field on triangle t; entry (k, l) = d_l u_k.
Mat2c p1_gradient(const Mesh& mesh, int t, const std::vector<Vec2c>& field);

// mu G nu + (lambda + mu) tr(G) nu: traction of the gradient G in direction nu.
Vec2c traction(const Mat2c& grad, const ElasticMedium& medium, const Vec2& nu);

// h_K omega^2 ||u_h||_{L2(K)}. Second derivatives of a P1 field vanish on K,
// so this is the entire residual term; the L2 norm is exact via the P1 mass
// matrix.
double element_residual(const Mesh& mesh, int t, const std::vector<Vec2c>& field,
                        const ElasticMedium& medium);

// L2(e) norm of the traction jump across the interior edge (v0, v1) shared by
// triangles k1 and k2. Symmetric in the triangle labels.
double interior_jump(const Mesh& mesh, int v0, int v1, int k1, int k2,
                     const std::vector<Vec2c>& field, const ElasticMedium& medium);

// L2(e) norm of 2(T_N u - B u) on the top edge (v0, v1) of triangle t, with
// trace coefficients precomputed for this field. The mode sum is integrated
// with nested Gauss rules, subdividing until the two levels agree.
double gamma_jump(const Mesh& mesh, int v0, int v1, int t, const std::vector<Vec2c>& field,
                  const DtnOperator& op, const std::vector<Vec2c>& coefficients);

// L2 norms of the two phase-folded traction jumps for a periodic edge pair;
// (v0, v1) lies on x = 0 and its partner edge is resolved through the mesh's
// vertex pairing. Throws mesh_error when the partner edge or an adjacent
// triangle is missing. The two norms agree because the phase is unimodular.
std::pair<double, double> periodic_jump(const Mesh& mesh, int v0, int v1,
                                        const std::vector<Vec2c>& field,
                                        const ElasticMedium& medium,
                                        const QuasiPeriodicParams& qp);

// Assemble all indicators: element residual plus the half-weighted squared
// jumps of each triangle's own edges. Surface edges carry no jump (the
// Dirichlet data is matched exactly there).
ErrorIndicators indicators(const Mesh& mesh, const DofMap& dofmap,
                           const std::vector<Vec2c>& field, const DtnOperator& op,
                           const ElasticMedium& medium);

}  // namespace elgrat

#endif
