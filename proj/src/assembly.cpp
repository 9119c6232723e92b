#include "elgrat/assembly.hpp"

#include <Eigen/SparseLU>
#include <array>
#include <stdexcept>
#include <string>

#include "elgrat/errors.hpp"

namespace elgrat {

namespace {

struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad;  // P1 hat gradients
};

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  const Triangle& tri = mesh.triangles[t];
  const Vec2 p0 = mesh.vertices[tri.v[0]];
  const Vec2 p1 = mesh.vertices[tri.v[1]];
  const Vec2 p2 = mesh.vertices[tri.v[2]];
  ElementGeometry g;
  g.area = 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y()));
  if (!(g.area > 1e-14 * mesh.period * mesh.period))
    throw mesh_error("assembly: degenerate triangle " + std::to_string(t));
  const double inv2a = 1.0 / (2.0 * g.area);
  g.grad[0] = inv2a * Vec2(p1.y() - p2.y(), p2.x() - p1.x());
  g.grad[1] = inv2a * Vec2(p2.y() - p0.y(), p0.x() - p2.x());
  g.grad[2] = inv2a * Vec2(p0.y() - p1.y(), p1.x() - p0.x());
  return g;
}

// 2x2 real block of the interior form for test hat j against trial hat i.
Eigen::Matrix2d interior_block(const ElementGeometry& g, const ElasticMedium& medium, int j,
                               int i) {
  const double stiff = medium.mu * g.area * g.grad[i].dot(g.grad[j]);
  const double mass = medium.omega * medium.omega * g.area / 12.0 * (i == j ? 2.0 : 1.0);
  Eigen::Matrix2d blk = (medium.lambda + medium.mu) * g.area * (g.grad[j] * g.grad[i].transpose());
  blk(0, 0) += stiff - mass;
  blk(1, 1) += stiff - mass;
  return blk;
}

struct ResolvedDof {
  int slot = -1;       // free-vertex slot, -1 for Dirichlet
  cplx factor{1.0, 0.0};
};

ResolvedDof resolve(const DofMap& dm, int vertex, bool conjugate_phase) {
  switch (dm.kind[vertex]) {
    case DofKind::Free:
      return {dm.index[vertex], cplx(1.0, 0.0)};
    case DofKind::Slave: {
      const cplx p = conjugate_phase ? std::conj(dm.qp.phase) : dm.qp.phase;
      return {dm.index[dm.index[vertex]], p};
    }
    case DofKind::Dirichlet:
    default:
      return {-1, cplx(0.0, 0.0)};
  }
}

}  // namespace

SparseCplx assemble_interior(const Mesh& mesh, const DofMap& dofmap, const ElasticMedium& medium) {
  const int n = 2 * dofmap.free_count;
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(mesh.triangles.size() * 36);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const ElementGeometry g = element_geometry(mesh, static_cast<int>(t));
    const Triangle& tri = mesh.triangles[t];
    for (int j = 0; j < 3; ++j) {
      const ResolvedDof test = resolve(dofmap, tri.v[j], true);
      if (test.slot < 0) continue;
      for (int i = 0; i < 3; ++i) {
        const ResolvedDof trial = resolve(dofmap, tri.v[i], false);
        if (trial.slot < 0) continue;
        const Eigen::Matrix2d blk = interior_block(g, medium, j, i);
        const cplx f = test.factor * trial.factor;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            triplets.emplace_back(2 * test.slot + r, 2 * trial.slot + c, f * blk(r, c));
      }
    }
  }
  SparseCplx A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

SparseCplx assemble_dtn(const DofMap& dofmap, const DtnOperator& op) {
  const int n = 2 * dofmap.free_count;
  const int modes = static_cast<int>(op.modes.size());
  if (op.moments.rows() != modes)
    throw std::invalid_argument("assemble_dtn: mode/moment count mismatch");
  const int gsize = static_cast<int>(op.gamma_vertices.size());
  if (op.moments.cols() != gsize)
    throw std::invalid_argument("assemble_dtn: moment columns do not match gamma vertices");

  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(gsize) * gsize * 4);
  const double invL = 1.0 / op.qp.period;
  for (int j = 0; j < gsize; ++j) {
    const int rs = dofmap.index[op.gamma_vertices[j]];
    for (int i = 0; i < gsize; ++i) {
      const int cs = dofmap.index[op.gamma_vertices[i]];
      Mat2c blk = Mat2c::Zero();
      for (int m = 0; m < modes; ++m)
        blk += (std::conj(op.moments(m, j)) * op.moments(m, i)) * op.modes[m];
      blk *= invL;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          triplets.emplace_back(2 * rs + r, 2 * cs + c, blk(r, c));
    }
  }
  SparseCplx B(n, n);
  B.setFromTriplets(triplets.begin(), triplets.end());
  B.makeCompressed();
  return B;
}

Eigen::VectorXcd assemble_lift_from(const Mesh& mesh, const DofMap& dofmap,
                                    const ElasticMedium& medium,
                                    const std::vector<Vec2c>& dirichlet) {
  if (dirichlet.size() != dofmap.surface_vertices.size())
    throw std::invalid_argument("assemble_lift_from: one value per surface vertex required");
  std::vector<int> surface_slot(dofmap.kind.size(), -1);
  for (std::size_t k = 0; k < dofmap.surface_vertices.size(); ++k)
    surface_slot[dofmap.surface_vertices[k]] = static_cast<int>(k);

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * dofmap.free_count);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    bool touches_surface = false;
    for (int k = 0; k < 3; ++k)
      if (dofmap.kind[tri.v[k]] == DofKind::Dirichlet) touches_surface = true;
    if (!touches_surface) continue;

    const ElementGeometry g = element_geometry(mesh, static_cast<int>(t));
    for (int j = 0; j < 3; ++j) {
      const ResolvedDof test = resolve(dofmap, tri.v[j], true);
      if (test.slot < 0) continue;
      for (int i = 0; i < 3; ++i) {
        if (dofmap.kind[tri.v[i]] != DofKind::Dirichlet) continue;
        const Eigen::Matrix2d blk = interior_block(g, medium, j, i);
        const Vec2c gval = dirichlet[surface_slot[tri.v[i]]];
        const Vec2c contrib = test.factor * (blk.cast<cplx>() * gval);
        rhs[2 * test.slot] -= contrib[0];
        rhs[2 * test.slot + 1] -= contrib[1];
      }
    }
  }
  return rhs;
}

std::pair<Eigen::VectorXcd, std::vector<Vec2c>> assemble_lift(const Mesh& mesh,
                                                              const DofMap& dofmap,
                                                              const ElasticMedium& medium,
                                                              const IncidentWave& wave) {
  std::vector<Vec2c> dirichlet(dofmap.surface_vertices.size());
  for (std::size_t k = 0; k < dofmap.surface_vertices.size(); ++k) {
    const int v = dofmap.surface_vertices[k];
    dirichlet[k] = -incident_field(medium, wave, mesh.vertices[v]).value;
  }
  Eigen::VectorXcd rhs = assemble_lift_from(mesh, dofmap, medium, dirichlet);
  return {std::move(rhs), std::move(dirichlet)};
}

LinearSystem assemble_system(const Mesh& mesh, const DofMap& dofmap, const ElasticMedium& medium,
                             const DtnOperator& op, const IncidentWave& wave) {
  LinearSystem sys;
  sys.matrix = assemble_interior(mesh, dofmap, medium) - assemble_dtn(dofmap, op);
  sys.matrix.makeCompressed();
  auto [rhs, dirichlet] = assemble_lift(mesh, dofmap, medium, wave);
  sys.rhs = std::move(rhs);
  sys.dirichlet_values = std::move(dirichlet);
  return sys;
}

SolveResult solve(const SparseCplx& matrix, const Eigen::VectorXcd& rhs) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
    throw std::invalid_argument("solve: matrix/rhs dimensions do not agree");
  Eigen::SparseLU<SparseCplx, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(matrix);
  lu.factorize(matrix);
  if (lu.info() != Eigen::Success)
    throw solve_error("solve: sparse LU factorization failed (" + lu.lastErrorMessage() + ")");
  SolveResult result;
  result.coefficients = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw solve_error("solve: back substitution failed");
  const double bnorm = rhs.norm();
  result.relative_residual =
      bnorm == 0.0 ? 0.0 : (matrix * result.coefficients - rhs).norm() / bnorm;
  if (result.relative_residual > 1e-10)
    throw solve_error("solve: relative residual " + std::to_string(result.relative_residual) +
                      " exceeds 1e-10 (ill-conditioned system)");
  return result;
}

}  // namespace elgrat
