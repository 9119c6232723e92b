#include "elgrat/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "elgrat/errors.hpp"

namespace elgrat {

QuasiPeriodicParams make_quasi_periodic(double alpha, double period) {
  if (!(period > 0.0)) throw std::invalid_argument("quasi-periodic params: period must be positive");
  if (!std::isfinite(alpha)) throw std::invalid_argument("quasi-periodic params: alpha must be finite");
  return {alpha, period, std::exp(cplx(0.0, alpha * period))};
}

DofMap build_dof_map(const Mesh& mesh, const QuasiPeriodicParams& qp) {
  if (qp.period != mesh.period)
    throw std::invalid_argument("dof map: quasi-periodic period does not match the mesh");
  const int nv = static_cast<int>(mesh.vertices.size());

  std::vector<char> on_surface(nv, 0), on_right(nv, 0), on_top(nv, 0);
  for (const auto& [key, tag] : mesh.boundary_edges) {
    const auto [a, b] = edge_key_vertices(key);
    switch (tag) {
      case BoundaryTag::Surface: on_surface[a] = on_surface[b] = 1; break;
      case BoundaryTag::Right: on_right[a] = on_right[b] = 1; break;
      case BoundaryTag::Top: on_top[a] = on_top[b] = 1; break;
      case BoundaryTag::Left: break;
    }
  }

  std::unordered_map<int, int> right_to_left;
  for (const auto& [l, r] : mesh.periodic_pairs) right_to_left[r] = l;

  DofMap dm;
  dm.qp = qp;
  dm.kind.assign(nv, DofKind::Free);
  dm.index.assign(nv, -1);

  for (int v = 0; v < nv; ++v) {
    if (on_surface[v] && on_top[v])
      throw std::invalid_argument("dof map: vertex on both the surface and the artificial boundary");
    if (on_surface[v]) {
      dm.kind[v] = DofKind::Dirichlet;
      dm.surface_vertices.push_back(v);
    } else if (on_right[v]) {
      const auto it = right_to_left.find(v);
      if (it == right_to_left.end())
        throw mesh_error("dof map: right-boundary vertex has no periodic partner");
      dm.kind[v] = DofKind::Slave;
      dm.index[v] = it->second;
    }
  }
  for (int v = 0; v < nv; ++v)
    if (dm.kind[v] == DofKind::Free) dm.index[v] = dm.free_count++;
  for (int v = 0; v < nv; ++v)
    if (dm.kind[v] == DofKind::Slave && dm.kind[dm.index[v]] != DofKind::Free)
      throw mesh_error("dof map: slave vertex bound to a non-free master");

  for (int v = 0; v < nv; ++v)
    if (dm.kind[v] == DofKind::Free && on_top[v]) dm.gamma_vertices.push_back(v);
  std::sort(dm.gamma_vertices.begin(), dm.gamma_vertices.end(), [&mesh](int a, int b) {
    return mesh.vertices[a].x() < mesh.vertices[b].x();
  });
  return dm;
}

std::vector<Vec2c> apply_constraints(const DofMap& dm, const Eigen::VectorXcd& free_values,
                                     const std::vector<Vec2c>& dirichlet_values) {
  const int nv = static_cast<int>(dm.kind.size());
  if (free_values.size() != 2 * dm.free_count)
    throw std::invalid_argument("apply_constraints: free coefficient vector has the wrong size");
  if (dirichlet_values.size() != dm.surface_vertices.size())
    throw std::invalid_argument("apply_constraints: Dirichlet value count mismatch");

  std::vector<Vec2c> field(nv, Vec2c::Zero());
  for (int v = 0; v < nv; ++v)
    if (dm.kind[v] == DofKind::Free)
      field[v] = Vec2c(free_values[2 * dm.index[v]], free_values[2 * dm.index[v] + 1]);
  for (std::size_t k = 0; k < dm.surface_vertices.size(); ++k)
    field[dm.surface_vertices[k]] = dirichlet_values[k];
  for (int v = 0; v < nv; ++v)
    if (dm.kind[v] == DofKind::Slave) field[v] = dm.qp.phase * field[dm.index[v]];
  return field;
}

}  // namespace elgrat
