#include "elgrat/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "elgrat/errors.hpp"
#include "quadrature.hpp"

namespace elgrat {

namespace {

// Outward unit normal of the edge (v0, v1) with respect to triangle k. The
// triangle is stored counter-clockwise, so the outward normal of a forward
// edge (p1 - p0) is the clockwise rotation (dy, -dx).
Vec2 outward_normal(const Mesh& mesh, int k, int v0, int v1) {
  const Triangle& tri = mesh.triangles[k];
  for (int e = 0; e < 3; ++e) {
    int a = tri.v[e];
    int b = tri.v[(e + 1) % 3];
    if ((a == v0 && b == v1) || (a == v1 && b == v0)) {
      Vec2 d = mesh.vertices[b] - mesh.vertices[a];
      Vec2 n(d.y(), -d.x());
      return n / n.norm();
    }
  }
  throw mesh_error("edge (" + std::to_string(v0) + ", " + std::to_string(v1) +
                   ") is not an edge of triangle " + std::to_string(k));
}

double edge_length(const Mesh& mesh, int v0, int v1) {
  return (mesh.vertices[v1] - mesh.vertices[v0]).norm();
}

int triangle_with_edge(const Mesh& mesh, int v0, int v1) {
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& v = mesh.triangles[t].v;
    bool has0 = v[0] == v0 || v[1] == v0 || v[2] == v0;
    bool has1 = v[0] == v1 || v[1] == v1 || v[2] == v1;
    if (has0 && has1) return t;
  }
  return -1;
}

// Partner edge of the left boundary edge (v0, v1) under the vertex pairing.
std::pair<int, int> partner_edge(const Mesh& mesh, int v0, int v1) {
  auto partner = [&](int v) {
    for (const auto& [left, right] : mesh.periodic_pairs)
      if (left == v) return right;
    throw mesh_error("vertex " + std::to_string(v) + " has no periodic partner");
  };
  int w0 = partner(v0);
  int w1 = partner(v1);
  auto it = mesh.boundary_edges.find(edge_key(w0, w1));
  if (it == mesh.boundary_edges.end() || it->second != BoundaryTag::Right)
    throw mesh_error("periodic partner edge (" + std::to_string(w0) + ", " +
                     std::to_string(w1) + ") is not a right boundary edge");
  return {w0, w1};
}

std::pair<double, double> periodic_jump_tris(const Mesh& mesh, int v0, int v1, int kl, int kr,
                                             const std::vector<Vec2c>& field,
                                             const ElasticMedium& medium,
                                             const QuasiPeriodicParams& qp) {
  if (kl < 0 || kr < 0) throw mesh_error("periodic edge without an adjacent triangle");
  Vec2c tl = traction(p1_gradient(mesh, kl, field), medium, Vec2(1.0, 0.0));
  Vec2c tr = traction(p1_gradient(mesh, kr, field), medium, Vec2(1.0, 0.0));
  Vec2c jump_left = tl - std::conj(qp.phase) * tr;
  Vec2c jump_right = qp.phase * tl - tr;
  double root_len = std::sqrt(edge_length(mesh, v0, v1));
  return {root_len * jump_left.norm(), root_len * jump_right.norm()};
}

// Integral over [x0, x1] of |2 (T_N u(x) - bu)|^2, where bu is the constant
// element traction. Nested 4/8-point Gauss; disagreement splits the interval
// so strongly oscillatory high modes on coarse edges stay resolved.
double gamma_jump_sq(const DtnOperator& op, const std::vector<Vec2c>& coefficients,
                     const Vec2c& bu, double x0, double x1, int depth) {
  auto rule = [&](const auto& nodes) {
    double mid = 0.5 * (x0 + x1);
    double half = 0.5 * (x1 - x0);
    double acc = 0.0;
    for (const auto& [xi, w] : nodes) {
      Vec2c jump = 2.0 * (evaluate_TN(op, coefficients, mid + half * xi) - bu);
      acc += w * jump.squaredNorm();
    }
    return half * acc;
  };
  double coarse = rule(quad::kGauss4);
  double fine = rule(quad::kGauss8);
  if (depth >= 12 || std::abs(fine - coarse) <= 1e-10 * fine + 1e-30) return fine;
  double mid = 0.5 * (x0 + x1);
  return gamma_jump_sq(op, coefficients, bu, x0, mid, depth + 1) +
         gamma_jump_sq(op, coefficients, bu, mid, x1, depth + 1);
}

}  // namespace

Mat2c p1_gradient(const Mesh& mesh, int t, const std::vector<Vec2c>& field) {
  const Triangle& tri = mesh.triangles[t];
  Vec2 p[3] = {mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]], mesh.vertices[tri.v[2]]};
  double two_a = (p[1].x() - p[0].x()) * (p[2].y() - p[0].y()) -
                 (p[2].x() - p[0].x()) * (p[1].y() - p[0].y());
  Mat2c grad = Mat2c::Zero();
  for (int i = 0; i < 3; ++i) {
    Vec2 d = p[(i + 1) % 3] - p[(i + 2) % 3];
    Vec2 gi(d.y() / two_a, -d.x() / two_a);  // gradient of the hat at vertex i
    grad += field[tri.v[i]] * gi.transpose().cast<cplx>();
  }
  return grad;
}

Vec2c traction(const Mat2c& grad, const ElasticMedium& medium, const Vec2& nu) {
  Vec2c n = nu.cast<cplx>();
  return medium.mu * (grad * n) + (medium.lambda + medium.mu) * grad.trace() * n;
}

double element_residual(const Mesh& mesh, int t, const std::vector<Vec2c>& field,
                        const ElasticMedium& medium) {
  const Triangle& tri = mesh.triangles[t];
  double norm_sq = 0.0;
  for (int c = 0; c < 2; ++c) {
    cplx sum = 0.0;
    double diag = 0.0;
    for (int i = 0; i < 3; ++i) {
      cplx u = field[tri.v[i]](c);
      sum += u;
      diag += std::norm(u);
    }
    norm_sq += std::norm(sum) + diag;  // sum_{ij} (1 + delta_ij) conj(u_i) u_j
  }
  norm_sq *= triangle_area(mesh, t) / 12.0;
  double omega_sq = medium.omega * medium.omega;
  return triangle_diameter(mesh, t) * omega_sq * std::sqrt(norm_sq);
}

double interior_jump(const Mesh& mesh, int v0, int v1, int k1, int k2,
                     const std::vector<Vec2c>& field, const ElasticMedium& medium) {
  Vec2 nu1 = outward_normal(mesh, k1, v0, v1);
  Vec2c jump = traction(p1_gradient(mesh, k1, field), medium, nu1) +
               traction(p1_gradient(mesh, k2, field), medium, Vec2(-nu1));
  return std::sqrt(edge_length(mesh, v0, v1)) * jump.norm();
}

double gamma_jump(const Mesh& mesh, int v0, int v1, int t, const std::vector<Vec2c>& field,
                  const DtnOperator& op, const std::vector<Vec2c>& coefficients) {
  Vec2c bu = traction(p1_gradient(mesh, t, field), op.medium, Vec2(0.0, 1.0));
  double xa = std::min(mesh.vertices[v0].x(), mesh.vertices[v1].x());
  double xb = std::max(mesh.vertices[v0].x(), mesh.vertices[v1].x());
  return std::sqrt(gamma_jump_sq(op, coefficients, bu, xa, xb, 0));
}

std::pair<double, double> periodic_jump(const Mesh& mesh, int v0, int v1,
                                        const std::vector<Vec2c>& field,
                                        const ElasticMedium& medium,
                                        const QuasiPeriodicParams& qp) {
  auto [w0, w1] = partner_edge(mesh, v0, v1);
  int kl = triangle_with_edge(mesh, v0, v1);
  int kr = triangle_with_edge(mesh, w0, w1);
  return periodic_jump_tris(mesh, v0, v1, kl, kr, field, medium, qp);
}

ErrorIndicators indicators(const Mesh& mesh, const DofMap& dofmap,
                           const std::vector<Vec2c>& field, const DtnOperator& op,
                           const ElasticMedium& medium) {
  int num_tris = static_cast<int>(mesh.triangles.size());
  ErrorIndicators out;
  out.eta.resize(num_tris);
  out.residual.resize(num_tris);
  out.jump.resize(num_tris);

  std::vector<Mat2c> grads(num_tris);
  for (int t = 0; t < num_tris; ++t) {
    grads[t] = p1_gradient(mesh, t, field);
    out.residual[t] = element_residual(mesh, t, field, medium);
  }

  auto adjacency = edge_adjacency(mesh);
  std::vector<EdgeKey> keys;
  keys.reserve(adjacency.size());
  for (const auto& [key, tris] : adjacency) keys.push_back(key);
  std::sort(keys.begin(), keys.end());  // canonical order for reproducible sums

  std::unordered_map<int, int> right_to_left;
  for (const auto& [left, right] : mesh.periodic_pairs) right_to_left[right] = left;

  std::vector<Vec2c> coefficients;
  bool have_coefficients = false;

  std::vector<double> jump_sq(num_tris, 0.0);
  const QuasiPeriodicParams& qp = dofmap.qp;
  for (EdgeKey key : keys) {
    auto [v0, v1] = edge_key_vertices(key);
    auto tris = adjacency.at(key);
    double h_e = edge_length(mesh, v0, v1);
    if (tris[1] >= 0) {
      Vec2 nu = outward_normal(mesh, tris[0], v0, v1);
      Vec2c jump = traction(grads[tris[0]], medium, nu) +
                   traction(grads[tris[1]], medium, Vec2(-nu));
      double norm_sq = h_e * jump.squaredNorm();
      jump_sq[tris[0]] += 0.5 * h_e * norm_sq;
      jump_sq[tris[1]] += 0.5 * h_e * norm_sq;
      continue;
    }
    switch (mesh.boundary_edges.at(key)) {
      case BoundaryTag::Surface:
        break;  // Dirichlet data is interpolated exactly; no jump residual
      case BoundaryTag::Top: {
        if (!have_coefficients) {
          coefficients = trace_coefficients(op, field);
          have_coefficients = true;
        }
        Vec2c bu = traction(grads[tris[0]], medium, Vec2(0.0, 1.0));
        double xa = std::min(mesh.vertices[v0].x(), mesh.vertices[v1].x());
        double xb = std::max(mesh.vertices[v0].x(), mesh.vertices[v1].x());
        jump_sq[tris[0]] += 0.5 * h_e * gamma_jump_sq(op, coefficients, bu, xa, xb, 0);
        break;
      }
      case BoundaryTag::Left: {
        auto [w0, w1] = partner_edge(mesh, v0, v1);
        int kr = adjacency.at(edge_key(w0, w1))[0];
        auto [norm_left, norm_right] =
            periodic_jump_tris(mesh, v0, v1, tris[0], kr, field, medium, qp);
        (void)norm_right;
        jump_sq[tris[0]] += 0.5 * h_e * norm_left * norm_left;
        break;
      }
      case BoundaryTag::Right: {
        auto l0 = right_to_left.find(v0);
        auto l1 = right_to_left.find(v1);
        if (l0 == right_to_left.end() || l1 == right_to_left.end())
          throw mesh_error("right boundary edge (" + std::to_string(v0) + ", " +
                           std::to_string(v1) + ") has no periodic partner");
        int v0l = l0->second, v1l = l1->second;
        int kl = adjacency.at(edge_key(v0l, v1l))[0];
        auto [norm_left, norm_right] =
            periodic_jump_tris(mesh, v0l, v1l, kl, tris[0], field, medium, qp);
        (void)norm_left;
        jump_sq[tris[0]] += 0.5 * h_e * norm_right * norm_right;
        break;
      }
    }
  }

  double total_sq = 0.0;
  for (int t = 0; t < num_tris; ++t) {
    out.jump[t] = std::sqrt(jump_sq[t]);
    out.eta[t] = out.residual[t] + out.jump[t];
    total_sq += out.eta[t] * out.eta[t];
  }
  out.eps_h = std::sqrt(total_sq);
  return out;
}

}  // namespace elgrat
