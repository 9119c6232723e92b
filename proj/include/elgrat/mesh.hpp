#ifndef ELGRAT_MESH_HPP
#define ELGRAT_MESH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "elgrat/geometry.hpp"

namespace elgrat {

enum class BoundaryTag : int { Surface = 1, Top = 2, Left = 3, Right = 4 };

// Undirected edge key; vertex indices stay below 2^32.
using EdgeKey = std::uint64_t;
inline EdgeKey edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(a < b ? a : b);
  const auto hi = static_cast<std::uint64_t>(a < b ? b : a);
  return (lo << 32) | hi;
}
inline std::pair<int, int> edge_key_vertices(EdgeKey k) {
  return {static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu)};
}

struct Triangle {
  std::array<int, 3> v{-1, -1, -1};  // CCW
  // Local edge k joins v[k] and v[(k+1)%3]; this one is bisected next.
  int refine_edge = 0;
  // Triangle of the mesh this one was bisected out of, -1 if carried over.
  int parent = -1;
};

struct Mesh {
  double period = 0.0;
  double top = 0.0;  // artificial boundary height b
  std::vector<Vec2> vertices;
  std::vector<Triangle> triangles;
  std::unordered_map<EdgeKey, BoundaryTag> boundary_edges;
  // Vertex identification (left, right) across x = 0 / x = period, sorted by y.
  // Paired vertices have bit-identical y.
  std::vector<std::pair<int, int>> periodic_pairs;

  std::array<int, 2> edge(int t, int k) const {
    return {triangles[t].v[k], triangles[t].v[(k + 1) % 3]};
  }
};

using MarkSet = std::vector<int>;

// Terrain-following split-quad triangulation of { f(x) < y < b } with all
// profile breakpoints as vertices, every edge no longer than h0, and the
// left/right boundary columns carrying bit-identical y values.
Mesh build_initial_mesh(const SurfaceProfile& profile, double b, double h0);

// Newest-vertex bisection of the marked triangles plus conforming closure.
// Bisections hitting x = 0 or x = period propagate to the partner boundary
// so the periodic vertex identification survives refinement.
Mesh bisect(const Mesh& mesh, const MarkSet& marks);

// Returns one diagnostic string per violated invariant, empty when sound.
std::vector<std::string> validate(const Mesh& mesh, double min_angle_floor_deg = 15.0);

// Derived quantities.
double triangle_area(const Mesh& mesh, int t);
double triangle_diameter(const Mesh& mesh, int t);
double min_angle_deg(const Mesh& mesh);
double max_edge_length(const Mesh& mesh);

// Edge -> adjacent triangles (second = -1 for boundary edges).
std::unordered_map<EdgeKey, std::array<int, 2>> edge_adjacency(const Mesh& mesh);

}  // namespace elgrat

#endif
