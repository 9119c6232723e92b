#include "elgrat/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <stdexcept>

#include "elgrat/errors.hpp"

namespace elgrat {

namespace {

std::uint64_t y_bits(double y) {
  std::uint64_t b;
  std::memcpy(&b, &y, sizeof b);
  return b;
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

int longest_edge_index(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double l[3] = {(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()};
  int k = 0;
  if (l[1] > l[k]) k = 1;
  if (l[2] > l[k]) k = 2;
  return k;
}

double min_corner_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  auto corner = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const Vec2 u = q - p, v = r - p;
    return std::atan2(std::abs(u.x() * v.y() - u.y() * v.x()), u.dot(v));
  };
  return std::min({corner(a, b, c), corner(b, c, a), corner(c, a, b)});
}

// Newest-vertex bisection engine. Works on a scratch copy, keeps edge
// adjacency and the two vertical-boundary vertex maps current, and mirrors
// every split that lands on x = 0 or x = period to the partner boundary.
struct Refiner {
  static constexpr std::size_t kMaxChainDepth = 200000;
  static constexpr long kMaxSplits = 100000000;

  struct RTri {
    std::array<int, 3> v;
    int refine_edge;
    int src;  // input-mesh triangle this one descends from
    bool alive;
    bool original;
  };
  struct Task {
    int target_side;  // 0 = left, 1 = right
    double y;
  };

  double period, top;
  int orig_count;
  std::vector<Vec2> verts;
  std::vector<RTri> tris;
  std::unordered_map<EdgeKey, BoundaryTag> btags;
  std::unordered_map<EdgeKey, std::vector<int>> adj;
  std::unordered_map<std::uint64_t, int> side[2];
  std::deque<Task> tasks;
  long splits = 0;

  explicit Refiner(const Mesh& m)
      : period(m.period), top(m.top), orig_count(static_cast<int>(m.triangles.size())),
        verts(m.vertices), btags(m.boundary_edges) {
    tris.reserve(m.triangles.size() * 4);
    for (int t = 0; t < orig_count; ++t)
      tris.push_back({m.triangles[t].v, m.triangles[t].refine_edge, t, true, true});
    for (int t = 0; t < orig_count; ++t)
      for (int k = 0; k < 3; ++k) adj[ekey(t, k)].push_back(t);
    for (const auto& [key, tag] : btags) {
      int si;
      if (tag == BoundaryTag::Left) si = 0;
      else if (tag == BoundaryTag::Right) si = 1;
      else continue;
      const auto [a, b] = edge_key_vertices(key);
      side[si][y_bits(verts[a].y())] = a;
      side[si][y_bits(verts[b].y())] = b;
    }
  }

  EdgeKey ekey(int t, int k) const { return edge_key(tris[t].v[k], tris[t].v[(k + 1) % 3]); }
  EdgeKey base_key(int t) const { return ekey(t, tris[t].refine_edge); }

  int alive_neighbor(EdgeKey e, int self) const {
    const auto it = adj.find(e);
    if (it == adj.end()) return -1;
    for (int t : it->second)
      if (t != self && tris[t].alive) return t;
    return -1;
  }

  int alive_owner(EdgeKey e) const {
    const auto it = adj.find(e);
    if (it == adj.end()) return -1;
    for (int t : it->second)
      if (tris[t].alive) return t;
    return -1;
  }

  void adj_remove(EdgeKey e, int t) {
    const auto it = adj.find(e);
    if (it == adj.end()) return;
    auto& lst = it->second;
    lst.erase(std::remove(lst.begin(), lst.end(), t), lst.end());
    if (lst.empty()) adj.erase(it);
  }

  int make_midpoint(int a, int b, const BoundaryTag* tag) {
    Vec2 p = 0.5 * (verts[a] + verts[b]);
    int si = -1;
    if (tag) {
      if (*tag == BoundaryTag::Left) { p.x() = 0.0; si = 0; }
      else if (*tag == BoundaryTag::Right) { p.x() = period; si = 1; }
      else if (*tag == BoundaryTag::Top) p.y() = top;
    }
    if (si >= 0) {
      // Periodic pairing keys on the exact bit pattern of y, so a partner
      // created first hands its y over verbatim.
      const auto partner = side[1 - si].find(y_bits(p.y()));
      if (partner != side[1 - si].end()) p.y() = verts[partner->second].y();
      else tasks.push_back({1 - si, p.y()});
    }
    const int idx = static_cast<int>(verts.size());
    verts.push_back(p);
    if (si >= 0) {
      if (!side[si].emplace(y_bits(p.y()), idx).second)
        throw mesh_error("bisection: duplicate vertex on a vertical boundary");
    }
    return idx;
  }

  void split_one(int t, int mid) {
    const int k = tris[t].refine_edge;
    const int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3], c = tris[t].v[(k + 2) % 3];
    const int src = tris[t].src;
    adj_remove(edge_key(a, b), t);
    adj_remove(edge_key(b, c), t);
    adj_remove(edge_key(c, a), t);
    tris[t].alive = false;
    const int c1 = static_cast<int>(tris.size());
    tris.push_back({{a, mid, c}, 2, src, true, false});
    const int c2 = static_cast<int>(tris.size());
    tris.push_back({{mid, b, c}, 1, src, true, false});
    for (int j = 0; j < 3; ++j) {
      adj[ekey(c1, j)].push_back(c1);
      adj[ekey(c2, j)].push_back(c2);
    }
    if (++splits > kMaxSplits) throw mesh_error("bisection did not terminate");
  }

  void bisect_pair(int t, int n) {
    const EdgeKey e = base_key(t);
    const auto [ea, eb] = edge_key_vertices(e);
    const auto tag_it = btags.find(e);
    const bool tagged = tag_it != btags.end();
    BoundaryTag tag{};
    if (tagged) tag = tag_it->second;
    const int mid = make_midpoint(ea, eb, tagged ? &tag : nullptr);
    if (tagged) {
      btags.erase(e);
      btags[edge_key(ea, mid)] = tag;
      btags[edge_key(mid, eb)] = tag;
    }
    split_one(t, mid);
    if (n >= 0) split_one(n, mid);
  }

  // Recursive compatibility chain, run on an explicit stack. A triangle is
  // bisected together with its base neighbor once both share the base edge.
  void refine_element(int t0) {
    std::vector<int> stack{t0};
    while (!stack.empty()) {
      const int t = stack.back();
      if (!tris[t].alive) {
        stack.pop_back();
        continue;
      }
      const EdgeKey e = base_key(t);
      const int n = alive_neighbor(e, t);
      if (n >= 0 && base_key(n) != e) {
        stack.push_back(n);
        if (stack.size() > kMaxChainDepth)
          throw mesh_error("bisection closure chain did not terminate");
        continue;
      }
      bisect_pair(t, n);
      stack.pop_back();
    }
  }

  // Splits vertical boundary edges on the requested side until a vertex with
  // the exact target y exists. Midpoint arithmetic is dyadic and both sides
  // start from bit-identical columns, so the target is always reachable.
  void force_split(int si, double ytarget) {
    const std::uint64_t bits = y_bits(ytarget);
    const BoundaryTag want = si == 0 ? BoundaryTag::Left : BoundaryTag::Right;
    int guard = 0;
    while (side[si].find(bits) == side[si].end()) {
      if (++guard > 1200) throw mesh_error("periodic closure did not terminate");
      EdgeKey containing = 0;
      bool found = false;
      for (const auto& [key, tag] : btags) {
        if (tag != want) continue;
        const auto [a, b] = edge_key_vertices(key);
        const double lo = std::min(verts[a].y(), verts[b].y());
        const double hi = std::max(verts[a].y(), verts[b].y());
        if (lo < ytarget && ytarget < hi) {
          containing = key;
          found = true;
          break;
        }
      }
      if (!found) throw mesh_error("periodic closure: no boundary edge contains the partner vertex");
      split_boundary_edge(containing);
    }
  }

  void split_boundary_edge(EdgeKey e) {
    int guard = 0;
    while (alive_owner(e) >= 0) {
      if (++guard > 8) throw mesh_error("boundary edge split did not converge");
      const int t = alive_owner(e);
      // NVB splits through the base only; one extra round makes e the base
      // of the child that inherits it.
      refine_element(t);
    }
  }

  Mesh run(const MarkSet& marks) {
    for (int t : marks)
      if (t < 0 || t >= orig_count)
        throw std::invalid_argument("bisect: marked triangle id out of range");
    for (int t : marks)
      if (tris[t].alive) refine_element(t);
    while (!tasks.empty()) {
      const Task task = tasks.front();
      tasks.pop_front();
      force_split(task.target_side, task.y);
    }
    return finalize();
  }

  Mesh finalize() const {
    Mesh out;
    out.period = period;
    out.top = top;
    out.vertices = verts;
    for (const RTri& t : tris)
      if (t.alive) out.triangles.push_back({t.v, t.refine_edge, t.original ? -1 : t.src});
    out.boundary_edges = btags;
    if (side[0].size() != side[1].size())
      throw mesh_error("periodic closure left unmatched boundary vertices");
    std::vector<std::pair<double, std::pair<int, int>>> pairs;
    pairs.reserve(side[0].size());
    for (const auto& [bits, vl] : side[0]) {
      const auto it = side[1].find(bits);
      if (it == side[1].end())
        throw mesh_error("periodic closure left an unmatched left-boundary vertex");
      pairs.push_back({verts[vl].y(), {vl, it->second}});
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& p : pairs) out.periodic_pairs.push_back(p.second);
    return out;
  }
};

}  // namespace

Mesh build_initial_mesh(const SurfaceProfile& profile, double b, double h0) {
  validate_profile(profile, b);
  if (!(h0 > 0.0)) throw std::invalid_argument("mesh: h0 must be positive");

  const double L = profile.period();
  double s = h0 / std::sqrt(2.0);
  Mesh mesh;
  bool sized = false;
  for (int attempt = 0; attempt < 24 && !sized; ++attempt) {
    mesh = Mesh{};
    mesh.period = L;
    mesh.top = b;

    // Column positions: every breakpoint plus enough subdivisions that
    // surface chords fit the target spacing.
    std::vector<double> xs, fs;
    for (std::size_t k = 0; k + 1 < profile.points.size(); ++k) {
      const Vec2 p = profile.points[k], q = profile.points[k + 1];
      const int n = std::max(1, static_cast<int>(std::ceil((q - p).norm() / s)));
      for (int j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / n;
        xs.push_back(p.x() * (1.0 - t) + q.x() * t);
        fs.push_back(p.y() * (1.0 - t) + q.y() * t);
      }
    }
    xs.push_back(profile.points.back().x());
    fs.push_back(profile.points.back().y());
    const int ncol = static_cast<int>(xs.size());
    const int ny = std::max(1, static_cast<int>(std::ceil((b - profile.min_height()) / s)));
    const auto vid = [ny](int i, int j) { return i * (ny + 1) + j; };

    mesh.vertices.reserve(static_cast<std::size_t>(ncol) * (ny + 1));
    for (int i = 0; i < ncol; ++i)
      for (int j = 0; j <= ny; ++j) {
        double y;
        if (i == ncol - 1) {
          y = mesh.vertices[static_cast<std::size_t>(vid(0, j))].y();  // exact periodic copy
        } else {
          const double t = static_cast<double>(j) / ny;
          y = fs[i] * (1.0 - t) + b * t;
        }
        mesh.vertices.emplace_back(xs[i], y);
      }

    for (int i = 0; i + 1 < ncol; ++i)
      for (int j = 0; j < ny; ++j) {
        const int A = vid(i, j), B = vid(i + 1, j), C = vid(i + 1, j + 1), D = vid(i, j + 1);
        const double dac = (mesh.vertices[C] - mesh.vertices[A]).squaredNorm();
        const double dbd = (mesh.vertices[D] - mesh.vertices[B]).squaredNorm();
        if (dac <= dbd) {
          mesh.triangles.push_back({{A, B, C}, 0, -1});
          mesh.triangles.push_back({{A, C, D}, 0, -1});
        } else {
          mesh.triangles.push_back({{A, B, D}, 0, -1});
          mesh.triangles.push_back({{B, C, D}, 0, -1});
        }
      }

    for (int i = 0; i + 1 < ncol; ++i) {
      mesh.boundary_edges[edge_key(vid(i, 0), vid(i + 1, 0))] = BoundaryTag::Surface;
      mesh.boundary_edges[edge_key(vid(i, ny), vid(i + 1, ny))] = BoundaryTag::Top;
    }
    for (int j = 0; j < ny; ++j) {
      mesh.boundary_edges[edge_key(vid(0, j), vid(0, j + 1))] = BoundaryTag::Left;
      mesh.boundary_edges[edge_key(vid(ncol - 1, j), vid(ncol - 1, j + 1))] = BoundaryTag::Right;
    }
    for (int j = 0; j <= ny; ++j) mesh.periodic_pairs.emplace_back(vid(0, j), vid(ncol - 1, j));

    const double hmax = max_edge_length(mesh);
    if (hmax <= h0) sized = true;
    else s *= 0.95 * h0 / hmax;
  }
  if (!sized) throw mesh_error("initial mesh: could not satisfy the mesh size bound");

  for (Triangle& t : mesh.triangles)
    t.refine_edge = longest_edge_index(mesh.vertices[t.v[0]], mesh.vertices[t.v[1]],
                                       mesh.vertices[t.v[2]]);
  return mesh;
}

Mesh bisect(const Mesh& mesh, const MarkSet& marks) {
  Refiner refiner(mesh);
  return refiner.run(marks);
}

double triangle_area(const Mesh& mesh, int t) {
  const Triangle& tri = mesh.triangles[t];
  return signed_area(mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]], mesh.vertices[tri.v[2]]);
}

double triangle_diameter(const Mesh& mesh, int t) {
  const Triangle& tri = mesh.triangles[t];
  double d = 0.0;
  for (int k = 0; k < 3; ++k)
    d = std::max(d, (mesh.vertices[tri.v[k]] - mesh.vertices[tri.v[(k + 1) % 3]]).norm());
  return d;
}

double min_angle_deg(const Mesh& mesh) {
  double a = std::numeric_limits<double>::infinity();
  for (const Triangle& t : mesh.triangles)
    a = std::min(a, min_corner_angle(mesh.vertices[t.v[0]], mesh.vertices[t.v[1]],
                                     mesh.vertices[t.v[2]]));
  return a * 180.0 / M_PI;
}

double max_edge_length(const Mesh& mesh) {
  double h = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    h = std::max(h, triangle_diameter(mesh, static_cast<int>(t)));
  return h;
}

std::unordered_map<EdgeKey, std::array<int, 2>> edge_adjacency(const Mesh& mesh) {
  std::unordered_map<EdgeKey, std::array<int, 2>> adj;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      const auto e = mesh.edge(static_cast<int>(t), k);
      auto& slot = adj.try_emplace(edge_key(e[0], e[1]), std::array<int, 2>{-1, -1}).first->second;
      if (slot[0] < 0) slot[0] = static_cast<int>(t);
      else if (slot[1] < 0) slot[1] = static_cast<int>(t);
      else slot[1] = -2;  // overshared, caught by validate
    }
  return adj;
}

std::vector<std::string> validate(const Mesh& mesh, double min_angle_floor_deg) {
  std::vector<std::string> diags;
  const int nv = static_cast<int>(mesh.vertices.size());

  for (int v = 0; v < nv; ++v) {
    const Vec2& p = mesh.vertices[v];
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
      diags.push_back("vertex " + std::to_string(v) + ": non-finite coordinates");
    else if (p.x() < 0.0 || p.x() > mesh.period)
      diags.push_back("vertex " + std::to_string(v) + ": outside the period strip");
  }

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    bool ok = true;
    for (int k = 0; k < 3; ++k)
      if (tri.v[k] < 0 || tri.v[k] >= nv) {
        diags.push_back("triangle " + std::to_string(t) + ": vertex index out of range");
        ok = false;
      }
    if (!ok) continue;
    if (tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[2] == tri.v[0])
      diags.push_back("triangle " + std::to_string(t) + ": repeated vertex");
    else {
      const double area = signed_area(mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                                      mesh.vertices[tri.v[2]]);
      if (!(area > 0.0))
        diags.push_back("triangle " + std::to_string(t) + ": nonpositive area (not CCW)");
      else {
        const double ang = min_corner_angle(mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                                            mesh.vertices[tri.v[2]]) * 180.0 / M_PI;
        if (ang < min_angle_floor_deg)
          diags.push_back("triangle " + std::to_string(t) + ": minimum angle " +
                          std::to_string(ang) + " below floor");
      }
    }
    if (tri.refine_edge < 0 || tri.refine_edge > 2)
      diags.push_back("triangle " + std::to_string(t) + ": refinement edge index invalid");
  }

  std::unordered_map<EdgeKey, int> count;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      const auto e = mesh.edge(static_cast<int>(t), k);
      if (e[0] >= 0 && e[0] < nv && e[1] >= 0 && e[1] < nv && e[0] != e[1])
        ++count[edge_key(e[0], e[1])];
    }
  for (const auto& [key, c] : count) {
    const auto [a, b] = edge_key_vertices(key);
    const bool tagged = mesh.boundary_edges.count(key) != 0;
    if (c > 2)
      diags.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                      "): shared by more than two triangles");
    else if (c == 1 && !tagged)
      diags.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                      "): boundary edge without a tag (hanging node or hole)");
    else if (c == 2 && tagged)
      diags.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                      "): interior edge carries a boundary tag");
  }
  for (const auto& [key, tag] : mesh.boundary_edges) {
    const auto [a, b] = edge_key_vertices(key);
    if (!count.count(key)) {
      diags.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                      "): tagged edge not present in any triangle");
      continue;
    }
    if (a < 0 || a >= nv || b < 0 || b >= nv) continue;
    const Vec2& pa = mesh.vertices[a];
    const Vec2& pb = mesh.vertices[b];
    switch (tag) {
      case BoundaryTag::Left:
        if (pa.x() != 0.0 || pb.x() != 0.0)
          diags.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          "): Left tag off x = 0");
        break;
      case BoundaryTag::Right:
        if (pa.x() != mesh.period || pb.x() != mesh.period)
          diags.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          "): Right tag off x = period");
        break;
      case BoundaryTag::Top:
        if (pa.y() != mesh.top || pb.y() != mesh.top)
          diags.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          "): Top tag off y = b");
        break;
      case BoundaryTag::Surface:
        if (pa.y() >= mesh.top || pb.y() >= mesh.top)
          diags.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          "): Surface tag touches the artificial boundary");
        break;
    }
  }

  // Periodic identification: the pair list must cover the two vertical
  // boundaries one-to-one with bit-identical y.
  std::vector<int> left_verts, right_verts;
  {
    std::vector<char> on_left(nv, 0), on_right(nv, 0);
    for (const auto& [key, tag] : mesh.boundary_edges) {
      const auto [a, b] = edge_key_vertices(key);
      if (a < 0 || a >= nv || b < 0 || b >= nv) continue;
      if (tag == BoundaryTag::Left) on_left[a] = on_left[b] = 1;
      if (tag == BoundaryTag::Right) on_right[a] = on_right[b] = 1;
    }
    for (int v = 0; v < nv; ++v) {
      if (on_left[v]) left_verts.push_back(v);
      if (on_right[v]) right_verts.push_back(v);
    }
  }
  std::vector<char> paired_left(nv, 0), paired_right(nv, 0);
  for (const auto& [l, r] : mesh.periodic_pairs) {
    if (l < 0 || l >= nv || r < 0 || r >= nv) {
      diags.push_back("periodic pair (" + std::to_string(l) + "," + std::to_string(r) +
                      "): vertex index out of range");
      continue;
    }
    if (paired_left[l]) diags.push_back("vertex " + std::to_string(l) + ": paired more than once");
    if (paired_right[r]) diags.push_back("vertex " + std::to_string(r) + ": paired more than once");
    paired_left[l] = paired_right[r] = 1;
    if (mesh.vertices[l].x() != 0.0)
      diags.push_back("periodic pair: left vertex " + std::to_string(l) + " not on x = 0");
    if (mesh.vertices[r].x() != mesh.period)
      diags.push_back("periodic pair: right vertex " + std::to_string(r) + " not on x = period");
    if (y_bits(mesh.vertices[l].y()) != y_bits(mesh.vertices[r].y()))
      diags.push_back("periodic pair (" + std::to_string(l) + "," + std::to_string(r) +
                      "): y values not bit-identical");
  }
  for (int v : left_verts)
    if (!paired_left[v])
      diags.push_back("vertex " + std::to_string(v) + ": left-boundary vertex without a periodic partner");
  for (int v : right_verts)
    if (!paired_right[v])
      diags.push_back("vertex " + std::to_string(v) + ": right-boundary vertex without a periodic partner");

  return diags;
}

}  // namespace elgrat
