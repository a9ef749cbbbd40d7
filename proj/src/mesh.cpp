#include "rmlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace rmlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::pair<int, int> undirected(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

double max_edge_length(const Mesh& m) {
  double L = 0.0;
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e)
      L = std::max(L, norm(m.nodes[t[(e + 1) % 3]] - m.nodes[t[e]]));
  return L;
}

// Tags boundary edges from the triangle structure: an undirected edge
// belonging to exactly one triangle lies on the outer boundary; an edge
// shared by triangles of different regions lies on the defect interface.
void derive_boundary_edges(Mesh& m) {
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles[t];
    for (int e = 0; e < 3; ++e)
      edge_tris[undirected(tri[e], tri[(e + 1) % 3])].push_back(t);
  }
  m.boundary_edges.clear();
  for (const auto& [edge, tris] : edge_tris) {
    if (tris.size() == 1) {
      if (m.tri_region[tris[0]] == Region::Defect)
        throw MeshError("defect region touches the outer boundary");
      m.boundary_edges.push_back({edge.first, edge.second, BoundaryTag::Outer});
    } else if (tris.size() == 2 &&
               m.tri_region[tris[0]] != m.tri_region[tris[1]]) {
      m.boundary_edges.push_back({edge.first, edge.second, BoundaryTag::Defect});
    }
  }
}

}  // namespace

double Mesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < triangle_count(); ++t) a += triangle_area(t);
  return a;
}

double Mesh::defect_area() const {
  double a = 0.0;
  for (int t = 0; t < triangle_count(); ++t)
    if (tri_region[t] == Region::Defect) a += triangle_area(t);
  return a;
}

bool Mesh::has_defect() const {
  return std::any_of(tri_region.begin(), tri_region.end(),
                     [](Region r) { return r == Region::Defect; });
}

double Mesh::distance_to_outer_boundary(Point2 p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& e : boundary_edges) {
    if (e.tag != BoundaryTag::Outer) continue;
    d = std::min(d, point_segment_distance(p, nodes[e.a], nodes[e.b]));
  }
  return d;
}

std::vector<std::vector<int>> Mesh::boundary_loops(BoundaryTag tag) const {
  std::map<int, std::vector<int>> adj;
  for (const auto& e : boundary_edges) {
    if (e.tag != tag) continue;
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<std::vector<int>> loops;
  std::set<int> visited;
  for (const auto& [start, nb] : adj) {
    if (visited.count(start)) continue;
    if (nb.size() != 2) throw MeshError("boundary not closed");
    std::vector<int> loop{start};
    visited.insert(start);
    int prev = start, cur = nb[0];
    while (cur != start) {
      if (visited.count(cur)) throw MeshError("boundary self-intersects");
      visited.insert(cur);
      loop.push_back(cur);
      const auto& next_nb = adj.at(cur);
      if (next_nb.size() != 2) throw MeshError("boundary not closed");
      const int next = (next_nb[0] == prev) ? next_nb[1] : next_nb[0];
      prev = cur;
      cur = next;
    }
    double area2 = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i)
      area2 += cross(nodes[loop[i]], nodes[loop[(i + 1) % loop.size()]]);
    if (area2 < 0.0) std::reverse(loop.begin() + 1, loop.end());
    loops.push_back(std::move(loop));
  }
  return loops;
}

void Mesh::validate() const {
  if (triangles.size() != tri_region.size())
    throw MeshError("region tags inconsistent with triangle count");
  for (int t = 0; t < triangle_count(); ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || tri[k] >= node_count())
        throw MeshError("triangle node index out of range");
    if (triangle_area(t) <= 0.0) throw MeshError("degenerate triangle");
  }
  // Conformity: each directed edge appears at most once.
  std::set<std::pair<int, int>> directed;
  for (const auto& tri : triangles)
    for (int e = 0; e < 3; ++e)
      if (!directed.insert({tri[e], tri[(e + 1) % 3]}).second)
        throw MeshError("non-conforming mesh: repeated directed edge");
  // Expected boundary tags from adjacency and region structure.
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (int t = 0; t < triangle_count(); ++t) {
    const auto& tri = triangles[t];
    for (int e = 0; e < 3; ++e)
      edge_tris[undirected(tri[e], tri[(e + 1) % 3])].push_back(t);
  }
  std::map<std::pair<int, int>, BoundaryTag> tagged;
  for (const auto& e : boundary_edges) {
    if (e.a < 0 || e.a >= node_count() || e.b < 0 || e.b >= node_count())
      throw MeshError("boundary edge index out of range");
    if (!tagged.insert({undirected(e.a, e.b), e.tag}).second)
      throw MeshError("duplicate boundary edge");
  }
  for (const auto& [edge, tris] : edge_tris) {
    if (tris.size() > 2) throw MeshError("non-conforming mesh: edge shared by >2 triangles");
    const auto it = tagged.find(edge);
    if (tris.size() == 1) {
      if (it == tagged.end()) throw MeshError("untagged outer boundary edge");
    } else if (tri_region[tris[0]] != tri_region[tris[1]]) {
      if (it == tagged.end() || it->second != BoundaryTag::Defect)
        throw MeshError("region interface not tagged as defect boundary");
    } else if (it != tagged.end()) {
      throw MeshError("interior edge carries a boundary tag");
    }
  }
  for (const auto& [edge, tag] : tagged)
    if (edge_tris.find(edge) == edge_tris.end())
      throw MeshError("boundary edge not part of the triangulation");
  // Closed, non-self-intersecting polylines per tag.
  boundary_loops(BoundaryTag::Outer);
  if (has_defect() || std::any_of(boundary_edges.begin(), boundary_edges.end(),
                                  [](const BoundaryEdge& e) {
                                    return e.tag == BoundaryTag::Defect;
                                  }))
    boundary_loops(BoundaryTag::Defect);
}

double DomainSpec::diameter() const {
  return shape == DomainShape::Rectangle ? std::hypot(width, height) : 2.0 * radius;
}

void DomainSpec::finalize() {
  if (shape == DomainShape::Rectangle) {
    if (width <= 0.0 || height <= 0.0) throw MeshError("rectangle domain needs positive sides");
    if (rho0 <= 0.0) {
      rho0 = 0.25 * std::min(width, height);
      L0 = 2.0;
    }
  } else {
    if (radius <= 0.0) throw MeshError("disc domain needs positive radius");
    if (rho0 <= 0.0) {
      rho0 = radius / std::sqrt(2.0);
      L0 = 1.5;
    }
  }
  if (L0 <= 0.0) L0 = (shape == DomainShape::Rectangle) ? 2.0 : 1.5;
  if (Q0 <= 0.0) Q0 = diameter() / rho0;
  if (diameter() > Q0 * rho0 * (1.0 + 1e-12))
    throw MeshError("domain diameter exceeds Q0*rho0");
}

namespace {

std::vector<Point2> domain_polygon(const DomainSpec& dom) {
  std::vector<Point2> poly;
  if (dom.shape == DomainShape::Rectangle) {
    const double hw = 0.5 * dom.width, hh = 0.5 * dom.height;
    poly = {dom.origin + Point2{-hw, -hh}, dom.origin + Point2{hw, -hh},
            dom.origin + Point2{hw, hh}, dom.origin + Point2{-hw, hh}};
  } else {
    const int n = std::max(dom.segments, 8);
    poly.reserve(n);
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * kPi * j / n;
      poly.push_back(dom.origin + Point2{dom.radius * std::cos(th),
                                         dom.radius * std::sin(th)});
    }
  }
  return poly;
}

std::vector<Point2> defect_polygon(const DefectSpec& def, int segments) {
  std::vector<Point2> poly;
  switch (def.shape) {
    case DefectShape::Rectangle: {
      const double hw = 0.5 * def.width, hh = 0.5 * def.height;
      poly = {def.center + Point2{-hw, -hh}, def.center + Point2{hw, -hh},
              def.center + Point2{hw, hh}, def.center + Point2{-hw, hh}};
      break;
    }
    case DefectShape::Disc: {
      const int n = std::max(segments, 8);
      for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * j / n;
        poly.push_back(def.center + Point2{def.radius * std::cos(th),
                                           def.radius * std::sin(th)});
      }
      break;
    }
    case DefectShape::Polygon:
      poly = def.vertices;
      break;
  }
  return poly;
}

double polygon_polygon_distance(const std::vector<Point2>& a,
                                const std::vector<Point2>& b) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      d = std::min(d, segment_segment_distance(a[i], a[(i + 1) % a.size()],
                                               b[j], b[(j + 1) % b.size()]));
  return d;
}

}  // namespace

DefectGeometry defect_parameters(const DefectSpec& defect, const DomainSpec& domain) {
  DefectGeometry g;
  g.shape = defect.shape;
  switch (defect.shape) {
    case DefectShape::Disc:
      if (defect.radius <= 0.0) throw MeshError("disc defect needs positive radius");
      g.diam = 2.0 * defect.radius;
      g.r_D = defect.radius / std::sqrt(2.0);
      g.L_D = 1.5;
      break;
    case DefectShape::Rectangle:
      if (defect.width <= 0.0 || defect.height <= 0.0)
        throw MeshError("rectangle defect needs positive sides");
      g.diam = std::hypot(defect.width, defect.height);
      g.r_D = 0.25 * std::min(defect.width, defect.height);
      g.L_D = 2.0;
      break;
    case DefectShape::Polygon:
      if (defect.vertices.size() < 3) throw MeshError("polygon defect needs >= 3 vertices");
      if (defect.user_r <= 0.0 || defect.user_L <= 0.0)
        throw MeshError("unsupported shape: general polygon requires user-supplied r_D, L_D");
      g.diam = point_set_diameter(defect.vertices);
      g.r_D = defect.user_r;
      g.L_D = defect.user_L;
      break;
  }
  g.Q_D = g.diam / g.r_D;
  DomainSpec dom = domain;
  dom.finalize();
  g.dist_to_outer = polygon_polygon_distance(domain_polygon(dom),
                                             defect_polygon(defect, dom.segments));
  g.d0 = g.dist_to_outer / dom.rho0;
  return g;
}

namespace {

// Axis subdivision: grid lines every <= h, snapped to the optional interior
// break points b0 < b1.
std::vector<double> axis_lines(double lo, double hi, double h,
                               std::optional<std::pair<double, double>> brk) {
  std::vector<double> spans{lo};
  if (brk) {
    spans.push_back(brk->first);
    spans.push_back(brk->second);
  }
  spans.push_back(hi);
  std::vector<double> lines;
  for (std::size_t s = 0; s + 1 < spans.size(); ++s) {
    const double a = spans[s], b = spans[s + 1];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-12)));
    for (int i = 0; i < n; ++i) lines.push_back(a + (b - a) * i / n);
  }
  lines.push_back(hi);
  return lines;
}

Mesh build_rectangle_mesh(const DomainSpec& dom,
                          const std::optional<DefectSpec>& defect, double h) {
  const double x0 = dom.origin.x1 - 0.5 * dom.width, x1 = dom.origin.x1 + 0.5 * dom.width;
  const double y0 = dom.origin.x2 - 0.5 * dom.height, y1 = dom.origin.x2 + 0.5 * dom.height;
  std::optional<std::pair<double, double>> bx, by;
  double hx0 = 0, hx1 = 0, hy0 = 0, hy1 = 0;
  if (defect) {
    if (defect->shape != DefectShape::Rectangle)
      throw MeshError("structured rectangle mesher supports rectangular defects only");
    hx0 = defect->center.x1 - 0.5 * defect->width;
    hx1 = defect->center.x1 + 0.5 * defect->width;
    hy0 = defect->center.x2 - 0.5 * defect->height;
    hy1 = defect->center.x2 + 0.5 * defect->height;
    if (hx0 <= x0 || hx1 >= x1 || hy0 <= y0 || hy1 >= y1)
      throw MeshError("defect touches or crosses the outer boundary");
    if (h > std::min(defect->width, defect->height) * (1.0 + 1e-12))
      throw MeshError("target_h larger than defect feature size");
    bx = {{hx0, hx1}};
    by = {{hy0, hy1}};
  }
  const auto xs = axis_lines(x0, x1, h, bx);
  const auto ys = axis_lines(y0, y1, h, by);
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;

  Mesh m;
  m.nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.nodes.push_back({xs[i], ys[j]});
  const auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      Region reg = Region::Exterior;
      if (defect) {
        const double cx = 0.5 * (xs[i] + xs[i + 1]);
        const double cy = 0.5 * (ys[j] + ys[j + 1]);
        if (cx > hx0 && cx < hx1 && cy > hy0 && cy < hy1) reg = Region::Defect;
      }
      m.triangles.push_back({v00, v10, v11});
      m.tri_region.push_back(reg);
      m.triangles.push_back({v00, v11, v01});
      m.tri_region.push_back(reg);
    }
  derive_boundary_edges(m);
  m.characteristic_size = max_edge_length(m);
  m.validate();
  return m;
}

Mesh build_disc_mesh(const DomainSpec& dom,
                     const std::optional<DefectSpec>& defect, double h) {
  const double R = dom.radius;
  double r = 0.0;
  if (defect) {
    if (defect->shape != DefectShape::Disc)
      throw MeshError("polar disc mesher supports disc defects only");
    if (norm(defect->center - dom.origin) > 1e-12 * R)
      throw MeshError("polar disc mesher supports concentric defects only");
    r = defect->radius;
    if (r <= 0.0 || r >= R) throw MeshError("defect touches or crosses the outer boundary");
    if (h > 2.0 * r * (1.0 + 1e-12)) throw MeshError("target_h larger than defect feature size");
  }
  int nth = std::max(dom.segments, 8);
  nth = std::max(nth, static_cast<int>(std::ceil(2.0 * kPi * R / h)));

  // Ring radii: core rings up to r (when a defect is present), then annulus.
  std::vector<double> radii{0.0};
  const auto push_rings = [&](double from, double to) {
    const int n = std::max(1, static_cast<int>(std::ceil((to - from) / h - 1e-12)));
    for (int i = 1; i <= n; ++i) radii.push_back(from + (to - from) * i / n);
  };
  if (defect) {
    push_rings(0.0, r);
    push_rings(r, R);
  } else {
    push_rings(0.0, R);
  }

  Mesh m;
  m.nodes.push_back(dom.origin);  // center
  std::vector<int> ring_start(radii.size(), -1);
  for (std::size_t k = 1; k < radii.size(); ++k) {
    ring_start[k] = m.node_count();
    for (int j = 0; j < nth; ++j) {
      const double th = 2.0 * kPi * j / nth;
      m.nodes.push_back(dom.origin + Point2{radii[k] * std::cos(th),
                                            radii[k] * std::sin(th)});
    }
  }
  const auto region_of = [&](double mid_radius) {
    return (defect && mid_radius < r) ? Region::Defect : Region::Exterior;
  };
  // Fan around the center.
  for (int j = 0; j < nth; ++j) {
    m.triangles.push_back({0, ring_start[1] + j, ring_start[1] + (j + 1) % nth});
    m.tri_region.push_back(region_of(0.5 * radii[1]));
  }
  // Ring layers.
  for (std::size_t k = 1; k + 1 < radii.size(); ++k) {
    const Region reg = region_of(0.5 * (radii[k] + radii[k + 1]));
    for (int j = 0; j < nth; ++j) {
      const int a0 = ring_start[k] + j, a1 = ring_start[k] + (j + 1) % nth;
      const int b0 = ring_start[k + 1] + j, b1 = ring_start[k + 1] + (j + 1) % nth;
      m.triangles.push_back({a0, b0, b1});
      m.tri_region.push_back(reg);
      m.triangles.push_back({a0, b1, a1});
      m.tri_region.push_back(reg);
    }
  }
  derive_boundary_edges(m);
  m.characteristic_size = max_edge_length(m);
  m.validate();
  return m;
}

}  // namespace

Mesh build_plate_mesh(const DomainSpec& domain,
                      const std::optional<DefectSpec>& defect, double target_h) {
  if (target_h <= 0.0) throw MeshError("target_h must be positive");
  DomainSpec dom = domain;
  dom.finalize();
  if (dom.shape == DomainShape::Rectangle) return build_rectangle_mesh(dom, defect, target_h);
  return build_disc_mesh(dom, defect, target_h);
}

Mesh refine(const Mesh& mesh) {
  Mesh out;
  out.nodes = mesh.nodes;
  std::map<std::pair<int, int>, int> mid;
  const auto midpoint_id = [&](int a, int b) {
    const auto key = undirected(a, b);
    const auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = out.node_count();
    out.nodes.push_back(midpoint(mesh.nodes[a], mesh.nodes[b]));
    mid.emplace(key, id);
    return id;
  };
  out.triangles.reserve(4 * mesh.triangles.size());
  out.tri_region.reserve(4 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto [v0, v1, v2] = mesh.triangles[t];
    const int m01 = midpoint_id(v0, v1), m12 = midpoint_id(v1, v2), m02 = midpoint_id(v0, v2);
    const Region reg = mesh.tri_region[t];
    for (const auto& child : {std::array<int, 3>{v0, m01, m02},
                              std::array<int, 3>{m01, v1, m12},
                              std::array<int, 3>{m02, m12, v2},
                              std::array<int, 3>{m01, m12, m02}}) {
      out.triangles.push_back(child);
      out.tri_region.push_back(reg);
    }
  }
  out.boundary_edges.reserve(2 * mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) {
    const int m = midpoint_id(e.a, e.b);
    out.boundary_edges.push_back({e.a, m, e.tag});
    out.boundary_edges.push_back({m, e.b, e.tag});
  }
  out.characteristic_size = 0.5 * mesh.characteristic_size;
  return out;
}

namespace {

struct FatnessContext {
  const Mesh* mesh;
  double threshold;
  int max_depth;
};

double fatness_recurse(const FatnessContext& ctx, Point2 a, Point2 b, Point2 c, int depth) {
  const double area = std::abs(triangle_signed_area(a, b, c));
  if (area == 0.0) return 0.0;
  const double da = ctx.mesh->distance_to_outer_boundary(a);
  const double db = ctx.mesh->distance_to_outer_boundary(b);
  const double dc = ctx.mesh->distance_to_outer_boundary(c);
  const double L = std::max({norm(b - a), norm(c - b), norm(a - c)});
  // dist is 1-Lipschitz: the whole triangle is classified when the vertex
  // distances clear the threshold by the longest edge.
  if (std::max({da, db, dc}) - L > ctx.threshold) return area;
  if (std::min({da, db, dc}) + L <= ctx.threshold) return 0.0;
  if (depth >= ctx.max_depth) {
    const Point2 cen = (1.0 / 3.0) * (a + b + c);
    int inside = 0;
    for (double d : {da, db, dc, ctx.mesh->distance_to_outer_boundary(cen)})
      if (d > ctx.threshold) ++inside;
    return area * inside / 4.0;
  }
  const Point2 mab = midpoint(a, b), mbc = midpoint(b, c), mca = midpoint(c, a);
  return fatness_recurse(ctx, a, mab, mca, depth + 1) +
         fatness_recurse(ctx, mab, b, mbc, depth + 1) +
         fatness_recurse(ctx, mca, mbc, c, depth + 1) +
         fatness_recurse(ctx, mab, mbc, mca, depth + 1);
}

}  // namespace

double fatness_measure(const Mesh& mesh, double threshold) {
  if (threshold < 0.0) throw MeshError("fatness threshold must be >= 0");
  const FatnessContext ctx{&mesh, threshold, 9};
  double area = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.tri_region[t] != Region::Defect) continue;
    const auto& tri = mesh.triangles[t];
    area += fatness_recurse(ctx, mesh.nodes[tri[0]], mesh.nodes[tri[1]],
                            mesh.nodes[tri[2]], 0);
  }
  return area;
}

double defect_outer_distance(const Mesh& mesh) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& de : mesh.boundary_edges) {
    if (de.tag != BoundaryTag::Defect) continue;
    for (const auto& oe : mesh.boundary_edges) {
      if (oe.tag != BoundaryTag::Outer) continue;
      d = std::min(d, segment_segment_distance(mesh.nodes[de.a], mesh.nodes[de.b],
                                               mesh.nodes[oe.a], mesh.nodes[oe.b]));
    }
  }
  return d;
}

Mesh extract_submesh(const Mesh& mesh, Region region) {
  Mesh out;
  std::vector<int> renum(mesh.node_count(), -1);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.tri_region[t] != region) continue;
    std::array<int, 3> tri;
    for (int k = 0; k < 3; ++k) {
      const int n = mesh.triangles[t][k];
      if (renum[n] < 0) {
        renum[n] = out.node_count();
        out.nodes.push_back(mesh.nodes[n]);
      }
      tri[k] = renum[n];
    }
    out.triangles.push_back(tri);
    out.tri_region.push_back(Region::Exterior);
  }
  if (out.triangles.empty()) throw MeshError("requested region is empty");
  derive_boundary_edges(out);
  out.characteristic_size = max_edge_length(out);
  return out;
}

Mesh import_mesh(std::istream& in) {
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "RMMESH" || version != 1)
    throw MeshError("malformed mesh file: expected header 'RMMESH 1'");
  Mesh m;
  int n = 0;
  if (!(in >> word >> n) || word != "NODES" || n < 0)
    throw MeshError("malformed mesh file: expected 'NODES n'");
  m.nodes.resize(n);
  for (auto& p : m.nodes)
    if (!(in >> p.x1 >> p.x2)) throw MeshError("malformed mesh file: bad node line");
  int ntri = 0;
  if (!(in >> word >> ntri) || word != "TRIANGLES" || ntri < 0)
    throw MeshError("malformed mesh file: expected 'TRIANGLES m'");
  m.triangles.resize(ntri);
  m.tri_region.resize(ntri);
  for (int t = 0; t < ntri; ++t) {
    std::string reg;
    if (!(in >> m.triangles[t][0] >> m.triangles[t][1] >> m.triangles[t][2] >> reg))
      throw MeshError("malformed mesh file: bad triangle line");
    if (reg == "E")
      m.tri_region[t] = Region::Exterior;
    else if (reg == "D")
      m.tri_region[t] = Region::Defect;
    else
      throw MeshError("malformed mesh file: region must be E or D");
  }
  int nbe = 0;
  if (!(in >> word >> nbe) || word != "BEDGES" || nbe < 0)
    throw MeshError("malformed mesh file: expected 'BEDGES p'");
  m.boundary_edges.resize(nbe);
  for (auto& e : m.boundary_edges) {
    std::string tag;
    if (!(in >> e.a >> e.b >> tag)) throw MeshError("malformed mesh file: bad boundary edge line");
    if (tag == "O")
      e.tag = BoundaryTag::Outer;
    else if (tag == "D")
      e.tag = BoundaryTag::Defect;
    else
      throw MeshError("malformed mesh file: boundary tag must be O or D");
  }
  m.characteristic_size = max_edge_length(m);
  m.validate();
  return m;
}

Mesh import_mesh_text(const std::string& text) {
  std::istringstream in(text);
  return import_mesh(in);
}

Mesh import_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);
  return import_mesh(in);
}

void export_mesh(const Mesh& mesh, std::ostream& out) {
  out << "RMMESH 1\n";
  out << "NODES " << mesh.node_count() << "\n";
  out << std::setprecision(17);
  for (const auto& p : mesh.nodes) out << p.x1 << " " << p.x2 << "\n";
  out << "TRIANGLES " << mesh.triangle_count() << "\n";
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << " " << tri[1] << " " << tri[2] << " "
        << (mesh.tri_region[t] == Region::Defect ? "D" : "E") << "\n";
  }
  out << "BEDGES " << mesh.boundary_edges.size() << "\n";
  for (const auto& e : mesh.boundary_edges)
    out << e.a << " " << e.b << " " << (e.tag == BoundaryTag::Defect ? "D" : "O") << "\n";
}

std::string export_mesh_text(const Mesh& mesh) {
  std::ostringstream out;
  export_mesh(mesh, out);
  return out.str();
}

void export_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file: " + path);
  export_mesh(mesh, out);
}

}  // namespace rmlab
