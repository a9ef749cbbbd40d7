#include "rmlab/load.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace rmlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::Vector2d to_vec(Point2 p) { return {p.x1, p.x2}; }

// Outward unit normals of the outer boundary edges, oriented away from the
// owning triangle.
std::vector<Eigen::Vector2d> outer_edge_normals(const Mesh& mesh) {
  std::map<std::pair<int, int>, Point2> owner_centroid;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      owner_centroid[key] = mesh.triangle_centroid(t);
    }
  }
  std::vector<Eigen::Vector2d> normals(mesh.boundary_edges.size(),
                                       Eigen::Vector2d::Zero());
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    if (be.tag != BoundaryTag::Outer) continue;
    const Point2 a = mesh.nodes[be.a], b = mesh.nodes[be.b];
    Point2 n{(b - a).x2, -(b - a).x1};
    n = (1.0 / norm(n)) * n;
    const auto key = be.a < be.b ? std::make_pair(be.a, be.b) : std::make_pair(be.b, be.a);
    const Point2 inward = owner_centroid.at(key) - midpoint(a, b);
    if (dot(n, inward) > 0.0) n = -1.0 * n;
    normals[e] = {n.x1, n.x2};
  }
  return normals;
}
}  // namespace

BoundaryLoad BoundaryLoad::scaled(double s) const {
  BoundaryLoad out = *this;
  for (auto& e : out.edges) {
    e.q0 *= s;
    e.q1 *= s;
    e.m0 *= s;
    e.m1 *= s;
  }
  return out;
}

bool BoundaryLoad::is_zero() const {
  for (const auto& e : edges)
    if (e.q0 != 0.0 || e.q1 != 0.0 || !e.m0.isZero(0.0) || !e.m1.isZero(0.0))
      return false;
  return true;
}

BoundaryLoad make_preset_load(const Mesh& mesh, const PlateMaterial& material,
                              const std::string& preset, double kappa,
                              int fourier_mode) {
  BoundaryLoad load;
  load.edges.resize(mesh.boundary_edges.size());

  if (preset == "pure_bending_x" || preset == "pure_bending_y" || preset == "twist") {
    Eigen::Matrix2d G;
    if (preset == "pure_bending_x")
      G << kappa, 0, 0, 0;
    else if (preset == "pure_bending_y")
      G << 0, 0, 0, kappa;
    else
      G << 0, kappa, kappa, 0;
    const Eigen::Matrix2d PG = bending_apply(material, G);
    const auto normals = outer_edge_normals(mesh);
    for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
      if (mesh.boundary_edges[e].tag != BoundaryTag::Outer) continue;
      EdgeLoad el;
      const Eigen::Vector2d mval = PG * normals[e];
      el.m0 = mval;
      el.m1 = mval;
      load.edges[e] = el;
    }
    return load;
  }

  if (preset == "fourier") {
    // Arc-length parameterisation of the (single) outer loop.
    const auto loops = mesh.boundary_loops(BoundaryTag::Outer);
    if (loops.size() != 1)
      throw std::invalid_argument("fourier preset needs a single outer loop");
    const auto& loop = loops[0];
    const int n = static_cast<int>(loop.size());
    std::vector<double> s(n + 1, 0.0);
    for (int i = 0; i < n; ++i)
      s[i + 1] = s[i] + norm(mesh.nodes[loop[(i + 1) % n]] - mesh.nodes[loop[i]]);
    const double total = s[n];
    std::vector<double> q(n);
    for (int i = 0; i < n; ++i)
      q[i] = kappa * std::cos(2.0 * kPi * fourier_mode * s[i] / total);
    // Mean-correct Q so that int Q = 0 exactly for the PL interpolant.
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      const double len = s[i + 1] - s[i];
      mean += 0.5 * (q[i] + q[(i + 1) % n]) * len;
    }
    mean /= total;
    for (auto& v : q) v -= mean;
    // Edge-indexed nodal values.
    std::vector<double> nodal(mesh.node_count(), 0.0);
    for (int i = 0; i < n; ++i) nodal[loop[i]] = q[i];
    Eigen::Vector2d int_qx = Eigen::Vector2d::Zero();
    for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
      const auto& be = mesh.boundary_edges[e];
      if (be.tag != BoundaryTag::Outer) continue;
      EdgeLoad el;
      el.q0 = nodal[be.a];
      el.q1 = nodal[be.b];
      const double len = norm(mesh.nodes[be.b] - mesh.nodes[be.a]);
      const Eigen::Vector2d xa = to_vec(mesh.nodes[be.a]);
      const Eigen::Vector2d xb = to_vec(mesh.nodes[be.b]);
      int_qx += len * (el.q0 * (xa / 3.0 + xb / 6.0) + el.q1 * (xa / 6.0 + xb / 3.0));
      load.edges[e] = el;
    }
    // Constant couple closing the balance: int M = int Q x.
    const Eigen::Vector2d mconst = int_qx / total;
    for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
      if (mesh.boundary_edges[e].tag != BoundaryTag::Outer) continue;
      load.edges[e].m0 += mconst;
      load.edges[e].m1 += mconst;
    }
    return load;
  }

  throw std::invalid_argument("unknown load preset: " + preset);
}

BoundaryLoad refine_load(const BoundaryLoad& load) {
  BoundaryLoad out;
  out.edges.resize(2 * load.edges.size());
  for (std::size_t e = 0; e < load.edges.size(); ++e) {
    const auto& el = load.edges[e];
    EdgeLoad left, right;
    left.q0 = el.q0;
    left.q1 = 0.5 * (el.q0 + el.q1);
    left.m0 = el.m0;
    left.m1 = 0.5 * (el.m0 + el.m1);
    right.q0 = left.q1;
    right.q1 = el.q1;
    right.m0 = left.m1;
    right.m1 = el.m1;
    out.edges[2 * e] = left;
    out.edges[2 * e + 1] = right;
  }
  return out;
}

CompatibilityReport check_compatibility(const Mesh& mesh, const BoundaryLoad& load,
                                        double tolerance) {
  if (load.edges.size() != mesh.boundary_edges.size())
    throw std::invalid_argument("load edge set does not match the mesh");
  CompatibilityReport rep;
  Eigen::Vector2d int_qx = Eigen::Vector2d::Zero();
  Eigen::Vector2d int_m = Eigen::Vector2d::Zero();
  double xmax = 0.0;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    if (be.tag != BoundaryTag::Outer) continue;
    const auto& el = load.edges[e];
    const Eigen::Vector2d xa = to_vec(mesh.nodes[be.a]);
    const Eigen::Vector2d xb = to_vec(mesh.nodes[be.b]);
    const double len = (xb - xa).norm();
    rep.force_residual += 0.5 * len * (el.q0 + el.q1);
    int_qx += len * (el.q0 * (xa / 3.0 + xb / 6.0) + el.q1 * (xa / 6.0 + xb / 3.0));
    int_m += 0.5 * len * (el.m0 + el.m1);
    rep.force_scale += 0.5 * len * (std::abs(el.q0) + std::abs(el.q1));
    rep.couple_scale += 0.5 * len * (el.m0.norm() + el.m1.norm());
    xmax = std::max({xmax, xa.norm(), xb.norm()});
  }
  rep.couple_residual = int_qx - int_m;
  rep.couple_scale += rep.force_scale * xmax;
  rep.rel_force = rep.force_scale > 0.0 ? std::abs(rep.force_residual) / rep.force_scale : 0.0;
  rep.rel_couple =
      rep.couple_scale > 0.0 ? rep.couple_residual.norm() / rep.couple_scale : 0.0;
  rep.pass = rep.rel_force <= tolerance && rep.rel_couple <= tolerance;
  return rep;
}

}  // namespace rmlab
