#include "rmlab/works.hpp"

#include <cmath>
#include <stdexcept>

namespace rmlab {

double work_boundary(const Mesh& mesh, const BoundaryLoad& load,
                     const PlateSolution& solution) {
  if (load.edges.size() != mesh.boundary_edges.size())
    throw std::invalid_argument("load edge set does not match the mesh");
  const double g = 0.5 / std::sqrt(3.0);
  const double pts[2] = {0.5 - g, 0.5 + g};
  double W = 0.0;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    if (be.tag != BoundaryTag::Outer) continue;
    const auto& el = load.edges[e];
    const double len = norm(mesh.nodes[be.b] - mesh.nodes[be.a]);
    double edge_sum = 0.0;
    for (const double t : pts) {
      const double q = el.q0 * (1.0 - t) + el.q1 * t;
      const Eigen::Vector2d m = el.m0 * (1.0 - t) + el.m1 * t;
      const double w = solution.w(be.a) * (1.0 - t) + solution.w(be.b) * t;
      const Eigen::Vector2d phi =
          solution.phi(be.a) * (1.0 - t) + solution.phi(be.b) * t;
      edge_sum += q * w + m.dot(phi);
    }
    W += 0.5 * len * edge_sum;
  }
  return W;
}

namespace {

struct ElementFields {
  Eigen::Matrix2d grad_phi;
  Eigen::Vector2d phi_centroid;
  Eigen::Vector2d grad_w;
  Eigen::Vector2d phi_at(const double N[3], const Eigen::Vector2d p[3]) const {
    return N[0] * p[0] + N[1] * p[1] + N[2] * p[2];
  }
};

void basis_gradients(const Mesh& mesh, int t, Eigen::Vector2d b[3]) {
  const auto& tn = mesh.triangles[t];
  const Point2 p0 = mesh.nodes[tn[0]], p1 = mesh.nodes[tn[1]], p2 = mesh.nodes[tn[2]];
  Eigen::Matrix2d J;
  J << (p1 - p0).x1, (p2 - p0).x1, (p1 - p0).x2, (p2 - p0).x2;
  const Eigen::Matrix2d Jinv = J.inverse();
  b[0] = -(Jinv.row(0) + Jinv.row(1)).transpose();
  b[1] = Jinv.row(0).transpose();
  b[2] = Jinv.row(1).transpose();
}

bool element_supported(const Mesh& mesh, int t, const PlateSolution& s) {
  const auto& tn = mesh.triangles[t];
  return s.node_active[tn[0]] && s.node_active[tn[1]] && s.node_active[tn[2]];
}

}  // namespace

double energy_bilinear(const Mesh& mesh, const PlateMaterial& material,
                       const PlateSolution& a, const PlateSolution& b,
                       ActiveRegion region, QuadratureSpec quad) {
  const double S = material.shear_modulus();
  double total = 0.0;
  Eigen::Vector2d g[3];
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (!in_region(mesh, t, region)) continue;
    if (!element_supported(mesh, t, a) || !element_supported(mesh, t, b))
      throw std::invalid_argument("region outside solution support");
    basis_gradients(mesh, t, g);
    const auto& tn = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    Eigen::Matrix2d GA = Eigen::Matrix2d::Zero(), GB = Eigen::Matrix2d::Zero();
    Eigen::Vector2d gwA = Eigen::Vector2d::Zero(), gwB = Eigen::Vector2d::Zero();
    Eigen::Vector2d phiA[3], phiB[3];
    for (int k = 0; k < 3; ++k) {
      phiA[k] = a.phi(tn[k]);
      phiB[k] = b.phi(tn[k]);
      GA += phiA[k] * g[k].transpose();
      GB += phiB[k] * g[k].transpose();
      gwA += a.w(tn[k]) * g[k];
      gwB += b.w(tn[k]) * g[k];
    }
    total += area * bending_pair(material, GA, GB);
    if (quad.shear == ShearRule::Centroid) {
      const Eigen::Vector2d sA = (phiA[0] + phiA[1] + phiA[2]) / 3.0 + gwA;
      const Eigen::Vector2d sB = (phiB[0] + phiB[1] + phiB[2]) / 3.0 + gwB;
      total += area * S * sA.dot(sB);
    } else {
      const double mids[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
      for (const auto& N : mids) {
        const Eigen::Vector2d sA = N[0] * phiA[0] + N[1] * phiA[1] + N[2] * phiA[2] + gwA;
        const Eigen::Vector2d sB = N[0] * phiB[0] + N[1] * phiB[1] + N[2] * phiB[2] + gwB;
        total += area / 3.0 * S * sA.dot(sB);
      }
    }
  }
  return total;
}

double work_energy(const Mesh& mesh, const PlateMaterial& material,
                   const PlateSolution& solution, ActiveRegion region,
                   QuadratureSpec quad) {
  return energy_bilinear(mesh, material, solution, solution, region, quad);
}

namespace {

ActiveRegion natural_region(const PlateSolution& s) {
  switch (s.kind) {
    case SolutionKind::Cavity:
      return ActiveRegion::Exterior;
    case SolutionKind::DirichletExtension:
      return ActiveRegion::Defect;
    case SolutionKind::Rigid:
    case SolutionKind::Reference:
      break;
  }
  return ActiveRegion::Full;
}

}  // namespace

WorkReport make_work_report(const Mesh& mesh, const PlateMaterial& material,
                            const BoundaryLoad& load, const PlateSolution& solution,
                            QuadratureSpec quad) {
  WorkReport rep;
  rep.kind = solution.kind;
  rep.W_boundary = work_boundary(mesh, load, solution);
  // The rigid energy is stored in the exterior only; the defect contributes
  // zero strain, so Full and Exterior agree there.
  rep.W_energy = work_energy(mesh, material, solution, natural_region(solution), quad);
  const double scale = std::max(std::abs(rep.W_boundary), std::abs(rep.W_energy));
  rep.duality_gap = scale > 0.0 ? std::abs(rep.W_boundary - rep.W_energy) / scale : 0.0;
  return rep;
}

GapReport make_gap_report(const Mesh& mesh, const PlateMaterial& material,
                          const PlateSolution& reference,
                          const PlateSolution& defected, QuadratureSpec quad) {
  GapReport gap;
  gap.defect_kind = defected.kind;
  gap.W0 = work_energy(mesh, material, reference, ActiveRegion::Full, quad);
  gap.Wdef = work_energy(mesh, material, defected, natural_region(defected), quad);
  gap.delta_W = defected.kind == SolutionKind::Rigid ? gap.W0 - gap.Wdef
                                                     : gap.Wdef - gap.W0;
  gap.t = gap.W0 != 0.0 ? gap.delta_W / gap.W0 : 0.0;
  return gap;
}

std::vector<double> energy_density_field(const Mesh& mesh, const PlateSolution& solution,
                                         double rho0) {
  std::vector<double> E(mesh.triangle_count(), 0.0);
  Eigen::Vector2d g[3];
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (!element_supported(mesh, t, solution)) continue;
    basis_gradients(mesh, t, g);
    const auto& tn = mesh.triangles[t];
    Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
    Eigen::Vector2d gw = Eigen::Vector2d::Zero();
    Eigen::Vector2d phis = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) {
      G += solution.phi(tn[k]) * g[k].transpose();
      gw += solution.w(tn[k]) * g[k];
      phis += solution.phi(tn[k]) / 3.0;
    }
    const Eigen::Matrix2d sym = 0.5 * (G + G.transpose());
    const Eigen::Vector2d shear = phis + gw;
    E[t] = std::sqrt((sym.array() * sym.array()).sum() +
                     shear.squaredNorm() / (rho0 * rho0));
  }
  return E;
}

double cross_energy_cavity(const Mesh& mesh, const PlateMaterial& material,
                           const PlateSolution& reference,
                           const PlateSolution& extension, QuadratureSpec quad) {
  if (extension.kind != SolutionKind::DirichletExtension &&
      extension.kind != SolutionKind::Reference)
    throw std::invalid_argument("cross energy requires the Dirichlet extension");
  return energy_bilinear(mesh, material, reference, extension, ActiveRegion::Defect, quad);
}

double lemma61_boundary_term(const Mesh& mesh, const PlateSolution& reference,
                             const BoundaryReactions& reactions) {
  double sum = 0.0;
  for (std::size_t i = 0; i < reactions.nodes.size(); ++i) {
    const int node = reactions.nodes[i];
    sum += reactions.weight_m1(i) * reference.phi1(node) +
           reactions.weight_m2(i) * reference.phi2(node) +
           reactions.weight_q(i) * reference.w(node);
  }
  return sum;
}

}  // namespace rmlab
