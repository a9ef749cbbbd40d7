#include "rmlab/assembly.hpp"

#include <stdexcept>

namespace rmlab {

bool in_region(const Mesh& mesh, int tri, ActiveRegion region) {
  switch (region) {
    case ActiveRegion::Full:
      return true;
    case ActiveRegion::Exterior:
      return mesh.tri_region[tri] == Region::Exterior;
    case ActiveRegion::Defect:
      return mesh.tri_region[tri] == Region::Defect;
  }
  return false;
}

DofMap make_dof_map(const Mesh& mesh, ActiveRegion region) {
  DofMap map;
  map.region = region;
  std::vector<char> used(mesh.node_count(), 0);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (!in_region(mesh, t, region)) continue;
    for (int k = 0; k < 3; ++k) used[mesh.triangles[t][k]] = 1;
  }
  map.node_local.assign(mesh.node_count(), -1);
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (used[n]) {
      map.node_local[n] = static_cast<int>(map.local_node.size());
      map.local_node.push_back(n);
    }
  }
  return map;
}

Eigen::Matrix<double, 9, 9> element_stiffness(const Mesh& mesh,
                                              const PlateMaterial& material,
                                              int tri, QuadratureSpec quad) {
  const auto& tn = mesh.triangles[tri];
  const Point2 p0 = mesh.nodes[tn[0]], p1 = mesh.nodes[tn[1]], p2 = mesh.nodes[tn[2]];
  const double area = triangle_signed_area(p0, p1, p2);
  if (area <= 0.0) throw std::runtime_error("degenerate triangle in assembly");

  Eigen::Matrix2d J;
  J << (p1 - p0).x1, (p2 - p0).x1, (p1 - p0).x2, (p2 - p0).x2;
  const Eigen::Matrix2d Jinv = J.inverse();
  // Gradients of the P1 basis: rows of Jinv give grad xi, grad eta.
  Eigen::Vector2d b[3];
  b[0] = -(Jinv.row(0) + Jinv.row(1)).transpose();
  b[1] = Jinv.row(0).transpose();
  b[2] = Jinv.row(1).transpose();

  const double nu = material.poisson();
  const double B = material.bending_stiffness();
  const double S = material.shear_modulus();

  Eigen::Matrix<double, 9, 9> K = Eigen::Matrix<double, 9, 9>::Zero();
  // Bending: exact one-point integration of P grad(phi) . grad(psi).
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 3; ++j)
        for (int c = 0; c < 2; ++c) {
          const double val =
              area * B *
              ((1.0 - nu) * 0.5 * ((a == c ? b[i].dot(b[j]) : 0.0) + b[j](a) * b[i](c)) +
               nu * b[i](a) * b[j](c));
          K(3 * i + a, 3 * j + c) += val;
        }
  // Shear: S (phi + grad w) . (psi + grad v) at the selected points.
  const auto add_shear_point = [&](const double N[3], double weight) {
    // Row per component: coefficient of each dof in (phi + grad w)_comp.
    Eigen::Matrix<double, 2, 9> g = Eigen::Matrix<double, 2, 9>::Zero();
    for (int i = 0; i < 3; ++i) {
      g(0, 3 * i + 0) = N[i];
      g(1, 3 * i + 1) = N[i];
      g(0, 3 * i + 2) = b[i](0);
      g(1, 3 * i + 2) = b[i](1);
    }
    K += weight * S * g.transpose() * g;
  };
  if (quad.shear == ShearRule::Centroid) {
    const double N[3] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    add_shear_point(N, area);
  } else {
    const double mids[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
    for (const auto& N : mids) add_shear_point(N, area / 3.0);
  }
  return K;
}

SystemMatrix assemble_stiffness(const Mesh& mesh, const PlateMaterial& material,
                                ActiveRegion region, QuadratureSpec quad) {
  SystemMatrix sys;
  sys.quad = quad;
  sys.dofs = make_dof_map(mesh, region);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(81 * mesh.triangles.size());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (!in_region(mesh, t, region)) continue;
    const auto Ke = element_stiffness(mesh, material, t, quad);
    const auto& tn = mesh.triangles[t];
    for (int i = 0; i < 9; ++i) {
      const int gi = sys.dofs.dof(tn[i / 3], i % 3);
      for (int j = 0; j < 9; ++j) {
        const int gj = sys.dofs.dof(tn[j / 3], j % 3);
        trips.emplace_back(gi, gj, Ke(i, j));
      }
    }
  }
  sys.K.resize(sys.dofs.ndof(), sys.dofs.ndof());
  sys.K.setFromTriplets(trips.begin(), trips.end());
  sys.K.makeCompressed();
  return sys;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const BoundaryLoad& load,
                              const DofMap& dofs) {
  if (load.edges.size() != mesh.boundary_edges.size())
    throw std::invalid_argument("load edge set does not match the mesh");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(dofs.ndof());
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    if (be.tag != BoundaryTag::Outer) continue;
    const auto& el = load.edges[e];
    const double len = norm(mesh.nodes[be.b] - mesh.nodes[be.a]);
    if (!dofs.active(be.a) || !dofs.active(be.b))
      throw std::invalid_argument("loaded edge outside the active region");
    // Exact integrals of linear data against the P1 trace basis.
    f(dofs.dof(be.a, 2)) += len * (el.q0 / 3.0 + el.q1 / 6.0);
    f(dofs.dof(be.b, 2)) += len * (el.q0 / 6.0 + el.q1 / 3.0);
    for (int c = 0; c < 2; ++c) {
      f(dofs.dof(be.a, c)) += len * (el.m0(c) / 3.0 + el.m1(c) / 6.0);
      f(dofs.dof(be.b, c)) += len * (el.m0(c) / 6.0 + el.m1(c) / 3.0);
    }
  }
  return f;
}

Eigen::SparseMatrix<double> constraint_columns(const Mesh& mesh, const DofMap& dofs) {
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(dofs.active_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (!in_region(mesh, t, dofs.region)) continue;
    const double w = mesh.triangle_area(t) / 3.0;
    for (int k = 0; k < 3; ++k) weight(dofs.node_local[mesh.triangles[t][k]]) += w;
  }
  Eigen::SparseMatrix<double> C(dofs.ndof(), 3);
  std::vector<Eigen::Triplet<double>> trips;
  for (int l = 0; l < dofs.active_count(); ++l)
    for (int c = 0; c < 3; ++c) trips.emplace_back(3 * l + c, c, weight(l));
  C.setFromTriplets(trips.begin(), trips.end());
  return C;
}

Eigen::VectorXd rigid_triple_vector(const Mesh& mesh, const DofMap& dofs,
                                    const Eigen::Vector2d& b, double a) {
  Eigen::VectorXd z(dofs.ndof());
  for (int l = 0; l < dofs.active_count(); ++l) {
    const Point2 x = mesh.nodes[dofs.local_node[l]];
    z(3 * l + 0) = b(0);
    z(3 * l + 1) = b(1);
    z(3 * l + 2) = -(b(0) * x.x1 + b(1) * x.x2) + a;
  }
  return z;
}

}  // namespace rmlab
