#include <doctest.h>

#include <Eigen/Dense>

#include "rmlab/assembly.hpp"

using namespace rmlab;

namespace {

PlateMaterial unit_material() {
  PlateMaterial m;
  m.lame = {1.0, 1.0, 0.5, 0.5, 3.0};
  m.h = 0.1;
  return m;
}

DomainSpec unit_square() {
  DomainSpec d;
  d.width = 1.0;
  d.height = 1.0;
  return d;
}

Mesh single_triangle_mesh() {
  Mesh m;
  m.nodes = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.tri_region = {Region::Exterior};
  m.boundary_edges = {{0, 1, BoundaryTag::Outer},
                      {1, 2, BoundaryTag::Outer},
                      {2, 0, BoundaryTag::Outer}};
  m.characteristic_size = std::sqrt(2.0);
  return m;
}

}  // namespace

TEST_CASE("element matrix: symmetry, PSD, rank (exact shear rule)") {
  const Mesh m = single_triangle_mesh();
  QuadratureSpec quad;
  quad.shear = ShearRule::ThreePoint;
  const auto K = element_stiffness(m, unit_material(), 0, quad);
  CHECK((K - K.transpose()).norm() <= 1e-14 * K.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
  const auto ev = eig.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int zero = 0;
  for (int i = 0; i < 9; ++i) {
    CHECK(ev(i) >= -1e-12 * scale);
    if (std::abs(ev(i)) <= 1e-12 * scale) ++zero;
  }
  // Exactly the three rigid triples span the kernel.
  CHECK(zero == 3);
}

TEST_CASE("element matrix: centroid shear rule adds the element rotation mode") {
  // One-point shear cannot see the in-plane rotation of phi compensated
  // through grad w at the centroid, so a single element has a 4-dimensional
  // kernel; the mode does not glue across elements (global kernels stay
  // 3-dimensional, which the solver tests check).
  const Mesh m = single_triangle_mesh();
  const auto K = element_stiffness(m, unit_material(), 0, QuadratureSpec{});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
  const auto ev = eig.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int zero = 0;
  for (int i = 0; i < 9; ++i)
    if (std::abs(ev(i)) <= 1e-12 * scale) ++zero;
  CHECK(zero == 4);
}

TEST_CASE("stiffness annihilates interpolated rigid triples") {
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 0.25);
  const auto sys = assemble_stiffness(m, unit_material(), ActiveRegion::Full);
  const double knorm = Eigen::MatrixXd(sys.K).cwiseAbs().maxCoeff();
  for (const auto& [b, a] : std::vector<std::pair<Eigen::Vector2d, double>>{
           {{1, 0}, 0.0}, {{0, 1}, 0.0}, {{0, 0}, 1.0}, {{0.3, -0.7}, 2.0}}) {
    const Eigen::VectorXd z = rigid_triple_vector(m, sys.dofs, b, a);
    const double resid = (sys.K * z).cwiseAbs().maxCoeff();
    CHECK(resid <= 1e-12 * knorm * z.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("patch test: constant-curvature energy on one element") {
  // phi = (x1, 0), w = -x1^2/2 has constant curvature e1 x e1 and zero shear.
  // On a single element the consistent nodal values give the exact bending
  // energy B |T| when w carries the quadratic nodal data and the shear is
  // measured after the P1 interpolation of the exact fields: the bending
  // part is exact because grad phi is constant.
  const Mesh m = single_triangle_mesh();
  const PlateMaterial mat = unit_material();
  QuadratureSpec quad;
  quad.shear = ShearRule::ThreePoint;
  const auto K = element_stiffness(m, mat, 0, quad);
  // Nodal interpolation with the shear-free combination: w nodal values are
  // chosen so that phi + grad w vanishes at the quadrature points. For P1,
  // grad w is constant, so pick w matching the linear part -x1^2/2 at the
  // centroid gradient: grad w = -(c1, 0) with c1 the centroid abscissa.
  Eigen::VectorXd u(9);
  const double c1 = (0.0 + 1.0 + 0.0) / 3.0;
  const auto wlin = [&](double x1) { return -c1 * x1; };
  u << 0, 0, wlin(0),   // node (0,0): phi=(0,0)
      1, 0, wlin(1),    // node (1,0): phi=(1,0)
      0, 0, wlin(0);    // node (0,1)
  // Shear at the centroid: phi(c) + grad w = (c1,0) - (c1,0) = 0; bending
  // energy B |T| with |T| = 1/2. The three-point rule adds the quadratic
  // shear remainder, so use the centroid rule for the exact statement.
  const auto Kc = element_stiffness(m, mat, 0, QuadratureSpec{});
  const double energy = u.dot(Kc * u);
  CHECK(energy == doctest::Approx(mat.bending_stiffness() * 0.5).epsilon(1e-12));
}

TEST_CASE("load assembly pairs with nodal fields like the boundary integral") {
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 0.25);
  const PlateMaterial mat = unit_material();
  const BoundaryLoad load = make_preset_load(m, mat, "pure_bending_x", 1.0);
  const auto dofs = make_dof_map(m, ActiveRegion::Full);
  const Eigen::VectorXd f = assemble_load(m, load, dofs);
  // Zero load -> zero vector.
  BoundaryLoad zero;
  zero.edges.resize(m.boundary_edges.size());
  CHECK(assemble_load(m, zero, dofs).norm() == doctest::Approx(0.0));
  // Pairing with a rigid triple equals the compatibility residual (zero).
  for (const auto& [b, a] : std::vector<std::pair<Eigen::Vector2d, double>>{
           {{1, 0}, 0.0}, {{0, 1}, 0.0}, {{0, 0}, 1.0}}) {
    const Eigen::VectorXd z = rigid_triple_vector(m, dofs, b, a);
    CHECK(std::abs(f.dot(z)) <= 1e-12 * f.norm() * z.norm() * m.node_count());
  }
}

TEST_CASE("compatibility checks") {
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 0.25);
  const PlateMaterial mat = unit_material();
  SUBCASE("pure bending load is compatible") {
    const auto rep = check_compatibility(m, make_preset_load(m, mat, "pure_bending_x", 1.0));
    CHECK(rep.pass);
    CHECK(rep.rel_force <= 1e-14);
    CHECK(rep.rel_couple <= 1e-14);
  }
  SUBCASE("constant Q fails the force balance") {
    BoundaryLoad load;
    load.edges.resize(m.boundary_edges.size());
    for (std::size_t e = 0; e < m.boundary_edges.size(); ++e) {
      if (m.boundary_edges[e].tag != BoundaryTag::Outer) continue;
      load.edges[e].q0 = load.edges[e].q1 = 2.0;
    }
    const auto rep = check_compatibility(m, load);
    CHECK_FALSE(rep.pass);
    // Force residual = Q * |boundary| = 2 * 4.
    CHECK(rep.force_residual == doctest::Approx(8.0).epsilon(1e-12));
  }
  SUBCASE("constant couple fails unless zero") {
    BoundaryLoad load;
    load.edges.resize(m.boundary_edges.size());
    for (std::size_t e = 0; e < m.boundary_edges.size(); ++e) {
      if (m.boundary_edges[e].tag != BoundaryTag::Outer) continue;
      load.edges[e].m0 = load.edges[e].m1 = Eigen::Vector2d(3.0, 0.0);
    }
    const auto rep = check_compatibility(m, load);
    CHECK_FALSE(rep.pass);
    CHECK(rep.couple_residual(0) == doctest::Approx(-12.0).epsilon(1e-12));
  }
  SUBCASE("x1-odd Q on the symmetric square: force ok, couple fails") {
    // Q = x1 on the boundary (linear per edge through nodal values).
    BoundaryLoad load;
    load.edges.resize(m.boundary_edges.size());
    for (std::size_t e = 0; e < m.boundary_edges.size(); ++e) {
      const auto& be = m.boundary_edges[e];
      if (be.tag != BoundaryTag::Outer) continue;
      load.edges[e].q0 = m.nodes[be.a].x1;
      load.edges[e].q1 = m.nodes[be.b].x1;
    }
    const auto rep = check_compatibility(m, load);
    CHECK(std::abs(rep.force_residual) <= 1e-14);
    // int Q x over the centred unit square: int x1^2 over the boundary > 0.
    CHECK(rep.couple_residual(0) > 0.1);
    CHECK_FALSE(rep.pass);
  }
}

TEST_CASE("compatibility residuals are invariant under load subdivision") {
  const Mesh m0 = build_plate_mesh(unit_square(), std::nullopt, 0.25);
  const PlateMaterial mat = unit_material();
  BoundaryLoad load = make_preset_load(m0, mat, "fourier", 1.0, 2);
  const auto rep0 = check_compatibility(m0, load);
  Mesh m = m0;
  BoundaryLoad l = load;
  for (int level = 0; level < 2; ++level) {
    m = refine(m);
    l = refine_load(l);
    const auto rep = check_compatibility(m, l);
    CHECK(rep.force_residual == doctest::Approx(rep0.force_residual).epsilon(1e-14));
    CHECK(rep.couple_residual(0) ==
          doctest::Approx(rep0.couple_residual(0)).scale(1.0).epsilon(1e-14));
    CHECK(rep.couple_residual(1) ==
          doctest::Approx(rep0.couple_residual(1)).scale(1.0).epsilon(1e-14));
  }
}

TEST_CASE("stiffness symmetry on a holed mesh, exterior region") {
  DomainSpec dom = unit_square();
  DefectSpec s;
  s.shape = DefectShape::Rectangle;
  s.width = s.height = 0.2;
  const Mesh m = build_plate_mesh(dom, s, 0.1);
  const auto sys = assemble_stiffness(m, unit_material(), ActiveRegion::Exterior);
  Eigen::SparseMatrix<double> D = Eigen::SparseMatrix<double>(sys.K.transpose()) - sys.K;
  double dnorm = 0.0, knorm = 0.0;
  for (int k = 0; k < D.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(D, k); it; ++it)
      dnorm = std::max(dnorm, std::abs(it.value()));
  for (int k = 0; k < sys.K.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, k); it; ++it)
      knorm = std::max(knorm, std::abs(it.value()));
  CHECK(dnorm <= 1e-14 * knorm);
}
