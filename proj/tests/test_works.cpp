#include <doctest.h>

#include "rmlab/estimates.hpp"
#include "rmlab/works.hpp"

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

DefectSpec centered_square(double side) {
  DefectSpec s;
  s.shape = DefectShape::Rectangle;
  s.width = s.height = side;
  return s;
}

struct CavityInstance {
  Mesh mesh;
  BoundaryLoad load;
  PlateSolution ref, cav, ext;
};

CavityInstance cavity_instance(double side = 0.2, double h = 0.05,
                               const std::string& preset = "pure_bending_x") {
  CavityInstance in;
  in.mesh = build_plate_mesh(unit_square(), centered_square(side), h);
  in.load = make_preset_load(in.mesh, unit_material(), preset, 1.0);
  in.ref = solve_reference(in.mesh, unit_material(), in.load);
  in.cav = solve_cavity(in.mesh, unit_material(), in.load);
  in.ext = dirichlet_extension(in.mesh, unit_material(), in.cav);
  return in;
}

// Interpolates the exact pure-bending state phi = (k x1, 0), w = -k x1^2/2.
PlateSolution pure_bending_interpolant(const Mesh& m, double kappa) {
  PlateSolution s;
  s.kind = SolutionKind::Reference;
  s.node_active.assign(m.node_count(), 1);
  s.phi1.resize(m.node_count());
  s.phi2.setZero(m.node_count());
  s.w.resize(m.node_count());
  for (int n = 0; n < m.node_count(); ++n) {
    s.phi1(n) = kappa * m.nodes[n].x1;
    s.w(n) = -0.5 * kappa * m.nodes[n].x1 * m.nodes[n].x1;
  }
  return s;
}

}  // namespace

TEST_CASE("work of the zero load is zero") {
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 0.25);
  BoundaryLoad zero;
  zero.edges.resize(m.boundary_edges.size());
  const auto s = solve_reference(m, unit_material(), zero);
  CHECK(work_boundary(m, zero, s) == doctest::Approx(0.0));
}

TEST_CASE("pure-bending reference work on the unit square") {
  const PlateMaterial mat = unit_material();
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 1.0 / 32);
  const BoundaryLoad load = make_preset_load(m, mat, "pure_bending_x", 1.0);
  const auto s = solve_reference(m, mat, load);
  CHECK(work_boundary(m, load, s) ==
        doctest::Approx(2.2222e-4).epsilon(0.01));
}

TEST_CASE("work duality: boundary and energy forms agree") {
  const auto in = cavity_instance();
  const PlateMaterial mat = unit_material();
  for (const PlateSolution* s : {&in.ref, &in.cav}) {
    const auto rep = make_work_report(in.mesh, mat, in.load, *s);
    CHECK(rep.duality_gap <= 1e-8);
  }
  const auto rig = solve_rigid(in.mesh, mat, in.load);
  const auto rep = make_work_report(in.mesh, mat, in.load, rig);
  CHECK(rep.duality_gap <= 1e-8);
}

TEST_CASE("work is invariant under rigid-triple shifts of the solution") {
  const auto in = cavity_instance(0.2, 0.1);
  auto shifted = in.ref;
  shifted.shift_by({{-0.2, 0.5}, 1.3}, in.mesh);
  const double w0 = work_boundary(in.mesh, in.load, in.ref);
  const double w1 = work_boundary(in.mesh, in.load, shifted);
  CHECK(w1 == doctest::Approx(w0).epsilon(1e-10));
}

TEST_CASE("energy of rigid triples vanishes") {
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 0.25);
  PlateSolution s;
  s.kind = SolutionKind::Reference;
  s.node_active.assign(m.node_count(), 1);
  s.phi1.setZero(m.node_count());
  s.phi2.setZero(m.node_count());
  s.w.setZero(m.node_count());
  s.shift_by({{0.4, -1.1}, 0.3}, m);
  CHECK(work_energy(m, unit_material(), s, ActiveRegion::Full) <= 1e-14);
}

TEST_CASE("pure-bending energy restricted to the defect block") {
  // For the interpolated constant-curvature state the bending energy over
  // the centered 0.2 x 0.2 square is B k^2 * 0.04; the interpolation adds an
  // O(h^2) shear remainder.
  const PlateMaterial mat = unit_material();
  const Mesh m = build_plate_mesh(unit_square(), centered_square(0.2), 0.0125);
  const auto s = pure_bending_interpolant(m, 1.0);
  const double expected = mat.bending_stiffness() * 0.04;
  CHECK(work_energy(m, mat, s, ActiveRegion::Defect) ==
        doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("energy density field") {
  const PlateMaterial mat = unit_material();
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 1.0 / 32);
  SUBCASE("rigid triple gives identically zero density") {
    PlateSolution s;
    s.kind = SolutionKind::Reference;
    s.node_active.assign(m.node_count(), 1);
    s.phi1.setZero(m.node_count());
    s.phi2.setZero(m.node_count());
    s.w.setZero(m.node_count());
    s.shift_by({{1.0, 2.0}, -0.5}, m);
    for (double e : energy_density_field(m, s, 1.0)) CHECK(e <= 1e-13);
  }
  SUBCASE("pure bending interpolant: E -> 1 with vanishing shear remainder") {
    const auto s = pure_bending_interpolant(m, 1.0);
    const auto E = energy_density_field(m, s, 1.0);
    for (double e : E) {
      CHECK(e >= 1.0 - 1e-12);
      CHECK(e <= 1.0 + 5e-4);  // O(h^2) shear pollution
    }
  }
  SUBCASE("density scales linearly with the load") {
    const auto s1 = pure_bending_interpolant(m, 1.0);
    const auto s3 = pure_bending_interpolant(m, -3.0);
    const auto E1 = energy_density_field(m, s1, 1.0);
    const auto E3 = energy_density_field(m, s3, 1.0);
    for (std::size_t t = 0; t < E1.size(); ++t)
      CHECK(E3[t] == doctest::Approx(3.0 * E1[t]).epsilon(1e-12));
  }
}

TEST_CASE("Lemma 5.1 discrete identities (cavity)") {
  for (const std::string preset : {"pure_bending_x", "twist"}) {
    const auto in = cavity_instance(0.2, 0.05, preset);
    const PlateMaterial mat = unit_material();
    const double W0 = work_energy(in.mesh, mat, in.ref, ActiveRegion::Full);
    const double Wc = work_energy(in.mesh, mat, in.cav, ActiveRegion::Exterior);
    const double dW = Wc - W0;
    CHECK(dW > 0.0);
    // Identity: cross energy over D equals the work gap.
    const double cross = cross_energy_cavity(in.mesh, mat, in.ref, in.ext);
    CHECK(std::abs(dW - cross) <= 1e-6 * dW);
    // Left inequality: defect energy of the reference state.
    const double lhs = work_energy(in.mesh, mat, in.ref, ActiveRegion::Defect);
    CHECK(lhs <= dW * (1.0 + 1e-8));
    // Self-pairing sanity: replacing the cavity by the reference state gives
    // the defect energy of the reference.
    const double self_pair = energy_bilinear(in.mesh, mat, in.ref, in.ref,
                                             ActiveRegion::Defect);
    CHECK(self_pair == doctest::Approx(lhs).epsilon(1e-12));
  }
}

TEST_CASE("Lemma 6.1 discrete identities (rigid)") {
  const PlateMaterial mat = unit_material();
  for (const std::string preset : {"pure_bending_x", "twist"}) {
    const Mesh m = build_plate_mesh(unit_square(), centered_square(0.2), 0.05);
    const BoundaryLoad load = make_preset_load(m, mat, preset, 1.0);
    const auto ref = solve_reference(m, mat, load);
    const auto rig = solve_rigid(m, mat, load);
    const auto re = boundary_reactions(m, mat, load, rig);
    const double W0 = work_energy(m, mat, ref, ActiveRegion::Full);
    const double Wr = work_energy(m, mat, rig, ActiveRegion::Full);
    const double dW = W0 - Wr;
    CHECK(dW > 0.0);
    const double bterm = lemma61_boundary_term(m, ref, re);
    CHECK(std::abs(dW - bterm) <= 1e-6 * dW);
    const double lhs = work_energy(m, mat, ref, ActiveRegion::Defect);
    CHECK(lhs <= dW * (1.0 + 1e-8));
    // The boundary term annihilates rigid triples (balance laws).
    PlateSolution triple;
    triple.kind = SolutionKind::Reference;
    triple.node_active.assign(m.node_count(), 1);
    triple.phi1.setZero(m.node_count());
    triple.phi2.setZero(m.node_count());
    triple.w.setZero(m.node_count());
    triple.shift_by({{0.8, 0.3}, -0.2}, m);
    double scale = 0.0;
    for (int i = 0; i < re.weight_q.size(); ++i)
      scale += std::abs(re.weight_q(i)) + std::hypot(re.weight_m1(i), re.weight_m2(i));
    CHECK(std::abs(lemma61_boundary_term(m, triple, re)) <= 1e-10 * scale);
    // Gauge shift of the reference leaves the boundary term unchanged.
    PlateSolution shifted = ref;
    shifted.shift_by({{-0.4, 0.9}, 0.6}, m);
    CHECK(lemma61_boundary_term(m, shifted, re) ==
          doctest::Approx(bterm).epsilon(1e-9));
  }
}

TEST_CASE("gap report and load-scaling invariance of t") {
  const PlateMaterial mat = unit_material();
  const Mesh m = build_plate_mesh(unit_square(), centered_square(0.2), 0.05);
  const BoundaryLoad base = make_preset_load(m, mat, "pure_bending_x", 1.0);
  double t_ref = 0.0;
  for (const double s : {1e-3, 1.0, 1e3}) {
    const BoundaryLoad load = base.scaled(s);
    const auto ref = solve_reference(m, mat, load);
    const auto cav = solve_cavity(m, mat, load);
    const auto gap = make_gap_report(m, mat, ref, cav);
    CHECK(gap.t >= 0.0);
    if (s == 1.0)
      t_ref = gap.t;
    else
      CHECK(gap.t == doctest::Approx(t_ref).epsilon(1e-10));
  }
  // Rigid gap sits in [0, 1).
  const auto ref = solve_reference(m, mat, base);
  const auto rig = solve_rigid(m, mat, base);
  const auto gap = make_gap_report(m, mat, ref, rig);
  CHECK(gap.t >= 0.0);
  CHECK(gap.t < 1.0);
}
