#include <doctest.h>

#include <cmath>

#include "rmlab/verify.hpp"

using namespace rmlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

PlateSolution bending_interpolant(const Mesh& m, double kappa) {
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

TEST_CASE("Poincare C1 on the unit square approaches 1/pi^2") {
  Mesh m = build_plate_mesh(unit_square(), std::nullopt, 1.0 / 8);
  double prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    if (level > 0) m = refine(m);
    const auto est = estimate_inequality_constant(InequalityConstant::PoincareC1, m, 1.0);
    // Discrete constants under-approximate the continuum value and grow
    // under refinement (nested spaces).
    CHECK(est.value <= 1.0 / (kPi * kPi) * (1.0 + 1e-9));
    CHECK(est.value >= prev - 1e-12);
    prev = est.value;
    if (level == 2) CHECK(est.value == doctest::Approx(1.0 / (kPi * kPi)).epsilon(0.02));
  }
}

TEST_CASE("Poincare C2 with the boundary-mean constraint is finite and larger") {
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 1.0 / 16);
  const auto c1 = estimate_inequality_constant(InequalityConstant::PoincareC1, m, 1.0);
  const auto c2 = estimate_inequality_constant(InequalityConstant::PoincareC2, m, 1.0);
  CHECK(std::isfinite(c2.value));
  CHECK(c2.value > 0.0);
  // The raw eigenvalue with the weaker gauge dominates the C1 one.
  CHECK(c2.eigenvalue >= c1.eigenvalue * (1.0 - 1e-9));
}

TEST_CASE("trace Poincare C3 on a shell around the defect") {
  const Mesh m = build_plate_mesh(unit_square(), centered_square(0.2), 0.025);
  const auto est =
      estimate_inequality_constant(InequalityConstant::TracePoincareC3, m, 0.1);
  CHECK(std::isfinite(est.value));
  CHECK(est.value > 0.0);
}

TEST_CASE("Korn2: witness lower bound and refinement monotonicity") {
  Mesh m = build_plate_mesh(unit_square(), std::nullopt, 1.0 / 8);
  double prev = 1.0;
  for (int level = 0; level < 3; ++level) {
    if (level > 0) m = refine(m);
    const auto est = estimate_inequality_constant(InequalityConstant::Korn2, m, 1.0);
    // phi = (x1, 0) is admissible with ratio exactly 1, so the max is >= 1.
    CHECK(est.value >= 1.0 - 1e-10);
    CHECK(est.value >= prev - 1e-9);
    prev = est.value;
  }
}

TEST_CASE("generalized Korn: finite and refinement-stable to 5%") {
  Mesh m = build_plate_mesh(unit_square(), std::nullopt, 1.0 / 8);
  std::vector<double> values;
  for (int level = 0; level < 3; ++level) {
    if (level > 0) m = refine(m);
    const auto est =
        estimate_inequality_constant(InequalityConstant::GeneralizedKorn, m, 1.0);
    CHECK(std::isfinite(est.value));
    CHECK(est.value > 0.0);
    values.push_back(est.value);
  }
  CHECK(std::abs(values[2] - values[1]) <= 0.05 * values[2]);
}

TEST_CASE("disc energy ratio and the LPS probe") {
  const PlateMaterial mat = unit_material();
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 1.0 / 32);
  const auto s = bending_interpolant(m, 1.0);
  SUBCASE("disc covering the whole domain gives ratio 1") {
    CHECK(disc_energy_ratio(m, s, 0.25, 2.0, {0, 0}) == doctest::Approx(1.0));
  }
  SUBCASE("constant density: ratio equals the area fraction") {
    const double rho = 0.2;
    const double ratio = disc_energy_ratio(m, s, 0.25, rho, {0, 0});
    CHECK(ratio == doctest::Approx(kPi * rho * rho / 1.0).epsilon(0.01));
  }
  SUBCASE("probe filters inadmissible centers and errors when empty") {
    const std::vector<Point2> centers{{0.0, 0.0}, {0.4, 0.4}};
    const auto probe = lps_probe(m, s, 0.25, 0.06, centers, 0.5);
    CHECK(probe.admissible == 1);  // clearance 7/(2*0.5)*0.06 = 0.42 > dist(0.4,0.4)
    CHECK(probe.min_ratio > 1e-6);
    CHECK_THROWS_AS(lps_probe(m, s, 0.25, 0.2, centers, 0.5), std::invalid_argument);
  }
}

TEST_CASE("verification reports for a full cavity/rigid instance") {
  const PlateMaterial mat = unit_material();
  const Mesh m = build_plate_mesh(unit_square(), centered_square(0.2), 0.05);
  const BoundaryLoad load = make_preset_load(m, mat, "pure_bending_x", 1.0);
  const auto ref = solve_reference(m, mat, load);
  SUBCASE("cavity sandwich passes") {
    const auto cav = solve_cavity(m, mat, load);
    const auto ext = dirichlet_extension(m, mat, cav);
    const auto rep = verify_cavity_sandwich(m, mat, ref, cav, ext);
    CHECK(rep.pass());
    REQUIRE(rep.checks.size() == 2);
    for (const auto& c : rep.checks) CHECK_FALSE(c.vacuous);
  }
  SUBCASE("rigid sandwich and balances pass") {
    const auto rig = solve_rigid(m, mat, load);
    const auto re = boundary_reactions(m, mat, load, rig);
    const auto rep = verify_rigid_sandwich(m, mat, ref, rig, re);
    CHECK(rep.pass());
    REQUIRE(rep.checks.size() == 4);
  }
  SUBCASE("traction bound is finite and scale-consistent") {
    const auto rig = solve_rigid(m, mat, load);
    const auto re = boundary_reactions(m, mat, load, rig);
    DomainSpec dom = unit_square();
    dom.finalize();
    const auto geom = defect_parameters(centered_square(0.2), dom);
    const auto tb = verify_traction_bound(m, mat, rig, re, dom.rho0, geom.r_D);
    CHECK_FALSE(tb.vacuous);
    CHECK(std::isfinite(tb.ratio));
    CHECK(tb.ratio > 0.0);
    // Refinement stability within 20%.
    const Mesh m2 = refine(m);
    const BoundaryLoad l2 = refine_load(load);
    const auto rig2 = solve_rigid(m2, mat, l2);
    const auto re2 = boundary_reactions(m2, mat, l2, rig2);
    const auto tb2 = verify_traction_bound(m2, mat, rig2, re2, dom.rho0, geom.r_D);
    CHECK(std::abs(tb2.ratio - tb.ratio) <= 0.2 * std::max(tb.ratio, tb2.ratio));
  }
}

TEST_CASE("convergence analysis") {
  // Synthetic second-order sequence W(h) = 1 - h^2.
  std::vector<ConvergenceRow> rows;
  for (int l = 0; l < 4; ++l) {
    const double h = 0.2 / (1 << l);
    rows.push_back({l, h, 1.0 - h * h, 0.0, 0.1 + 0.01 * l});
  }
  const auto tab = analyze_convergence(rows);
  CHECK(tab.W0_order == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(tab.W0_extrapolated == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tab.monotone_t);
  rows[2].t = 0.5;  // break monotonicity
  CHECK_FALSE(analyze_convergence(rows).monotone_t);
}
