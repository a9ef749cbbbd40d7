#include <doctest.h>

#include <cmath>

#include "rmlab/estimates.hpp"
#include "rmlab/works.hpp"

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

}  // namespace

TEST_CASE("Psi unit values and properties") {
  CHECK(psi(0.0) == 0.0);
  CHECK(psi(1.0) == 0.5);
  CHECK(psi(3.0) == 2.25);
  CHECK_THROWS_AS(psi(-0.1), std::domain_error);
  double prev = -1.0;
  for (double t = 0.0; t <= 5.0; t += 0.05) {
    const double v = psi(t);
    CHECK(v > prev);  // strictly increasing away from 0
    CHECK(v <= t + 1e-15);
    if (t <= 1.0) CHECK(v <= t * t + 1e-15);
    prev = v;
  }
}

TEST_CASE("Phi unit values and domain") {
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(0.5) == doctest::Approx(0.5));
  CHECK(phi(0.9) == doctest::Approx(8.1));
  CHECK_THROWS_AS(phi(1.0), std::domain_error);
  CHECK_THROWS_AS(phi(1.5), std::domain_error);
  CHECK_THROWS_AS(phi(-0.1), std::domain_error);
  double prev = -1.0;
  for (double t = 0.0; t < 1.0; t += 0.01) {
    const double v = phi(t);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("bound evaluators") {
  CHECK(upper_bound(0.0, 2.0, 1.0) == 0.0);
  CHECK(upper_bound(0.05, 2.0, 1.0) == doctest::Approx(0.1));
  CHECK(lower_bound(0.0, 0.5, 1.0, SolutionKind::Cavity) == 0.0);
  CHECK(lower_bound(1.0, 0.5, 1.0, SolutionKind::Cavity) == doctest::Approx(0.25));
  CHECK(lower_bound(0.5, 1.0, 2.0, SolutionKind::Rigid) == doctest::Approx(2.0));
}

TEST_CASE("calibration: singleton and nested families") {
  SUBCASE("singleton: the upper bound is tight by construction") {
    const Calibration cal = calibrate({{0.04, 0.1}}, SolutionKind::Cavity, 1.0);
    CHECK(upper_bound(0.1, cal.K_hat, 1.0) == doctest::Approx(0.04));
    CHECK(lower_bound(0.1, cal.lower_hat, 1.0, SolutionKind::Cavity) ==
          doctest::Approx(0.04));
  }
  SUBCASE("two members: both bounds hold") {
    const std::vector<CalibrationInstance> fam{{0.04, 0.08}, {0.09, 0.21}};
    const Calibration cal = calibrate(fam, SolutionKind::Cavity, 1.0);
    for (const auto& in : fam) {
      CHECK(lower_bound(in.t, cal.lower_hat, 1.0, SolutionKind::Cavity) <=
            in.area_true * (1.0 + 1e-12));
      CHECK(in.area_true <= upper_bound(in.t, cal.K_hat, 1.0) * (1.0 + 1e-12));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(calibrate({}, SolutionKind::Cavity, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(calibrate({{0.04, 0.0}}, SolutionKind::Cavity, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("frequency: eigenmode closed form and scaling invariance") {
  const Mesh m = build_plate_mesh(unit_square(), std::nullopt, 1.0 / 16);
  const double rho0 = 0.25;
  SUBCASE("single boundary eigenmode as Q") {
    // Build the boundary pencil by hand: same construction as the module,
    // checked through the closed form F = (1 + rho0^2 lambda_k)^{1/4}.
    // Use the fourier preset with the couple closure stripped: on the
    // symmetric square the mode-2 interpolant is already force-balanced.
    BoundaryLoad load = make_preset_load(m, unit_material(), "fourier", 1.0, 2);
    // Remove the constant couple part: keep only Q.
    for (auto& e : load.edges) {
      e.m0.setZero();
      e.m1.setZero();
    }
    const auto rep = frequency(m, load, rho0);
    // The PL interpolant of cos(2 pi 2 s / L) is not an exact discrete
    // eigenvector, so compare against the closed form with the discrete
    // eigenvalue nearest to the continuum one lambda = (2 pi k / L)^2.
    const double lambda = std::pow(2.0 * kPi * 2.0 / 4.0, 2);
    const double closed = std::pow(1.0 + rho0 * rho0 * lambda, 0.25);
    CHECK(rep.F == doctest::Approx(closed).epsilon(0.02));
    CHECK(rep.F > 1.0);
  }
  SUBCASE("scaling invariance") {
    const BoundaryLoad base = make_preset_load(m, unit_material(), "twist", 1.0);
    const double F1 = frequency(m, base, rho0).F;
    for (double s : {1e-3, 1e3, 7.0})
      CHECK(frequency(m, base.scaled(s), rho0).F == doctest::Approx(F1).epsilon(1e-12));
  }
  SUBCASE("zero load rejected") {
    BoundaryLoad zero;
    zero.edges.resize(m.boundary_edges.size());
    CHECK_THROWS_AS(frequency(m, zero, rho0), std::invalid_argument);
  }
  SUBCASE("refinement stability within 2%") {
    BoundaryLoad load = make_preset_load(m, unit_material(), "fourier", 1.0, 2);
    const double F0 = frequency(m, load, rho0).F;
    Mesh fine = m;
    BoundaryLoad lf = load;
    for (int l = 0; l < 2; ++l) {
      fine = refine(fine);
      lf = refine_load(lf);
      CHECK(frequency(fine, lf, rho0).F == doctest::Approx(F0).epsilon(0.02));
    }
  }
}

TEST_CASE("hypothesis checks") {
  DomainSpec dom = unit_square();
  dom.finalize();
  DefectSpec s;
  s.shape = DefectShape::Rectangle;
  SUBCASE("centered square: fatness holds with full containment") {
    s.width = s.height = 0.2;
    const Mesh m = build_plate_mesh(dom, s, 0.05);
    const auto g = defect_parameters(s, dom);
    // rho0 = 0.25 for the unit square table entry: h1 rho0 = 0.3 * 0.25.
    const auto flags = check_hypotheses(m, g, 0.3, 0.2, dom.rho0);
    CHECK(flags.fatness);
    CHECK(flags.sifc);
    CHECK(flags.distance);
    CHECK(flags.r_small);
    CHECK(flags.all());
  }
  SUBCASE("thin sliver fails SIFC for moderate Q_D") {
    s.width = 0.5;
    s.height = 0.004;
    const Mesh m = build_plate_mesh(dom, s, 0.004);
    auto g = defect_parameters(s, dom);
    // The table gives Q_D = diam/r_D; a moderate a-priori Q_D (say 10)
    // cannot accommodate the sliver: diam > 10 r_D.
    g.Q_D = 10.0;
    const auto flags = check_hypotheses(m, g, 0.3, 0.2, dom.rho0);
    CHECK_FALSE(flags.sifc);
  }
  SUBCASE("defect close to the boundary fails the distance flag") {
    s.width = s.height = 0.1;
    s.center = {0.4, 0.0};  // 0.05 from the right edge
    const Mesh m = build_plate_mesh(dom, s, 0.025);
    const auto g = defect_parameters(s, dom);
    const auto flags = check_hypotheses(m, g, 0.3, 0.2, 1.0);  // d0 rho0 = 0.2
    CHECK_FALSE(flags.distance);
  }
}

TEST_CASE("size estimate report composes bounds and flags") {
  const Calibration cal{2.0, 0.5};
  HypothesisFlags flags;
  flags.fatness = flags.sifc = flags.distance = flags.r_small = true;
  const auto rep = make_size_estimate(0.1, 0.15, cal, SolutionKind::Cavity, 1.0,
                                      1.7, flags);
  CHECK(rep.upper == doctest::Approx(0.2));
  CHECK(rep.lower == doctest::Approx(0.5 * psi(0.1)));
  CHECK(rep.bounds_hold);
}
