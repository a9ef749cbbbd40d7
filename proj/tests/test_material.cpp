#include <doctest.h>

#include <random>

#include "rmlab/material.hpp"

using namespace rmlab;

namespace {
PlateMaterial unit_material() {
  PlateMaterial m;
  m.lame = {1.0, 1.0, 0.5, 0.5, 3.0};
  m.h = 0.1;
  return m;
}
}  // namespace

TEST_CASE("derived constants for lambda=mu=1, h=0.1") {
  const PlateMaterial m = unit_material();
  CHECK(m.poisson() == doctest::Approx(0.25));
  CHECK(m.young() == doctest::Approx(2.5));
  CHECK(m.bending_stiffness() == doctest::Approx(2.5e-3 / 11.25));
  CHECK(m.shear_modulus() == doctest::Approx(0.1));
}

TEST_CASE("bending tensor on the axis probe: PA.A = B") {
  const PlateMaterial m = unit_material();
  Eigen::Matrix2d A;
  A << 1, 0, 0, 0;  // e1 x e1
  const double q = bending_pair(m, A, A);
  CHECK(q == doctest::Approx(2.2222e-4).epsilon(1e-4));
  CHECK(q == doctest::Approx(m.bending_stiffness()));
}

TEST_CASE("bending tensor annihilates skew matrices") {
  const PlateMaterial m = unit_material();
  Eigen::Matrix2d A;
  A << 0, 1, -1, 0;
  CHECK(bending_apply(m, A).norm() == doctest::Approx(0.0));
}

TEST_CASE("bending of the identity: P I = B(1+nu) I") {
  const PlateMaterial m = unit_material();
  const Eigen::Matrix2d R = bending_apply(m, Eigen::Matrix2d::Identity());
  const double expected = m.bending_stiffness() * (1.0 + m.poisson());
  CHECK(R(0, 0) == doctest::Approx(expected));
  CHECK(R(1, 1) == doctest::Approx(expected));
  CHECK(R(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("bending form is symmetric and elliptic on random matrices") {
  const PlateMaterial m = unit_material();
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const double lo = m.h * m.h * m.h / 12.0 * m.xi0();
  const double hi = m.h * m.h * m.h / 12.0 * m.xi1();
  for (int k = 0; k < 1000; ++k) {
    Eigen::Matrix2d A, B;
    A << uni(rng), uni(rng), uni(rng), uni(rng);
    B << uni(rng), uni(rng), uni(rng), uni(rng);
    const double ab = bending_pair(m, A, B);
    const double ba = bending_pair(m, B, A);
    CHECK(std::abs(ab - ba) <= 1e-14 * std::max(1.0, std::abs(ab)));
    const Eigen::Matrix2d symA = 0.5 * (A + A.transpose());
    const double s2 = (symA.array() * symA.array()).sum();
    const double q = bending_pair(m, A, A);
    CHECK(q >= lo * s2 * (1.0 - 1e-12));
    CHECK(q <= hi * s2 * (1.0 + 1e-12));
  }
}

TEST_CASE("poisson ratio range under strong convexity") {
  for (double lambda : {-0.4, 0.0, 1.0, 10.0}) {
    PlateMaterial m = unit_material();
    m.lame.lambda = lambda;
    if (2.0 * m.lame.mu + 3.0 * lambda < m.lame.gamma0) continue;
    CHECK(m.poisson() > -1.0);
    CHECK(m.poisson() < 0.5);
    CHECK(m.bending_stiffness() > 0.0);
  }
}

TEST_CASE("check_material verdicts") {
  SUBCASE("healthy material passes") {
    const auto rep = check_material(unit_material());
    CHECK(rep.pass);
  }
  SUBCASE("weak shear fails") {
    PlateMaterial m = unit_material();
    m.lame.mu = 0.1;
    const auto rep = check_material(m);
    CHECK_FALSE(rep.pass);
    bool found = false;
    for (const auto& c : rep.checks)
      if (c.name.find("shear convexity") != std::string::npos && !c.pass) found = true;
    CHECK(found);
  }
  SUBCASE("negative bulk fails") {
    PlateMaterial m = unit_material();
    m.lame.lambda = -1.0;
    const auto rep = check_material(m);
    CHECK_FALSE(rep.pass);
    bool found = false;
    for (const auto& c : rep.checks)
      if (c.name.find("bulk convexity") != std::string::npos && !c.pass) found = true;
    CHECK(found);
  }
}
