#include "rmlab/material.hpp"

#include <cmath>
#include <random>

namespace rmlab {

Eigen::Matrix2d bending_apply(const PlateMaterial& m, const Eigen::Matrix2d& A) {
  const double nu = m.poisson();
  const double B = m.bending_stiffness();
  const Eigen::Matrix2d sym = 0.5 * (A + A.transpose());
  return B * ((1.0 - nu) * sym + nu * A.trace() * Eigen::Matrix2d::Identity());
}

double bending_pair(const PlateMaterial& m, const Eigen::Matrix2d& A,
                    const Eigen::Matrix2d& C) {
  const double nu = m.poisson();
  const double B = m.bending_stiffness();
  const Eigen::Matrix2d symA = 0.5 * (A + A.transpose());
  const Eigen::Matrix2d symC = 0.5 * (C + C.transpose());
  return B * ((1.0 - nu) * (symA.array() * symC.array()).sum() +
              nu * A.trace() * C.trace());
}

MaterialReport check_material(const PlateMaterial& m) {
  MaterialReport rep;
  const auto add = [&](std::string name, double value, double bound, bool ge) {
    MaterialCheck c;
    c.name = std::move(name);
    c.value = value;
    c.bound = bound;
    c.margin = ge ? value - bound : bound - value;
    c.pass = c.margin >= 0.0;
    rep.pass = rep.pass && c.pass;
    rep.checks.push_back(std::move(c));
  };
  add("shear convexity (mu >= alpha0)", m.lame.mu, m.lame.alpha0, true);
  add("bulk convexity (2mu+3lambda >= gamma0)", 2.0 * m.lame.mu + 3.0 * m.lame.lambda,
      m.lame.gamma0, true);
  add("regularity (|lambda|+|mu| <= alpha1)",
      std::abs(m.lame.lambda) + std::abs(m.lame.mu), m.lame.alpha1, false);
  add("shear ellipticity lower (S >= h*alpha0)", m.shear_modulus(),
      m.h * m.lame.alpha0, true);
  add("shear ellipticity upper (S <= h*alpha1)", m.shear_modulus(),
      m.h * m.lame.alpha1, false);

  // Ellipticity sandwich of the bending form on probe matrices.
  const double lo = m.h * m.h * m.h / 12.0 * m.xi0();
  const double hi = m.h * m.h * m.h / 12.0 * m.xi1();
  std::vector<Eigen::Matrix2d> probes;
  probes.push_back(Eigen::Matrix2d::Identity());
  probes.push_back((Eigen::Matrix2d() << 1, 0, 0, 0).finished());
  probes.push_back((Eigen::Matrix2d() << 0, 1, 1, 0).finished());
  probes.push_back((Eigen::Matrix2d() << 0, 1, -1, 0).finished());
  probes.push_back((Eigen::Matrix2d() << 1, 0, 0, -1).finished());
  std::mt19937 rng(20240613);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int k = 0; k < 64; ++k) {
    Eigen::Matrix2d A;
    A << uni(rng), uni(rng), uni(rng), uni(rng);
    probes.push_back(A);
  }
  double min_lo = std::numeric_limits<double>::infinity();
  double min_hi = std::numeric_limits<double>::infinity();
  for (const auto& A : probes) {
    const Eigen::Matrix2d sym = 0.5 * (A + A.transpose());
    const double s2 = (sym.array() * sym.array()).sum();
    if (s2 <= 0.0) continue;
    const double q = bending_pair(m, A, A);
    min_lo = std::min(min_lo, q - lo * s2);
    min_hi = std::min(min_hi, hi * s2 - q);
  }
  add("bending ellipticity lower (PA.A >= h^3/12 xi0 |sym A|^2)", min_lo, 0.0, true);
  add("bending ellipticity upper (PA.A <= h^3/12 xi1 |sym A|^2)", min_hi, 0.0, true);
  return rep;
}

}  // namespace rmlab
