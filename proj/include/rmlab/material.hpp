#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace rmlab {

/// Constant Lame moduli with their a-priori ellipticity bounds.
struct LameField {
  double lambda = 1.0;
  double mu = 1.0;
  double alpha0 = 0.5;  // mu >= alpha0
  double gamma0 = 0.5;  // 2 mu + 3 lambda >= gamma0
  double alpha1 = 3.0;  // |lambda| + |mu| <= alpha1
};

/// Isotropic Reissner-Mindlin constitutive data: shear scalar S = h*mu and
/// bending tensor P A = B[(1-nu) sym(A) + nu tr(A) I].
struct PlateMaterial {
  LameField lame;
  double h = 0.1;  // plate thickness

  double shear_modulus() const { return h * lame.mu; }  // S
  double young() const {
    return lame.mu * (2.0 * lame.mu + 3.0 * lame.lambda) / (lame.mu + lame.lambda);
  }
  double poisson() const { return lame.lambda / (2.0 * (lame.mu + lame.lambda)); }
  double bending_stiffness() const {  // B
    const double nu = poisson();
    return young() * h * h * h / (12.0 * (1.0 - nu * nu));
  }
  double xi0() const { return std::min(2.0 * lame.alpha0, lame.gamma0); }
  double xi1() const { return 2.0 * lame.alpha1; }
};

/// Applies the bending tensor: B[(1-nu) sym(A) + nu tr(A) I].
Eigen::Matrix2d bending_apply(const PlateMaterial& m, const Eigen::Matrix2d& A);

/// P A . C as a bilinear form (equals bending_apply(m,A).cwise C summed).
double bending_pair(const PlateMaterial& m, const Eigen::Matrix2d& A,
                    const Eigen::Matrix2d& C);

struct MaterialCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
};

struct MaterialReport {
  std::vector<MaterialCheck> checks;
  bool pass = true;
};

/// Verifies strong convexity, the regularity bound and the ellipticity
/// sandwich for the bending form on a probe set of matrices.
MaterialReport check_material(const PlateMaterial& m);

}  // namespace rmlab
