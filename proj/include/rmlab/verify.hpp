#pragma once

#include <string>
#include <vector>

#include "rmlab/estimates.hpp"
#include "rmlab/works.hpp"

namespace rmlab {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // >= 0 means pass
  bool pass = false;
  bool vacuous = false;
};

struct VerificationReport {
  std::string instance_id;
  int mesh_level = 0;
  std::vector<CheckResult> checks;

  bool pass() const;
  void add(std::string name, double value, double bound, bool le,
           bool vacuous = false);
};

/// Lemma checks for a cavity instance:
///   (i)  int_D q(u0) <= deltaW (1 + eps)
///   (ii) |deltaW - cross_energy| <= 1e-6 deltaW
VerificationReport verify_cavity_sandwich(const Mesh& mesh, const PlateMaterial& material,
                                          const PlateSolution& reference,
                                          const PlateSolution& cavity,
                                          const PlateSolution& extension,
                                          QuadratureSpec quad = {});

/// Lemma checks for a rigid instance: the defect-energy inequality, the
/// boundary-term identity and the force/couple balance laws.
VerificationReport verify_rigid_sandwich(const Mesh& mesh, const PlateMaterial& material,
                                         const PlateSolution& reference,
                                         const PlateSolution& rigid,
                                         const BoundaryReactions& reactions,
                                         QuadratureSpec quad = {});

/// Force and couple balance of the contact actions on the defect boundary.
VerificationReport verify_balance(const Mesh& mesh, const BoundaryReactions& reactions);

enum class InequalityConstant : unsigned char {
  PoincareC1,
  PoincareC2,
  TracePoincareC3,
  Korn2,
  GeneralizedKorn,
};

struct ConstantEstimate {
  InequalityConstant name = InequalityConstant::PoincareC1;
  double value = 0.0;       // constant in the inequality's own normalization
  double eigenvalue = 0.0;  // extremal Rayleigh quotient
  double rho = 0.0;
  int iterations = 0;
};

/// Sharp discrete constant of the named inequality on the meshed domain, as
/// the extremal Rayleigh quotient of the corresponding generalized
/// eigenproblem (inverse/power iteration on the factorized pencil, relative
/// stagnation 1e-8). TracePoincareC3 expects a mesh with a Defect region
/// (G = D) and uses the exterior shell of width rho.
ConstantEstimate estimate_inequality_constant(InequalityConstant which,
                                              const Mesh& mesh, double rho);

/// Ratio of local to global squared energy density over a disc.
double disc_energy_ratio(const Mesh& mesh, const PlateSolution& solution,
                         double rho0, double rho, Point2 center);

struct LpsProbe {
  double min_ratio = 0.0;
  int admissible = 0;
  std::vector<double> ratios;
};

/// Lipschitz-propagation-of-smallness probe: min over admissible centers
/// (those in Omega_{(7/(2 theta)) rho}) of the disc energy ratio.
LpsProbe lps_probe(const Mesh& mesh, const PlateSolution& reference, double rho0,
                   double rho, const std::vector<Point2>& centers,
                   double theta_hat = 0.5);

struct TractionBoundReport {
  double lhs = 0.0;       // int_dD |(P grad phi)n|^2 + rho0^2 |S(...) . n|^2
  double rhs_core = 0.0;  // (rho0/r_D) int_ext rho0^5 |sym grad phi|^2 + rho0^3 |shear|^2
  double ratio = 0.0;     // empirical constant C-hat
  bool vacuous = false;
};

/// Empirical version of the contact-action bound; asserts only finiteness,
/// the constant itself is reported for refinement-stability studies.
TractionBoundReport verify_traction_bound(const Mesh& mesh, const PlateMaterial& material,
                                          const PlateSolution& rigid,
                                          const BoundaryReactions& reactions,
                                          double rho0, double r_D,
                                          QuadratureSpec quad = {});

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  double W0 = 0.0;
  double Wdef = 0.0;
  double t = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double W0_order = 0.0;        // observed order from the last three levels
  double W0_extrapolated = 0.0;  // Richardson limit
  bool monotone_t = true;
};

/// Observed orders and Richardson limits from per-level work values.
ConvergenceTable analyze_convergence(const std::vector<ConvergenceRow>& rows);

}  // namespace rmlab
