#include "rmlab/estimates.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rmlab {

double psi(double t) {
  if (t < 0.0) throw std::domain_error("Psi requires t >= 0");
  return t * t / (1.0 + t);
}

double phi(double t) {
  if (t < 0.0 || t >= 1.0)
    throw std::domain_error("Phi requires 0 <= t < 1 (t >= 1 signals W_r <= 0)");
  return t * t / (1.0 - t);
}

double upper_bound(double t, double K, double rho0) {
  if (t < 0.0 || K <= 0.0) throw std::domain_error("upper bound requires t >= 0, K > 0");
  return K * rho0 * rho0 * t;
}

double lower_bound(double t, double k, double rho0, SolutionKind kind) {
  const double profile = (kind == SolutionKind::Rigid) ? phi(t) : psi(t);
  return k * rho0 * rho0 * profile;
}

FrequencyReport frequency(const Mesh& mesh, const BoundaryLoad& load, double rho0) {
  if (load.is_zero()) throw std::invalid_argument("frequency of a zero load");
  const auto loops = mesh.boundary_loops(BoundaryTag::Outer);
  if (loops.size() != 1)
    throw std::invalid_argument("frequency requires a single outer boundary loop");
  const auto& loop = loops[0];
  const int n = static_cast<int>(loop.size());
  std::vector<int> pos(mesh.node_count(), -1);
  for (int i = 0; i < n; ++i) pos[loop[i]] = i;

  // Cyclic P1 Laplace-Beltrami pencil on the polyline.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double L = norm(mesh.nodes[loop[j]] - mesh.nodes[loop[i]]);
    A(i, i) += 1.0 / L;
    A(j, j) += 1.0 / L;
    A(i, j) -= 1.0 / L;
    A(j, i) -= 1.0 / L;
    M(i, i) += L / 3.0;
    M(j, j) += L / 3.0;
    M(i, j) += L / 6.0;
    M(j, i) += L / 6.0;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, M);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("boundary eigenproblem failed");
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const Eigen::MatrixXd V = eig.eigenvectors();  // M-orthonormal

  // Load moments against the P1 trace basis.
  Eigen::VectorXd mq = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd mm1 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd mm2 = Eigen::VectorXd::Zero(n);
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    if (be.tag != BoundaryTag::Outer) continue;
    const auto& el = load.edges[e];
    const double L = norm(mesh.nodes[be.b] - mesh.nodes[be.a]);
    const int ia = pos[be.a], ib = pos[be.b];
    mq(ia) += L * (el.q0 / 3.0 + el.q1 / 6.0);
    mq(ib) += L * (el.q0 / 6.0 + el.q1 / 3.0);
    mm1(ia) += L * (el.m0(0) / 3.0 + el.m1(0) / 6.0);
    mm1(ib) += L * (el.m0(0) / 6.0 + el.m1(0) / 3.0);
    mm2(ia) += L * (el.m0(1) / 3.0 + el.m1(1) / 6.0);
    mm2(ib) += L * (el.m0(1) / 6.0 + el.m1(1) / 3.0);
  }
  const auto neg_norm2 = [&](const Eigen::VectorXd& m, double s) {
    const Eigen::VectorXd c = V.transpose() * m;
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
      sum += std::pow(1.0 + rho0 * rho0 * std::max(lambda(k), 0.0), -s) * c(k) * c(k);
    return sum;
  };
  const auto combined = [&](double s) {
    const double normM = std::sqrt(neg_norm2(mm1, s) + neg_norm2(mm2, s));
    const double normQ = std::sqrt(neg_norm2(mq, s));
    return normM + rho0 * normQ;
  };
  FrequencyReport rep;
  rep.norm_half = combined(0.5);
  rep.norm_one = combined(1.0);
  if (rep.norm_one <= 0.0) throw std::invalid_argument("frequency of a zero load");
  rep.F = rep.norm_half / rep.norm_one;
  return rep;
}

HypothesisFlags check_hypotheses(const Mesh& mesh, const DefectGeometry& geom,
                                 double h1, double d0, double rho0) {
  HypothesisFlags flags;
  const double areaD = mesh.defect_area();
  const double fat = fatness_measure(mesh, h1 * rho0);
  flags.fatness_margin = fat - 0.5 * areaD;
  flags.fatness = flags.fatness_margin >= 0.0;
  flags.sifc_margin = geom.Q_D * geom.r_D - geom.diam;
  flags.sifc = flags.sifc_margin >= -1e-12 * geom.diam;
  flags.distance_margin = geom.dist_to_outer - d0 * rho0;
  flags.distance = flags.distance_margin >= 0.0;
  flags.r_margin = 0.5 * d0 * rho0 - geom.r_D;
  flags.r_small = flags.r_margin > 0.0;
  return flags;
}

Calibration calibrate(const std::vector<CalibrationInstance>& family,
                      SolutionKind kind, double rho0) {
  if (family.empty()) throw std::invalid_argument("calibration family is empty");
  Calibration cal;
  cal.K_hat = 0.0;
  cal.lower_hat = std::numeric_limits<double>::infinity();
  for (const auto& inst : family) {
    if (inst.t <= 0.0)
      throw std::invalid_argument("t = 0 instance in lower-bound calibration");
    const double profile = (kind == SolutionKind::Rigid) ? phi(inst.t) : psi(inst.t);
    cal.K_hat = std::max(cal.K_hat, inst.area_true / (rho0 * rho0 * inst.t));
    cal.lower_hat = std::min(cal.lower_hat, inst.area_true / (rho0 * rho0 * profile));
  }
  return cal;
}

SizeEstimateReport make_size_estimate(double t, double area_true,
                                      const Calibration& cal, SolutionKind kind,
                                      double rho0, double F,
                                      const HypothesisFlags& flags) {
  SizeEstimateReport rep;
  rep.t = t;
  rep.area_true = area_true;
  rep.K_hat = cal.K_hat;
  rep.lower_hat = cal.lower_hat;
  rep.F = F;
  rep.hypotheses = flags;
  rep.upper = upper_bound(t, cal.K_hat, rho0);
  rep.lower = lower_bound(t, cal.lower_hat, rho0, kind);
  rep.bounds_hold = rep.lower <= area_true * (1.0 + 1e-12) &&
                    area_true <= rep.upper * (1.0 + 1e-12);
  return rep;
}

}  // namespace rmlab
