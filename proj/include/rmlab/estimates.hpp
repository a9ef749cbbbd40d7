#pragma once

#include <vector>

#include "rmlab/load.hpp"
#include "rmlab/mesh.hpp"
#include "rmlab/solvers.hpp"

namespace rmlab {

/// Lower-bound profile for cavities: Psi(t) = t^2/(1+t) on [0, inf).
double psi(double t);

/// Lower-bound profile for rigid inclusions: Phi(t) = t^2/(1-t) on [0, 1).
double phi(double t);

/// Upper size bound K rho0^2 t.
double upper_bound(double t, double K, double rho0);

/// Lower size bound k rho0^2 Psi(t) (cavity) or C rho0^2 Phi(t) (rigid).
double lower_bound(double t, double k, double rho0, SolutionKind kind);

/// Oscillation content of the boundary load: ratio of discrete H^{-1/2} to
/// H^{-1} norms built from the boundary Laplace-Beltrami eigenbasis with
/// scale-weighted (1 + rho0^2 lambda)^{-s} multipliers.
struct FrequencyReport {
  double norm_half = 0.0;  // ||M||_{-1/2} + rho0 ||Q||_{-1/2}
  double norm_one = 0.0;   // ||M||_{-1} + rho0 ||Q||_{-1}
  double F = 0.0;
};

FrequencyReport frequency(const Mesh& mesh, const BoundaryLoad& load, double rho0);

struct HypothesisFlags {
  bool fatness = false;
  bool sifc = false;
  bool distance = false;
  bool r_small = false;  // r_D < d0 rho0 / 2
  double fatness_margin = 0.0;   // |D_{h1 rho0}| - |D|/2
  double sifc_margin = 0.0;      // Q_D r_D - diam
  double distance_margin = 0.0;  // dist - d0 rho0
  double r_margin = 0.0;         // d0 rho0 / 2 - r_D
  bool all() const { return fatness && sifc && distance && r_small; }
};

/// Evaluates the a-priori hypotheses of the size-estimate theorems for the
/// given defect at parameters (h1, d0).
HypothesisFlags check_hypotheses(const Mesh& mesh, const DefectGeometry& geom,
                                 double h1, double d0, double rho0);

struct CalibrationInstance {
  double area_true = 0.0;
  double t = 0.0;
};

struct Calibration {
  double K_hat = 0.0;      // upper-bound constant
  double lower_hat = 0.0;  // k_hat (cavity) or C_hat (rigid)
};

/// Family calibration: K_hat = max area/(rho0^2 t); k_hat/C_hat = min
/// area/(rho0^2 Psi or Phi). Bounds built from these hold on the family by
/// construction; their refinement stability is what the suite verifies.
Calibration calibrate(const std::vector<CalibrationInstance>& family,
                      SolutionKind kind, double rho0);

struct SizeEstimateReport {
  double t = 0.0;
  double area_true = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double K_hat = 0.0;
  double lower_hat = 0.0;
  double F = 0.0;
  HypothesisFlags hypotheses;
  bool bounds_hold = false;
};

SizeEstimateReport make_size_estimate(double t, double area_true,
                                      const Calibration& cal, SolutionKind kind,
                                      double rho0, double F,
                                      const HypothesisFlags& flags);

}  // namespace rmlab
