#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rmlab/config.hpp"
#include "rmlab/estimates.hpp"
#include "rmlab/verify.hpp"
#include "rmlab/works.hpp"

namespace rmlab {

/// Everything measured on one (family member, refinement level) pair.
struct InstanceResult {
  std::string id;
  int member = 0;
  int level = 0;
  double scale = 1.0;
  double h = 0.0;
  int triangles = 0;
  double area_true = 0.0;
  double W0 = 0.0;
  double Wdef = 0.0;
  double delta_W = 0.0;
  double t = 0.0;
  double duality_ref = 0.0;
  double duality_def = 0.0;
  double F = 0.0;
  double residual_ref = 0.0;
  double residual_def = 0.0;
  HypothesisFlags flags;
  VerificationReport verification;
  double traction_ratio = 0.0;
  bool traction_vacuous = true;
  double elapsed_seconds = 0.0;
};

struct FamilyResult {
  std::vector<InstanceResult> instances;        // member-major, level-minor
  std::vector<Calibration> calibration;         // per level (defect families)
  std::vector<SizeEstimateReport> estimates;    // aligned with instances
  std::vector<ConstantEstimate> constants;      // per level when requested
  std::vector<LpsProbe> lps;                    // per level when requested
  ConvergenceTable convergence;                 // member 0 across levels
  bool verification_pass = true;
  bool has_estimates = false;

  const InstanceResult& at(int member, int level, int levels) const {
    return instances[member * levels + level];
  }
};

struct RunRequest {
  bool with_estimates = true;
  bool with_verification = true;
  bool with_constants = false;
  bool with_lps = false;
};

/// Per-instance solve bundle for callers that need the fields themselves.
struct SolvedInstance {
  Mesh mesh;
  BoundaryLoad load;
  PlateSolution reference;
  PlateSolution defected;       // cavity or rigid (absent for none)
  PlateSolution extension;      // cavity only
  BoundaryReactions reactions;  // rigid only
  bool has_defect = false;
};

/// Meshes, loads and solves one family member at one refinement level.
SolvedInstance solve_instance(const ExperimentConfig& cfg, double scale, int level);

/// Runs the whole family/sweep; instances are independent and run on up to
/// cfg.workers threads, results land in deterministic member-major order.
FamilyResult run_family(const ExperimentConfig& cfg, const RunRequest& req = {});

}  // namespace rmlab
