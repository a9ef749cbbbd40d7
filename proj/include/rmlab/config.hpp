#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmlab/material.hpp"
#include "rmlab/mesh.hpp"
#include "rmlab/solvers.hpp"

namespace rmlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DefectKind : unsigned char { None, Cavity, Rigid };

/// One experiment: domain, defect family, material, load, solver and run
/// parameters. Parsed from the flat [section] key = value file documented in
/// the README.
struct ExperimentConfig {
  DomainSpec domain;
  DefectKind defect_kind = DefectKind::None;
  DefectSpec defect;                    // base defect (scale 1)
  std::vector<double> sweep_scales{1.0};  // nested family of defect sizes

  PlateMaterial material;

  std::string load_preset = "pure_bending_x";
  double load_kappa = 1.0;
  int load_mode = 2;
  double load_scale = 1.0;

  SolverOptions solver;

  double target_h = 0.1;
  int levels = 1;
  int workers = 1;
  double h1 = 0.3;        // fatness parameter
  double d0 = 0.1;        // distance parameter
  double theta_hat = 0.5; // LPS aperture
  double lps_rho = 0.0;   // 0 => skip the LPS probe
  int min_feature_cells = 4;
  std::string out_dir = "out";

  /// Defect spec of one family member.
  DefectSpec scaled_defect(double scale) const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical reproducibility hash of the config text (FNV-1a, hex).
std::string config_hash(const std::string& text);

}  // namespace rmlab
