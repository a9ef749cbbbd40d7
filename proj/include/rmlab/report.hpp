#pragma once

#include <string>

#include "rmlab/runner.hpp"

namespace rmlab {

/// Deterministic number formatting used by every report (%.12g).
std::string format_number(double v);

/// CSV with one row per instance: works, gap, duality, frequency, flags.
std::string works_csv(const FamilyResult& fam);

/// CSV estimate table: id, kind, area_true, t, F, K_hat, k_hat, upper,
/// lower, flags.
std::string estimates_csv(const FamilyResult& fam, const ExperimentConfig& cfg);

/// CSV with the member-0 convergence rows and observed orders.
std::string convergence_csv(const FamilyResult& fam);

/// JSON verification report over all instances (plus constants and LPS
/// probes when present).
std::string verification_json(const FamilyResult& fam, const ExperimentConfig& cfg);

/// Run manifest: config hash, tool version, instance ids/paths, timings.
std::string manifest_json(const FamilyResult& fam, const std::string& cfg_text,
                          const std::vector<std::string>& outputs);

/// SVG of the nodal field (w) and the element energy density with the mesh
/// outline and the defect boundary; deterministic bytes for fixed input.
std::string plot_fields_svg(const Mesh& mesh, const PlateSolution& solution,
                            double rho0);

/// SVG scatter of (t, |D|) with the calibrated bound curves.
std::string bounds_svg(const FamilyResult& fam, const ExperimentConfig& cfg);

void write_file(const std::string& path, const std::string& content);

}  // namespace rmlab
