#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rmlab/material.hpp"
#include "rmlab/mesh.hpp"

namespace rmlab {

/// Linear load data on one boundary edge; q/m0/m1 follow the edge's (a,b)
/// node order.
struct EdgeLoad {
  double q0 = 0.0;
  double q1 = 0.0;
  Eigen::Vector2d m0 = Eigen::Vector2d::Zero();
  Eigen::Vector2d m1 = Eigen::Vector2d::Zero();
};

/// Transverse force Q and couple M on the outer boundary, piecewise linear
/// per edge. Indexed by position in mesh.boundary_edges (defect entries stay
/// zero and are ignored).
struct BoundaryLoad {
  std::vector<EdgeLoad> edges;

  BoundaryLoad scaled(double s) const;
  bool is_zero() const;
};

/// Named analytic presets.
///   pure_bending_x : M = (P(kappa e1 x e1)) n, Q = 0
///   pure_bending_y : M = (P(kappa e2 x e2)) n, Q = 0
///   twist          : M = (P(kappa (e1 x e2 + e2 x e1))) n, Q = 0
///   fourier        : Q = kappa cos(2 pi k s / |bdry|) (mean-corrected),
///                    M = constant closing the couple balance
BoundaryLoad make_preset_load(const Mesh& mesh, const PlateMaterial& material,
                              const std::string& preset, double kappa,
                              int fourier_mode = 2);

/// Restriction of the same per-edge polynomial data onto the refined mesh
/// (children of edge e are 2e and 2e+1).
BoundaryLoad refine_load(const BoundaryLoad& load);

struct CompatibilityReport {
  double force_residual = 0.0;           // integral of Q
  Eigen::Vector2d couple_residual = Eigen::Vector2d::Zero();  // int(Q x - M)
  double force_scale = 0.0;
  double couple_scale = 0.0;
  double rel_force = 0.0;
  double rel_couple = 0.0;
  bool pass = true;
};

/// Exact edge-wise integration of the two compatibility conditions
/// int Q = 0 and int (Q x - M) = 0, scaled by the load magnitude.
CompatibilityReport check_compatibility(const Mesh& mesh, const BoundaryLoad& load,
                                        double tolerance = 1e-10);

}  // namespace rmlab
