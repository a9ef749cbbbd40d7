#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "rmlab/load.hpp"
#include "rmlab/material.hpp"
#include "rmlab/mesh.hpp"

namespace rmlab {

enum class ActiveRegion : unsigned char { Full, Exterior, Defect };

/// Integration rule for the transverse shear term. Bending is always
/// integrated with the one-point rule, which is exact for P1 gradients.
enum class ShearRule : unsigned char { Centroid, ThreePoint };

struct QuadratureSpec {
  ShearRule shear = ShearRule::Centroid;
};

/// Bijection between active (node, field) pairs and dof indices,
/// 3 dofs per node: (phi1, phi2, w).
struct DofMap {
  std::vector<int> node_local;  // node id -> local index, -1 if inactive
  std::vector<int> local_node;  // local index -> node id
  ActiveRegion region = ActiveRegion::Full;

  int active_count() const { return static_cast<int>(local_node.size()); }
  int ndof() const { return 3 * active_count(); }
  bool active(int node) const { return node_local[node] >= 0; }
  int dof(int node, int comp) const { return 3 * node_local[node] + comp; }
};

DofMap make_dof_map(const Mesh& mesh, ActiveRegion region);

/// Whether a triangle belongs to the requested assembly region.
bool in_region(const Mesh& mesh, int tri, ActiveRegion region);

struct SystemMatrix {
  Eigen::SparseMatrix<double> K;
  QuadratureSpec quad;
  DofMap dofs;
};

/// 9x9 element stiffness (dof order: phi1,phi2,w per node).
Eigen::Matrix<double, 9, 9> element_stiffness(const Mesh& mesh,
                                              const PlateMaterial& material,
                                              int tri, QuadratureSpec quad = {});

/// Assembles the Reissner-Mindlin stiffness over the requested region.
SystemMatrix assemble_stiffness(const Mesh& mesh, const PlateMaterial& material,
                                ActiveRegion region, QuadratureSpec quad = {});

/// Consistent P1 load vector: exact integration of Q v + M . psi over the
/// outer boundary edges.
Eigen::VectorXd assemble_load(const Mesh& mesh, const BoundaryLoad& load,
                              const DofMap& dofs);

/// Columns of the three gauge constraints int phi1 = int phi2 = int w = 0
/// over the active region (exact P1 integrals).
Eigen::SparseMatrix<double> constraint_columns(const Mesh& mesh, const DofMap& dofs);

/// Nodal interpolation of the rigid triple z = (phi = b, w = -b.x + a).
Eigen::VectorXd rigid_triple_vector(const Mesh& mesh, const DofMap& dofs,
                                    const Eigen::Vector2d& b, double a);

}  // namespace rmlab
