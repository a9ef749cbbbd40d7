#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>

#include "rmlab/assembly.hpp"

namespace rmlab {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SolutionKind : unsigned char { Reference, Cavity, Rigid, DirichletExtension };

/// Infinitesimal rigid plate motion z = (phi = b, w = -b.x + a).
struct RigidTriple {
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  double a = 0.0;
};

struct SolverOptions {
  enum class Type : unsigned char { Direct, ConjugateGradient };
  Type type = Type::Direct;
  double tol = 1e-10;
  int max_iter = 20000;
};

/// Nodal fields on the mesh; inactive nodes hold zeros and are flagged off.
struct PlateSolution {
  SolutionKind kind = SolutionKind::Reference;
  std::vector<char> node_active;
  Eigen::VectorXd phi1, phi2, w;
  double solver_residual = 0.0;
  Eigen::Vector3d multipliers = Eigen::Vector3d::Zero();  // gauge multipliers
  std::string gauge;

  Eigen::Vector2d phi(int node) const { return {phi1(node), phi2(node)}; }
  /// Adds the rigid triple to the active fields (gauge shift).
  void shift_by(const RigidTriple& z, const Mesh& mesh);
};

/// Neumann problem on the full plate with the three integral gauge
/// constraints int phi = 0, int w = 0 enforced by Lagrange multipliers.
PlateSolution solve_reference(const Mesh& mesh, const PlateMaterial& material,
                              const BoundaryLoad& load, const SolverOptions& opts = {});

/// Neumann problem on the exterior region; the defect boundary is traction
/// free (natural condition). Same integral gauge over the exterior.
PlateSolution solve_cavity(const Mesh& mesh, const PlateMaterial& material,
                           const BoundaryLoad& load, const SolverOptions& opts = {});

/// Mixed problem with the defect moving as a rigid body. The inclusion
/// triple is fixed to zero, which removes the kernel entirely; returned
/// fields vanish identically on the defect nodes.
PlateSolution solve_rigid(const Mesh& mesh, const PlateMaterial& material,
                          const BoundaryLoad& load, const SolverOptions& opts = {});

/// Reissner-Mindlin system on the defect submesh with trace data taken from
/// the cavity solution on the defect boundary (nodal imposition).
PlateSolution dirichlet_extension(const Mesh& mesh, const PlateMaterial& material,
                                  const PlateSolution& cavity,
                                  const SolverOptions& opts = {});

/// Contact actions transmitted across the defect boundary, recovered from
/// the consistent equilibrium residual of the exterior region. Weights are
/// the nodal moments of the action of the exterior material on D (normal
/// pointing out of D); tractions are the piecewise-linear fields obtained by
/// inverting the boundary mass matrix.
struct BoundaryReactions {
  std::vector<int> nodes;  // defect-boundary node ids
  Eigen::VectorXd weight_m1, weight_m2, weight_q;      // consistent weights
  Eigen::VectorXd traction_m1, traction_m2, traction_q;  // PL tractions
  Eigen::SparseMatrix<double> boundary_mass;           // scalar P1 mass on the polyline
  double force_sum = 0.0;               // sum of shear weights
  Eigen::Vector2d couple_sum = Eigen::Vector2d::Zero();  // sum of (m - q x)

  int local_index(int node) const;
};

BoundaryReactions boundary_reactions(const Mesh& mesh, const PlateMaterial& material,
                                     const BoundaryLoad& load,
                                     const PlateSolution& solution,
                                     QuadratureSpec quad = {});

}  // namespace rmlab
