#pragma once

#include "rmlab/solvers.hpp"

namespace rmlab {

/// Work of the boundary loads in the two independent forms of the work
/// identity: boundary integral and stored strain energy.
struct WorkReport {
  double W_boundary = 0.0;
  double W_energy = 0.0;
  double duality_gap = 0.0;  // relative difference
  SolutionKind kind = SolutionKind::Reference;
};

/// Normalized work gap between a defected plate and the reference plate.
struct GapReport {
  double W0 = 0.0;
  double Wdef = 0.0;
  double delta_W = 0.0;
  double t = 0.0;  // delta_W / W0
  SolutionKind defect_kind = SolutionKind::Cavity;
};

/// int_{boundary} Q w + M . phi over the outer edges (2-point Gauss, exact
/// for the piecewise-linear data).
double work_boundary(const Mesh& mesh, const BoundaryLoad& load,
                     const PlateSolution& solution);

/// Strain energy bilinear form between two solutions over a region, with the
/// same quadrature as assembly.
double energy_bilinear(const Mesh& mesh, const PlateMaterial& material,
                       const PlateSolution& a, const PlateSolution& b,
                       ActiveRegion region, QuadratureSpec quad = {});

double work_energy(const Mesh& mesh, const PlateMaterial& material,
                   const PlateSolution& solution, ActiveRegion region,
                   QuadratureSpec quad = {});

WorkReport make_work_report(const Mesh& mesh, const PlateMaterial& material,
                            const BoundaryLoad& load, const PlateSolution& solution,
                            QuadratureSpec quad = {});

GapReport make_gap_report(const Mesh& mesh, const PlateMaterial& material,
                          const PlateSolution& reference,
                          const PlateSolution& defected, QuadratureSpec quad = {});

/// Element-wise strain energy density
/// E = (|sym grad phi|^2 + |phi + grad w|^2 / rho0^2)^(1/2),
/// evaluated at the assembly quadrature points; zero on elements outside the
/// solution support.
std::vector<double> energy_density_field(const Mesh& mesh, const PlateSolution& solution,
                                         double rho0);

/// Mixed energy over the defect between the reference fields and the
/// extended cavity fields; equals W_c - W_0 for converged solves.
double cross_energy_cavity(const Mesh& mesh, const PlateMaterial& material,
                           const PlateSolution& reference,
                           const PlateSolution& extension, QuadratureSpec quad = {});

/// int_{defect boundary} (P grad phi_r) n . phi_0 + (S(...) . n) w_0 from the
/// recovered contact actions; equals W_0 - W_r for converged solves.
double lemma61_boundary_term(const Mesh& mesh, const PlateSolution& reference,
                             const BoundaryReactions& reactions);

}  // namespace rmlab
