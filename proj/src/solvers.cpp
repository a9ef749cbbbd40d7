#include "rmlab/solvers.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace rmlab {

void PlateSolution::shift_by(const RigidTriple& z, const Mesh& mesh) {
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (!node_active[n]) continue;
    phi1(n) += z.b(0);
    phi2(n) += z.b(1);
    w(n) += -(z.b(0) * mesh.nodes[n].x1 + z.b(1) * mesh.nodes[n].x2) + z.a;
  }
}

namespace {

PlateSolution make_solution(const Mesh& mesh, SolutionKind kind) {
  PlateSolution s;
  s.kind = kind;
  s.node_active.assign(mesh.node_count(), 0);
  s.phi1 = Eigen::VectorXd::Zero(mesh.node_count());
  s.phi2 = Eigen::VectorXd::Zero(mesh.node_count());
  s.w = Eigen::VectorXd::Zero(mesh.node_count());
  return s;
}

void scatter_fields(PlateSolution& s, const DofMap& dofs, const Eigen::VectorXd& u) {
  for (int l = 0; l < dofs.active_count(); ++l) {
    const int n = dofs.local_node[l];
    s.node_active[n] = 1;
    s.phi1(n) = u(3 * l + 0);
    s.phi2(n) = u(3 * l + 1);
    s.w(n) = u(3 * l + 2);
  }
}

// Conjugate gradient on the singular consistent system K u = f with the
// kernel (interpolated rigid triples) projected out of every residual.
Eigen::VectorXd projected_cg(const Eigen::SparseMatrix<double>& K,
                             const Eigen::VectorXd& f, const Eigen::MatrixXd& Z,
                             const SolverOptions& opts) {
  const Eigen::MatrixXd ZtZ = Z.transpose() * Z;
  const auto project = [&](Eigen::VectorXd& v) {
    v -= Z * ZtZ.ldlt().solve(Z.transpose() * v);
  };
  Eigen::VectorXd x = Eigen::VectorXd::Zero(K.rows());
  Eigen::VectorXd r = f;
  project(r);
  // Jacobi preconditioner.
  Eigen::VectorXd dinv(K.rows());
  for (int i = 0; i < K.rows(); ++i) {
    const double d = K.coeff(i, i);
    dinv(i) = d > 0.0 ? 1.0 / d : 1.0;
  }
  Eigen::VectorXd z = dinv.asDiagonal() * r;
  project(z);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const double fnorm = f.norm();
  if (fnorm == 0.0) return x;
  for (int it = 0; it < opts.max_iter; ++it) {
    Eigen::VectorXd Kp = K * p;
    const double alpha = rz / p.dot(Kp);
    x += alpha * p;
    r -= alpha * Kp;
    project(r);
    if (r.norm() <= opts.tol * fnorm) break;
    z = dinv.asDiagonal() * r;
    project(z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return x;
}

struct GaugedSolve {
  Eigen::VectorXd u;
  Eigen::Vector3d multipliers;
  double residual;
};

// Solves the pure-Neumann system with the three integral constraints via a
// bordered (saddle-point) matrix, or via constraint-projected CG.
GaugedSolve solve_gauged(const Mesh& mesh, const SystemMatrix& sys,
                         const Eigen::VectorXd& f, const SolverOptions& opts) {
  const int n = sys.dofs.ndof();
  const Eigen::SparseMatrix<double> C = constraint_columns(mesh, sys.dofs);
  GaugedSolve out;
  if (opts.type == SolverOptions::Type::Direct) {
    Eigen::SparseMatrix<double> A(n + 3, n + 3);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(sys.K.nonZeros() + 6 * n);
    for (int k = 0; k < sys.K.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, k); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                           it.value());
    for (int k = 0; k < C.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(C, k); it; ++it) {
        trips.emplace_back(static_cast<int>(it.row()), n + static_cast<int>(it.col()),
                           it.value());
        trips.emplace_back(n + static_cast<int>(it.col()), static_cast<int>(it.row()),
                           it.value());
      }
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 3);
    rhs.head(n) = f;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw SolverError("sparse factorization of the bordered system failed");
    const Eigen::VectorXd sol = lu.solve(rhs);
    out.u = sol.head(n);
    out.multipliers = sol.tail(3);
  } else {
    // Kernel basis: interpolated rigid triples.
    Eigen::MatrixXd Z(n, 3);
    Z.col(0) = rigid_triple_vector(mesh, sys.dofs, {1, 0}, 0.0);
    Z.col(1) = rigid_triple_vector(mesh, sys.dofs, {0, 1}, 0.0);
    Z.col(2) = rigid_triple_vector(mesh, sys.dofs, {0, 0}, 1.0);
    out.u = projected_cg(sys.K, f, Z, opts);
    // Enforce the integral gauge exactly: subtract the triple with
    // C^T (u - Z q) = 0.
    const Eigen::MatrixXd CtZ = (C.transpose() * Z).eval();
    const Eigen::Vector3d q = CtZ.fullPivLu().solve(C.transpose() * out.u);
    out.u -= Z * q;
    out.multipliers.setZero();
  }
  const double fnorm = f.norm();
  out.residual = fnorm > 0.0
                     ? (sys.K * out.u + C * out.multipliers - f).norm() / fnorm
                     : 0.0;
  if (!(out.residual <= std::max(opts.tol, 1e-8)))
    throw SolverError("solver did not converge: relative residual " +
                      std::to_string(out.residual));
  return out;
}

std::vector<char> defect_node_mask(const Mesh& mesh) {
  std::vector<char> mask(mesh.node_count(), 0);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.tri_region[t] != Region::Defect) continue;
    for (int k = 0; k < 3; ++k) mask[mesh.triangles[t][k]] = 1;
  }
  for (const auto& e : mesh.boundary_edges)
    if (e.tag == BoundaryTag::Defect) {
      mask[e.a] = 1;
      mask[e.b] = 1;
    }
  return mask;
}

void check_exterior_connected(const Mesh& mesh) {
  // Union-find over exterior triangles sharing an edge.
  std::vector<int> parent(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) parent[t] = t;
  const std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::pair<int, int>, int> first_tri;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.tri_region[t] != Region::Exterior) continue;
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      const auto [it, inserted] = first_tri.emplace(key, t);
      if (!inserted && mesh.tri_region[it->second] == Region::Exterior)
        parent[find(t)] = find(it->second);
    }
  }
  int root = -1;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.tri_region[t] != Region::Exterior) continue;
    if (root < 0) root = find(t);
    if (find(t) != root) throw SolverError("exterior region is disconnected");
  }
}

}  // namespace

PlateSolution solve_reference(const Mesh& mesh, const PlateMaterial& material,
                              const BoundaryLoad& load, const SolverOptions& opts) {
  const SystemMatrix sys = assemble_stiffness(mesh, material, ActiveRegion::Full);
  const Eigen::VectorXd f = assemble_load(mesh, load, sys.dofs);
  const GaugedSolve gs = solve_gauged(mesh, sys, f, opts);
  PlateSolution s = make_solution(mesh, SolutionKind::Reference);
  scatter_fields(s, sys.dofs, gs.u);
  s.multipliers = gs.multipliers;
  s.solver_residual = gs.residual;
  s.gauge = "int_phi=0,int_w=0 over Omega";
  const double mscale = f.norm() > 0 ? f.norm() : 1.0;
  if (gs.multipliers.norm() > 1e-6 * mscale)
    throw SolverError("incompatible load: gauge multipliers do not vanish");
  return s;
}

PlateSolution solve_cavity(const Mesh& mesh, const PlateMaterial& material,
                           const BoundaryLoad& load, const SolverOptions& opts) {
  if (!mesh.has_defect() &&
      std::none_of(mesh.boundary_edges.begin(), mesh.boundary_edges.end(),
                   [](const BoundaryEdge& e) { return e.tag == BoundaryTag::Defect; }))
    throw SolverError("cavity solve requires a defect region");
  check_exterior_connected(mesh);
  const SystemMatrix sys = assemble_stiffness(mesh, material, ActiveRegion::Exterior);
  const Eigen::VectorXd f = assemble_load(mesh, load, sys.dofs);
  const GaugedSolve gs = solve_gauged(mesh, sys, f, opts);
  PlateSolution s = make_solution(mesh, SolutionKind::Cavity);
  scatter_fields(s, sys.dofs, gs.u);
  s.multipliers = gs.multipliers;
  s.solver_residual = gs.residual;
  s.gauge = "int_phi=0,int_w=0 over Omega\\D";
  return s;
}

PlateSolution solve_rigid(const Mesh& mesh, const PlateMaterial& material,
                          const BoundaryLoad& load, const SolverOptions& opts) {
  const auto mask = defect_node_mask(mesh);
  if (std::none_of(mask.begin(), mask.end(), [](char c) { return c != 0; }))
    throw SolverError("rigid solve requires a defect region");
  const SystemMatrix sys = assemble_stiffness(mesh, material, ActiveRegion::Full);
  const Eigen::VectorXd f = assemble_load(mesh, load, sys.dofs);

  // Master-slave elimination with the inclusion triple gauged to zero:
  // defect-node dofs vanish, free dofs remain.
  std::vector<int> free_of_global(sys.dofs.ndof(), -1);
  std::vector<int> free_dofs;
  for (int l = 0; l < sys.dofs.active_count(); ++l) {
    if (mask[sys.dofs.local_node[l]]) continue;
    for (int c = 0; c < 3; ++c) {
      free_of_global[3 * l + c] = static_cast<int>(free_dofs.size());
      free_dofs.push_back(3 * l + c);
    }
  }
  const int nf = static_cast<int>(free_dofs.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < sys.K.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, k); it; ++it) {
      const int i = free_of_global[it.row()];
      const int j = free_of_global[it.col()];
      if (i >= 0 && j >= 0) trips.emplace_back(i, j, it.value());
    }
  Eigen::SparseMatrix<double> Kff(nf, nf);
  Kff.setFromTriplets(trips.begin(), trips.end());
  Kff.makeCompressed();
  Eigen::VectorXd ff(nf);
  for (int i = 0; i < nf; ++i) ff(i) = f(free_dofs[i]);

  Eigen::VectorXd uf;
  if (opts.type == SolverOptions::Type::Direct) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Kff);
    if (lu.info() != Eigen::Success)
      throw SolverError("sparse factorization of the rigid system failed");
    uf = lu.solve(ff);
  } else {
    uf = projected_cg(Kff, ff, Eigen::MatrixXd::Zero(nf, 0), opts);
  }
  const double fnorm = ff.norm();
  const double residual = fnorm > 0.0 ? (Kff * uf - ff).norm() / fnorm : 0.0;
  if (!(residual <= std::max(opts.tol, 1e-8)))
    throw SolverError("rigid solver did not converge");

  Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.dofs.ndof());
  for (int i = 0; i < nf; ++i) u(free_dofs[i]) = uf(i);
  PlateSolution s = make_solution(mesh, SolutionKind::Rigid);
  scatter_fields(s, sys.dofs, u);
  s.solver_residual = residual;
  s.gauge = "inclusion triple fixed to zero";
  return s;
}

PlateSolution dirichlet_extension(const Mesh& mesh, const PlateMaterial& material,
                                  const PlateSolution& cavity,
                                  const SolverOptions& opts) {
  if (!mesh.has_defect()) throw SolverError("extension requires a nonempty defect submesh");
  const SystemMatrix sys = assemble_stiffness(mesh, material, ActiveRegion::Defect);
  std::vector<char> on_boundary(mesh.node_count(), 0);
  for (const auto& e : mesh.boundary_edges)
    if (e.tag == BoundaryTag::Defect) {
      on_boundary[e.a] = 1;
      on_boundary[e.b] = 1;
    }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.dofs.ndof());
  std::vector<int> interior;  // free dof ids
  std::vector<int> interior_of_global(sys.dofs.ndof(), -1);
  for (int l = 0; l < sys.dofs.active_count(); ++l) {
    const int node = sys.dofs.local_node[l];
    if (on_boundary[node]) {
      if (!cavity.node_active[node])
        throw SolverError("cavity solution does not cover the defect boundary");
      u(3 * l + 0) = cavity.phi1(node);
      u(3 * l + 1) = cavity.phi2(node);
      u(3 * l + 2) = cavity.w(node);
    } else {
      for (int c = 0; c < 3; ++c) {
        interior_of_global[3 * l + c] = static_cast<int>(interior.size());
        interior.push_back(3 * l + c);
      }
    }
  }
  const int ni = static_cast<int>(interior.size());
  if (ni > 0) {
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
    for (int k = 0; k < sys.K.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, k); it; ++it) {
        const int i = interior_of_global[it.row()];
        const int j = interior_of_global[it.col()];
        if (i >= 0 && j >= 0)
          trips.emplace_back(i, j, it.value());
        else if (i >= 0 && j < 0)
          rhs(i) -= it.value() * u(it.col());
      }
    Eigen::SparseMatrix<double> Kii(ni, ni);
    Kii.setFromTriplets(trips.begin(), trips.end());
    Kii.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Kii);
    if (lu.info() != Eigen::Success)
      throw SolverError("sparse factorization of the extension system failed");
    const Eigen::VectorXd ui = lu.solve(rhs);
    const double rnorm = rhs.norm();
    const double residual =
        rnorm > 0.0 ? (Kii * ui - rhs).norm() / rnorm : 0.0;
    if (!(residual <= std::max(opts.tol, 1e-8)))
      throw SolverError("extension solver did not converge");
    for (int i = 0; i < ni; ++i) u(interior[i]) = ui(i);
  }
  PlateSolution s = make_solution(mesh, SolutionKind::DirichletExtension);
  scatter_fields(s, sys.dofs, u);
  s.solver_residual = 0.0;
  s.gauge = "trace of the cavity solution on the defect boundary";
  return s;
}

int BoundaryReactions::local_index(int node) const {
  const auto it = std::find(nodes.begin(), nodes.end(), node);
  return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

BoundaryReactions boundary_reactions(const Mesh& mesh, const PlateMaterial& material,
                                     const BoundaryLoad& load,
                                     const PlateSolution& solution,
                                     QuadratureSpec quad) {
  if (solution.kind != SolutionKind::Rigid && solution.kind != SolutionKind::Cavity)
    throw SolverError("reactions require a cavity or rigid solution");
  std::set<int> bset;
  for (const auto& e : mesh.boundary_edges)
    if (e.tag == BoundaryTag::Defect) {
      bset.insert(e.a);
      bset.insert(e.b);
    }
  if (bset.empty()) throw SolverError("defect boundary curve not present");

  const SystemMatrix sys = assemble_stiffness(mesh, material, ActiveRegion::Exterior, quad);
  const Eigen::VectorXd f = assemble_load(mesh, load, sys.dofs);
  Eigen::VectorXd u(sys.dofs.ndof());
  for (int l = 0; l < sys.dofs.active_count(); ++l) {
    const int node = sys.dofs.local_node[l];
    u(3 * l + 0) = solution.phi1(node);
    u(3 * l + 1) = solution.phi2(node);
    u(3 * l + 2) = solution.w(node);
  }
  const Eigen::VectorXd r = sys.K * u - f;

  BoundaryReactions out;
  out.nodes.assign(bset.begin(), bset.end());
  const int nb = static_cast<int>(out.nodes.size());
  out.weight_m1.resize(nb);
  out.weight_m2.resize(nb);
  out.weight_q.resize(nb);
  for (int i = 0; i < nb; ++i) {
    const int node = out.nodes[i];
    // Action of the exterior material on D.
    out.weight_m1(i) = -r(sys.dofs.dof(node, 0));
    out.weight_m2(i) = -r(sys.dofs.dof(node, 1));
    out.weight_q(i) = -r(sys.dofs.dof(node, 2));
  }
  out.force_sum = out.weight_q.sum();
  out.couple_sum = Eigen::Vector2d::Zero();
  for (int i = 0; i < nb; ++i) {
    const Point2 x = mesh.nodes[out.nodes[i]];
    out.couple_sum(0) += out.weight_m1(i) - out.weight_q(i) * x.x1;
    out.couple_sum(1) += out.weight_m2(i) - out.weight_q(i) * x.x2;
  }

  // Piecewise-linear tractions on the polyline: invert the boundary mass.
  std::map<int, int> local;
  for (int i = 0; i < nb; ++i) local[out.nodes[i]] = i;
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::Defect) continue;
    const double L = norm(mesh.nodes[e.b] - mesh.nodes[e.a]);
    const int a = local[e.a], b = local[e.b];
    trips.emplace_back(a, a, L / 3.0);
    trips.emplace_back(b, b, L / 3.0);
    trips.emplace_back(a, b, L / 6.0);
    trips.emplace_back(b, a, L / 6.0);
  }
  out.boundary_mass.resize(nb, nb);
  out.boundary_mass.setFromTriplets(trips.begin(), trips.end());
  out.boundary_mass.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(out.boundary_mass);
  if (lu.info() != Eigen::Success)
    throw SolverError("boundary mass factorization failed");
  out.traction_m1 = lu.solve(out.weight_m1);
  out.traction_m2 = lu.solve(out.weight_m2);
  out.traction_q = lu.solve(out.weight_q);
  return out;
}

}  // namespace rmlab
