#include "rmlab/verify.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>

namespace rmlab {

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass || c.vacuous; });
}

void VerificationReport::add(std::string name, double value, double bound, bool le,
                             bool vacuous) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.bound = bound;
  c.margin = le ? bound - value : value - bound;
  c.pass = c.margin >= 0.0 && std::isfinite(c.margin);
  c.vacuous = vacuous;
  checks.push_back(std::move(c));
}

VerificationReport verify_cavity_sandwich(const Mesh& mesh, const PlateMaterial& material,
                                          const PlateSolution& reference,
                                          const PlateSolution& cavity,
                                          const PlateSolution& extension,
                                          QuadratureSpec quad) {
  VerificationReport rep;
  const double W0 = work_energy(mesh, material, reference, ActiveRegion::Full, quad);
  const double Wc = work_energy(mesh, material, cavity, ActiveRegion::Exterior, quad);
  const double dW = Wc - W0;
  const double lhs = work_energy(mesh, material, reference, ActiveRegion::Defect, quad);
  if (mesh.defect_area() > 0.0 && dW <= 0.0)
    throw SolverError("nonpositive work gap with a nonzero cavity: solver failure");
  rep.add("cavity energy inequality: int_D q(u0) <= deltaW", lhs,
          dW * (1.0 + 1e-8), true, dW == 0.0);
  const double cross = cross_energy_cavity(mesh, material, reference, extension, quad);
  const double idres = std::abs(dW - cross);
  rep.add("cavity identity: |deltaW - cross energy| <= 1e-6 deltaW", idres,
          1e-6 * std::abs(dW), true, dW == 0.0);
  return rep;
}

VerificationReport verify_rigid_sandwich(const Mesh& mesh, const PlateMaterial& material,
                                         const PlateSolution& reference,
                                         const PlateSolution& rigid,
                                         const BoundaryReactions& reactions,
                                         QuadratureSpec quad) {
  VerificationReport rep;
  const double W0 = work_energy(mesh, material, reference, ActiveRegion::Full, quad);
  const double Wr = work_energy(mesh, material, rigid, ActiveRegion::Full, quad);
  const double dW = W0 - Wr;
  const double lhs = work_energy(mesh, material, reference, ActiveRegion::Defect, quad);
  if (mesh.defect_area() > 0.0 && dW <= 0.0)
    throw SolverError("nonpositive work gap with a nonzero rigid inclusion");
  rep.add("rigid energy inequality: int_D q(u0) <= deltaW", lhs, dW * (1.0 + 1e-8),
          true, dW == 0.0);
  const double bterm = lemma61_boundary_term(mesh, reference, reactions);
  rep.add("rigid identity: |deltaW - boundary term| <= 1e-6 deltaW",
          std::abs(dW - bterm), 1e-6 * std::abs(dW), true, dW == 0.0);
  const auto balance = verify_balance(mesh, reactions);
  rep.checks.insert(rep.checks.end(), balance.checks.begin(), balance.checks.end());
  return rep;
}

VerificationReport verify_balance(const Mesh& mesh, const BoundaryReactions& reactions) {
  VerificationReport rep;
  double scale = 0.0;
  for (int i = 0; i < reactions.weight_q.size(); ++i) {
    const Point2 x = mesh.nodes[reactions.nodes[i]];
    scale += std::abs(reactions.weight_q(i)) * (1.0 + norm(x)) +
             std::hypot(reactions.weight_m1(i), reactions.weight_m2(i));
  }
  const bool vac = scale == 0.0;
  if (vac) scale = 1.0;
  rep.add("force balance: |sum shear weights| <= 1e-8 scale",
          std::abs(reactions.force_sum), 1e-8 * scale, true, vac);
  rep.add("couple balance: |sum (m - q x)| <= 1e-8 scale",
          reactions.couple_sum.norm(), 1e-8 * scale, true, vac);
  return rep;
}

namespace {

void basis_gradients(const Mesh& mesh, int t, Eigen::Vector2d b[3]) {
  const auto& tn = mesh.triangles[t];
  const Point2 p0 = mesh.nodes[tn[0]], p1 = mesh.nodes[tn[1]], p2 = mesh.nodes[tn[2]];
  Eigen::Matrix2d J;
  J << (p1 - p0).x1, (p2 - p0).x1, (p1 - p0).x2, (p2 - p0).x2;
  const Eigen::Matrix2d Jinv = J.inverse();
  b[0] = -(Jinv.row(0) + Jinv.row(1)).transpose();
  b[1] = Jinv.row(0).transpose();
  b[2] = Jinv.row(1).transpose();
}

using Triplets = std::vector<Eigen::Triplet<double>>;

// Largest eigenvalue of A x = lambda B x on {C^T x = 0} by power iteration
// on the bordered factorization of B. Stagnation threshold 1e-8 relative.
struct PencilResult {
  double lambda = 0.0;
  int iterations = 0;
};

PencilResult pencil_max_eigenvalue(const Eigen::SparseMatrix<double>& A,
                                   const Eigen::SparseMatrix<double>& B,
                                   const Eigen::MatrixXd& C) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(C.cols());
  Eigen::SparseMatrix<double> Bb(n + m, n + m);
  Triplets trips;
  for (int k = 0; k < B.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(B, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i)
      if (C(i, j) != 0.0) {
        trips.emplace_back(i, n + j, C(i, j));
        trips.emplace_back(n + j, i, C(i, j));
      }
  Bb.setFromTriplets(trips.begin(), trips.end());
  Bb.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(Bb);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("pencil factorization failed (eigensolve stagnation)");

  std::mt19937 rng(987654321);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = gauss(rng);
  double lambda = 0.0;
  int it = 0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  for (; it < 5000; ++it) {
    rhs.head(n) = A * x;
    const double num = x.dot(rhs.head(n));
    const Eigen::VectorXd Bx = B * x;
    const double den = x.dot(Bx);
    const double lambda_new = den > 0.0 ? num / den : 0.0;
    const Eigen::VectorXd y = lu.solve(rhs);
    Eigen::VectorXd xn = y.head(n);
    const double nrm = std::sqrt(std::max(xn.dot(B * xn), 1e-300));
    xn /= nrm;
    const bool settled = it > 2 && std::abs(lambda_new - lambda) <=
                                       1e-8 * std::max(std::abs(lambda_new), 1e-300);
    lambda = lambda_new;
    x = xn;
    if (settled) break;
  }
  return {lambda, it};
}

// Scalar P1 stiffness/mass over the listed triangles; dofs are the nodes
// marked active.
void scalar_forms(const Mesh& mesh, const std::vector<int>& tris,
                  std::vector<int>& node_local, std::vector<int>& local_node,
                  Eigen::SparseMatrix<double>& K, Eigen::SparseMatrix<double>& M) {
  node_local.assign(mesh.node_count(), -1);
  local_node.clear();
  for (int t : tris)
    for (int k = 0; k < 3; ++k) {
      const int nd = mesh.triangles[t][k];
      if (node_local[nd] < 0) {
        node_local[nd] = static_cast<int>(local_node.size());
        local_node.push_back(nd);
      }
    }
  const int n = static_cast<int>(local_node.size());
  Triplets kt, mt;
  Eigen::Vector2d g[3];
  for (int t : tris) {
    basis_gradients(mesh, t, g);
    const double area = mesh.triangle_area(t);
    const auto& tn = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(node_local[tn[i]], node_local[tn[j]], area * g[i].dot(g[j]));
        mt.emplace_back(node_local[tn[i]], node_local[tn[j]],
                        area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
      }
  }
  K.resize(n, n);
  K.setFromTriplets(kt.begin(), kt.end());
  M.resize(n, n);
  M.setFromTriplets(mt.begin(), mt.end());
}

std::vector<int> all_triangles(const Mesh& mesh) {
  std::vector<int> tris(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) tris[t] = t;
  return tris;
}

// Vector forms for the Korn-type pencils over the whole mesh. Dof layout:
// (phi1, phi2[, w]) per node.
struct VectorForms {
  Eigen::SparseMatrix<double> grad;     // int |grad phi|^2
  Eigen::SparseMatrix<double> symgrad;  // int |sym grad phi|^2
  Eigen::SparseMatrix<double> shear;    // int |phi + grad w|^2 (exact rule)
  Eigen::MatrixXd mean_phi;             // 2 columns of int phi constraints
  Eigen::VectorXd skew;                 // int (d2 phi1 - d1 phi2)
  Eigen::VectorXd mean_w;               // int w (only with w dofs)
  int ndof = 0;
};

VectorForms vector_forms(const Mesh& mesh, bool with_w) {
  const int perc = with_w ? 3 : 2;
  const int ndof = perc * mesh.node_count();
  Triplets gt, st, ht;
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(ndof, 2);
  Eigen::VectorXd skew = Eigen::VectorXd::Zero(ndof);
  Eigen::VectorXd meanw = Eigen::VectorXd::Zero(ndof);
  Eigen::Vector2d g[3];
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    basis_gradients(mesh, t, g);
    const double area = mesh.triangle_area(t);
    const auto& tn = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      for (int a = 0; a < 2; ++a) mean(perc * tn[i] + a, a) += area / 3.0;
      skew(perc * tn[i] + 0) += area * g[i](1);
      skew(perc * tn[i] + 1) -= area * g[i](0);
      if (with_w) meanw(perc * tn[i] + 2) += area / 3.0;
      for (int j = 0; j < 3; ++j) {
        const double gij = area * g[i].dot(g[j]);
        for (int a = 0; a < 2; ++a)
          gt.emplace_back(perc * tn[i] + a, perc * tn[j] + a, gij);
        // sym grad: 1/2 (grad + grad^T) squared
        for (int a = 0; a < 2; ++a)
          for (int c = 0; c < 2; ++c) {
            const double val =
                area * 0.5 * ((a == c ? g[i].dot(g[j]) : 0.0) + g[j](a) * g[i](c));
            st.emplace_back(perc * tn[i] + a, perc * tn[j] + c, val);
          }
      }
    }
    if (with_w) {
      // Exact (3 midpoint) integration of |phi + grad w|^2.
      const double mids[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
      for (const auto& N : mids) {
        Eigen::Matrix<double, 2, Eigen::Dynamic> row(2, 9);
        int cols[9];
        for (int i = 0; i < 3; ++i) {
          cols[3 * i + 0] = perc * tn[i] + 0;
          cols[3 * i + 1] = perc * tn[i] + 1;
          cols[3 * i + 2] = perc * tn[i] + 2;
          row.col(3 * i + 0) = Eigen::Vector2d(N[i], 0.0);
          row.col(3 * i + 1) = Eigen::Vector2d(0.0, N[i]);
          row.col(3 * i + 2) = g[i];
        }
        const Eigen::MatrixXd block = (area / 3.0) * row.transpose() * row;
        for (int i = 0; i < 9; ++i)
          for (int j = 0; j < 9; ++j)
            if (block(i, j) != 0.0) ht.emplace_back(cols[i], cols[j], block(i, j));
      }
    }
  }
  VectorForms f;
  f.ndof = ndof;
  f.grad.resize(ndof, ndof);
  f.grad.setFromTriplets(gt.begin(), gt.end());
  f.symgrad.resize(ndof, ndof);
  f.symgrad.setFromTriplets(st.begin(), st.end());
  if (with_w) {
    f.shear.resize(ndof, ndof);
    f.shear.setFromTriplets(ht.begin(), ht.end());
  }
  f.mean_phi = mean;
  f.skew = skew;
  f.mean_w = meanw;
  return f;
}

}  // namespace

ConstantEstimate estimate_inequality_constant(InequalityConstant which,
                                              const Mesh& mesh, double rho) {
  ConstantEstimate est;
  est.name = which;
  est.rho = rho;
  switch (which) {
    case InequalityConstant::PoincareC1:
    case InequalityConstant::PoincareC2: {
      std::vector<int> nl, ln;
      Eigen::SparseMatrix<double> K, M;
      scalar_forms(mesh, all_triangles(mesh), nl, ln, K, M);
      const int n = static_cast<int>(ln.size());
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, 1);
      double gamma_len = 0.0;
      if (which == InequalityConstant::PoincareC1) {
        for (int l = 0; l < n; ++l)
          C(l, 0) = 0.0;  // filled below from the mass row sums
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        C.col(0) = M * ones;  // int u
      } else {
        // Gamma-mean constraint over the outer boundary.
        for (const auto& e : mesh.boundary_edges) {
          if (e.tag != BoundaryTag::Outer) continue;
          const double L = norm(mesh.nodes[e.b] - mesh.nodes[e.a]);
          C(nl[e.a], 0) += 0.5 * L;
          C(nl[e.b], 0) += 0.5 * L;
          gamma_len += L;
        }
      }
      const auto res = pencil_max_eigenvalue(M, K, C);
      est.eigenvalue = res.lambda;
      est.iterations = res.iterations;
      if (which == InequalityConstant::PoincareC1) {
        est.value = res.lambda / (rho * rho);
      } else {
        const double factor = 1.0 + mesh.total_area() / (rho * gamma_len);
        est.value = res.lambda / (factor * rho * rho);
      }
      return est;
    }
    case InequalityConstant::TracePoincareC3: {
      if (!mesh.has_defect())
        throw std::invalid_argument("TracePoincareC3 needs a mesh with a defect region");
      // Shell of width rho around D inside the exterior region.
      std::vector<int> shell;
      for (int t = 0; t < mesh.triangle_count(); ++t) {
        if (mesh.tri_region[t] != Region::Exterior) continue;
        double d = std::numeric_limits<double>::infinity();
        const Point2 c = mesh.triangle_centroid(t);
        for (const auto& e : mesh.boundary_edges)
          if (e.tag == BoundaryTag::Defect)
            d = std::min(d, point_segment_distance(c, mesh.nodes[e.a], mesh.nodes[e.b]));
        if (d < rho) shell.push_back(t);
      }
      if (shell.empty()) throw std::invalid_argument("empty shell for TracePoincareC3");
      std::vector<int> nl, ln;
      Eigen::SparseMatrix<double> K, Munused;
      scalar_forms(mesh, shell, nl, ln, K, Munused);
      const int n = static_cast<int>(ln.size());
      Triplets bt;
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, 1);
      for (const auto& e : mesh.boundary_edges) {
        if (e.tag != BoundaryTag::Defect) continue;
        if (nl[e.a] < 0 || nl[e.b] < 0)
          throw std::invalid_argument("shell does not cover the defect boundary");
        const double L = norm(mesh.nodes[e.b] - mesh.nodes[e.a]);
        bt.emplace_back(nl[e.a], nl[e.a], L / 3.0);
        bt.emplace_back(nl[e.b], nl[e.b], L / 3.0);
        bt.emplace_back(nl[e.a], nl[e.b], L / 6.0);
        bt.emplace_back(nl[e.b], nl[e.a], L / 6.0);
        C(nl[e.a], 0) += 0.5 * L;
        C(nl[e.b], 0) += 0.5 * L;
      }
      Eigen::SparseMatrix<double> Mb(n, n);
      Mb.setFromTriplets(bt.begin(), bt.end());
      const auto res = pencil_max_eigenvalue(Mb, K, C);
      est.eigenvalue = res.lambda;
      est.iterations = res.iterations;
      est.value = res.lambda / rho;
      return est;
    }
    case InequalityConstant::Korn2: {
      const auto f = vector_forms(mesh, false);
      Eigen::MatrixXd C(f.ndof, 3);
      C.col(0) = f.mean_phi.col(0);
      C.col(1) = f.mean_phi.col(1);
      C.col(2) = f.skew;
      const auto res = pencil_max_eigenvalue(f.grad, f.symgrad, C);
      est.eigenvalue = res.lambda;
      est.iterations = res.iterations;
      est.value = res.lambda;
      return est;
    }
    case InequalityConstant::GeneralizedKorn: {
      const auto f = vector_forms(mesh, true);
      const Eigen::SparseMatrix<double> B = f.symgrad + (1.0 / (rho * rho)) * f.shear;
      Eigen::MatrixXd C(f.ndof, 3);
      C.col(0) = f.mean_phi.col(0);
      C.col(1) = f.mean_phi.col(1);
      C.col(2) = f.mean_w;
      const auto res = pencil_max_eigenvalue(f.grad, B, C);
      est.eigenvalue = res.lambda;
      est.iterations = res.iterations;
      est.value = std::sqrt(res.lambda);
      return est;
    }
  }
  throw std::invalid_argument("unknown inequality constant");
}

double disc_energy_ratio(const Mesh& mesh, const PlateSolution& solution,
                         double rho0, double rho, Point2 center) {
  const auto E = energy_density_field(mesh, solution, rho0);
  double local = 0.0, global = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tn = mesh.triangles[t];
    const double e2 = E[t] * E[t];
    global += e2 * mesh.triangle_area(t);
    const double cap = disc_triangle_intersection_area(
        center, rho, mesh.nodes[tn[0]], mesh.nodes[tn[1]], mesh.nodes[tn[2]]);
    local += e2 * cap;
  }
  if (global <= 0.0) return 0.0;
  return local / global;
}

LpsProbe lps_probe(const Mesh& mesh, const PlateSolution& reference, double rho0,
                   double rho, const std::vector<Point2>& centers, double theta_hat) {
  if (theta_hat <= 0.0 || theta_hat >= 1.0)
    throw std::invalid_argument("theta_hat must lie in (0,1)");
  const double clearance = 7.0 / (2.0 * theta_hat) * rho;
  LpsProbe probe;
  probe.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& c : centers) {
    if (mesh.distance_to_outer_boundary(c) <= clearance) continue;
    const double r = disc_energy_ratio(mesh, reference, rho0, rho, c);
    probe.ratios.push_back(r);
    probe.min_ratio = std::min(probe.min_ratio, r);
    ++probe.admissible;
  }
  if (probe.admissible == 0)
    throw std::invalid_argument("empty admissible center set for the LPS probe");
  return probe;
}

TractionBoundReport verify_traction_bound(const Mesh& mesh, const PlateMaterial& material,
                                          const PlateSolution& rigid,
                                          const BoundaryReactions& reactions,
                                          double rho0, double r_D,
                                          QuadratureSpec quad) {
  TractionBoundReport rep;
  const auto& Mb = reactions.boundary_mass;
  const auto quad_form = [&](const Eigen::VectorXd& v) { return v.dot(Mb * v); };
  rep.lhs = quad_form(reactions.traction_m1) + quad_form(reactions.traction_m2) +
            rho0 * rho0 * quad_form(reactions.traction_q);

  // Strain integrals over the exterior with the assembly quadrature.
  double sym2 = 0.0, shear2 = 0.0;
  Eigen::Vector2d g[3];
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.tri_region[t] != Region::Exterior) continue;
    basis_gradients(mesh, t, g);
    const auto& tn = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
    Eigen::Vector2d gw = Eigen::Vector2d::Zero();
    Eigen::Vector2d phis = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) {
      G += rigid.phi(tn[k]) * g[k].transpose();
      gw += rigid.w(tn[k]) * g[k];
      phis += rigid.phi(tn[k]) / 3.0;
    }
    const Eigen::Matrix2d sym = 0.5 * (G + G.transpose());
    sym2 += area * (sym.array() * sym.array()).sum();
    if (quad.shear == ShearRule::Centroid) {
      shear2 += area * (phis + gw).squaredNorm();
    } else {
      const double mids[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
      for (const auto& N : mids) {
        Eigen::Vector2d s = gw;
        for (int k = 0; k < 3; ++k) s += N[k] * rigid.phi(tn[k]);
        shear2 += area / 3.0 * s.squaredNorm();
      }
    }
  }
  const double r5 = std::pow(rho0, 5), r3 = std::pow(rho0, 3);
  rep.rhs_core = (rho0 / r_D) * (r5 * sym2 + r3 * shear2);
  if (rep.lhs == 0.0 && rep.rhs_core == 0.0) {
    rep.vacuous = true;
    rep.ratio = 0.0;
  } else {
    rep.ratio = rep.lhs / rep.rhs_core;
  }
  (void)material;
  return rep;
}

ConvergenceTable analyze_convergence(const std::vector<ConvergenceRow>& rows) {
  ConvergenceTable tab;
  tab.rows = rows;
  const std::size_t n = rows.size();
  for (std::size_t i = 2; i < n; ++i) {
    const double d1 = rows[i - 1].W0 - rows[i - 2].W0;
    const double d2 = rows[i].W0 - rows[i - 1].W0;
    if (d1 != 0.0 && d2 != 0.0 && d1 / d2 > 0.0) {
      tab.W0_order = std::log2(std::abs(d1 / d2));
      const double q = d2 / d1;
      tab.W0_extrapolated = rows[i].W0 + d2 * q / (1.0 - q);
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double prev = rows[i - 1].t, cur = rows[i].t;
    if ((cur - prev) * (rows.back().t - rows.front().t) < 0.0 &&
        std::abs(cur - prev) > 1e-12 * std::max(std::abs(cur), std::abs(prev)))
      tab.monotone_t = false;
  }
  return tab;
}

}  // namespace rmlab
