#include "rmlab/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace rmlab {

namespace {

std::string instance_id(DefectKind kind, double scale, int level) {
  std::ostringstream id;
  switch (kind) {
    case DefectKind::None:
      id << "reference";
      break;
    case DefectKind::Cavity:
      id << "cavity";
      break;
    case DefectKind::Rigid:
      id << "rigid";
      break;
  }
  id << "-s" << scale << "-L" << level;
  return id.str();
}

double min_feature(const DefectSpec& d) {
  switch (d.shape) {
    case DefectShape::Rectangle:
      return std::min(d.width, d.height);
    case DefectShape::Disc:
      return 2.0 * d.radius;
    case DefectShape::Polygon:
      return point_set_diameter(d.vertices);  // coarse proxy
  }
  return 0.0;
}

}  // namespace

SolvedInstance solve_instance(const ExperimentConfig& cfg, double scale, int level) {
  SolvedInstance inst;
  inst.has_defect = cfg.defect_kind != DefectKind::None;
  std::optional<DefectSpec> defect;
  if (inst.has_defect) {
    defect = cfg.scaled_defect(scale);
    const double feature = min_feature(*defect);
    if (cfg.target_h > feature / cfg.min_feature_cells)
      throw ConfigError("target_h too coarse: need >= " +
                        std::to_string(cfg.min_feature_cells) +
                        " cells across the smallest defect feature");
  }
  inst.mesh = build_plate_mesh(cfg.domain, defect, cfg.target_h);
  inst.load = make_preset_load(inst.mesh, cfg.material, cfg.load_preset, cfg.load_kappa,
                               cfg.load_mode);
  for (int l = 0; l < level; ++l) {
    inst.mesh = refine(inst.mesh);
    inst.load = refine_load(inst.load);
  }
  if (cfg.load_scale != 1.0) inst.load = inst.load.scaled(cfg.load_scale);

  const auto compat = check_compatibility(inst.mesh, inst.load);
  if (!compat.pass)
    throw ConfigError("incompatible boundary load (relative residuals " +
                      std::to_string(compat.rel_force) + ", " +
                      std::to_string(compat.rel_couple) + ")");

  inst.reference = solve_reference(inst.mesh, cfg.material, inst.load, cfg.solver);
  if (cfg.defect_kind == DefectKind::Cavity) {
    inst.defected = solve_cavity(inst.mesh, cfg.material, inst.load, cfg.solver);
    inst.extension = dirichlet_extension(inst.mesh, cfg.material, inst.defected, cfg.solver);
  } else if (cfg.defect_kind == DefectKind::Rigid) {
    inst.defected = solve_rigid(inst.mesh, cfg.material, inst.load, cfg.solver);
    inst.reactions = boundary_reactions(inst.mesh, cfg.material, inst.load, inst.defected);
  }
  return inst;
}

FamilyResult run_family(const ExperimentConfig& cfg, const RunRequest& req) {
  const std::vector<double> scales =
      cfg.defect_kind == DefectKind::None ? std::vector<double>{1.0} : cfg.sweep_scales;
  const int members = static_cast<int>(scales.size());
  const int levels = cfg.levels;

  FamilyResult fam;
  fam.instances.resize(members * levels);

  std::atomic<int> next{0};
  std::vector<std::string> errors(members * levels);
  const auto worker = [&]() {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= members * levels) return;
      const int m = task / levels;
      const int l = task % levels;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        DomainSpec dom = cfg.domain;
        dom.finalize();
        const auto inst = solve_instance(cfg, scales[m], l);
        InstanceResult r;
        r.id = instance_id(cfg.defect_kind, scales[m], l);
        r.member = m;
        r.level = l;
        r.scale = scales[m];
        r.h = inst.mesh.characteristic_size;
        r.triangles = inst.mesh.triangle_count();
        r.area_true = inst.mesh.defect_area();
        r.residual_ref = inst.reference.solver_residual;
        const auto ref_work =
            make_work_report(inst.mesh, cfg.material, inst.load, inst.reference);
        r.W0 = ref_work.W_energy;
        r.duality_ref = ref_work.duality_gap;
        r.F = frequency(inst.mesh, inst.load, dom.rho0).F;
        if (inst.has_defect) {
          r.residual_def = inst.defected.solver_residual;
          const auto def_work =
              make_work_report(inst.mesh, cfg.material, inst.load, inst.defected);
          r.Wdef = def_work.W_energy;
          r.duality_def = def_work.duality_gap;
          const auto gap = make_gap_report(inst.mesh, cfg.material, inst.reference,
                                           inst.defected);
          r.delta_W = gap.delta_W;
          r.t = gap.t;
          const auto geom = defect_parameters(cfg.scaled_defect(scales[m]), dom);
          r.flags = check_hypotheses(inst.mesh, geom, cfg.h1, cfg.d0, dom.rho0);
          if (req.with_verification) {
            if (cfg.defect_kind == DefectKind::Cavity) {
              r.verification = verify_cavity_sandwich(inst.mesh, cfg.material,
                                                      inst.reference, inst.defected,
                                                      inst.extension);
            } else {
              r.verification = verify_rigid_sandwich(inst.mesh, cfg.material,
                                                     inst.reference, inst.defected,
                                                     inst.reactions);
              const auto tb = verify_traction_bound(inst.mesh, cfg.material, inst.defected,
                                                    inst.reactions, dom.rho0, geom.r_D);
              r.traction_ratio = tb.ratio;
              r.traction_vacuous = tb.vacuous;
            }
            r.verification.instance_id = r.id;
            r.verification.mesh_level = l;
          }
        }
        r.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fam.instances[task] = std::move(r);
      } catch (const std::exception& e) {
        errors[task] = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min(cfg.workers, members * levels));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (int task = 0; task < members * levels; ++task)
    if (!errors[task].empty())
      throw SolverError("instance " + std::to_string(task) + " failed: " + errors[task]);

  for (const auto& r : fam.instances)
    if (!r.verification.pass()) fam.verification_pass = false;

  // Family calibration per level (defect families only).
  if (req.with_estimates && cfg.defect_kind != DefectKind::None) {
    DomainSpec dom = cfg.domain;
    dom.finalize();
    const SolutionKind kind = cfg.defect_kind == DefectKind::Rigid ? SolutionKind::Rigid
                                                                   : SolutionKind::Cavity;
    fam.estimates.resize(fam.instances.size());
    for (int l = 0; l < levels; ++l) {
      std::vector<CalibrationInstance> ci;
      for (int m = 0; m < members; ++m) {
        const auto& r = fam.at(m, l, levels);
        ci.push_back({r.area_true, r.t});
      }
      fam.calibration.push_back(calibrate(ci, kind, dom.rho0));
      for (int m = 0; m < members; ++m) {
        const auto& r = fam.at(m, l, levels);
        fam.estimates[m * levels + l] = make_size_estimate(
            r.t, r.area_true, fam.calibration.back(), kind, dom.rho0, r.F, r.flags);
      }
    }
    fam.has_estimates = true;
  }

  // Inequality constants and the LPS probe on the plain domain, per level.
  if (req.with_constants || req.with_lps) {
    DomainSpec dom = cfg.domain;
    dom.finalize();
    Mesh mesh = build_plate_mesh(cfg.domain, std::nullopt, cfg.target_h);
    BoundaryLoad load =
        make_preset_load(mesh, cfg.material, cfg.load_preset, cfg.load_kappa, cfg.load_mode);
    for (int l = 0; l < levels; ++l) {
      if (l > 0) {
        mesh = refine(mesh);
        load = refine_load(load);
      }
      if (req.with_constants) {
        for (const auto which :
             {InequalityConstant::PoincareC1, InequalityConstant::Korn2,
              InequalityConstant::GeneralizedKorn}) {
          auto est = estimate_inequality_constant(which, mesh, dom.rho0);
          est.rho = dom.rho0;
          fam.constants.push_back(est);
        }
      }
      if (req.with_lps && cfg.lps_rho > 0.0) {
        const auto ref = solve_reference(mesh, cfg.material, load, cfg.solver);
        // Center grid over the domain bounding box.
        std::vector<Point2> centers;
        const double clearance = 7.0 / (2.0 * cfg.theta_hat) * cfg.lps_rho;
        const double W = dom.shape == DomainShape::Rectangle ? dom.width : 2 * dom.radius;
        const double H = dom.shape == DomainShape::Rectangle ? dom.height : 2 * dom.radius;
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j) {
            const Point2 c = dom.origin + Point2{(-0.5 + (i + 0.5) / 5.0) * W,
                                                 (-0.5 + (j + 0.5) / 5.0) * H};
            if (mesh.distance_to_outer_boundary(c) > clearance) centers.push_back(c);
          }
        if (!centers.empty())
          fam.lps.push_back(
              lps_probe(mesh, ref, dom.rho0, cfg.lps_rho, centers, cfg.theta_hat));
      }
    }
  }

  // Convergence rows for member 0.
  std::vector<ConvergenceRow> rows;
  for (int l = 0; l < levels; ++l) {
    const auto& r = fam.at(0, l, levels);
    rows.push_back({l, r.h, r.W0, r.Wdef, r.t});
  }
  fam.convergence = analyze_convergence(rows);
  return fam;
}

}  // namespace rmlab
