#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rmlab/report.hpp"
#include "rmlab/runner.hpp"
#include "rmlab/verify.hpp"
#include "rmlab/version.hpp"

namespace py = pybind11;
using namespace rmlab;

PYBIND11_MODULE(_rmlab, m) {
  m.doc() = "Reissner-Mindlin defect-size laboratory";
  m.attr("__version__") = RMLAB_VERSION;

  py::register_exception<MeshError>(m, "MeshError");
  py::register_exception<SolverError>(m, "SolverError");
  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<Point2>(m, "Point2")
      .def(py::init<>())
      .def(py::init([](double x1, double x2) { return Point2{x1, x2}; }))
      .def_readwrite("x1", &Point2::x1)
      .def_readwrite("x2", &Point2::x2)
      .def("__repr__", [](const Point2& p) {
        return "Point2(" + std::to_string(p.x1) + ", " + std::to_string(p.x2) + ")";
      });

  py::enum_<Region>(m, "Region").value("Exterior", Region::Exterior).value("Defect", Region::Defect);
  py::enum_<BoundaryTag>(m, "BoundaryTag")
      .value("Outer", BoundaryTag::Outer)
      .value("Defect", BoundaryTag::Defect);
  py::enum_<DomainShape>(m, "DomainShape")
      .value("Rectangle", DomainShape::Rectangle)
      .value("Disc", DomainShape::Disc);
  py::enum_<DefectShape>(m, "DefectShape")
      .value("Disc", DefectShape::Disc)
      .value("Rectangle", DefectShape::Rectangle)
      .value("Polygon", DefectShape::Polygon);
  py::enum_<ActiveRegion>(m, "ActiveRegion")
      .value("Full", ActiveRegion::Full)
      .value("Exterior", ActiveRegion::Exterior)
      .value("Defect", ActiveRegion::Defect);
  py::enum_<SolutionKind>(m, "SolutionKind")
      .value("Reference", SolutionKind::Reference)
      .value("Cavity", SolutionKind::Cavity)
      .value("Rigid", SolutionKind::Rigid)
      .value("DirichletExtension", SolutionKind::DirichletExtension);
  py::enum_<DefectKind>(m, "DefectKind")
      .value("NoDefect", DefectKind::None)
      .value("Cavity", DefectKind::Cavity)
      .value("Rigid", DefectKind::Rigid);
  py::enum_<ShearRule>(m, "ShearRule")
      .value("Centroid", ShearRule::Centroid)
      .value("ThreePoint", ShearRule::ThreePoint);
  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("shear", &QuadratureSpec::shear);
  py::enum_<InequalityConstant>(m, "InequalityConstant")
      .value("PoincareC1", InequalityConstant::PoincareC1)
      .value("PoincareC2", InequalityConstant::PoincareC2)
      .value("TracePoincareC3", InequalityConstant::TracePoincareC3)
      .value("Korn2", InequalityConstant::Korn2)
      .value("GeneralizedKorn", InequalityConstant::GeneralizedKorn);

  py::class_<Mesh>(m, "Mesh")
      .def_readonly("nodes", &Mesh::nodes)
      .def_readonly("triangles", &Mesh::triangles)
      .def_readonly("tri_region", &Mesh::tri_region)
      .def_readonly("characteristic_size", &Mesh::characteristic_size)
      .def_property_readonly("triangle_count", &Mesh::triangle_count)
      .def_property_readonly("node_count", &Mesh::node_count)
      .def("total_area", &Mesh::total_area)
      .def("defect_area", &Mesh::defect_area)
      .def("has_defect", &Mesh::has_defect)
      .def("distance_to_outer_boundary", &Mesh::distance_to_outer_boundary)
      .def("validate", &Mesh::validate);

  py::class_<DomainSpec>(m, "DomainSpec")
      .def(py::init<>())
      .def_readwrite("shape", &DomainSpec::shape)
      .def_readwrite("width", &DomainSpec::width)
      .def_readwrite("height", &DomainSpec::height)
      .def_readwrite("radius", &DomainSpec::radius)
      .def_readwrite("origin", &DomainSpec::origin)
      .def_readwrite("segments", &DomainSpec::segments)
      .def_readwrite("rho0", &DomainSpec::rho0)
      .def_readwrite("L0", &DomainSpec::L0)
      .def_readwrite("Q0", &DomainSpec::Q0)
      .def("finalize", &DomainSpec::finalize);

  py::class_<DefectSpec>(m, "DefectSpec")
      .def(py::init<>())
      .def_readwrite("shape", &DefectSpec::shape)
      .def_readwrite("center", &DefectSpec::center)
      .def_readwrite("width", &DefectSpec::width)
      .def_readwrite("height", &DefectSpec::height)
      .def_readwrite("radius", &DefectSpec::radius)
      .def_readwrite("vertices", &DefectSpec::vertices)
      .def_readwrite("user_r", &DefectSpec::user_r)
      .def_readwrite("user_L", &DefectSpec::user_L);

  py::class_<DefectGeometry>(m, "DefectGeometry")
      .def_readonly("r_D", &DefectGeometry::r_D)
      .def_readonly("L_D", &DefectGeometry::L_D)
      .def_readonly("Q_D", &DefectGeometry::Q_D)
      .def_readonly("diam", &DefectGeometry::diam)
      .def_readonly("dist_to_outer", &DefectGeometry::dist_to_outer)
      .def_readonly("d0", &DefectGeometry::d0);

  py::class_<LameField>(m, "LameField")
      .def(py::init<>())
      .def_readwrite("lam", &LameField::lambda)
      .def_readwrite("mu", &LameField::mu)
      .def_readwrite("alpha0", &LameField::alpha0)
      .def_readwrite("gamma0", &LameField::gamma0)
      .def_readwrite("alpha1", &LameField::alpha1);

  py::class_<PlateMaterial>(m, "PlateMaterial")
      .def(py::init<>())
      .def_readwrite("lame", &PlateMaterial::lame)
      .def_readwrite("h", &PlateMaterial::h)
      .def("shear_modulus", &PlateMaterial::shear_modulus)
      .def("young", &PlateMaterial::young)
      .def("poisson", &PlateMaterial::poisson)
      .def("bending_stiffness", &PlateMaterial::bending_stiffness);

  py::class_<BoundaryLoad>(m, "BoundaryLoad")
      .def("scaled", &BoundaryLoad::scaled)
      .def("is_zero", &BoundaryLoad::is_zero);

  py::class_<CompatibilityReport>(m, "CompatibilityReport")
      .def_readonly("force_residual", &CompatibilityReport::force_residual)
      .def_readonly("rel_force", &CompatibilityReport::rel_force)
      .def_readonly("rel_couple", &CompatibilityReport::rel_couple)
      .def_readonly("ok", &CompatibilityReport::pass);

  py::class_<PlateSolution>(m, "PlateSolution")
      .def_readonly("kind", &PlateSolution::kind)
      .def_readonly("phi1", &PlateSolution::phi1)
      .def_readonly("phi2", &PlateSolution::phi2)
      .def_readonly("w", &PlateSolution::w)
      .def_readonly("solver_residual", &PlateSolution::solver_residual)
      .def_readonly("gauge", &PlateSolution::gauge);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SolverOptions::tol)
      .def_readwrite("max_iter", &SolverOptions::max_iter);

  py::class_<BoundaryReactions>(m, "BoundaryReactions")
      .def_readonly("nodes", &BoundaryReactions::nodes)
      .def_readonly("weight_q", &BoundaryReactions::weight_q)
      .def_readonly("force_sum", &BoundaryReactions::force_sum)
      .def_readonly("couple_sum", &BoundaryReactions::couple_sum);

  py::class_<WorkReport>(m, "WorkReport")
      .def_readonly("W_boundary", &WorkReport::W_boundary)
      .def_readonly("W_energy", &WorkReport::W_energy)
      .def_readonly("duality_gap", &WorkReport::duality_gap);

  py::class_<GapReport>(m, "GapReport")
      .def_readonly("W0", &GapReport::W0)
      .def_readonly("Wdef", &GapReport::Wdef)
      .def_readonly("delta_W", &GapReport::delta_W)
      .def_readonly("t", &GapReport::t);

  py::class_<FrequencyReport>(m, "FrequencyReport")
      .def_readonly("norm_half", &FrequencyReport::norm_half)
      .def_readonly("norm_one", &FrequencyReport::norm_one)
      .def_readonly("F", &FrequencyReport::F);

  py::class_<HypothesisFlags>(m, "HypothesisFlags")
      .def_readonly("fatness", &HypothesisFlags::fatness)
      .def_readonly("sifc", &HypothesisFlags::sifc)
      .def_readonly("distance", &HypothesisFlags::distance)
      .def_readonly("r_small", &HypothesisFlags::r_small)
      .def("all", &HypothesisFlags::all);

  py::class_<Calibration>(m, "Calibration")
      .def_readonly("K_hat", &Calibration::K_hat)
      .def_readonly("lower_hat", &Calibration::lower_hat);

  py::class_<SizeEstimateReport>(m, "SizeEstimateReport")
      .def_readonly("t", &SizeEstimateReport::t)
      .def_readonly("area_true", &SizeEstimateReport::area_true)
      .def_readonly("upper", &SizeEstimateReport::upper)
      .def_readonly("lower", &SizeEstimateReport::lower)
      .def_readonly("bounds_hold", &SizeEstimateReport::bounds_hold);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("value", &CheckResult::value)
      .def_readonly("bound", &CheckResult::bound)
      .def_readonly("ok", &CheckResult::pass)
      .def_readonly("vacuous", &CheckResult::vacuous);

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("checks", &VerificationReport::checks)
      .def("ok", &VerificationReport::pass);

  py::class_<ConstantEstimate>(m, "ConstantEstimate")
      .def_readonly("value", &ConstantEstimate::value)
      .def_readonly("eigenvalue", &ConstantEstimate::eigenvalue)
      .def_readonly("iterations", &ConstantEstimate::iterations);

  py::class_<LpsProbe>(m, "LpsProbe")
      .def_readonly("min_ratio", &LpsProbe::min_ratio)
      .def_readonly("admissible", &LpsProbe::admissible)
      .def_readonly("ratios", &LpsProbe::ratios);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readwrite("defect_kind", &ExperimentConfig::defect_kind)
      .def_readwrite("sweep_scales", &ExperimentConfig::sweep_scales)
      .def_readwrite("levels", &ExperimentConfig::levels)
      .def_readwrite("workers", &ExperimentConfig::workers)
      .def_readwrite("target_h", &ExperimentConfig::target_h)
      .def_readwrite("out_dir", &ExperimentConfig::out_dir);

  py::class_<InstanceResult>(m, "InstanceResult")
      .def_readonly("id", &InstanceResult::id)
      .def_readonly("level", &InstanceResult::level)
      .def_readonly("W0", &InstanceResult::W0)
      .def_readonly("Wdef", &InstanceResult::Wdef)
      .def_readonly("t", &InstanceResult::t)
      .def_readonly("F", &InstanceResult::F)
      .def_readonly("duality_ref", &InstanceResult::duality_ref)
      .def_readonly("duality_def", &InstanceResult::duality_def);

  py::class_<FamilyResult>(m, "FamilyResult")
      .def_readonly("instances", &FamilyResult::instances)
      .def_readonly("estimates", &FamilyResult::estimates)
      .def_readonly("verification_pass", &FamilyResult::verification_pass);

  // Meshing.
  m.def("build_plate_mesh", &build_plate_mesh, py::arg("domain"), py::arg("defect"),
        py::arg("target_h"));
  m.def("refine", &refine);
  m.def("fatness_measure", &fatness_measure);
  m.def("defect_parameters", &defect_parameters);
  m.def("export_mesh_text", &export_mesh_text);
  m.def("import_mesh_text", &import_mesh_text);

  // Material.
  m.def("bending_apply", &bending_apply);
  m.def("check_material",
        [](const PlateMaterial& mat) { return check_material(mat).pass; });

  // Loads.
  m.def("make_preset_load", &make_preset_load, py::arg("mesh"), py::arg("material"),
        py::arg("preset"), py::arg("kappa"), py::arg("fourier_mode") = 2);
  m.def("refine_load", &refine_load);
  m.def("check_compatibility", &check_compatibility, py::arg("mesh"), py::arg("load"),
        py::arg("tolerance") = 1e-10);

  // Solvers.
  m.def("solve_reference", &solve_reference, py::arg("mesh"), py::arg("material"),
        py::arg("load"), py::arg("options") = SolverOptions{});
  m.def("solve_cavity", &solve_cavity, py::arg("mesh"), py::arg("material"),
        py::arg("load"), py::arg("options") = SolverOptions{});
  m.def("solve_rigid", &solve_rigid, py::arg("mesh"), py::arg("material"),
        py::arg("load"), py::arg("options") = SolverOptions{});
  m.def("dirichlet_extension", &dirichlet_extension, py::arg("mesh"), py::arg("material"),
        py::arg("cavity"), py::arg("options") = SolverOptions{});
  m.def("boundary_reactions", &boundary_reactions, py::arg("mesh"), py::arg("material"),
        py::arg("load"), py::arg("solution"), py::arg("quad") = QuadratureSpec{});

  // Works and gaps.
  m.def("work_boundary", &work_boundary);
  m.def("work_energy", &work_energy, py::arg("mesh"), py::arg("material"),
        py::arg("solution"), py::arg("region"), py::arg("quad") = QuadratureSpec{});
  m.def("make_work_report", &make_work_report, py::arg("mesh"), py::arg("material"),
        py::arg("load"), py::arg("solution"), py::arg("quad") = QuadratureSpec{});
  m.def("make_gap_report", &make_gap_report, py::arg("mesh"), py::arg("material"),
        py::arg("reference"), py::arg("defected"), py::arg("quad") = QuadratureSpec{});
  m.def("energy_density_field", &energy_density_field);
  m.def("cross_energy_cavity", &cross_energy_cavity, py::arg("mesh"), py::arg("material"),
        py::arg("reference"), py::arg("extension"), py::arg("quad") = QuadratureSpec{});
  m.def("lemma61_boundary_term", &lemma61_boundary_term);

  // Estimates.
  m.def("psi", &psi);
  m.def("phi", &phi);
  m.def("upper_bound", &upper_bound);
  m.def("lower_bound", &lower_bound);
  m.def("frequency", &frequency);
  m.def("check_hypotheses", &check_hypotheses);
  m.def("calibrate",
        [](const std::vector<std::pair<double, double>>& fam, SolutionKind kind,
           double rho0) {
          std::vector<CalibrationInstance> ci;
          for (const auto& [area, t] : fam) ci.push_back({area, t});
          return calibrate(ci, kind, rho0);
        },
        py::arg("family"), py::arg("kind"), py::arg("rho0"));

  // Verification.
  m.def("verify_cavity_sandwich", &verify_cavity_sandwich, py::arg("mesh"),
        py::arg("material"), py::arg("reference"), py::arg("cavity"),
        py::arg("extension"), py::arg("quad") = QuadratureSpec{});
  m.def("verify_rigid_sandwich", &verify_rigid_sandwich, py::arg("mesh"),
        py::arg("material"), py::arg("reference"), py::arg("rigid"),
        py::arg("reactions"), py::arg("quad") = QuadratureSpec{});
  m.def("estimate_inequality_constant", &estimate_inequality_constant);
  m.def("disc_energy_ratio", &disc_energy_ratio);
  m.def("lps_probe", &lps_probe, py::arg("mesh"), py::arg("reference"), py::arg("rho0"),
        py::arg("rho"), py::arg("centers"), py::arg("theta_hat") = 0.5);

  // Experiment runner.
  m.def("parse_config_text", &parse_config_text);
  m.def("run_family",
        [](const ExperimentConfig& cfg, bool with_estimates, bool with_verification) {
          RunRequest req;
          req.with_estimates = with_estimates;
          req.with_verification = with_verification;
          return run_family(cfg, req);
        },
        py::arg("config"), py::arg("with_estimates") = true,
        py::arg("with_verification") = true);
  m.def("works_csv", &works_csv);
}
