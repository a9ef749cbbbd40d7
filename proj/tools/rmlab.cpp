// Command-line front end: config-driven meshing, solves, works, size
// estimates, verification and sweep reports.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rmlab/report.hpp"
#include "rmlab/runner.hpp"
#include "rmlab/version.hpp"

namespace fs = std::filesystem;
using namespace rmlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int levels = 0;   // 0 = keep config value
  int workers = 0;  // 0 = keep config value
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load_config(const CommonArgs& args, std::string* text_out = nullptr) {
  const std::string text = slurp(args.config_path);
  if (text_out) *text_out = text;
  ExperimentConfig cfg = parse_config_text(text);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.levels > 0) cfg.levels = args.levels;
  if (args.workers > 0) cfg.workers = args.workers;
  fs::create_directories(cfg.out_dir);
  return cfg;
}

std::vector<double> family_scales(const ExperimentConfig& cfg) {
  return cfg.defect_kind == DefectKind::None ? std::vector<double>{1.0}
                                             : cfg.sweep_scales;
}

int cmd_mesh(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const auto scales = family_scales(cfg);
  for (std::size_t m = 0; m < scales.size(); ++m) {
    std::optional<DefectSpec> defect;
    if (cfg.defect_kind != DefectKind::None) defect = cfg.scaled_defect(scales[m]);
    Mesh mesh = build_plate_mesh(cfg.domain, defect, cfg.target_h);
    for (int l = 0; l < cfg.levels; ++l) {
      if (l > 0) mesh = refine(mesh);
      std::ostringstream name;
      name << "mesh-m" << m << "-L" << l << ".rmmesh";
      export_mesh_file(mesh, (fs::path(cfg.out_dir) / name.str()).string());
      std::cout << name.str() << ": " << mesh.triangle_count() << " triangles, h="
                << format_number(mesh.characteristic_size) << "\n";
    }
  }
  return kExitOk;
}

int cmd_solve(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const auto scales = family_scales(cfg);
  DomainSpec dom = cfg.domain;
  dom.finalize();
  for (std::size_t m = 0; m < scales.size(); ++m) {
    const auto inst = solve_instance(cfg, scales[m], cfg.levels - 1);
    const auto dump = [&](const PlateSolution& s, const std::string& tag) {
      std::ostringstream csv;
      csv << "node,x1,x2,phi1,phi2,w\n";
      for (int n = 0; n < inst.mesh.node_count(); ++n) {
        if (!s.node_active[n]) continue;
        csv << n << ',' << format_number(inst.mesh.nodes[n].x1) << ','
            << format_number(inst.mesh.nodes[n].x2) << ',' << format_number(s.phi1(n))
            << ',' << format_number(s.phi2(n)) << ',' << format_number(s.w(n)) << '\n';
      }
      std::ostringstream base;
      base << tag << "-m" << m;
      write_file((fs::path(cfg.out_dir) / (base.str() + ".csv")).string(), csv.str());
      write_file((fs::path(cfg.out_dir) / (base.str() + ".svg")).string(),
                 plot_fields_svg(inst.mesh, s, dom.rho0));
    };
    dump(inst.reference, "reference");
    if (inst.has_defect)
      dump(inst.defected, cfg.defect_kind == DefectKind::Cavity ? "cavity" : "rigid");
    std::cout << "member " << m << " solved (residual "
              << format_number(inst.reference.solver_residual) << ")\n";
  }
  return kExitOk;
}

int run_and_write(const CommonArgs& args, const RunRequest& req, bool with_bounds_svg,
                  bool with_manifest) {
  std::string cfg_text;
  const ExperimentConfig cfg = load_config(args, &cfg_text);
  const FamilyResult fam = run_family(cfg, req);
  std::vector<std::string> outputs;
  const auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(cfg.out_dir) / name).string();
    write_file(path, content);
    outputs.push_back(name);
  };
  emit("works.csv", works_csv(fam));
  if (fam.has_estimates) emit("estimates.csv", estimates_csv(fam, cfg));
  emit("convergence.csv", convergence_csv(fam));
  if (req.with_verification) emit("verification.json", verification_json(fam, cfg));
  if (with_bounds_svg && fam.has_estimates) emit("bounds.svg", bounds_svg(fam, cfg));
  if (with_manifest) emit("manifest.json", manifest_json(fam, cfg_text, outputs));
  for (const auto& r : fam.instances)
    std::cout << r.id << ": W0=" << format_number(r.W0)
              << " Wdef=" << format_number(r.Wdef) << " t=" << format_number(r.t)
              << (r.verification.checks.empty()
                      ? ""
                      : (r.verification.pass() ? " [verify pass]" : " [verify FAIL]"))
              << "\n";
  if (req.with_verification && !fam.verification_pass) {
    std::cerr << "verification failed\n";
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reissner-Mindlin defect-size laboratory"};
  app.set_version_flag("--version", RMLAB_VERSION);
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "experiment config file")->required();
    sub->add_option("--out", args.out_dir, "output directory override");
    sub->add_option("--levels", args.levels, "refinement levels override");
    sub->add_option("--workers", args.workers, "worker threads override");
  };
  auto* mesh_cmd = app.add_subcommand("mesh", "build and export meshes");
  auto* solve_cmd = app.add_subcommand("solve", "run the direct solves, dump fields");
  auto* works_cmd = app.add_subcommand("works", "works and gaps table");
  auto* estimate_cmd = app.add_subcommand("estimate", "size-estimate table");
  auto* verify_cmd = app.add_subcommand("verify", "verification suite");
  auto* sweep_cmd = app.add_subcommand("sweep", "full pipeline over the family");
  auto* report_cmd = app.add_subcommand("report", "estimate table and bound plots");
  for (auto* sub :
       {mesh_cmd, solve_cmd, works_cmd, estimate_cmd, verify_cmd, sweep_cmd, report_cmd})
    add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (mesh_cmd->parsed()) return cmd_mesh(args);
    if (solve_cmd->parsed()) return cmd_solve(args);
    if (works_cmd->parsed())
      return run_and_write(args, {false, false, false, false}, false, false);
    if (estimate_cmd->parsed())
      return run_and_write(args, {true, false, false, false}, false, false);
    if (verify_cmd->parsed())
      return run_and_write(args, {true, true, true, true}, false, false);
    if (sweep_cmd->parsed()) return run_and_write(args, {true, true, true, true}, true, true);
    if (report_cmd->parsed())
      return run_and_write(args, {true, false, false, false}, true, false);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const MeshError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
