#include "rmlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rmlab/version.hpp"
#include "rmlab/works.hpp"

namespace rmlab {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

const char* kind_name(DefectKind k) {
  switch (k) {
    case DefectKind::None:
      return "reference";
    case DefectKind::Cavity:
      return "cavity";
    case DefectKind::Rigid:
      return "rigid";
  }
  return "?";
}

}  // namespace

std::string works_csv(const FamilyResult& fam) {
  std::ostringstream out;
  out << "id,level,scale,h,triangles,W0,Wdef,deltaW,t,duality_ref,duality_def,F,"
         "residual_ref,residual_def\n";
  for (const auto& r : fam.instances) {
    out << r.id << ',' << r.level << ',' << format_number(r.scale) << ','
        << format_number(r.h) << ',' << r.triangles << ',' << format_number(r.W0) << ','
        << format_number(r.Wdef) << ',' << format_number(r.delta_W) << ','
        << format_number(r.t) << ',' << format_number(r.duality_ref) << ','
        << format_number(r.duality_def) << ',' << format_number(r.F) << ','
        << format_number(r.residual_ref) << ',' << format_number(r.residual_def) << '\n';
  }
  return out.str();
}

std::string estimates_csv(const FamilyResult& fam, const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "id,kind,area_true,t,F,K_hat,k_hat,upper,lower,fatness,sifc,distance,r_small,"
         "bounds_hold\n";
  for (std::size_t i = 0; i < fam.estimates.size(); ++i) {
    const auto& r = fam.instances[i];
    const auto& e = fam.estimates[i];
    out << r.id << ',' << kind_name(cfg.defect_kind) << ',' << format_number(e.area_true)
        << ',' << format_number(e.t) << ',' << format_number(e.F) << ','
        << format_number(e.K_hat) << ',' << format_number(e.lower_hat) << ','
        << format_number(e.upper) << ',' << format_number(e.lower) << ','
        << (e.hypotheses.fatness ? 1 : 0) << ',' << (e.hypotheses.sifc ? 1 : 0) << ','
        << (e.hypotheses.distance ? 1 : 0) << ',' << (e.hypotheses.r_small ? 1 : 0) << ','
        << (e.bounds_hold ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string convergence_csv(const FamilyResult& fam) {
  std::ostringstream out;
  out << "level,h,W0,Wdef,t\n";
  for (const auto& row : fam.convergence.rows)
    out << row.level << ',' << format_number(row.h) << ',' << format_number(row.W0) << ','
        << format_number(row.Wdef) << ',' << format_number(row.t) << '\n';
  out << "# W0_order," << format_number(fam.convergence.W0_order) << '\n';
  out << "# W0_extrapolated," << format_number(fam.convergence.W0_extrapolated) << '\n';
  out << "# monotone_t," << (fam.convergence.monotone_t ? 1 : 0) << '\n';
  return out.str();
}

std::string verification_json(const FamilyResult& fam, const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(cfg.defect_kind);
  j["pass"] = fam.verification_pass;
  auto& arr = j["instances"];
  arr = nlohmann::ordered_json::array();
  for (const auto& r : fam.instances) {
    nlohmann::ordered_json ji;
    ji["id"] = r.id;
    ji["level"] = r.level;
    ji["pass"] = r.verification.pass();
    auto& checks = ji["checks"];
    checks = nlohmann::ordered_json::array();
    for (const auto& c : r.verification.checks) {
      checks.push_back({{"name", c.name},
                        {"value", c.value},
                        {"bound", c.bound},
                        {"margin", c.margin},
                        {"pass", c.pass},
                        {"vacuous", c.vacuous}});
    }
    if (!r.traction_vacuous) ji["traction_ratio"] = r.traction_ratio;
    arr.push_back(ji);
  }
  if (!fam.constants.empty()) {
    auto& cs = j["inequality_constants"];
    cs = nlohmann::ordered_json::array();
    for (const auto& c : fam.constants) {
      const char* name = "?";
      switch (c.name) {
        case InequalityConstant::PoincareC1:
          name = "Poincare_C1";
          break;
        case InequalityConstant::PoincareC2:
          name = "Poincare_C2";
          break;
        case InequalityConstant::TracePoincareC3:
          name = "TracePoincare_C3";
          break;
        case InequalityConstant::Korn2:
          name = "Korn2";
          break;
        case InequalityConstant::GeneralizedKorn:
          name = "GeneralizedKorn";
          break;
      }
      cs.push_back({{"name", name},
                    {"value", c.value},
                    {"eigenvalue", c.eigenvalue},
                    {"rho", c.rho},
                    {"iterations", c.iterations}});
    }
  }
  if (!fam.lps.empty()) {
    auto& ls = j["lps"];
    ls = nlohmann::ordered_json::array();
    for (const auto& p : fam.lps)
      ls.push_back({{"min_ratio", p.min_ratio}, {"admissible", p.admissible}});
  }
  return j.dump(2) + "\n";
}

std::string manifest_json(const FamilyResult& fam, const std::string& cfg_text,
                          const std::vector<std::string>& outputs) {
  nlohmann::ordered_json j;
  j["tool"] = "rmlab";
  j["version"] = RMLAB_VERSION;
  j["config_hash"] = config_hash(cfg_text);
  j["outputs"] = outputs;
  auto& arr = j["instances"];
  arr = nlohmann::ordered_json::array();
  for (const auto& r : fam.instances)
    arr.push_back({{"id", r.id},
                   {"triangles", r.triangles},
                   {"elapsed_seconds", r.elapsed_seconds}});
  return j.dump(2) + "\n";
}

namespace {

struct Box {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  double w() const { return x1 - x0; }
  double h() const { return y1 - y0; }
};

Box mesh_box(const Mesh& mesh) {
  Box b;
  b.x0 = b.y0 = std::numeric_limits<double>::infinity();
  b.x1 = b.y1 = -std::numeric_limits<double>::infinity();
  for (const auto& p : mesh.nodes) {
    b.x0 = std::min(b.x0, p.x1);
    b.x1 = std::max(b.x1, p.x1);
    b.y0 = std::min(b.y0, p.x2);
    b.y1 = std::max(b.y1, p.x2);
  }
  return b;
}

// Small diverging palette; t in [0,1].
std::string color_of(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * t));
  const int g = static_cast<int>(std::lround(64 + 80 * (1.0 - std::abs(2 * t - 1))));
  const int b = static_cast<int>(std::lround(255 * (1.0 - t)));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string plot_fields_svg(const Mesh& mesh, const PlateSolution& solution,
                            double rho0) {
  const Box box = mesh_box(mesh);
  const double panel = 360.0, margin = 20.0, gap = 40.0;
  const double sx = (panel - 2 * margin) / box.w();
  const double sy = (panel - 2 * margin) / box.h();
  const double s = std::min(sx, sy);
  const auto map = [&](Point2 p, double xoff) {
    return Point2{xoff + margin + (p.x1 - box.x0) * s,
                  panel - margin - (p.x2 - box.y0) * s};
  };
  double wmin = 0, wmax = 0;
  bool first = true;
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (!solution.node_active[n]) continue;
    const double v = solution.w(n);
    if (first) {
      wmin = wmax = v;
      first = false;
    }
    wmin = std::min(wmin, v);
    wmax = std::max(wmax, v);
  }
  const auto E = energy_density_field(mesh, solution, rho0);
  double emax = 0.0;
  for (double e : E) emax = std::max(emax, e);

  std::ostringstream svg;
  const double W = 2 * panel + gap, H = panel + 30;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  const auto draw_panel = [&](double xoff, bool energy) {
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const auto& tn = mesh.triangles[t];
      const bool active = solution.node_active[tn[0]] && solution.node_active[tn[1]] &&
                          solution.node_active[tn[2]];
      std::string fill = "none";
      if (active) {
        double val;
        if (energy) {
          val = emax > 0 ? E[t] / emax : 0.0;
        } else {
          const double wc =
              (solution.w(tn[0]) + solution.w(tn[1]) + solution.w(tn[2])) / 3.0;
          val = wmax > wmin ? (wc - wmin) / (wmax - wmin) : 0.5;
        }
        fill = color_of(val);
      }
      svg << "<polygon points=\"";
      for (int k = 0; k < 3; ++k) {
        const Point2 q = map(mesh.nodes[tn[k]], xoff);
        svg << fmt_coord(q.x1) << ',' << fmt_coord(q.x2) << (k < 2 ? " " : "");
      }
      svg << "\" fill=\"" << fill << "\" stroke=\"none\"/>\n";
    }
    for (const auto& e : mesh.boundary_edges) {
      const Point2 a = map(mesh.nodes[e.a], xoff);
      const Point2 b = map(mesh.nodes[e.b], xoff);
      svg << "<line x1=\"" << fmt_coord(a.x1) << "\" y1=\"" << fmt_coord(a.x2)
          << "\" x2=\"" << fmt_coord(b.x1) << "\" y2=\"" << fmt_coord(b.x2)
          << "\" stroke=\"" << (e.tag == BoundaryTag::Defect ? "#000000" : "#444444")
          << "\" stroke-width=\"1\"/>\n";
    }
    // Colorbar.
    for (int i = 0; i < 20; ++i) {
      svg << "<rect x=\"" << fmt_coord(xoff + margin + i * (panel - 2 * margin) / 20.0)
          << "\" y=\"" << fmt_coord(panel + 2) << "\" width=\""
          << fmt_coord((panel - 2 * margin) / 20.0) << "\" height=\"10\" fill=\""
          << color_of((i + 0.5) / 20.0) << "\"/>\n";
    }
    svg << "<text x=\"" << fmt_coord(xoff + margin) << "\" y=\"" << fmt_coord(panel + 26)
        << "\" font-size=\"10\">"
        << (energy ? ("E: 0 .. " + format_number(emax))
                   : ("w: " + format_number(wmin) + " .. " + format_number(wmax)))
        << "</text>\n";
  };
  draw_panel(0.0, false);
  draw_panel(panel + gap, true);
  svg << "</svg>\n";
  return svg.str();
}

std::string bounds_svg(const FamilyResult& fam, const ExperimentConfig& cfg) {
  if (fam.estimates.empty()) throw std::invalid_argument("empty family for bounds plot");
  DomainSpec dom = cfg.domain;
  dom.finalize();
  const int levels = cfg.levels;
  const Calibration cal = fam.calibration.back();  // finest level
  double tmax = 0.0, amax = 0.0;
  for (std::size_t i = 0; i < fam.estimates.size(); ++i) {
    tmax = std::max(tmax, fam.estimates[i].t);
    amax = std::max(amax, std::max(fam.estimates[i].area_true, fam.estimates[i].upper));
  }
  tmax *= 1.1;
  amax *= 1.1;
  const double W = 420, H = 320, mL = 50, mB = 40, mT = 15, mR = 15;
  const auto X = [&](double t) { return mL + t / tmax * (W - mL - mR); };
  const auto Y = [&](double a) { return H - mB - a / amax * (H - mB - mT); };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect x=\"" << mL << "\" y=\"" << mT << "\" width=\"" << (W - mL - mR)
      << "\" height=\"" << (H - mB - mT)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  // Bound curves sampled on a fixed grid.
  const SolutionKind kind =
      cfg.defect_kind == DefectKind::Rigid ? SolutionKind::Rigid : SolutionKind::Cavity;
  const auto curve = [&](bool upper) {
    std::ostringstream pts;
    for (int i = 0; i <= 100; ++i) {
      const double t = tmax * i / 100.0;
      double a;
      if (upper) {
        a = upper_bound(t, cal.K_hat, dom.rho0);
      } else {
        if (kind == SolutionKind::Rigid && t >= 1.0) break;
        a = lower_bound(t, cal.lower_hat, dom.rho0, kind);
      }
      if (a > amax) break;
      pts << fmt_coord(X(t)) << ',' << fmt_coord(Y(a)) << ' ';
    }
    return pts.str();
  };
  svg << "<polyline points=\"" << curve(true)
      << "\" fill=\"none\" stroke=\"#bb2222\" stroke-width=\"1.5\"/>\n";
  svg << "<polyline points=\"" << curve(false)
      << "\" fill=\"none\" stroke=\"#2222bb\" stroke-width=\"1.5\"/>\n";
  // Scatter: finest level solid, others hollow.
  for (std::size_t i = 0; i < fam.estimates.size(); ++i) {
    const auto& e = fam.estimates[i];
    const bool finest = fam.instances[i].level == levels - 1;
    svg << "<circle cx=\"" << fmt_coord(X(e.t)) << "\" cy=\"" << fmt_coord(Y(e.area_true))
        << "\" r=\"3\" fill=\"" << (finest ? "#000000" : "none")
        << "\" stroke=\"#000000\"/>\n";
  }
  svg << "<text x=\"" << (W / 2 - 60) << "\" y=\"" << (H - 8)
      << "\" font-size=\"11\">normalized work gap t</text>\n";
  svg << "<text x=\"8\" y=\"" << mT + 12 << "\" font-size=\"11\">|D|</text>\n";
  svg << "<text x=\"" << (mL + 8) << "\" y=\"" << mT + 14
      << "\" font-size=\"10\" fill=\"#bb2222\">upper K rho0^2 t</text>\n";
  svg << "<text x=\"" << (mL + 8) << "\" y=\"" << mT + 28
      << "\" font-size=\"10\" fill=\"#2222bb\">lower "
      << (kind == SolutionKind::Rigid ? "C rho0^2 Phi(t)" : "k rho0^2 Psi(t)")
      << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace rmlab
