#include "rmlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rmlab {

DefectSpec ExperimentConfig::scaled_defect(double scale) const {
  DefectSpec d = defect;
  d.width *= scale;
  d.height *= scale;
  d.radius *= scale;
  for (auto& v : d.vertices) v = d.center + scale * (v - d.center);
  return d;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Parser {
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> values;
  std::map<std::string, int> section_lines;

  void load(const std::string& text) {
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find_first_of("#;");
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        section_lines[section] = lineno;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                          "' outside any [section]");
      if (!values[section].emplace(key, std::make_pair(val, lineno)).second)
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }

  bool has(const std::string& sec, const std::string& key) const {
    const auto s = values.find(sec);
    return s != values.end() && s->second.count(key) > 0;
  }

  std::string get(const std::string& sec, const std::string& key) {
    auto& e = values.at(sec).at(key);
    consumed.insert(sec + "." + key);
    return e.first;
  }

  int line_of(const std::string& sec, const std::string& key) const {
    return values.at(sec).at(key).second;
  }

  double get_double(const std::string& sec, const std::string& key, double fallback) {
    if (!has(sec, key)) return fallback;
    const std::string v = get(sec, key);
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(line_of(sec, key)) + ": key '" + sec +
                        "." + key + "' is not a number: '" + v + "'");
    }
  }

  int get_int(const std::string& sec, const std::string& key, int fallback) {
    const double x = get_double(sec, key, fallback);
    if (x != static_cast<int>(x))
      throw ConfigError("key '" + sec + "." + key + "' must be an integer");
    return static_cast<int>(x);
  }

  std::string get_string(const std::string& sec, const std::string& key,
                         const std::string& fallback) {
    return has(sec, key) ? get(sec, key) : fallback;
  }

  std::vector<double> get_list(const std::string& sec, const std::string& key) {
    std::vector<double> out;
    if (!has(sec, key)) return out;
    std::stringstream ss(get(sec, key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line_of(sec, key)) + ": bad number '" +
                          item + "' in list '" + sec + "." + key + "'");
      }
    }
    return out;
  }

  void check_consumed() const {
    static const std::map<std::string, std::vector<std::string>> known = {
        {"domain",
         {"shape", "width", "height", "radius", "center_x", "center_y", "segments",
          "rho0", "L0", "Q0"}},
        {"defect",
         {"kind", "shape", "cx", "cy", "width", "height", "radius", "sweep_scales"}},
        {"material", {"lambda", "mu", "h", "alpha0", "gamma0", "alpha1"}},
        {"load", {"preset", "kappa", "mode", "scale"}},
        {"solver", {"type", "tol", "max_iter"}},
        {"run",
         {"target_h", "levels", "workers", "h1", "d0", "theta_hat", "lps_rho",
          "min_feature_cells", "out"}},
    };
    for (const auto& [sec, keys] : values) {
      const auto ks = known.find(sec);
      if (ks == known.end())
        throw ConfigError("line " + std::to_string(section_lines.at(sec)) +
                          ": unknown section [" + sec + "]");
      for (const auto& [key, v] : keys)
        if (std::find(ks->second.begin(), ks->second.end(), key) == ks->second.end())
          throw ConfigError("line " + std::to_string(v.second) + ": unknown key '" + sec +
                            "." + key + "'");
    }
  }

 private:
  std::set<std::string> consumed;
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  Parser p;
  p.load(text);
  p.check_consumed();
  ExperimentConfig cfg;

  const std::string dshape = p.get_string("domain", "shape", "rectangle");
  if (dshape == "rectangle")
    cfg.domain.shape = DomainShape::Rectangle;
  else if (dshape == "disc")
    cfg.domain.shape = DomainShape::Disc;
  else
    throw ConfigError("domain.shape must be 'rectangle' or 'disc', got '" + dshape + "'");
  cfg.domain.width = p.get_double("domain", "width", 1.0);
  cfg.domain.height = p.get_double("domain", "height", 1.0);
  cfg.domain.radius = p.get_double("domain", "radius", 1.0);
  cfg.domain.origin = {p.get_double("domain", "center_x", 0.0),
                       p.get_double("domain", "center_y", 0.0)};
  cfg.domain.segments = p.get_int("domain", "segments", 64);
  cfg.domain.rho0 = p.get_double("domain", "rho0", 0.0);
  cfg.domain.L0 = p.get_double("domain", "L0", 0.0);
  cfg.domain.Q0 = p.get_double("domain", "Q0", 0.0);

  const std::string kind = p.get_string("defect", "kind", "none");
  if (kind == "none")
    cfg.defect_kind = DefectKind::None;
  else if (kind == "cavity")
    cfg.defect_kind = DefectKind::Cavity;
  else if (kind == "rigid")
    cfg.defect_kind = DefectKind::Rigid;
  else
    throw ConfigError("defect.kind must be none|cavity|rigid, got '" + kind + "'");
  const std::string fshape = p.get_string("defect", "shape", "rectangle");
  if (fshape == "rectangle")
    cfg.defect.shape = DefectShape::Rectangle;
  else if (fshape == "disc")
    cfg.defect.shape = DefectShape::Disc;
  else
    throw ConfigError("defect.shape must be 'rectangle' or 'disc', got '" + fshape + "'");
  cfg.defect.center = {p.get_double("defect", "cx", 0.0), p.get_double("defect", "cy", 0.0)};
  cfg.defect.width = p.get_double("defect", "width", 0.2);
  cfg.defect.height = p.get_double("defect", "height", 0.2);
  cfg.defect.radius = p.get_double("defect", "radius", 0.2);
  const auto scales = p.get_list("defect", "sweep_scales");
  if (!scales.empty()) cfg.sweep_scales = scales;

  cfg.material.lame.lambda = p.get_double("material", "lambda", 1.0);
  cfg.material.lame.mu = p.get_double("material", "mu", 1.0);
  cfg.material.h = p.get_double("material", "h", 0.1);
  cfg.material.lame.alpha0 = p.get_double("material", "alpha0", 0.5);
  cfg.material.lame.gamma0 = p.get_double("material", "gamma0", 0.5);
  cfg.material.lame.alpha1 = p.get_double("material", "alpha1", 3.0);

  cfg.load_preset = p.get_string("load", "preset", "pure_bending_x");
  cfg.load_kappa = p.get_double("load", "kappa", 1.0);
  cfg.load_mode = p.get_int("load", "mode", 2);
  cfg.load_scale = p.get_double("load", "scale", 1.0);

  const std::string stype = p.get_string("solver", "type", "direct");
  if (stype == "direct")
    cfg.solver.type = SolverOptions::Type::Direct;
  else if (stype == "cg")
    cfg.solver.type = SolverOptions::Type::ConjugateGradient;
  else
    throw ConfigError("solver.type must be 'direct' or 'cg', got '" + stype + "'");
  cfg.solver.tol = p.get_double("solver", "tol", 1e-10);
  cfg.solver.max_iter = p.get_int("solver", "max_iter", 20000);

  cfg.target_h = p.get_double("run", "target_h", 0.1);
  cfg.levels = p.get_int("run", "levels", 1);
  cfg.workers = p.get_int("run", "workers", 1);
  cfg.h1 = p.get_double("run", "h1", 0.3);
  cfg.d0 = p.get_double("run", "d0", 0.1);
  cfg.theta_hat = p.get_double("run", "theta_hat", 0.5);
  cfg.lps_rho = p.get_double("run", "lps_rho", 0.0);
  cfg.min_feature_cells = p.get_int("run", "min_feature_cells", 4);
  cfg.out_dir = p.get_string("run", "out", "out");

  if (cfg.levels < 1) throw ConfigError("run.levels must be >= 1");
  if (cfg.workers < 1) throw ConfigError("run.workers must be >= 1");
  if (cfg.target_h <= 0.0) throw ConfigError("run.target_h must be positive");
  for (double s : cfg.sweep_scales)
    if (s <= 0.0) throw ConfigError("defect.sweep_scales entries must be positive");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_hash(const std::string& text) {
  // FNV-1a over the text with normalized line endings.
  std::uint64_t h = 1469598103934665603ull;
  for (char c : text) {
    if (c == '\r') continue;
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace rmlab
