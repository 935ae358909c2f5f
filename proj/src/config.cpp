#include "bplab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace bplab {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw Error(ErrorCode::ConfigError, path + ": " + reason);
}

const std::set<std::string> kScenarios = {"dispersion", "consistency", "longtime",
                                          "burgers",    "operator-audit", "mollifier-study"};

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(path + "." + key, "unknown key");
  }
}

const json& object_at(const json& doc, const std::string& key, const std::string& path) {
  const json& v = doc.at(key);
  if (!v.is_object()) fail(path + "." + key, "expected an object");
  return v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  return obj.contains(key) ? number(obj.at(key), path + "." + key) : fallback;
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

GridSpec parse_grid(const json& g, const std::string& path) {
  reject_unknown(g, path, {"dim", "n", "length", "gamma"});
  GridSpec spec;
  spec.dim = g.contains("dim") ? static_cast<int>(number(g.at("dim"), path + ".dim")) : 1;
  if (spec.dim != 1 && spec.dim != 2) fail(path + ".dim", "must be 1 or 2");
  spec.n = {1, 1};
  spec.length = {2.0 * std::numbers::pi, 1.0};
  if (spec.dim == 2) spec.length[1] = 2.0 * std::numbers::pi;
  if (!g.contains("n")) fail(path + ".n", "missing");
  const json& n = g.at("n");
  if (n.is_number()) {
    spec.n[0] = static_cast<int>(number(n, path + ".n"));
    if (spec.dim == 2) spec.n[1] = spec.n[0];
  } else {
    const auto values = number_list(n, path + ".n");
    if (static_cast<int>(values.size()) != spec.dim) fail(path + ".n", "needs one entry per axis");
    for (int a = 0; a < spec.dim; ++a) spec.n[static_cast<std::size_t>(a)] = static_cast<int>(values[static_cast<std::size_t>(a)]);
  }
  for (int a = 0; a < spec.dim; ++a) {
    const int na = spec.n[static_cast<std::size_t>(a)];
    if (na < 8 || (na & (na - 1)) != 0) fail(path + ".n", "points per axis must be a power of two >= 8");
  }
  if (g.contains("length")) {
    const json& l = g.at("length");
    if (l.is_array()) {
      if (static_cast<int>(l.size()) != spec.dim) fail(path + ".length", "needs one entry per axis");
      for (int a = 0; a < spec.dim; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        spec.length[ua] = parse_length(l[ua], path + ".length[" + std::to_string(a) + "]");
      }
    } else {
      spec.length[0] = parse_length(l, path + ".length");
      if (spec.dim == 2) spec.length[1] = spec.length[0];
    }
  }
  spec.gamma = number_or(g, "gamma", 1.0, path);
  try {
    Grid check(spec);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return spec;
}

BottomProfile parse_bottom(const json& b, const std::string& path, double& beta) {
  reject_unknown(b, path, {"profile", "beta", "center", "width", "height", "mode", "amplitude"});
  beta = number_or(b, "beta", 0.0, path);
  const std::string kind = b.contains("profile") ? string_at(b.at("profile"), path + ".profile") : "flat";
  if (kind == "flat") return profile::Flat{};
  if (kind == "gaussian") {
    profile::GaussianBump bump;
    if (b.contains("center")) {
      const json& c = b.at("center");
      if (!c.is_array() || c.empty() || c.size() > 2) fail(path + ".center", "expected [x] or [x, y]");
      for (std::size_t i = 0; i < c.size(); ++i) bump.center[i] = parse_length(c[i], path + ".center");
    }
    bump.width = number_or(b, "width", 1.0, path);
    bump.height = number_or(b, "height", 1.0, path);
    if (!(bump.width > 0.0)) fail(path + ".width", "must be positive");
    return bump;
  }
  if (kind == "sinusoidal") {
    profile::Sinusoidal s;
    s.mode = static_cast<int>(number_or(b, "mode", 1.0, path));
    s.amplitude = number_or(b, "amplitude", 1.0, path);
    return s;
  }
  fail(path + ".profile", "unknown profile '" + kind + "' (flat, gaussian, sinusoidal)");
}

InitialCondition parse_initial(const json& ic, const std::string& path) {
  reject_unknown(ic, path, {"shape", "amplitude", "center", "width", "modes"});
  InitialCondition out;
  const std::string shape = ic.contains("shape") ? string_at(ic.at("shape"), path + ".shape") : "gaussian";
  if (shape == "gaussian") {
    out.shape = InitialShape::Gaussian;
  } else if (shape == "gaussian_right_moving") {
    out.shape = InitialShape::GaussianRightMoving;
  } else if (shape == "modes") {
    out.shape = InitialShape::Modes;
  } else if (shape == "burgers_sine") {
    out.shape = InitialShape::BurgersSine;
  } else {
    fail(path + ".shape", "unknown shape '" + shape + "' (gaussian, gaussian_right_moving, modes, burgers_sine)");
  }
  out.amplitude = number_or(ic, "amplitude", 1.0, path);
  out.width = number_or(ic, "width", 1.0, path);
  if (!(out.width > 0.0)) fail(path + ".width", "must be positive");
  if (ic.contains("center")) {
    const json& c = ic.at("center");
    if (!c.is_array() || c.empty() || c.size() > 2) fail(path + ".center", "expected [x] or [x, y]");
    for (std::size_t i = 0; i < c.size(); ++i) out.center[i] = parse_length(c[i], path + ".center");
    out.centered = false;
  }
  if (ic.contains("modes")) {
    const json& m = ic.at("modes");
    if (!m.is_array()) fail(path + ".modes", "expected an array");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string p = path + ".modes[" + std::to_string(i) + "]";
      if (m[i].is_number()) {
        out.modes.push_back({static_cast<int>(number(m[i], p)), 0});
      } else {
        const auto v = number_list(m[i], p);
        if (v.empty() || v.size() > 2) fail(p, "expected k or [kx, ky]");
        out.modes.push_back({static_cast<int>(v[0]), v.size() == 2 ? static_cast<int>(v[1]) : 0});
      }
    }
  }
  if (out.shape == InitialShape::Modes && out.modes.empty()) fail(path + ".modes", "required for shape 'modes'");
  return out;
}

StepperConfig parse_stepper(const json& s, const std::string& path) {
  reject_unknown(s, path, {"dt", "scheme", "delta", "t_end", "output_stride", "blowup_threshold"});
  StepperConfig c;
  c.dt = number_or(s, "dt", c.dt, path);
  if (s.contains("scheme")) {
    try {
      c.scheme = scheme_from_string(string_at(s.at("scheme"), path + ".scheme"));
    } catch (const Error& e) {
      fail(path + ".scheme", e.what());
    }
  }
  c.delta = number_or(s, "delta", c.delta, path);
  c.t_end = number_or(s, "t_end", c.t_end, path);
  c.output_stride = static_cast<int>(number_or(s, "output_stride", c.output_stride, path));
  c.blowup_threshold = number_or(s, "blowup_threshold", c.blowup_threshold, path);
  if (!(c.dt > 0.0)) fail(path + ".dt", "must be positive");
  if (!(c.delta >= 0.0)) fail(path + ".delta", "must be >= 0");
  if (!(c.t_end >= 0.0)) fail(path + ".t_end", "must be >= 0");
  if (c.output_stride < 1) fail(path + ".output_stride", "must be >= 1");
  if (!(c.blowup_threshold > 0.0)) fail(path + ".blowup_threshold", "must be positive");
  return c;
}

}  // namespace

double parse_length(const json& value, const std::string& path) {
  double out = 0.0;
  if (value.is_number()) {
    out = number(value, path);
  } else if (value.is_string()) {
    std::string s = value.get<std::string>();
    std::erase(s, ' ');
    double divisor = 1.0;
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      try {
        divisor = std::stod(s.substr(slash + 1));
      } catch (const std::exception&) {
        fail(path, "cannot parse length '" + value.get<std::string>() + "'");
      }
      s = s.substr(0, slash);
    }
    double factor = 1.0;
    if (s.size() >= 2 && s.ends_with("pi")) {
      factor = std::numbers::pi;
      s = s.substr(0, s.size() - 2);
      if (s.ends_with("*")) s.pop_back();
    }
    double coeff = 1.0;
    if (!s.empty()) {
      std::size_t used = 0;
      try {
        coeff = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size()) fail(path, "cannot parse length '" + value.get<std::string>() + "'");
    } else if (factor == 1.0) {
      fail(path, "empty length");
    }
    out = coeff * factor / divisor;
  } else {
    fail(path, "expected a number or a string like \"20pi\"");
  }
  if (!std::isfinite(out)) fail(path, "length is not finite");
  return out;
}

std::map<std::string, double> default_thresholds(const std::string& scenario) {
  if (scenario == "dispersion") return {{"rel_err", 1e-3}, {"energy_drift", 1e-8}};
  if (scenario == "consistency") return {{"order_bp_sw_min", 0.9}, {"order_bp_mbp_min", 1.7}};
  if (scenario == "longtime") return {{"energy_growth_max", 2.0}};
  if (scenario == "burgers") return {{"shock_time_rel_err", 0.1}, {"slope_target", -1.0}, {"slope_tolerance", 0.05}};
  if (scenario == "operator-audit") {
    return {{"symmetry", 1e-10}, {"inverse_residual", 1e-9}, {"dense_agreement", 1e-12}, {"min_quotient", 0.0}};
  }
  if (scenario == "mollifier-study") return {{"max_diff", 1e-3}, {"reference_delta", 1e-3}};
  return {};
}

double ExperimentConfig::threshold(const std::string& name) const {
  const auto it = thresholds.find(name);
  if (it == thresholds.end()) throw Error(ErrorCode::ConfigError, "thresholds." + name + ": missing");
  return it->second;
}

double ExperimentConfig::extra(const std::string& name, double fallback) const {
  const auto it = extras.find(name);
  return it == extras.end() ? fallback : it->second;
}

ExperimentConfig parse_config(const json& doc) {
  const std::string root = "$";
  if (!doc.is_object()) fail(root, "expected an object");
  reject_unknown(doc, root, {"scenario", "description", "grid", "model", "bathymetry", "initial", "stepper", "sweep",
                             "thresholds", "output", "seed", "energy_order", "theorem_order", "snapshots", "extras",
                             "audit_grids"});
  ExperimentConfig cfg;
  cfg.source = doc;
  if (!doc.contains("scenario")) fail(root + ".scenario", "missing");
  cfg.scenario = string_at(doc.at("scenario"), root + ".scenario");
  if (!kScenarios.contains(cfg.scenario)) fail(root + ".scenario", "unknown scenario '" + cfg.scenario + "'");

  if (!doc.contains("grid")) fail(root + ".grid", "missing");
  cfg.grid = parse_grid(object_at(doc, "grid", root), root + ".grid");

  if (doc.contains("model")) {
    const json& m = object_at(doc, "model", root);
    const std::string p = root + ".model";
    reject_unknown(m, p, {"kind", "eps", "mu", "rescaled_time"});
    if (m.contains("kind")) {
      try {
        cfg.params.model = model_kind_from_string(string_at(m.at("kind"), p + ".kind"));
      } catch (const Error& e) {
        fail(p + ".kind", e.what());
      }
    }
    cfg.params.eps = number_or(m, "eps", 0.0, p);
    cfg.params.mu = number_or(m, "mu", 0.0, p);
    if (m.contains("rescaled_time")) {
      if (!m.at("rescaled_time").is_boolean()) fail(p + ".rescaled_time", "expected a boolean");
      cfg.params.rescaled_time = m.at("rescaled_time").get<bool>();
    }
    try {
      check_params(cfg.params);
    } catch (const Error& e) {
      fail(p, e.what());
    }
  }
  if (doc.contains("bathymetry")) {
    cfg.bottom = parse_bottom(object_at(doc, "bathymetry", root), root + ".bathymetry", cfg.beta);
    if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0)) fail(root + ".bathymetry.beta", "must lie in [0, 1]");
  }
  if (doc.contains("initial")) cfg.initial = parse_initial(object_at(doc, "initial", root), root + ".initial");
  if (doc.contains("stepper")) cfg.stepper = parse_stepper(object_at(doc, "stepper", root), root + ".stepper");

  if (doc.contains("sweep")) {
    const json& s = object_at(doc, "sweep", root);
    const std::string p = root + ".sweep";
    reject_unknown(s, p, {"eps", "mu", "delta", "contrast_eps", "eps_equals_mu"});
    if (s.contains("eps")) cfg.sweep.eps = number_list(s.at("eps"), p + ".eps");
    if (s.contains("mu")) cfg.sweep.mu = number_list(s.at("mu"), p + ".mu");
    if (s.contains("delta")) cfg.sweep.delta = number_list(s.at("delta"), p + ".delta");
    if (s.contains("contrast_eps")) cfg.sweep.contrast_eps = number_list(s.at("contrast_eps"), p + ".contrast_eps");
    if (s.contains("eps_equals_mu")) {
      if (!s.at("eps_equals_mu").is_boolean()) fail(p + ".eps_equals_mu", "expected a boolean");
      cfg.sweep.eps_equals_mu = s.at("eps_equals_mu").get<bool>();
    }
  }

  cfg.thresholds = default_thresholds(cfg.scenario);
  if (doc.contains("thresholds")) {
    const json& t = object_at(doc, "thresholds", root);
    for (const auto& [key, value] : t.items()) {
      if (!cfg.thresholds.contains(key)) fail(root + ".thresholds." + key, "not a threshold of " + cfg.scenario);
      cfg.thresholds[key] = number(value, root + ".thresholds." + key);
    }
  }
  if (doc.contains("extras")) {
    const json& e = object_at(doc, "extras", root);
    for (const auto& [key, value] : e.items()) cfg.extras[key] = number(value, root + ".extras." + key);
  }
  if (doc.contains("output")) cfg.output_dir = string_at(doc.at("output"), root + ".output");
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned()) fail(root + ".seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.energy_order = static_cast<int>(number_or(doc, "energy_order", 3.0, root));
  if (cfg.energy_order < 0) fail(root + ".energy_order", "must be >= 0");
  cfg.theorem_order = number_or(doc, "theorem_order", 2.0, root);
  if (doc.contains("snapshots")) {
    if (!doc.at("snapshots").is_boolean()) fail(root + ".snapshots", "expected a boolean");
    cfg.snapshots = doc.at("snapshots").get<bool>();
  }
  if (doc.contains("audit_grids")) {
    const json& a = doc.at("audit_grids");
    if (!a.is_array()) fail(root + ".audit_grids", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string p = root + ".audit_grids[" + std::to_string(i) + "]";
      if (!a[i].is_object()) fail(p, "expected an object");
      cfg.audit_grids.push_back(parse_grid(a[i], p));
    }
  }

  // Scenario requirements.
  const auto need = [&](bool ok, const std::string& path, const std::string& reason) {
    if (!ok) fail(root + path, reason);
  };
  if (cfg.scenario == "dispersion") {
    need(!cfg.sweep.mu.empty(), ".sweep.mu", "dispersion needs at least one mu");
    need(cfg.initial.shape == InitialShape::Modes, ".initial.shape", "dispersion seeds Fourier modes");
  } else if (cfg.scenario == "consistency") {
    need(cfg.sweep.mu.size() >= 3, ".sweep.mu", "consistency needs at least three mu values");
  } else if (cfg.scenario == "longtime") {
    need(!cfg.sweep.eps.empty(), ".sweep.eps", "longtime needs at least one eps");
  } else if (cfg.scenario == "burgers") {
    need(cfg.sweep.eps.size() >= 2, ".sweep.eps", "burgers needs at least two eps values");
    need(cfg.grid.dim == 1, ".grid.dim", "burgers is one-dimensional");
  } else if (cfg.scenario == "operator-audit") {
    if (cfg.audit_grids.empty()) cfg.audit_grids.push_back(cfg.grid);
  } else if (cfg.scenario == "mollifier-study") {
    need(cfg.sweep.delta.size() >= 2, ".sweep.delta", "mollifier-study needs at least two delta values");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, path.string() + ": cannot open");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + std::string(e.what()).substr(to_string(ErrorCode::ConfigError).size() + 2));
  }
}

Field initial_surface(const InitialCondition& ic, const Grid& grid) {
  const double lx = grid.length(0);
  const double ly = grid.dim() == 2 ? grid.length(1) : 1.0;
  switch (ic.shape) {
    case InitialShape::Gaussian:
    case InitialShape::GaussianRightMoving: {
      const double cx = ic.centered ? 0.5 * lx : ic.center[0];
      const double cy = ic.centered ? 0.5 * ly : ic.center[1];
      const bool two = grid.dim() == 2;
      return Field::sample(grid, [&](double x, double y) {
        double dx = std::remainder(x - cx, lx);
        double dy = two ? std::remainder(y - cy, ly) : 0.0;
        return ic.amplitude * std::exp(-(dx * dx + dy * dy) / (ic.width * ic.width));
      });
    }
    case InitialShape::Modes:
      return Field::sample(grid, [&](double x, double y) {
        double s = 0.0;
        for (const auto& m : ic.modes) {
          s += std::cos(2.0 * std::numbers::pi * (m[0] * x / lx + m[1] * y / ly));
        }
        return ic.amplitude * s;
      });
    case InitialShape::BurgersSine:
      return Field::sample(grid, [&](double x, double) { return -ic.amplitude * std::sin(2.0 * std::numbers::pi * x / lx); });
  }
  throw Error(ErrorCode::ConfigError, "unknown initial shape");
}

std::optional<VecField> initial_velocity(const InitialCondition& ic, const Grid& grid) {
  if (ic.shape == InitialShape::BurgersSine) return std::nullopt;
  VecField v(grid);
  if (ic.shape == InitialShape::GaussianRightMoving) v[0] = initial_surface(ic, grid);
  return v;
}

}  // namespace bplab
