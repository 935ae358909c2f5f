#include "bplab/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "bplab/diagnostics.hpp"
#include "bplab/output.hpp"
#include "bplab/simd/kernels.hpp"
#include "bplab/spectral.hpp"
#include "bplab/verification.hpp"

namespace bplab {

namespace fs = std::filesystem;
using json = nlohmann::json;

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = {
      {"dispersion", "linear flat-bottom BP modes: measured vs predicted frequency, energy drift"},
      {"consistency", "mu sweep: order of |BP - SW| and |BP - MBP| at fixed time"},
      {"longtime", "MBP with eps = mu to t = T/eps: E^N boundedness"},
      {"burgers", "eps sweep: detected gradient blow-up time vs -1/(eps min u0')"},
      {"operator-audit", "symmetry, coercivity and inversion of the weighted operators"},
      {"mollifier-study", "delta sweep: |U_delta - U_0| at fixed time"},
  };
  return catalog;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(guard);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

json strip_timing(json summary) {
  summary.erase("timing");
  return summary;
}

fs::path resolve_output_dir(const ExperimentConfig& config, const std::optional<fs::path>& cli_out) {
  if (cli_out) return *cli_out;
  if (config.output_dir) return *config.output_dir;
  if (const char* root = std::getenv("BPLAB_OUT_ROOT"); root && *root) return fs::path(root) / config.scenario;
  return fs::path("out") / config.scenario;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Verdict at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, "<=", value <= threshold, {}};
}

Verdict at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, ">=", value >= threshold, {}};
}

Verdict above(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, ">", value > threshold, {}};
}

Verdict failed(std::string name, double threshold, std::string comparison, std::string note) {
  return {std::move(name), std::nan(""), threshold, std::move(comparison), false, std::move(note)};
}

json verdict_json(const Verdict& v) {
  json j{{"name", v.name}, {"threshold", v.threshold}, {"comparison", v.comparison}, {"pass", v.pass}};
  j["value"] = std::isfinite(v.value) ? json(v.value) : json(nullptr);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

// Everything one time-dependent run produces.
struct RunOutcome {
  std::string label;
  ModelParams params;
  double delta = 0.0;
  std::optional<Trajectory> trajectory;
  std::optional<Field> zeta;  // final surface elevation
  std::string error;
  std::string method;
  double runtime_s = 0.0;

  bool completed() const { return trajectory && trajectory->reason == TerminationReason::Completed; }
};

json run_json(const RunOutcome& r) {
  json j{{"label", r.label},
         {"model", to_string(r.params.model)},
         {"eps", r.params.eps},
         {"mu", r.params.mu},
         {"delta", r.delta},
         {"solver", r.method}};
  if (r.trajectory) {
    const Trajectory& t = *r.trajectory;
    j["reason"] = to_string(t.reason);
    j["steps"] = t.steps;
    j["t_final"] = t.final_state.time;
    if (!t.message.empty()) j["message"] = t.message;
    json warnings = json::array();
    for (const auto& w : t.warnings) warnings.push_back({{"code", w.code}, {"message", w.message}, {"value", w.value}});
    j["warnings"] = warnings;
  } else {
    j["reason"] = "error";
    j["message"] = r.error;
  }
  return j;
}

class Session {
 public:
  Session(const ExperimentConfig& config, const RunContext& context)
      : config_(config), context_(context), grid_(config.grid) {}

  const ExperimentConfig& config() const { return config_; }
  const Grid& grid() const { return grid_; }
  std::uint64_t seed() const { return context_.seed.value_or(config_.seed); }

  Bathymetry bathymetry(const Grid& grid) const { return build_bathymetry(config_.bottom, config_.beta, grid); }
  Bathymetry bathymetry() const { return bathymetry(grid_); }

  DiagnosticsOptions diagnostics(std::vector<std::array<int, 2>> modes = {}) const {
    return {config_.energy_order, config_.theorem_order, std::move(modes)};
  }

  // Builds the model, the initial state and integrates; errors are recorded, not thrown.
  RunOutcome simulate(std::string label, ModelParams params, const StepperConfig& stepper, const Bathymetry& bath,
                      const RunOptions& options) const {
    RunOutcome out;
    out.label = std::move(label);
    out.params = params;
    out.delta = stepper.delta;
    const auto t0 = Clock::now();
    try {
      const Model model(params, bath);
      out.method = model.handle() ? std::string(model.handle()->method()) : "none";
      WarningLog log;
      const Field zeta0 = initial_surface(config_.initial, bath.grid());
      ModelState s0 = model.initial_state(zeta0, initial_velocity(config_.initial, bath.grid()), stepper.delta, &log);
      Trajectory traj = run(s0, model, stepper, options);
      traj.warnings.insert(traj.warnings.end(), log.begin(), log.end());
      if (is_finite(traj.final_state)) {
        try {
          out.zeta = model.surface_elevation(traj.final_state);
        } catch (const Error&) {
        }
      }
      out.trajectory = std::move(traj);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    out.runtime_s = seconds_since(t0);
    return out;
  }

  void write_run_files(const RunOutcome& r) const {
    if (!context_.write_files || !r.trajectory) return;
    write_diagnostics_csv(context_.output_dir / (r.label + ".csv"), r.trajectory->records, r.trajectory->modes);
    if (config_.snapshots) {
      const ModelState& s = r.trajectory->final_state;
      std::vector<const Field*> comps{&s.surface};
      std::vector<std::string> names{r.params.model == ModelKind::MBP ? "q" : (r.params.model == ModelKind::Burgers ? "u" : "zeta")};
      if (s.velocity) {
        for (int a = 0; a < s.velocity->dim(); ++a) {
          comps.push_back(&(*s.velocity)[a]);
          names.push_back(a == 0 ? "V_x" : "V_y");
        }
      }
      write_snapshot(context_.output_dir / (r.label + "_final"), comps, names, s.time);
    }
  }

  void write_table(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) const {
    if (context_.write_files) write_table_csv(context_.output_dir / name, header, rows);
  }

  int jobs() const { return context_.jobs; }

 private:
  const ExperimentConfig& config_;
  const RunContext& context_;
  Grid grid_;
};

// max(|zeta_a - zeta_b|_inf, |V_a - V_b|_inf) between two final states.
double state_distance(const RunOutcome& a, const RunOutcome& b) {
  if (!a.completed() || !b.completed() || !a.zeta || !b.zeta) return std::nan("");
  double d = (*a.zeta - *b.zeta).max_abs();
  const auto& va = a.trajectory->final_state.velocity;
  const auto& vb = b.trajectory->final_state.velocity;
  if (va && vb) d = std::max(d, (*va - *vb).max_abs());
  return d;
}

std::string fail_note(const RunOutcome& r) {
  if (!r.trajectory) return r.label + ": " + r.error;
  return r.label + ": " + std::string(to_string(r.trajectory->reason)) +
         (r.trajectory->message.empty() ? "" : " (" + r.trajectory->message + ")");
}

// ---------------------------------------------------------------------------

void dispersion(const Session& s, std::vector<Verdict>& verdicts, json& body, json& timing) {
  const ExperimentConfig& cfg = s.config();
  const Bathymetry bath = s.bathymetry();
  const auto& modes = cfg.initial.modes;
  const double rel_tol = cfg.threshold("rel_err");
  const double drift_tol = cfg.threshold("energy_drift");

  std::vector<RunOutcome> runs(cfg.sweep.mu.size());
  parallel_for(runs.size(), s.jobs(), [&](std::size_t i) {
    const double mu = cfg.sweep.mu[i];
    ModelParams p{cfg.params.eps, mu, ModelKind::BP, false};
    StepperConfig st = cfg.stepper;
    if (const double periods = cfg.extra("periods", 0.0); periods > 0.0) {
      double slowest = INFINITY;
      for (const auto& m : modes) slowest = std::min(slowest, bp_dispersion_omega(s.grid(), m, mu));
      st.t_end = periods * 2.0 * std::numbers::pi / slowest;
    }
    RunOptions opt;
    opt.diagnostics = s.diagnostics(modes);
    runs[i] = s.simulate("run_mu=" + fmt(mu), p, st, bath, opt);
  });

  std::vector<std::vector<double>> table;
  json rows = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunOutcome& r = runs[i];
    const double mu = cfg.sweep.mu[i];
    s.write_run_files(r);
    body["runs"].push_back(run_json(r));
    timing["runs"][r.label] = r.runtime_s;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const std::string name = "dispersion[mu=" + fmt(mu) + ",k=" + std::to_string(modes[k][0]) + "," +
                               std::to_string(modes[k][1]) + "]";
      if (!r.completed()) {
        verdicts.push_back(failed(name, rel_tol, "<=", fail_note(r)));
        continue;
      }
      try {
        const DispersionMeasurement d = measure_dispersion(*r.trajectory, k, s.grid(), mu);
        table.push_back({mu, double(modes[k][0]), double(modes[k][1]), d.omega_measured, d.omega_predicted, d.rel_err});
        rows.push_back({{"mu", mu}, {"k", modes[k]}, {"omega_measured", d.omega_measured},
                        {"omega_predicted", d.omega_predicted}, {"rel_err", d.rel_err}});
        verdicts.push_back(at_most(name, d.rel_err, rel_tol));
      } catch (const Error& e) {
        verdicts.push_back(failed(name, rel_tol, "<=", e.what()));
      }
    }
    const std::string ename = "energy_drift[mu=" + fmt(mu) + "]";
    if (r.completed()) {
      const auto& recs = r.trajectory->records;
      double drift = 0.0;
      for (const auto& rec : recs) drift = std::max(drift, std::abs(rec.E_bp - recs.front().E_bp));
      drift /= recs.front().E_bp;
      verdicts.push_back(at_most(ename, drift, drift_tol));
    } else {
      verdicts.push_back(failed(ename, drift_tol, "<=", fail_note(r)));
    }
  }
  body["table"] = rows;
  s.write_table("dispersion.csv", {"mu", "kx", "ky", "omega_measured", "omega_predicted", "rel_err"}, table);
}

// ---------------------------------------------------------------------------

void consistency(const Session& s, std::vector<Verdict>& verdicts, json& body, json& timing) {
  const ExperimentConfig& cfg = s.config();
  const Bathymetry bath = s.bathymetry();
  const std::array<ModelKind, 3> kinds{ModelKind::SW, ModelKind::BP, ModelKind::MBP};
  const std::size_t m = cfg.sweep.mu.size();
  std::vector<RunOutcome> runs(3 * m);
  parallel_for(runs.size(), s.jobs(), [&](std::size_t i) {
    const double mu = cfg.sweep.mu[i / 3];
    const ModelKind kind = kinds[i % 3];
    const double eps = cfg.sweep.eps_equals_mu ? mu : cfg.params.eps;
    RunOptions opt;
    opt.diagnostics = s.diagnostics();
    runs[i] = s.simulate(std::string(to_string(kind)) + "_mu=" + fmt(mu), {eps, mu, kind, false}, cfg.stepper, bath, opt);
  });

  std::vector<std::pair<double, double>> bp_sw, bp_mbp;
  std::vector<std::vector<double>> table;
  std::string notes;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      const RunOutcome& r = runs[3 * j + k];
      s.write_run_files(r);
      body["runs"].push_back(run_json(r));
      timing["runs"][r.label] = r.runtime_s;
      if (!r.completed()) notes += fail_note(r) + "; ";
    }
    const double mu = cfg.sweep.mu[j];
    const double d1 = state_distance(runs[3 * j + 1], runs[3 * j]);
    const double d2 = state_distance(runs[3 * j + 1], runs[3 * j + 2]);
    bp_sw.emplace_back(mu, d1);
    bp_mbp.emplace_back(mu, d2);
    table.push_back({mu, d1, d2});
    body["differences"].push_back({{"mu", mu}, {"bp_sw", std::isfinite(d1) ? json(d1) : json(nullptr)},
                                   {"bp_mbp", std::isfinite(d2) ? json(d2) : json(nullptr)}});
  }
  s.write_table("consistency.csv", {"mu", "bp_sw", "bp_mbp"}, table);

  const auto order = [&](const std::string& name, const std::vector<std::pair<double, double>>& pts, double thr) {
    if (!notes.empty()) {
      verdicts.push_back(failed(name, thr, ">=", notes));
      return;
    }
    try {
      const double o = estimate_order(pts);
      body["orders"][name] = o;
      verdicts.push_back(at_least(name, o, thr));
    } catch (const Error& e) {
      verdicts.push_back(failed(name, thr, ">=", e.what()));
    }
  };
  order("order_bp_sw", bp_sw, cfg.threshold("order_bp_sw_min"));
  order("order_bp_mbp", bp_mbp, cfg.threshold("order_bp_mbp_min"));
}

// ---------------------------------------------------------------------------

void longtime(const Session& s, std::vector<Verdict>& verdicts, json& body, json& timing) {
  const ExperimentConfig& cfg = s.config();
  const Bathymetry bath = s.bathymetry();
  const double horizon = cfg.extra("horizon", 1.0);
  const double growth_tol = cfg.threshold("energy_growth_max");
  std::vector<double> eps = cfg.sweep.eps;
  const std::size_t asserted = eps.size();
  eps.insert(eps.end(), cfg.sweep.contrast_eps.begin(), cfg.sweep.contrast_eps.end());

  std::vector<RunOutcome> runs(eps.size());
  parallel_for(runs.size(), s.jobs(), [&](std::size_t i) {
    const double e = eps[i];
    const double mu = cfg.sweep.eps_equals_mu ? e : cfg.params.mu;
    StepperConfig st = cfg.stepper;
    st.t_end = horizon / e;
    RunOptions opt;
    opt.diagnostics = s.diagnostics();
    runs[i] = s.simulate((i < asserted ? "run_eps=" : "contrast_eps=") + fmt(e), {e, mu, ModelKind::MBP, false}, st,
                         bath, opt);
  });

  std::vector<std::vector<double>> table;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunOutcome& r = runs[i];
    s.write_run_files(r);
    json rj = run_json(r);
    timing["runs"][r.label] = r.runtime_s;
    double ratio = std::nan("");
    if (r.trajectory && !r.trajectory->records.empty()) {
      const auto& recs = r.trajectory->records;
      double peak = 0.0;
      for (const auto& rec : recs) peak = std::max(peak, rec.EN);
      ratio = peak / recs.front().EN;
      rj["EN_initial"] = recs.front().EN;
      rj["EN_max"] = peak;
      rj["EN_growth"] = ratio;
    }
    table.push_back({eps[i], i < asserted ? 1.0 : 0.0, r.completed() ? 1.0 : 0.0, ratio});
    if (i < asserted) {
      const std::string name = "longtime[eps=" + fmt(eps[i]) + "]";
      if (!r.completed()) {
        Verdict v = failed(name, growth_tol, "<=", fail_note(r));
        v.value = ratio;
        verdicts.push_back(v);
      } else {
        verdicts.push_back(at_most(name, ratio, growth_tol));
      }
      body["runs"].push_back(rj);
    } else {
      body["contrast"].push_back(rj);
    }
  }
  s.write_table("longtime.csv", {"eps", "asserted", "completed", "EN_growth"}, table);
}

// ---------------------------------------------------------------------------

// Zero of the straight line through the last points of 1/sup|u_x| against t.
double extrapolated_blowup(const std::vector<std::pair<double, double>>& history) {
  const std::size_t n = history.size();
  if (n < 4) return std::nan("");
  const std::size_t m = std::min<std::size_t>(n, 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = n - m; i < n; ++i) {
    const double x = history[i].first, y = 1.0 / history[i].second;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double md = static_cast<double>(m);
  const double slope = (md * sxy - sx * sy) / (md * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / md;
  return slope < 0.0 ? -icpt / slope : std::nan("");
}

void burgers(const Session& s, std::vector<Verdict>& verdicts, json& body, json& timing) {
  const ExperimentConfig& cfg = s.config();
  const Bathymetry bath = s.bathymetry();
  const double rel_tol = cfg.threshold("shock_time_rel_err");
  const Field u0 = initial_surface(cfg.initial, s.grid());

  std::vector<RunOutcome> runs(cfg.sweep.eps.size());
  parallel_for(runs.size(), s.jobs(), [&](std::size_t i) {
    const double e = cfg.sweep.eps[i];
    StepperConfig st = cfg.stepper;
    st.t_end = cfg.extra("horizon_factor", 2.0) / e;
    RunOptions opt;
    opt.diagnostics = s.diagnostics();
    opt.track_gradient = true;
    runs[i] = s.simulate("run_eps=" + fmt(e), {e, 0.0, ModelKind::Burgers, false}, st, bath, opt);
  });

  std::vector<std::pair<double, double>> detected;
  std::vector<std::vector<double>> table;
  bool all_detected = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunOutcome& r = runs[i];
    const double e = cfg.sweep.eps[i];
    s.write_run_files(r);
    json rj = run_json(r);
    timing["runs"][r.label] = r.runtime_s;
    const std::string name = "shock_time[eps=" + fmt(e) + "]";
    double predicted = std::nan("");
    try {
      predicted = burgers_shock_time(u0, e);
    } catch (const Error& err) {
      rj["prediction_error"] = err.what();
    }
    if (r.trajectory && r.trajectory->reason == TerminationReason::Blowup) {
      const double t_det = r.trajectory->final_state.time;
      const double t_ext = extrapolated_blowup(r.trajectory->gradient_history);
      const double rel = std::abs(t_det - predicted) / predicted;
      rj["detected"] = t_det;
      rj["extrapolated"] = std::isfinite(t_ext) ? json(t_ext) : json(nullptr);
      rj["predicted"] = predicted;
      rj["rel_err"] = rel;
      table.push_back({e, predicted, t_det, t_ext, rel});
      detected.emplace_back(e, t_det);
      verdicts.push_back(at_most(name, rel, rel_tol));
    } else {
      all_detected = false;
      verdicts.push_back(failed(name, rel_tol, "<=", r.trajectory ? "no blow-up detected before the horizon" : r.error));
    }
    body["runs"].push_back(rj);
  }
  s.write_table("burgers.csv", {"eps", "predicted", "detected", "extrapolated", "rel_err"}, table);

  const double target = cfg.threshold("slope_target");
  const double tol = cfg.threshold("slope_tolerance");
  if (all_detected && detected.size() >= 2) {
    // Least-squares slope of log t against log eps; two points are enough here.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [e, t] : detected) {
      sx += std::log(e);
      sy += std::log(t);
      sxx += std::log(e) * std::log(e);
      sxy += std::log(e) * std::log(t);
    }
    const double n = static_cast<double>(detected.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    body["slope"] = slope;
    verdicts.push_back({"shock_time_slope", slope, tol, "within", std::abs(slope - target) <= tol,
                        "target " + fmt(target)});
  } else {
    verdicts.push_back(failed("shock_time_slope", tol, "within", "blow-up not detected for every eps"));
  }
}

// ---------------------------------------------------------------------------

void operator_audit(const Session& s, std::vector<Verdict>& verdicts, json& body, json& timing) {
  const ExperimentConfig& cfg = s.config();
  const double mu = cfg.params.mu;
  const int trials = static_cast<int>(cfg.extra("trials", 20.0));
  const std::array<OperatorKind, 3> kinds{OperatorKind::IPlusMuTb, OperatorKind::HbB, OperatorKind::HbA};
  const std::size_t tasks = cfg.audit_grids.size() * kinds.size();

  struct Audit {
    std::optional<CoercivityReport> report;
    double dense_agreement = 0.0;
    double dense_symmetry = 0.0;
    double iterative_gap = 0.0;
    double iterative_residual = 0.0;
    int iterations = 0;
    std::string error;
    double runtime_s = 0.0;
  };
  std::vector<Audit> audits(tasks);

  parallel_for(tasks, s.jobs(), [&](std::size_t i) {
    Audit& a = audits[i];
    const auto t0 = Clock::now();
    try {
      const Grid grid(cfg.audit_grids[i / kinds.size()]);
      const OperatorKind kind = kinds[i % kinds.size()];
      const Bathymetry bath = s.bathymetry(grid);
      const OperatorHandle handle(kind, mu, bath);
      a.report = coercivity_report(handle, trials, s.seed());

      const DenseOperator dense = assemble_dense([&](const VecField& v) { return handle.apply(v); }, grid);
      const Eigen::MatrixXd& mat = dense.entries;
      a.dense_symmetry = (mat - mat.transpose()).cwiseAbs().maxCoeff() / mat.cwiseAbs().maxCoeff();

      SolverOptions iterative;
      iterative.strategy = SolverOptions::Strategy::Iterative;
      const OperatorHandle cg(kind, mu, bath, iterative);
      std::mt19937_64 rng(s.seed() + 7919);
      for (int t = 0; t < trials; ++t) {
        const VecField v = random_vecfield(grid, rng);
        const Eigen::VectorXd lhs = mat * flatten(v);
        const Eigen::VectorXd rhs = flatten(handle.apply(v));
        a.dense_agreement = std::max(a.dense_agreement, (lhs - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff());
        const VecField x_dense = handle.solve(v);
        SolveStats stats;
        const VecField x_cg = cg.solve(v, &stats);
        a.iterations = std::max(a.iterations, stats.iterations);
        a.iterative_gap = std::max(a.iterative_gap, (x_dense - x_cg).max_abs() / x_dense.max_abs());
        a.iterative_residual =
            std::max(a.iterative_residual, norm_l2(cg.apply(x_cg) - v) / norm_l2(v));
      }
    } catch (const std::exception& e) {
      a.error = e.what();
    }
    a.runtime_s = seconds_since(t0);
  });

  const double sym_tol = cfg.threshold("symmetry");
  const double inv_tol = cfg.threshold("inverse_residual");
  const double agree_tol = cfg.threshold("dense_agreement");
  const double q_min = cfg.threshold("min_quotient");
  for (std::size_t i = 0; i < tasks; ++i) {
    const Audit& a = audits[i];
    const GridSpec& g = cfg.audit_grids[i / kinds.size()];
    const OperatorKind kind = kinds[i % kinds.size()];
    const std::string tag = std::string(to_string(kind)) + "," + std::to_string(g.dim) + "d,n=" + std::to_string(g.n[0]);
    timing["audits"][tag] = a.runtime_s;
    if (!a.report) {
      for (const char* what : {"symmetry", "inverse_residual", "dense_agreement", "min_quotient"}) {
        verdicts.push_back(failed(std::string(what) + "[" + tag + "]", 0.0, "", a.error));
      }
      body["audits"].push_back({{"tag", tag}, {"error", a.error}});
      continue;
    }
    const CoercivityReport& r = *a.report;
    json j = to_json(r);
    j["tag"] = tag;
    j["dense_symmetry"] = a.dense_symmetry;
    j["dense_agreement"] = a.dense_agreement;
    j["iterative_gap"] = a.iterative_gap;
    j["iterative_residual"] = a.iterative_residual;
    j["iterative_max_iterations"] = a.iterations;
    body["audits"].push_back(j);
    verdicts.push_back(at_most("symmetry[" + tag + "]", std::max(r.symmetry_residual, a.dense_symmetry), sym_tol));
    verdicts.push_back(at_most("inverse_residual[" + tag + "]", std::max(r.inverse_residual, a.iterative_residual), inv_tol));
    verdicts.push_back(at_most("dense_agreement[" + tag + "]", a.dense_agreement, agree_tol));
    verdicts.push_back(at_most("iterative_vs_dense[" + tag + "]", a.iterative_gap, inv_tol));
    const double quotient = r.dense_min ? std::min(*r.dense_min, r.min_quotient) : r.min_quotient;
    Verdict q = above("min_quotient[" + tag + "," + std::string(r.norm) + "]", quotient, q_min);
    verdicts.push_back(q);
  }
}

// ---------------------------------------------------------------------------

void mollifier_study(const Session& s, std::vector<Verdict>& verdicts, json& body, json& timing) {
  const ExperimentConfig& cfg = s.config();
  const Bathymetry bath = s.bathymetry();
  std::vector<double> deltas = cfg.sweep.delta;
  if (std::find(deltas.begin(), deltas.end(), 0.0) == deltas.end()) deltas.push_back(0.0);
  std::sort(deltas.begin(), deltas.end(), std::greater<>());

  std::vector<RunOutcome> runs(deltas.size());
  parallel_for(runs.size(), s.jobs(), [&](std::size_t i) {
    StepperConfig st = cfg.stepper;
    st.delta = deltas[i];
    RunOptions opt;
    opt.diagnostics = s.diagnostics();
    runs[i] = s.simulate("run_delta=" + fmt(deltas[i]), cfg.params, st, bath, opt);
  });
  const RunOutcome& ref = runs.back();

  std::vector<std::vector<double>> table;
  std::vector<double> diffs;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    s.write_run_files(runs[i]);
    body["runs"].push_back(run_json(runs[i]));
    timing["runs"][runs[i].label] = runs[i].runtime_s;
    if (deltas[i] == 0.0) continue;
    const double d = state_distance(runs[i], ref);
    diffs.push_back(d);
    table.push_back({deltas[i], d});
    body["differences"].push_back({{"delta", deltas[i]}, {"sup_diff", std::isfinite(d) ? json(d) : json(nullptr)}});
  }
  s.write_table("mollifier.csv", {"delta", "sup_diff"}, table);

  bool monotone = !diffs.empty();
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (!std::isfinite(diffs[i])) monotone = false;
    if (i > 0 && !(diffs[i] < diffs[i - 1])) monotone = false;
  }
  verdicts.push_back({"monotone_decay", monotone ? 1.0 : 0.0, 1.0, "==", monotone, "sup diff strictly decreases with delta"});

  const double ref_delta = cfg.threshold("reference_delta");
  const double max_diff = cfg.threshold("max_diff");
  const std::string name = "sup_diff[delta=" + fmt(ref_delta) + "]";
  const auto it = std::find(deltas.begin(), deltas.end(), ref_delta);
  if (it == deltas.end()) {
    verdicts.push_back(failed(name, max_diff, "<=", "reference delta not in the sweep"));
  } else {
    const double d = diffs[static_cast<std::size_t>(it - deltas.begin())];
    if (std::isfinite(d)) {
      verdicts.push_back(at_most(name, d, max_diff));
    } else {
      verdicts.push_back(failed(name, max_diff, "<=", fail_note(runs[static_cast<std::size_t>(it - deltas.begin())])));
    }
  }
}

}  // namespace

ScenarioResult run_scenario(const ExperimentConfig& config, const RunContext& context) {
  const auto t0 = Clock::now();
  const Session session(config, context);
  ScenarioResult result;
  result.scenario = config.scenario;
  json body = json::object();
  json timing = json::object();
  using Driver = void (*)(const Session&, std::vector<Verdict>&, json&, json&);
  static const std::vector<std::pair<std::string_view, Driver>> drivers = {
      {"dispersion", dispersion}, {"consistency", consistency},       {"longtime", longtime},
      {"burgers", burgers},       {"operator-audit", operator_audit}, {"mollifier-study", mollifier_study},
  };
  const auto it = std::find_if(drivers.begin(), drivers.end(), [&](const auto& d) { return d.first == config.scenario; });
  if (it == drivers.end()) throw Error(ErrorCode::ConfigError, "unknown scenario '" + config.scenario + "'");
  it->second(session, result.verdicts, body, timing);

  result.passed = std::all_of(result.verdicts.begin(), result.verdicts.end(), [](const Verdict& v) { return v.pass; });
  result.runtime_s = seconds_since(t0);
  timing["runtime_s"] = result.runtime_s;

  json verdicts = json::array();
  for (const auto& v : result.verdicts) verdicts.push_back(verdict_json(v));
  json thresholds = json::object();
  for (const auto& [k, v] : config.thresholds) thresholds[k] = v;
  result.summary = {{"scenario", config.scenario},
                    {"seed", context.seed.value_or(config.seed)},
                    {"config", config.source},
                    {"thresholds", thresholds},
                    {"simd", simd::active().name}};
  for (auto& [k, v] : body.items()) result.summary[k] = v;
  result.summary["verdicts"] = verdicts;
  result.summary["passed"] = result.passed;
  result.summary["timing"] = timing;
  if (context.write_files) write_json(context.output_dir / "summary.json", result.summary);
  return result;
}

}  // namespace bplab
