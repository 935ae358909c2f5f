// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here
// independently of the thresholds shipped in the configs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bplab/bathymetry.hpp"
#include "bplab/config.hpp"
#include "bplab/errors.hpp"
#include "bplab/scenarios.hpp"

namespace {

using namespace bplab;
using nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Run {
  ExperimentConfig config;
  ScenarioResult result;
  double seconds = 0.0;
};

fs::path out_root() { return fs::temp_directory_path() / "bplab_acceptance"; }

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Run run_config(const std::string& file, const std::string& tag, int jobs) {
  Run r{load_config(fs::path(BPLAB_CONFIG_DIR) / file), {}, 0.0};
  RunContext ctx{out_root() / tag, jobs, std::nullopt, true};
  const auto t0 = std::chrono::steady_clock::now();
  r.result = run_scenario(r.config, ctx);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<const Verdict*> verdicts_with_prefix(const ScenarioResult& r, const std::string& prefix) {
  std::vector<const Verdict*> out;
  for (const Verdict& v : r.verdicts)
    if (v.name.rfind(prefix, 0) == 0) out.push_back(&v);
  return out;
}

bool same_values(const std::vector<double>& a, std::vector<double> b) { return a == b; }

Outcome dispersion(const Run& r) {
  Outcome o;
  const ExperimentConfig& c = r.config;
  o.require(c.grid.dim == 1 && c.grid.n[0] == 256 && c.stepper.dt == 1e-3, "grid/dt setup");
  o.require(same_values(c.sweep.mu, {0.0, 0.1, 0.5}), "mu sweep");
  o.require(c.initial.modes.size() == 3, "modes 1..3");
  const auto v = verdicts_with_prefix(r.result, "dispersion[");
  o.require(v.size() == 9, "9 mode measurements");
  double worst = 0.0;
  for (const Verdict* x : v) worst = std::max(worst, x->value);
  o.require(worst <= 1e-3, "rel err <= 1e-3");
  o.require(r.seconds <= 10.0, "runtime <= 10 s");
  o.detail << "max rel err " << worst << ", " << r.seconds << " s";
  return o;
}

Outcome operator_audit(const Run& r) {
  Outcome o;
  o.require(r.config.params.mu == 0.1 && r.config.beta == 0.5, "mu/beta setup");
  o.require(r.config.audit_grids.size() == 2, "two audit grids");
  double sym = 0, inv = 0, dense = 0, qmin = INFINITY;
  int sym_count = 0, q_count = 0;
  for (const Verdict& v : r.result.verdicts) {
    if (v.name.rfind("symmetry[", 0) == 0) {
      sym = std::max(sym, v.value);
      ++sym_count;
    } else if (v.name.rfind("inverse_residual[", 0) == 0) {
      inv = std::max(inv, v.value);
    } else if (v.name.rfind("dense_agreement[", 0) == 0) {
      dense = std::max(dense, v.value);
    } else if (v.name.rfind("min_quotient[I+muTb", 0) == 0 || v.name.rfind("min_quotient[hbB", 0) == 0) {
      const bool right_norm = v.name.find(v.name.rfind("min_quotient[hbB", 0) == 0 ? ",H1]" : ",X0]") != std::string::npos;
      o.require(right_norm, "reference norm of " + v.name);
      qmin = std::min(qmin, v.value);
      ++q_count;
    }
  }
  o.require(sym_count == 6, "symmetry for 3 operators on 2 grids");
  o.require(q_count == 4, "quotients for I+muTb and hbB on 2 grids");
  o.require(sym <= 1e-10, "symmetry <= 1e-10");
  o.require(qmin > 0.0, "min quotient > 0");
  o.require(inv <= 1e-9, "apply(solve) <= 1e-9");
  o.require(dense <= 1e-12, "matrix-free vs dense <= 1e-12");
  o.require(r.seconds <= 30.0, "runtime <= 30 s");
  o.detail << "symmetry " << sym << ", min quotient " << qmin << ", inverse " << inv << ", dense " << dense << ", "
           << r.seconds << " s";
  return o;
}

Outcome q_transform() {
  Outcome o;
  const Grid g(GridSpec{1, {128, 1}, {20 * std::numbers::pi, 1.0}, 1.0});
  const Bathymetry bath = build_bathymetry(profile::GaussianBump{{10 * std::numbers::pi, 0.0}, 3.0, 1.0}, 0.8, g);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_zeta = 0, worst_q = 0, worst_identity = 0, worst_oracle = 0, min_factor = INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const double eps = std::pow(10.0, -3 + 3 * unit(rng));
    Field zeta(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double lo = -0.9 * bath.h_b()[i] / eps;
      zeta[i] = lo + (3.0 / eps - lo) * unit(rng);
    }
    const Field q = zeta_to_q(zeta, eps, bath);
    Field oracle(g);
    for (std::size_t i = 0; i < g.size(); ++i) oracle[i] = std::log1p(eps * zeta[i] / bath.h_b()[i]) / eps;
    worst_oracle = std::max(worst_oracle, (q - oracle).max_abs() / oracle.max_abs());
    worst_zeta = std::max(worst_zeta, (q_to_zeta(q, eps, bath) - zeta).max_abs() / zeta.max_abs());
    Field q_rand(g);
    for (std::size_t i = 0; i < g.size(); ++i) q_rand[i] = (unit(rng) - 0.5) * 4.0 / eps;
    worst_q = std::max(worst_q, (zeta_to_q(q_to_zeta(q_rand, eps, bath), eps, bath) - q_rand).max_abs() /
                                    q_rand.max_abs());
    const Field factor = q_positivity_factor(zeta, eps, bath);
    min_factor = std::min(min_factor, factor.min());
    worst_identity = std::max(worst_identity, (factor * zeta - q).max_abs() / q.max_abs());
  }
  o.require(worst_zeta <= 1e-12, "zeta->q->zeta <= 1e-12");
  o.require(worst_q <= 1e-12, "q->zeta->q <= 1e-12");
  o.require(worst_identity <= 1e-12, "q = Q zeta to 1e-12");
  o.require(worst_oracle <= 1e-12, "q matches log1p oracle");
  o.require(min_factor > 0.0, "Q > 0");
  o.detail << "round trips " << worst_zeta << " / " << worst_q << ", identity " << worst_identity << ", min Q "
           << min_factor;
  return o;
}

Outcome consistency(const Run& r) {
  Outcome o;
  const ExperimentConfig& c = r.config;
  o.require(c.grid.n[0] == 256 && c.beta == 0.5 && c.stepper.t_end == 1.0, "grid/bottom/T setup");
  o.require(same_values(c.sweep.mu, {0.08, 0.04, 0.02}) && c.sweep.eps_equals_mu, "eps = mu sweep");
  const auto sw = verdicts_with_prefix(r.result, "order_bp_sw");
  const auto mbp = verdicts_with_prefix(r.result, "order_bp_mbp");
  o.require(sw.size() == 1 && mbp.size() == 1, "both orders reported");
  if (sw.size() == 1 && mbp.size() == 1) {
    o.require(sw[0]->value >= 0.9, "order BP-SW >= 0.9");
    o.require(mbp[0]->value >= 1.7, "order BP-MBP >= 1.7");
    o.detail << "order BP-SW " << sw[0]->value << ", BP-MBP " << mbp[0]->value << ", ";
  }
  o.require(r.seconds <= 60.0, "runtime <= 60 s");
  o.detail << r.seconds << " s";
  return o;
}

Outcome longtime(const Run& r) {
  Outcome o;
  const ExperimentConfig& c = r.config;
  o.require(same_values(c.sweep.eps, {0.02, 0.01}) && c.sweep.eps_equals_mu && c.beta == 0.8, "sweep setup");
  o.require(c.energy_order == 3, "E^3 energy");
  const json& runs = r.result.summary.at("runs");
  o.require(runs.size() == 2, "two asserted runs");
  double worst = 0.0;
  for (const json& run : runs) {
    const double eps = run.at("eps").get<double>();
    o.require(run.at("model") == "MBP", "MBP model");
    o.require(run.at("reason") == "completed", "completed at eps=" + std::to_string(eps));
    o.require(std::abs(run.at("t_final").get<double>() - 1.0 / eps) <= 1e-9 / eps, "reached t = 1/eps");
    worst = std::max(worst, run.at("EN_growth").get<double>());
  }
  o.require(worst <= 2.0, "max E3(t) <= 2 E3(0)");
  o.require(r.seconds <= 120.0, "runtime <= 120 s");
  o.detail << "max growth " << worst << ", contrast eps=0.5 "
           << r.result.summary.at("contrast").at(0).at("reason").get<std::string>() << " (not asserted), " << r.seconds
           << " s";
  return o;
}

Outcome burgers(const Run& r) {
  Outcome o;
  o.require(same_values(r.config.sweep.eps, {0.1, 0.05}), "eps sweep");
  o.require(r.config.initial.shape == InitialShape::BurgersSine && r.config.initial.amplitude == 1.0, "u0 = -sin x");
  double worst = 0.0;
  for (const json& run : r.result.summary.at("runs")) {
    o.require(run.at("reason") == "blowup", "blow-up detected");
    const double eps = run.at("eps").get<double>();
    const double err = std::abs(run.at("detected").get<double>() - 1.0 / eps) * eps;
    worst = std::max(worst, err);
  }
  o.require(worst <= 0.1, "within 10% of 1/eps");
  const double slope = r.result.summary.at("slope").get<double>();
  o.require(std::abs(slope + 1.0) <= 0.05, "slope -1 +- 0.05");
  o.detail << "max rel err " << worst << ", slope " << slope;
  return o;
}

Outcome energy(const Run& r) {
  Outcome o;
  const ExperimentConfig& c = r.config;
  o.require(c.params.eps == 0.0 && c.stepper.dt == 1e-3 && c.extra("periods", 0.0) >= 10.0, "linear, dt, 10 periods");
  const auto v = verdicts_with_prefix(r.result, "energy_drift[");
  o.require(!v.empty(), "drift reported");
  double worst = 0.0;
  for (const Verdict* x : v) worst = std::max(worst, x->value);
  o.require(worst <= 1e-8, "relative drift <= 1e-8");
  o.detail << "relative drift " << worst;
  return o;
}

Outcome mollifier(const Run& r) {
  Outcome o;
  o.require(same_values(r.config.sweep.delta, {1e-2, 1e-3, 0.0}), "delta sweep");
  std::map<double, double> diff;
  for (const json& d : r.result.summary.at("differences")) diff[d.at("delta").get<double>()] = d.at("sup_diff").get<double>();
  o.require(diff.size() == 2, "two differences");
  if (diff.size() == 2) {
    o.require(diff.at(1e-3) < diff.at(1e-2), "decreasing with delta");
    o.require(diff.at(1e-3) <= 1e-3, "<= 1e-3 at delta = 1e-3");
    o.detail << "sup diff " << diff.at(1e-2) << " (1e-2), " << diff.at(1e-3) << " (1e-3)";
  }
  return o;
}

void report(int id, const std::string& name, const Outcome& o, int& failures) {
  std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Outcome o;
    o.require(false, e.what());
    return o;
  }
}

}  // namespace

int main() {
  fs::remove_all(out_root());
  const std::vector<std::pair<std::string, std::string>> configs{
      {"dispersion", "dispersion.json"}, {"operator-audit", "operator_audit.json"},
      {"consistency", "consistency.json"}, {"longtime", "longtime.json"},
      {"burgers", "burgers.json"},       {"energy", "energy_conservation.json"},
      {"mollifier", "mollifier.json"}};
  std::map<std::string, Run> runs;
  std::map<std::string, std::string> load_errors;
  for (const auto& [tag, file] : configs) {
    try {
      runs.emplace(tag, run_config(file, tag, worker_count()));
    } catch (const std::exception& e) {
      load_errors[tag] = e.what();
    }
  }
  const auto with = [&](const std::string& tag, const std::function<Outcome(const Run&)>& check) {
    return guarded([&] {
      if (load_errors.contains(tag)) throw std::runtime_error(load_errors.at(tag));
      return check(runs.at(tag));
    });
  };

  int failures = 0;
  report(1, "dispersion", with("dispersion", dispersion), failures);
  report(2, "operator audit", with("operator-audit", operator_audit), failures);
  report(3, "q-transform", guarded(q_transform), failures);
  report(4, "model consistency", with("consistency", consistency), failures);
  report(5, "long-time boundedness", with("longtime", longtime), failures);
  report(6, "Burgers shock time", with("burgers", burgers), failures);
  report(7, "energy conservation", with("energy", energy), failures);
  report(8, "mollifier limit", with("mollifier", mollifier), failures);

  report(9, "determinism", guarded([&] {
           Outcome o;
           int compared = 0;
           for (const auto& [tag, file] : configs) {
             if (!runs.contains(tag)) {
               o.require(false, tag + " did not run");
               continue;
             }
             // Rerun single-threaded: the summary must not depend on the worker count either.
             const Run again = run_config(file, tag + "_rerun", 1);
             const bool same =
                 strip_timing(runs.at(tag).result.summary).dump() == strip_timing(again.result.summary).dump();
             o.require(same, tag + " summary differs");
             ++compared;
           }
           o.detail << compared << " scenarios rerun, summaries identical modulo timing";
           return o;
         }),
         failures);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
