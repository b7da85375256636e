// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "slogs/config.hpp"
#include "slogs/experiments.hpp"
#include "slogs/inequalities.hpp"
#include "slogs/norms.hpp"
#include "slogs/observables.hpp"
#include "slogs/solver.hpp"

using namespace slogs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_budget = secs <= budget_s;
  const bool pass = o.pass && in_budget;
  if (!pass) ++failures;
  std::printf("%s %2d %s: %s [%.1f s of %.0f s]%s\n", pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
              secs, budget_s, in_budget ? "" : " over budget");
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ExperimentSpec shipped(const std::string& name) {
  return load_config(fs::path(SLOGS_CONFIG_DIR) / name);
}

RunOptions run_opts() {
  RunOptions o;
  o.workers = default_workers();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "regularization property suite", 10.0, [] {
    const auto pairs = random_complex_pairs(100000, 1);
    std::size_t violations = 0, checks = 0;
    double worst = 0.0;
    for (double eps : {0.5, 0.1, 0.01, 1e-4}) {
      auto reports = check_log_rational_bounds(eps, pairs);
      reports.push_back(check_log_shift_one_sided(eps, pairs));
      for (const auto& r : reports) {
        violations += r.violations;
        worst = std::max(worst, r.worst_ratio);
        ++checks;
      }
    }
    return Outcome{violations == 0, std::to_string(violations) + " violations over " + std::to_string(checks) +
                                        " suites x 1e5 pairs, worst lhs/rhs " + fmt(worst)};
  });

  criterion(2, "g-catalogue suite", 10.0, [] {
    std::size_t violations = 0;
    double worst = 0.0;
    for (const GKind g : {GKind{GFamily::One, 1.0}, GKind{GFamily::InverseShift, 1.0}, GKind{GFamily::Rational, 1.0},
                          GKind{GFamily::RationalSq, 1.0}, GKind{GFamily::LogRationalG, 0.5}}) {
      for (const auto& r : check_g_conditions(g, 100000, 2)) {
        violations += r.violations;
        worst = std::max(worst, r.worst_ratio);
      }
    }
    return Outcome{violations == 0,
                   std::to_string(violations) + " violations, 5 families x 2 conditions x 1e5 pairs, worst " + fmt(worst)};
  });

  criterion(3, "case-3 split-step mass conservation", 120.0, [] {
    const Grid grid(1, 2.0 * std::numbers::pi, 256, Boundary::PeriodicTorus);
    const EquationSpec eq{-1.0, RegKind::log_rational(1e-3)};
    SolverConfig cfg;
    cfg.scheme = Scheme::SplitStep;
    cfg.dt = 1e-4;
    cfg.t_end = 1.0;
    cfg.observe_stride = 100;
    InitialCondition ic;
    ic.width = 0.7;
    const auto u0 = ic.make(grid, eq);
    const double m0 = mass(u0);
    double worst = 0.0;
    for (auto fam : {GFamily::One, GFamily::InverseShift, GFamily::Rational, GFamily::RationalSq,
                     GFamily::LogRationalG, GFamily::SuperLog}) {
      NoiseSpec ns;
      ns.noise_case = NoiseCase::MultiplicativeReal;
      ns.spectrum = {3.0, 1.0, 8};
      ns.g = {fam, fam == GFamily::LogRationalG ? 0.5 : 1.0};
      ns.master_seed = 3;
      ns.validate(grid);
      const NoiseModel noise(grid, ns);
      const auto drifts = parallel_map<double>(16, default_workers(), [&](std::size_t s) {
        double d = 0.0;
        EvolveOptions o;
        o.sample_index = static_cast<std::uint32_t>(s);
        o.on_sample = [&](double, std::uint64_t, const ComplexField& u) {
          d = std::max(d, std::abs(mass(u) - m0) / m0);
        };
        const auto r = evolve(u0, eq, noise, cfg, o);
        return r.final_state.status == PathStatus::Finished ? d : INFINITY;
      });
      for (double d : drifts) worst = std::max(worst, d);
    }
    return Outcome{worst <= 1e-10, "max relative drift " + fmt(worst) + " over 6 g families x 16 paths x 1e4 steps"};
  });

  criterion(4, "eps strong-convergence rate", 900.0, [] {
    const auto r = run_eps_convergence(shipped("converge.cfg"), run_opts());
    const auto* f = r.find_fit("eps_rate");
    if (!r.valid || !f) return Outcome{false, "invalid run: " + r.invalid_reason};
    const bool ok = f->fit.slope >= 0.7 && f->fit.slope <= 1.3 && f->fit.r_squared >= 0.95;
    return Outcome{ok, "slope " + fmt(f->fit.slope) + " (CI " + fmt(f->ci_low) + ".." + fmt(f->ci_high) + "), R^2 " +
                           fmt(f->fit.r_squared) + ", excluded " + std::to_string(r.excluded)};
  });

  criterion(5, "temporal Hoelder exponent", 600.0, [] {
    const auto r = run_hoelder(shipped("hoelder.cfg"), run_opts());
    const auto* f = r.find_fit("hoelder_exponent");
    if (!r.valid || !f) return Outcome{false, "invalid run: " + r.invalid_reason};
    const bool ok = f->fit.slope >= 0.8 && f->fit.slope <= 1.2;
    return Outcome{ok, "slope " + fmt(f->fit.slope) + " (CI " + fmt(f->ci_low) + ".." + fmt(f->ci_high) + "), R^2 " +
                           fmt(f->fit.r_squared)};
  });

  criterion(6, "moment sweep", 900.0, [] {
    const auto r = run_moment_sweep(shipped("momentsweep.cfg"), run_opts());
    if (!r.valid) return Outcome{false, "invalid run: " + r.invalid_reason};
    const double h1 = r.scalar("h1_p2.band");
    const double en = r.scalar("energy_abs_p2.band");
    const auto* h2 = r.find_fit("h2_p2");
    const double slope = h2 ? h2->fit.slope : NAN;
    const bool ok = h1 <= 0.2 && en <= 0.3 && slope >= -2.3 && slope <= 0.0;
    return Outcome{ok, "H1 band " + fmt(h1) + " (<= 0.2), H2 slope " + fmt(slope) + " (in [-2.3, 0]), energy band " +
                           fmt(en) + " (<= 0.3)"};
  });

  criterion(7, "weighted interpolation", 30.0, [] {
    const Grid grid(1, 40.0, 512, Boundary::PeriodicTorus);
    std::size_t violations = 0;
    std::string detail;
    for (auto [alpha, eta] : {std::pair{1.0, 0.25}, std::pair{0.5, 0.2}}) {
      const auto r = check_weighted_interpolation(grid, alpha, eta, 10000, 7);
      violations += r.violations;
      detail += "(a=" + fmt(alpha) + ", eta=" + fmt(eta) + ") worst " + fmt(r.worst_ratio) + " vs C " +
                fmt(interpolation_constant(1, alpha, eta)) + "; ";
    }
    return Outcome{violations == 0, std::to_string(violations) + " violations; " + detail};
  });

  criterion(8, "deterministic oracles", 60.0, [] {
    const auto r = run_selftest();
    std::string detail;
    for (const auto& c : r.checks) detail += c.name + " " + fmt(c.value) + (c.passed ? "" : " (fail)") + "; ";
    return Outcome{r.valid, detail};
  });

  criterion(9, "Ito/Stratonovich cross-validation", 300.0, [] {
    const auto spec = shipped("itostrat.cfg");
    const Grid grid = spec.grid.make();
    const NoiseModel noise(grid, spec.noise);
    const auto u0 = spec.initial.make(grid, spec.eq);
    // Both levels sum the same finest increments, so the Brownian path is shared.
    const double dt = spec.solver.dt;
    const int fine = spec.solver.noise_substeps;
    if (fine % 2 != 0) throw std::runtime_error("itostrat.cfg needs an even noise_substeps");
    auto gap = [&](double step, int substeps) {
      const auto d = parallel_map<double>(spec.n_samples, default_workers(), [&](std::size_t s) {
        SolverConfig c = spec.solver;
        c.dt = step;
        c.noise_substeps = substeps;
        c.observe_stride = 1000000;
        EvolveOptions o;
        o.sample_index = static_cast<std::uint32_t>(s);
        c.scheme = Scheme::ExpEuler;
        const auto ito = evolve(u0, spec.eq, noise, c, o);
        c.scheme = Scheme::SplitStep;
        const auto strat = evolve(u0, spec.eq, noise, c, o);
        return norm_l2(ito.final_state.u - strat.final_state.u);
      });
      double m = 0.0;
      for (double v : d) m += v;
      return m / static_cast<double>(d.size());
    };
    const double coarse = gap(dt, fine);
    const double finer = gap(dt / 2, fine / 2);
    const double ratio = coarse / finer;
    return Outcome{ratio >= 1.7, "mean ||u_Ito - u_Strat|| at T: " + fmt(coarse) + " (dt) vs " + fmt(finer) +
                                     " (dt/2), ratio " + fmt(ratio) + " (>= 1.7), " +
                                     std::to_string(spec.n_samples) + " paths"};
  });

  criterion(10, "reproducibility across worker counts", 120.0, [] {
    auto spec = shipped("converge.cfg");
    spec.n_samples = 4;
    spec.solver.t_end = 0.25;
    const auto base = fs::temp_directory_path() / "slogs_acceptance_repro";
    fs::remove_all(base);
    std::vector<fs::path> dirs;
    for (unsigned w : {1u, 4u, 1u, 4u}) {
      RunOptions o;
      o.workers = w;
      const auto dir = base / ("run" + std::to_string(dirs.size()) + "_w" + std::to_string(w));
      write_outputs(run_eps_convergence(spec, o), dir);
      dirs.push_back(dir);
    }
    std::size_t files = 0, mismatches = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      const std::string ref = slurp(entry.path());
      for (std::size_t i = 1; i < dirs.size(); ++i)
        if (slurp(dirs[i] / entry.path().filename()) != ref) ++mismatches;
    }
    // The manifest differs only in wall-clock stamps and the worker count.
    auto manifest = [](const fs::path& dir) {
      auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
      for (const char* k : {"started", "finished", "workers"}) j.erase(k);
      return j.dump();
    };
    const std::string ref_manifest = manifest(dirs[0]);
    for (std::size_t i = 1; i < dirs.size(); ++i)
      if (manifest(dirs[i]) != ref_manifest) ++mismatches;
    fs::remove_all(base);
    return Outcome{files > 0 && mismatches == 0, std::to_string(files) + " CSV files plus manifest x 4 runs (workers 1,4,1,4), " +
                                                     std::to_string(mismatches) + " mismatches"};
  });

  return failures == 0 ? 0 : 1;
}
