#include "slogs/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "slogs/csv.hpp"
#include "slogs/errors.hpp"
#include "slogs/inequalities.hpp"
#include "slogs/norms.hpp"
#include "slogs/spectral.hpp"

#ifndef SLOGS_VERSION
#define SLOGS_VERSION "unknown"
#endif

namespace slogs {

std::string version_string() { return SLOGS_VERSION; }

const CheckResult* RunRecord::find_check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

const FitReport* RunRecord::find_fit(const std::string& name) const {
  for (const auto& f : fits)
    if (f.name == name) return &f;
  return nullptr;
}

double RunRecord::scalar(const std::string& name) const {
  for (const auto& [k, v] : scalars)
    if (k == name) return v;
  throw std::out_of_range("no scalar '" + name + "'");
}

unsigned default_workers() {
  if (const char* env = std::getenv("SLOGS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

double mean_increment_moment(const std::vector<ComplexField>& snapshots, const std::vector<double>& times,
                             double lag) {
  if (snapshots.size() != times.size()) throw ParameterError("snapshot and time counts differ");
  if (lag < 0.0) throw ParameterError("lag must be >= 0");
  if (lag == 0.0) return 0.0;
  double sum = 0.0;
  std::size_t pairs = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double target = times[i] + lag;
    while (j < times.size() && times[j] < target - 1e-9 * std::max(1.0, target)) ++j;
    if (j == times.size()) break;
    if (std::abs(times[j] - target) > 1e-9 * std::max(1.0, target)) continue;
    const double d = norm_l2(snapshots[j] - snapshots[i]);
    sum += d * d;
    ++pairs;
  }
  if (pairs == 0) throw ParameterError("no sampled time pair is separated by the requested lag");
  return sum / static_cast<double>(pairs);
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

void say(const RunOptions& o, const std::string& msg) {
  if (o.log) o.log(msg);
}

RunRecord start_record(const ExperimentSpec& spec, ExperimentKind kind, const RunOptions& opts) {
  RunRecord r;
  r.kind = kind;
  ExperimentSpec copy = spec;
  copy.kind = kind;
  refresh_resolved(copy);
  r.config = copy.resolved;
  r.master_seed = spec.noise.master_seed;
  r.version = version_string();
  r.started = utc_now();
  r.workers = std::max(1u, opts.workers);
  return r;
}

void close_record(RunRecord& r, std::size_t n_samples, double max_exclusion) {
  r.excluded = n_samples - r.completed;
  const double frac = n_samples ? static_cast<double>(r.excluded) / static_cast<double>(n_samples) : 0.0;
  if (frac > max_exclusion) {
    r.valid = false;
    r.invalid_reason = std::to_string(r.excluded) + " of " + std::to_string(n_samples) +
                       " samples excluded, above the tolerated fraction " + format_double(max_exclusion);
  }
  if (r.completed == 0 && n_samples > 0) {
    r.valid = false;
    if (r.invalid_reason.empty()) r.invalid_reason = "no sample completed";
  }
  r.finished = utc_now();
}

bool ok(PathStatus s) { return s == PathStatus::Finished; }

/// Column means over the completed samples with jackknife standard errors.
std::vector<Estimate> column_estimates(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  std::vector<Estimate> out(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[c]);
    if (v.size() >= 2) {
      out[c] = jackknife_mean(v);
    } else if (v.size() == 1) {
      out[c] = {v[0], 0.0};
    }
  }
  return out;
}

/**
 * Fits log(mean_s y[s][i]) against log x[i]. The slope uncertainty is a
 * leave-one-sample-out jackknife with the full-sample weights held fixed.
 */
std::optional<FitReport> fit_over_samples(const std::string& name, const std::vector<double>& xs,
                                          const std::vector<std::vector<double>>& per_sample) {
  const std::size_t n = per_sample.size();
  if (xs.size() < 3 || n == 0) return std::nullopt;
  const auto est = column_estimates(per_sample, xs.size());
  std::vector<FitPoint> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(est[i].mean > 0.0) || !std::isfinite(est[i].mean)) return std::nullopt;
    pts.push_back({xs[i], est[i].mean, est[i].std_error});
  }
  FitReport rep;
  rep.name = name;
  rep.points = pts.size();
  rep.fit = fit_loglog_slope(pts);
  rep.slope_stderr = rep.fit.slope_stderr;
  if (n >= 2) {
    std::vector<double> loo_sums(xs.size(), 0.0);
    for (const auto& row : per_sample)
      for (std::size_t i = 0; i < xs.size(); ++i) loo_sums[i] += row[i];
    bool feasible = true;
    const auto jk = jackknife(
        n,
        [&](std::size_t ex) {
          std::vector<FitPoint> p = pts;
          for (std::size_t i = 0; i < xs.size(); ++i) {
            p[i].y = (loo_sums[i] - per_sample[ex][i]) / static_cast<double>(n - 1);
            if (!(p[i].y > 0.0)) feasible = false;
          }
          if (!feasible) return rep.fit.slope;
          return fit_loglog_slope(p).slope;
        },
        rep.fit.slope);
    if (feasible) rep.slope_stderr = jk.std_error;
  }
  rep.ci_low = rep.fit.slope - 2.0 * rep.slope_stderr;
  rep.ci_high = rep.fit.slope + 2.0 * rep.slope_stderr;
  return rep;
}

void add_fit_scalars(RunRecord& r, const FitReport& f) {
  r.scalars.emplace_back(f.name + ".slope", f.fit.slope);
  r.scalars.emplace_back(f.name + ".intercept", f.fit.intercept);
  r.scalars.emplace_back(f.name + ".r_squared", f.fit.r_squared);
  r.scalars.emplace_back(f.name + ".slope_stderr", f.slope_stderr);
}

CheckResult range_check(const std::string& name, double value, double lo, double hi, std::string detail = {}) {
  return {name, value >= lo && value <= hi, value, lo, hi, std::move(detail)};
}

/// Largest |v_i / mean(v) - 1| across the ladder.
double band_deviation(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (mean == 0.0) return 0.0;
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x / mean - 1.0));
  return worst;
}

struct Setup {
  Grid grid;
  NoiseModel noise;
  ComplexField u0;

  explicit Setup(const ExperimentSpec& spec)
      : grid(spec.grid.make()), noise(grid, spec.noise), u0(spec.initial.make(grid, spec.eq)) {}
};

void require_ladder(const ExperimentSpec& spec) {
  if (spec.eps_ladder.empty()) throw ConfigError("the epsilon ladder is empty");
  for (std::size_t i = 0; i < spec.eps_ladder.size(); ++i) {
    const double e = spec.eps_ladder[i];
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("ladder entries must lie in (0, 1)");
    if (i > 0 && !(e < spec.eps_ladder[i - 1])) throw ConfigError("the epsilon ladder must decrease strictly");
  }
}

/// Config-level validation, except that lambda = 0 (the linear oracle) is admitted.
void validate_as(const ExperimentSpec& spec, ExperimentKind kind) {
  ExperimentSpec base = spec;
  base.kind = kind;
  if (base.eq.lambda == 0.0) base.eq.lambda = 1.0;
  base.validate();
}

void validate_base(const ExperimentSpec& spec) { validate_as(spec, ExperimentKind::SingleRun); }

}  // namespace

RunRecord run_eps_convergence(const ExperimentSpec& spec, const RunOptions& opts) {
  validate_base(spec);
  require_ladder(spec);
  if (!(spec.eps_reference > 0.0 && spec.eps_reference <= spec.eps_ladder.back()))
    throw ConfigError("eps_reference must be positive and not above the ladder");
  RunRecord rec = start_record(spec, ExperimentKind::EpsConvergence, opts);
  const Setup setup(spec);
  const std::size_t m = spec.eps_ladder.size();

  struct Outcome {
    SampleRecord sample;
    std::vector<double> err;
  };

  say(opts, "converge: " + std::to_string(spec.n_samples) + " samples x " + std::to_string(m + 1) + " paths");
  const auto outcomes = parallel_map<Outcome>(spec.n_samples, rec.workers, [&](std::size_t s) {
    Outcome out;
    out.sample.sample = static_cast<std::uint32_t>(s);
    EquationSpec eq_ref = spec.eq;
    eq_ref.reg.epsilon = spec.eps_reference;
    std::vector<ComplexField> snaps;
    EvolveOptions o;
    o.sample_index = out.sample.sample;
    o.on_sample = [&](double, std::uint64_t, const ComplexField& u) { snaps.push_back(u); };
    const auto ref = evolve(setup.u0, eq_ref, setup.noise, spec.solver, o);
    out.sample.noise_hash = ref.final_state.noise_hash;
    out.sample.status = ref.final_state.status;
    if (!ok(ref.final_state.status)) {
      out.sample.note = "reference path: " + to_string(ref.final_state.status);
      return out;
    }
    for (double eps : spec.eps_ladder) {
      EquationSpec eq = spec.eq;
      eq.reg.epsilon = eps;
      double sup = 0.0;
      std::size_t k = 0;
      EvolveOptions oe;
      oe.sample_index = out.sample.sample;
      oe.on_sample = [&](double, std::uint64_t, const ComplexField& u) {
        const double d = norm_l2(u - snaps.at(k++));
        sup = std::max(sup, d * d);
      };
      const auto path = evolve(setup.u0, eq, setup.noise, spec.solver, oe);
      if (!ok(path.final_state.status)) {
        out.sample.status = path.final_state.status;
        out.sample.note = "eps " + format_double(eps) + ": " + to_string(path.final_state.status);
        out.err.clear();
        return out;
      }
      if (path.final_state.noise_hash != ref.final_state.noise_hash)
        throw std::logic_error("noise coupling broken for sample " + std::to_string(s));
      out.err.push_back(sup);
    }
    return out;
  });

  std::vector<std::vector<double>> rows;
  for (const auto& o : outcomes) {
    rec.samples.push_back(o.sample);
    if (ok(o.sample.status)) {
      ++rec.completed;
      rows.push_back(o.err);
    }
  }
  close_record(rec, spec.n_samples, spec.max_exclusion);

  const auto est = column_estimates(rows, m);
  Table t{"convergence", {"epsilon", "err_mean", "err_stderr", "samples"}, {}};
  for (std::size_t i = 0; i < m; ++i)
    t.rows.push_back({format_double(spec.eps_ladder[i]), format_double(est[i].mean), format_double(est[i].std_error),
                      std::to_string(rows.size())});
  rec.tables.push_back(std::move(t));

  if (auto f = fit_over_samples("eps_rate", spec.eps_ladder, rows)) {
    add_fit_scalars(rec, *f);
    rec.checks.push_back(range_check("eps_rate.slope", f->fit.slope, 0.7, 1.3));
    rec.checks.push_back(range_check("eps_rate.r_squared", f->fit.r_squared, 0.95, 1.0));
    rec.fits.push_back(*f);
  }
  // err should not increase as epsilon decreases, up to 3 combined standard errors.
  double worst = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double se = std::hypot(est[i].std_error, est[i - 1].std_error);
    const double excess = est[i].mean - est[i - 1].mean;
    worst = std::max(worst, se > 0.0 ? excess / se : (excess > 0.0 ? INFINITY : 0.0));
  }
  rec.checks.push_back(range_check("monotone_error.max_excess_in_se", worst, -INFINITY, 3.0));
  return rec;
}

RunRecord run_hoelder(const ExperimentSpec& spec, const RunOptions& opts) {
  validate_as(spec, ExperimentKind::TemporalHoelder);
  RunRecord rec = start_record(spec, ExperimentKind::TemporalHoelder, opts);
  const Setup setup(spec);
  const std::size_t m = spec.hoelder_lags.size();

  struct Outcome {
    SampleRecord sample;
    std::vector<double> moment;
  };
  say(opts, "hoelder: " + std::to_string(spec.n_samples) + " samples");
  const auto outcomes = parallel_map<Outcome>(spec.n_samples, rec.workers, [&](std::size_t s) {
    Outcome out;
    out.sample.sample = static_cast<std::uint32_t>(s);
    std::vector<ComplexField> snaps;
    std::vector<double> times;
    EvolveOptions o;
    o.sample_index = out.sample.sample;
    o.on_sample = [&](double t, std::uint64_t, const ComplexField& u) {
      snaps.push_back(u);
      times.push_back(t);
    };
    const auto path = evolve(setup.u0, spec.eq, setup.noise, spec.solver, o);
    out.sample.status = path.final_state.status;
    out.sample.noise_hash = path.final_state.noise_hash;
    if (!ok(path.final_state.status)) {
      out.sample.note = to_string(path.final_state.status);
      return out;
    }
    for (double lag : spec.hoelder_lags) out.moment.push_back(mean_increment_moment(snaps, times, lag));
    return out;
  });

  std::vector<std::vector<double>> rows;
  for (const auto& o : outcomes) {
    rec.samples.push_back(o.sample);
    if (ok(o.sample.status)) {
      ++rec.completed;
      rows.push_back(o.moment);
    }
  }
  close_record(rec, spec.n_samples, spec.max_exclusion);

  const auto est = column_estimates(rows, m);
  Table t{"hoelder", {"lag", "moment_mean", "moment_stderr", "samples"}, {}};
  for (std::size_t i = 0; i < m; ++i)
    t.rows.push_back({format_double(spec.hoelder_lags[i]), format_double(est[i].mean),
                      format_double(est[i].std_error), std::to_string(rows.size())});
  rec.tables.push_back(std::move(t));
  if (auto f = fit_over_samples("hoelder_exponent", spec.hoelder_lags, rows)) {
    add_fit_scalars(rec, *f);
    rec.checks.push_back(range_check("hoelder_exponent.slope", f->fit.slope, 0.8, 1.2));
    rec.fits.push_back(*f);
  }
  return rec;
}

RunRecord run_moment_sweep(const ExperimentSpec& spec, const RunOptions& opts) {
  validate_base(spec);
  require_ladder(spec);
  for (int p : spec.moment_orders)
    if (p < 2 || p % 2) throw ConfigError("moment orders must be even integers >= 2");
  RunRecord rec = start_record(spec, ExperimentKind::MomentSweep, opts);
  const Setup setup(spec);
  const std::size_t m = spec.eps_ladder.size();

  // sup_t of each magnitude; the p-th moment column is E[(sup_t X)^p].
  const std::vector<std::string> quantities{"mass_norm", "h1", "h2", "l2_alpha", "energy_abs"};
  const std::size_t nq = quantities.size();

  struct Outcome {
    SampleRecord sample;
    std::vector<std::vector<double>> sup;  // [eps][quantity]
  };
  say(opts, "momentsweep: " + std::to_string(spec.n_samples) + " samples x " + std::to_string(m) + " eps");
  const auto outcomes = parallel_map<Outcome>(spec.n_samples, rec.workers, [&](std::size_t s) {
    Outcome out;
    out.sample.sample = static_cast<std::uint32_t>(s);
    for (double eps : spec.eps_ladder) {
      EquationSpec eq = spec.eq;
      eq.reg.epsilon = eps;
      std::vector<double> sup(nq, 0.0);
      EvolveOptions o;
      o.sample_index = out.sample.sample;
      o.on_sample = [&](double, std::uint64_t, const ComplexField& u) {
        const double vals[] = {norm_l2(u), norm_h1(u), norm_h2(u), norm_l2_alpha(u, spec.alpha),
                               std::abs(modified_energy(u, eq))};
        for (std::size_t q = 0; q < nq; ++q) sup[q] = std::max(sup[q], vals[q]);
      };
      const auto path = evolve(setup.u0, eq, setup.noise, spec.solver, o);
      out.sample.noise_hash = path.final_state.noise_hash;
      out.sample.status = path.final_state.status;
      if (!ok(path.final_state.status)) {
        out.sample.note = "eps " + format_double(eps) + ": " + to_string(path.final_state.status);
        out.sup.clear();
        return out;
      }
      out.sup.push_back(std::move(sup));
    }
    return out;
  });

  for (const auto& o : outcomes) {
    rec.samples.push_back(o.sample);
    if (ok(o.sample.status)) ++rec.completed;
  }
  close_record(rec, spec.n_samples, spec.max_exclusion);

  Table t{"moments", {"epsilon"}, {}};
  std::vector<std::vector<std::string>> cells(m);
  for (std::size_t i = 0; i < m; ++i) cells[i].push_back(format_double(spec.eps_ladder[i]));
  for (int p : spec.moment_orders) {
    for (std::size_t q = 0; q < nq; ++q) {
      const std::string col = quantities[q] + "_p" + std::to_string(p);
      t.columns.push_back(col);
      t.columns.push_back(col + "_stderr");
      std::vector<std::vector<double>> rows;  // [sample][eps]
      for (const auto& o : outcomes) {
        if (!ok(o.sample.status)) continue;
        std::vector<double> r;
        for (std::size_t i = 0; i < m; ++i) r.push_back(std::pow(o.sup[i][q], p));
        rows.push_back(std::move(r));
      }
      const auto est = column_estimates(rows, m);
      std::vector<double> means;
      for (std::size_t i = 0; i < m; ++i) {
        cells[i].push_back(format_double(est[i].mean));
        cells[i].push_back(format_double(est[i].std_error));
        means.push_back(est[i].mean);
      }
      rec.scalars.emplace_back(col + ".band", band_deviation(means));
      if (auto f = fit_over_samples(col, spec.eps_ladder, rows)) {
        add_fit_scalars(rec, *f);
        rec.fits.push_back(*f);
      }
    }
  }
  t.rows = std::move(cells);
  rec.tables.push_back(std::move(t));

  if (std::find(spec.moment_orders.begin(), spec.moment_orders.end(), 2) != spec.moment_orders.end()) {
    rec.checks.push_back(range_check("h1_p2.band", rec.scalar("h1_p2.band"), 0.0, 0.2));
    rec.checks.push_back(range_check("energy_abs_p2.band", rec.scalar("energy_abs_p2.band"), 0.0, 0.3));
    if (const auto* f = rec.find_fit("h2_p2"))
      rec.checks.push_back(range_check("h2_p2.slope", f->fit.slope, -2.3, 0.0));
  }
  return rec;
}

RunRecord run_mass_drift(const ExperimentSpec& spec, const RunOptions& opts) {
  validate_base(spec);
  RunRecord rec = start_record(spec, ExperimentKind::MassDrift, opts);
  const Grid grid = spec.grid.make();
  const ComplexField u0 = spec.initial.make(grid, spec.eq);
  const double m0 = mass(u0);
  if (!(m0 > 0.0)) throw ConfigError("mass drift needs an initial datum with positive mass");

  struct Combo {
    NoiseCase noise_case;
    Scheme scheme;
  };
  std::vector<Combo> combos;
  std::vector<std::string> skipped;
  std::vector<NoiseModel> models;
  for (auto nc : {NoiseCase::AdditiveComplex, NoiseCase::MultiplicativeComplex, NoiseCase::MultiplicativeReal}) {
    NoiseSpec ns = spec.noise;
    ns.noise_case = nc;
    try {
      ns.validate(grid);
    } catch (const std::exception& e) {
      skipped.push_back(to_string(nc) + ": " + e.what());
      continue;
    }
    for (auto sc : {Scheme::ExpEuler, Scheme::SplitStep, Scheme::StratonovichMidpoint}) {
      if (sc == Scheme::SplitStep && nc == NoiseCase::MultiplicativeComplex) {
        skipped.push_back(to_string(nc) + "/" + to_string(sc) + ": not defined for complex multiplicative noise");
        continue;
      }
      combos.push_back({nc, sc});
    }
  }
  for (const auto& c : combos) {
    NoiseSpec ns = spec.noise;
    ns.noise_case = c.noise_case;
    models.emplace_back(grid, ns);
  }

  struct PerCombo {
    double max_drift = 0.0;
    double final_drift = 0.0;
  };
  struct Outcome {
    SampleRecord sample;
    std::vector<PerCombo> combos;
  };
  say(opts, "massdrift: " + std::to_string(combos.size()) + " case/scheme pairs");
  const auto outcomes = parallel_map<Outcome>(spec.n_samples, rec.workers, [&](std::size_t s) {
    Outcome out;
    out.sample.sample = static_cast<std::uint32_t>(s);
    for (std::size_t c = 0; c < combos.size(); ++c) {
      SolverConfig cfg = spec.solver;
      cfg.scheme = combos[c].scheme;
      PerCombo pc;
      EvolveOptions o;
      o.sample_index = out.sample.sample;
      o.on_sample = [&](double, std::uint64_t, const ComplexField& u) {
        const double rel = (mass(u) - m0) / m0;
        pc.max_drift = std::max(pc.max_drift, std::abs(rel));
        pc.final_drift = rel;
      };
      const auto path = evolve(u0, spec.eq, models[c], cfg, o);
      out.sample.noise_hash = path.final_state.noise_hash;
      out.sample.status = path.final_state.status;
      if (!ok(path.final_state.status)) {
        out.sample.note = to_string(combos[c].noise_case) + "/" + to_string(combos[c].scheme) + ": " +
                          to_string(path.final_state.status);
        out.combos.clear();
        return out;
      }
      out.combos.push_back(pc);
    }
    return out;
  });

  for (const auto& o : outcomes) {
    rec.samples.push_back(o.sample);
    if (ok(o.sample.status)) ++rec.completed;
  }
  close_record(rec, spec.n_samples, spec.max_exclusion);

  Table t{"massdrift", {"case", "scheme", "max_rel_drift", "mean_final_drift", "final_drift_stderr", "samples"}, {}};
  for (std::size_t c = 0; c < combos.size(); ++c) {
    double worst = 0.0;
    std::vector<double> finals;
    for (const auto& o : outcomes) {
      if (!ok(o.sample.status)) continue;
      worst = std::max(worst, o.combos[c].max_drift);
      finals.push_back(o.combos[c].final_drift);
    }
    Estimate e{};
    if (finals.size() >= 2) e = jackknife_mean(finals);
    else if (finals.size() == 1) e = {finals[0], 0.0};
    const std::string key = to_string(combos[c].noise_case) + "/" + to_string(combos[c].scheme);
    t.rows.push_back({to_string(combos[c].noise_case), to_string(combos[c].scheme), format_double(worst),
                      format_double(e.mean), format_double(e.std_error), std::to_string(finals.size())});
    rec.scalars.emplace_back("max_rel_drift:" + key, worst);
    rec.scalars.emplace_back("mean_final_drift:" + key, e.mean);
    if (combos[c].noise_case == NoiseCase::MultiplicativeReal && combos[c].scheme == Scheme::SplitStep)
      rec.checks.push_back(range_check("mass_conservation:" + key, worst, 0.0, 1e-10));
  }
  rec.tables.push_back(std::move(t));
  for (const auto& s : skipped) rec.checks.push_back({"skipped", true, 0.0, 0.0, 0.0, s});
  return rec;
}

RunRecord run_inequality_check(const ExperimentSpec& spec, const RunOptions& opts) {
  RunRecord rec = start_record(spec, ExperimentKind::InequalityCheck, opts);
  const std::uint64_t seed = spec.noise.master_seed;
  std::vector<InequalityReport> reports;

  say(opts, "check: regularization suites");
  const auto pairs = random_complex_pairs(spec.check_pairs, seed);
  for (double eps : {0.5, 0.1, 0.01, 1e-4}) {
    reports.push_back(check_log_shift_one_sided(eps, pairs));
    for (auto& r : check_log_rational_bounds(eps, pairs)) reports.push_back(std::move(r));
  }
  say(opts, "check: g catalogue");
  const std::vector<GKind> families{{GFamily::One, 1.0},          {GFamily::InverseShift, 0.5},
                                    {GFamily::InverseShift, 2.0}, {GFamily::Rational, 0.5},
                                    {GFamily::Rational, 2.0},     {GFamily::RationalSq, 0.5},
                                    {GFamily::RationalSq, 2.0},   {GFamily::LogRationalG, 0.5},
                                    {GFamily::LogRationalG, 2.0}};
  for (const auto& g : families)
    for (auto& r : check_g_conditions(g, spec.check_pairs, seed)) reports.push_back(std::move(r));
  for (double em : {0.5, 0.1, 0.01, 1e-4}) reports.push_back(check_eps_difference(em, em / 10.0));

  say(opts, "check: weighted interpolation");
  const Grid grid = spec.grid.make();
  for (auto [alpha, eta] : {std::pair{1.0, 0.25}, std::pair{0.5, 0.2}})
    reports.push_back(check_weighted_interpolation(grid, alpha, eta, spec.check_fields, seed));

  Table t{"inequalities", {"name", "parameter", "samples", "violations", "worst_ratio"}, {}};
  for (const auto& r : reports) {
    t.rows.push_back({r.name, format_double(r.parameter), std::to_string(r.samples), std::to_string(r.violations),
                      format_double(r.worst_ratio)});
    rec.checks.push_back({r.name + "@" + format_double(r.parameter), r.violations == 0,
                          static_cast<double>(r.violations), 0.0, 0.0,
                          "worst ratio " + format_double(r.worst_ratio)});
  }
  rec.tables.push_back(std::move(t));
  rec.completed = spec.n_samples;
  close_record(rec, spec.n_samples, spec.max_exclusion);
  return rec;
}

RunRecord run_single(const ExperimentSpec& spec, const RunOptions& opts) {
  validate_base(spec);
  RunRecord rec = start_record(spec, ExperimentKind::SingleRun, opts);
  const Setup setup(spec);
  const auto observers = standard_observers(spec.eq, spec.alpha);

  say(opts, "simulate: " + std::to_string(spec.n_samples) + " samples");
  const auto paths = parallel_map<PathRecord>(spec.n_samples, rec.workers, [&](std::size_t s) {
    EvolveOptions o;
    o.observers = observers;
    o.sample_index = static_cast<std::uint32_t>(s);
    return evolve(setup.u0, spec.eq, setup.noise, spec.solver, o);
  });

  Table t{"final", {"sample", "status", "t", "mass", "energy", "h1_sq", "noise_hash"}, {}};
  for (std::size_t s = 0; s < paths.size(); ++s) {
    const auto& st = paths[s].final_state;
    rec.samples.push_back({static_cast<std::uint32_t>(s), st.status, st.noise_hash, {}});
    if (ok(st.status)) ++rec.completed;
    const double h1 = norm_h1(st.u);
    t.rows.push_back({std::to_string(s), to_string(st.status), format_double(st.t), format_double(mass(st.u)),
                      format_double(modified_energy(st.u, spec.eq)), format_double(h1 * h1), hex64(st.noise_hash)});
    rec.series.emplace_back("sample_" + std::to_string(s), paths[s].series);
  }
  rec.tables.push_back(std::move(t));
  close_record(rec, spec.n_samples, spec.max_exclusion);
  return rec;
}

RunRecord run_selftest(const RunOptions& opts) {
  ExperimentSpec base;
  base.kind = ExperimentKind::SingleRun;
  RunRecord rec = start_record(base, ExperimentKind::SingleRun, opts);
  rec.config["experiment.kind"] = "selftest";

  // Constant field: u(t) = A exp(i lambda f_eps(A^2) t) exactly under the split-step flow.
  {
    say(opts, "selftest: constant field");
    const Grid grid(1, 2.0 * std::numbers::pi, 64, Boundary::PeriodicTorus);
    const EquationSpec eq{1.0, RegKind::log_shift(1e-2)};
    const NoiseModel noise(grid, NoiseSpec{});
    SolverConfig cfg;
    cfg.scheme = Scheme::SplitStep;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const double a = 1.3;
    const auto path = evolve(ComplexField::constant(grid, a), eq, noise, cfg);
    const Complex exact = std::polar(a, eq.lambda * f_eps(a * a, eq.reg) * cfg.t_end);
    double err = 0.0;
    for (const Complex v : path.final_state.u.values()) err = std::max(err, std::abs(v - exact));
    rec.checks.push_back(range_check("constant_field_phase", err, 0.0, 1e-8, "max |u - exact| at T=1"));
  }

  // Stationary Gausson A exp(-(lambda/2)|x|^2) exp(i omega t), omega = 2 lambda log A - lambda d.
  {
    say(opts, "selftest: Gausson");
    const Grid grid(1, 40.0, 512, Boundary::PeriodicTorus);
    const double lambda = 1.0;
    const double a = 1.0;
    const EquationSpec eq{lambda, RegKind::log_shift(1e-6)};
    const NoiseModel noise(grid, NoiseSpec{});
    SolverConfig cfg;
    cfg.scheme = Scheme::SplitStep;
    cfg.dt = 1e-4;
    cfg.t_end = 1.0;
    cfg.observe_stride = 1000;
    InitialCondition ic;
    ic.kind = "gausson";
    ic.amplitude = a;
    const auto u0 = ic.make(grid, eq);
    const auto path = evolve(u0, eq, noise, cfg);
    const auto& u = path.final_state.u;
    ComplexField dmod(grid);
    for (std::size_t j = 0; j < u.size(); ++j) dmod[j] = std::abs(u[j]) - std::abs(u0[j]);
    rec.checks.push_back(
        range_check("gausson_modulus", norm_l2(dmod) / norm_l2(u0), 0.0, 1e-3, "|| |u| - |u0| || / ||u0|| at T=1"));
    const double omega = 2.0 * lambda * std::log(a) - lambda * grid.dim();
    const std::size_t mid = grid.size() / 2;
    const double phase = std::arg(u[mid] / std::polar(1.0, omega * cfg.t_end));
    rec.scalars.emplace_back("gausson_phase_error", std::abs(phase));
  }

  // Unitarity and group property of S(t) on both boundaries, d = 1 and 2.
  {
    say(opts, "selftest: unitarity");
    double worst = 0.0;
    CounterRng rng(7, 11);
    for (auto b : {Boundary::PeriodicTorus, Boundary::HomogeneousDirichlet}) {
      for (int d : {1, 2}) {
        const Grid grid(d, 2.0 * std::numbers::pi, d == 1 ? 128 : 32, b);
        for (int trial = 0; trial < 4; ++trial) {
          const auto u = random_gaussian_envelope(grid, rng);
          const double t = rng.uniform(0.01, 2.0);
          const auto fwd = semigroup_apply(u, t);
          const double n0 = norm_l2(u);
          worst = std::max(worst, std::abs(norm_l2(fwd) - n0) / n0);
          worst = std::max(worst, norm_l2(semigroup_apply(fwd, -t) - u) / n0);
        }
      }
    }
    rec.checks.push_back(range_check("semigroup_unitarity", worst, 0.0, 1e-10));

    const Grid grid(1, 2.0 * std::numbers::pi, 64, Boundary::PeriodicTorus);
    const int k = 3;
    const double t = 0.37;
    const auto wave = ComplexField::from_function(grid, [&](double x, double) { return std::polar(1.0, k * x); });
    const auto moved = semigroup_apply(wave, t);
    double err = 0.0;
    for (std::size_t j = 0; j < wave.size(); ++j)
      err = std::max(err, std::abs(moved[j] - wave[j] * std::polar(1.0, -double(k * k) * t)));
    rec.checks.push_back(range_check("semigroup_plane_wave", err, 0.0, 1e-10));
  }

  for (const auto& c : rec.checks)
    if (!c.passed) {
      rec.valid = false;
      rec.invalid_reason = "oracle failed: " + c.name;
    }
  rec.finished = utc_now();
  return rec;
}

RunRecord run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
  switch (spec.kind) {
    case ExperimentKind::EpsConvergence: return run_eps_convergence(spec, opts);
    case ExperimentKind::TemporalHoelder: return run_hoelder(spec, opts);
    case ExperimentKind::MomentSweep: return run_moment_sweep(spec, opts);
    case ExperimentKind::MassDrift: return run_mass_drift(spec, opts);
    case ExperimentKind::InequalityCheck: return run_inequality_check(spec, opts);
    case ExperimentKind::SingleRun: return run_single(spec, opts);
  }
  throw std::logic_error("unhandled experiment kind");
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_table(const Table& t, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_cell(t.columns[i]);
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
    os << "\n";
  }
}

nlohmann::json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

void write_outputs(const RunRecord& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  using nlohmann::json;
  json m;
  m["experiment"] = to_string(r.kind);
  if (r.config.count("experiment.kind")) m["experiment"] = r.config.at("experiment.kind");
  m["version"] = r.version;
  m["master_seed"] = r.master_seed;
  m["started"] = r.started;
  m["finished"] = r.finished;
  m["workers"] = r.workers;
  m["config"] = r.config;
  m["valid"] = r.valid;
  if (!r.valid) m["invalid_reason"] = r.invalid_reason;
  m["completed"] = r.completed;
  m["excluded"] = r.excluded;
  json samples = json::array();
  for (const auto& s : r.samples) {
    json j{{"sample", s.sample}, {"status", to_string(s.status)}, {"noise_hash", hex64(s.noise_hash)}};
    if (!s.note.empty()) j["note"] = s.note;
    samples.push_back(std::move(j));
  }
  m["samples"] = std::move(samples);
  json fits = json::array();
  for (const auto& f : r.fits)
    fits.push_back({{"name", f.name},
                    {"slope", number_or_string(f.fit.slope)},
                    {"intercept", number_or_string(f.fit.intercept)},
                    {"r_squared", number_or_string(f.fit.r_squared)},
                    {"slope_stderr", number_or_string(f.slope_stderr)},
                    {"ci95", {number_or_string(f.ci_low), number_or_string(f.ci_high)}},
                    {"points", f.points}});
  m["fits"] = std::move(fits);
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", number_or_string(c.value)},
                      {"bounds", {number_or_string(c.bound_low), number_or_string(c.bound_high)}},
                      {"detail", c.detail}});
  m["checks"] = std::move(checks);
  json scalars = json::object();
  for (const auto& [k, v] : r.scalars) scalars[k] = number_or_string(v);
  m["scalars"] = std::move(scalars);
  {
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write manifest in " + dir.string());
    os << m.dump(2) << "\n";
  }

  Table summary{"summary", {"quantity", "value"}, {}};
  summary.rows.push_back({"completed", std::to_string(r.completed)});
  summary.rows.push_back({"excluded", std::to_string(r.excluded)});
  summary.rows.push_back({"valid", r.valid ? "true" : "false"});
  for (const auto& [k, v] : r.scalars) summary.rows.push_back({k, format_double(v)});
  for (const auto& c : r.checks)
    if (c.name != "skipped") summary.rows.push_back({"check:" + c.name, c.passed ? "pass" : "fail"});
  write_table(summary, dir / "summary.csv");

  for (const auto& t : r.tables) write_table(t, dir / (t.name + ".csv"));
  for (const auto& [name, s] : r.series) {
    std::ofstream os(dir / ("series_" + name + ".csv"), std::ios::binary);
    s.write_csv(os);
  }
}

}  // namespace slogs
