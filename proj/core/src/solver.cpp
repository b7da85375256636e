#include "slogs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "slogs/errors.hpp"
#include "slogs/norms.hpp"

namespace slogs {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ExpEuler: return "expeuler";
    case Scheme::SplitStep: return "splitstep";
    case Scheme::StratonovichMidpoint: return "midpoint";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "expeuler") return Scheme::ExpEuler;
  if (s == "splitstep") return Scheme::SplitStep;
  if (s == "midpoint") return Scheme::StratonovichMidpoint;
  throw ConfigError("unknown scheme '" + s + "' (expected expeuler|splitstep|midpoint)");
}

std::string to_string(TruncationNorm n) { return n == TruncationNorm::H1 ? "h1" : "h2"; }

TruncationNorm truncation_norm_from_string(const std::string& s) {
  if (s == "h1") return TruncationNorm::H1;
  if (s == "h2") return TruncationNorm::H2;
  throw ConfigError("unknown truncation norm '" + s + "' (expected h1|h2)");
}

std::string to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Running: return "running";
    case PathStatus::Finished: return "finished";
    case PathStatus::BlowUp: return "blowup";
    case PathStatus::NoConvergence: return "noconvergence";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be >= 0");
  if (t_end > 0.0 && dt > t_end) throw ParameterError("dt must not exceed t_end");
  if (truncation_radius && !(*truncation_radius > 0.0))
    throw ParameterError("truncation radius must be positive");
  if (truncation_plateau) {
    if (!truncation_radius) throw ConfigError("truncation plateau given without a radius");
    if (!(*truncation_plateau >= 0.0 && *truncation_plateau < 2.0 * *truncation_radius))
      throw ParameterError("truncation plateau must lie in [0, 2R)");
  }
  if (!(midpoint_tol > 0.0)) throw ParameterError("midpoint tolerance must be positive");
  if (midpoint_max_iter < 1) throw ParameterError("midpoint iteration cap must be >= 1");
  if (observe_stride < 1) throw ParameterError("observation stride must be >= 1");
  if (!(blowup_threshold > 0.0)) throw ParameterError("blow-up threshold must be positive");
  if (noise_substeps < 1) throw ParameterError("noise substeps must be >= 1");
  (void)step_count();
}

std::uint64_t SolverConfig::step_count() const {
  const double ratio = t_end / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    throw ParameterError("t_end must be an integer multiple of dt");
  return static_cast<std::uint64_t>(n);
}

namespace {

double truncation_norm_value(const ComplexField& u, TruncationNorm which) {
  return which == TruncationNorm::H1 ? norm_h1(u) : norm_h2(u);
}

void hash_coefficients(std::uint64_t& hash, const std::vector<double>& coeffs) {
  for (double c : coeffs) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &c, sizeof(double));
    for (unsigned char b : bytes) {
      hash ^= b;
      hash *= 1099511628211ull;
    }
  }
}

}  // namespace

PathState initial_state(ComplexField u0, std::uint32_t sample_index, const SolverConfig& cfg) {
  PathState s{0.0, std::move(u0)};
  s.sample_index = sample_index;
  if (cfg.truncation_radius) s.norm_running_max = truncation_norm_value(s.u, cfg.truncation_norm);
  if (!s.u.all_finite()) s.status = PathStatus::BlowUp;
  return s;
}

double truncation_factor(double running_max, const SolverConfig& cfg) {
  if (!cfg.truncation_radius) return 1.0;
  const double r = *cfg.truncation_radius;
  const double plateau = cfg.truncation_plateau.value_or(r);
  if (running_max <= plateau) return 1.0;
  if (running_max >= 2.0 * r) return 0.0;
  const double s = (2.0 * r - running_max) / (2.0 * r - plateau);
  return s * s * (3.0 - 2.0 * s);
}

double truncation_factor(const PathState& state, const SolverConfig& cfg) {
  return truncation_factor(state.norm_running_max, cfg);
}

Stepper::Stepper(const EquationSpec& eq, const NoiseModel& noise, const SolverConfig& cfg)
    : eq_(eq),
      noise_(noise),
      cfg_(cfg),
      full_(noise.grid(), cfg.dt),
      half_(noise.grid(), 0.5 * cfg.dt),
      back_half_(noise.grid(), -0.5 * cfg.dt) {
  cfg_.validate();
}

std::vector<double> Stepper::draw(const PathState& state, std::uint64_t& hash) const {
  auto coeffs = noise_.increment_coefficients(cfg_.dt, state.sample_index, state.step_index,
                                              cfg_.noise_substeps);
  hash_coefficients(hash, coeffs);
  return coeffs;
}

void Stepper::propagate(ComplexField& u, const SemigroupOperator& op) const {
  if (!cfg_.disable_laplacian) op.apply_in_place(u);
}

ComplexField Stepper::maybe_dealias(ComplexField f) const {
  return cfg_.dealias ? dealias(f) : f;
}

void Stepper::finish_step(PathState& next) const {
  next.step_index += 1;
  next.t = static_cast<double>(next.step_index) * cfg_.dt;
  if (!next.u.all_finite()) {
    next.status = PathStatus::BlowUp;
    return;
  }
  if (cfg_.truncation_radius)
    next.norm_running_max =
        std::max(next.norm_running_max, truncation_norm_value(next.u, cfg_.truncation_norm));
}

PathState Stepper::step(const PathState& state) const {
  switch (cfg_.scheme) {
    case Scheme::ExpEuler: return step_exp_euler(state);
    case Scheme::SplitStep: return step_splitstep(state);
    case Scheme::StratonovichMidpoint: return step_midpoint(state);
  }
  return state;
}

PathState Stepper::step_exp_euler(const PathState& state) const {
  if (state.status != PathStatus::Running) return state;
  PathState next = state;
  const double theta = truncation_factor(state, cfg_);
  const auto coeffs = draw(state, next.noise_hash);
  const ComplexField dw = noise_.synthesize(coeffs);
  const ComplexField& u = state.u;

  ComplexField drift = drift_nonlinear(u, eq_);
  const bool additive = noise_.spec().noise_case == NoiseCase::AdditiveComplex;
  ComplexField increment(u.grid());
  if (additive) {
    drift *= theta * cfg_.dt;
    increment = maybe_dealias(std::move(drift));
    increment += dw;
  } else {
    drift += ito_correction(u, noise_);
    drift *= cfg_.dt;
    drift += diffusion_apply(u, noise_, dw);
    drift *= theta;
    increment = maybe_dealias(std::move(drift));
  }
  next.u += increment;
  propagate(next.u, full_);
  finish_step(next);
  return next;
}

PathState Stepper::step_splitstep(const PathState& state) const {
  if (state.status != PathStatus::Running) return state;
  const NoiseCase nc = noise_.spec().noise_case;
  if (nc == NoiseCase::MultiplicativeComplex)
    throw ConfigError("split-step is exact only for additive or real-valued noise");
  PathState next = state;
  const double theta = truncation_factor(state, cfg_);
  const auto coeffs = draw(state, next.noise_hash);
  const ComplexField dw = noise_.synthesize(coeffs);
  const GKind& g = noise_.spec().g;
  const bool additive = nc == NoiseCase::AdditiveComplex;

  auto& u = next.u;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double rho = std::norm(u[j]);
    if (rho == 0.0) continue;
    double phase = eq_.lambda * f_eps(rho, eq_.reg) * cfg_.dt;
    if (!additive) phase += g_eval(rho, g) * dw[j].real();
    u[j] *= std::polar(1.0, theta * phase);
  }
  propagate(u, full_);
  if (additive) u += dw;
  finish_step(next);
  return next;
}

PathState Stepper::step_midpoint(const PathState& state) const {
  if (state.status != PathStatus::Running) return state;
  PathState next = state;
  const double theta = truncation_factor(state, cfg_);
  const auto coeffs = draw(state, next.noise_hash);
  const ComplexField dw = noise_.synthesize(coeffs);
  const bool additive = noise_.spec().noise_case == NoiseCase::AdditiveComplex;
  const GKind& g = noise_.spec().g;

  // Unknown v = S(-dt/2) u_{n+1}; with w = S(dt/2) u_n the scheme reads
  // v = w + theta (dt N(m) + i g(|m|^2) m dW), m = (w + v) / 2.
  ComplexField w = state.u;
  propagate(w, half_);
  auto increment = [&](const ComplexField& v) {
    ComplexField mid = w;
    mid += v;
    mid *= 0.5;
    ComplexField inc = drift_nonlinear(mid, eq_);
    inc *= cfg_.dt;
    if (!additive) {
      for (std::size_t j = 0; j < mid.size(); ++j)
        inc[j] += Complex(0.0, g_eval(std::norm(mid[j]), g)) * mid[j] * dw[j];
    }
    inc *= theta;
    return maybe_dealias(std::move(inc));
  };

  ComplexField v = w;
  if (additive) v += dw;
  int iter = 0;
  bool converged = false;
  while (iter < cfg_.midpoint_max_iter) {
    ComplexField candidate = w;
    candidate += increment(v);
    if (additive) candidate += dw;
    ++iter;
    ComplexField diff = candidate;
    diff -= v;
    const double change = norm_l2(diff);
    const double scale = std::max(norm_l2(candidate), 1e-300);
    v = std::move(candidate);
    if (!v.all_finite()) break;
    if (change <= cfg_.midpoint_tol * scale) {
      converged = true;
      break;
    }
  }
  next.last_midpoint_iterations = iter;
  if (!converged) {
    next.status = v.all_finite() ? PathStatus::NoConvergence : PathStatus::BlowUp;
    return next;
  }
  propagate(v, half_);
  next.u = std::move(v);
  finish_step(next);
  return next;
}

PathState step_exp_euler(const PathState& state, const EquationSpec& eq, const NoiseModel& noise,
                         const SolverConfig& cfg) {
  return Stepper(eq, noise, cfg).step_exp_euler(state);
}

PathState step_splitstep(const PathState& state, const EquationSpec& eq, const NoiseModel& noise,
                         const SolverConfig& cfg) {
  return Stepper(eq, noise, cfg).step_splitstep(state);
}

PathState step_midpoint(const PathState& state, const EquationSpec& eq, const NoiseModel& noise,
                        const SolverConfig& cfg) {
  return Stepper(eq, noise, cfg).step_midpoint(state);
}

PathRecord evolve(const ComplexField& u0, const EquationSpec& eq, const NoiseModel& noise,
                  const SolverConfig& cfg, const EvolveOptions& options) {
  require_same_grid(u0.grid(), noise.grid(), "evolve");
  cfg.validate();
  const std::uint64_t steps = cfg.step_count();
  const Stepper stepper(eq, noise, cfg);

  std::vector<std::string> names;
  for (const auto& o : options.observers) names.push_back(o.name);
  PathRecord rec{initial_state(u0, options.sample_index, cfg), ObservableSeries(names)};
  PathState& state = rec.final_state;

  auto observe = [&]() {
    if (norm_h1(state.u) > cfg.blowup_threshold) {
      state.status = PathStatus::BlowUp;
      return;
    }
    std::vector<double> row;
    row.reserve(options.observers.size());
    for (const auto& o : options.observers) row.push_back(o.fn(state.u));
    rec.series.add_row(state.t, std::move(row));
    if (options.on_sample) options.on_sample(state.t, state.step_index, state.u);
  };

  if (state.status != PathStatus::Running) return rec;
  observe();
  const auto stride = static_cast<std::uint64_t>(cfg.observe_stride);
  while (state.status == PathStatus::Running && state.step_index < steps) {
    state = stepper.step(state);
    if (state.status != PathStatus::Running) break;
    if (state.step_index % stride == 0 || state.step_index == steps) observe();
  }
  if (state.status == PathStatus::Running) state.status = PathStatus::Finished;
  return rec;
}

}  // namespace slogs
