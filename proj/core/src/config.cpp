#include "slogs/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "slogs/csv.hpp"
#include "slogs/errors.hpp"

namespace slogs {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::EpsConvergence: return "converge";
    case ExperimentKind::TemporalHoelder: return "hoelder";
    case ExperimentKind::MomentSweep: return "momentsweep";
    case ExperimentKind::MassDrift: return "massdrift";
    case ExperimentKind::InequalityCheck: return "check";
    case ExperimentKind::SingleRun: return "simulate";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::EpsConvergence, ExperimentKind::TemporalHoelder,
                 ExperimentKind::MomentSweep, ExperimentKind::MassDrift,
                 ExperimentKind::InequalityCheck, ExperimentKind::SingleRun})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown experiment kind '" + s + "'");
}

const std::map<std::string, std::string>& config_defaults() {
  static const std::map<std::string, std::string> defaults = {
      {"experiment.kind", "simulate"},
      {"experiment.samples", "1"},
      {"experiment.eps_ladder", ""},
      {"experiment.eps_reference", "1e-06"},
      {"experiment.moment_orders", "2"},
      {"experiment.hoelder_lags", ""},
      {"experiment.alpha", "1"},
      {"experiment.max_exclusion", "0.05"},
      {"experiment.check_pairs", "100000"},
      {"experiment.check_fields", "10000"},
      {"experiment.output_dir", "out"},
      {"grid.dim", "1"},
      {"grid.length", format_double(2.0 * std::numbers::pi)},
      {"grid.n", "256"},
      {"grid.boundary", "periodic"},
      {"eq.lambda", "1"},
      {"eq.reg", "logshift"},
      {"eq.epsilon", "0.001"},
      {"noise.case", "real"},
      {"noise.decay", "2"},
      {"noise.amplitude", "0"},
      {"noise.kmax", "8"},
      {"noise.g", "one"},
      {"noise.c", "1"},
      {"noise.seed", "0"},
      {"solver.scheme", "splitstep"},
      {"solver.dt", "0.001"},
      {"solver.t_end", "1"},
      {"solver.truncation_radius", "none"},
      {"solver.truncation_plateau", "none"},
      {"solver.truncation_norm", "h2"},
      {"solver.midpoint_tol", "1e-12"},
      {"solver.midpoint_max_iter", "50"},
      {"solver.dealias", "true"},
      {"solver.observe_stride", "10"},
      {"solver.blowup_threshold", "1000000000000"},
      {"solver.noise_substeps", "1"},
      {"solver.disable_laplacian", "false"},
      {"initial.kind", "gaussian"},
      {"initial.amplitude", "1"},
      {"initial.width", "1"},
      {"initial.center", "0"},
      {"initial.momentum", "0"},
      {"initial.mode", "1"},
  };
  return defaults;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  is.imbue(std::locale::classic());
  double d = 0.0;
  is >> d;
  if (is.fail() || !is.eof() || !std::isfinite(d))
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return d;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &pos, 0);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || v.front() == '-')
    throw ConfigError("key '" + key + "': expected an unsigned 64-bit integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected true|false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

std::optional<double> parse_optional(const std::string& key, const std::string& v) {
  if (v == "none" || v.empty()) return std::nullopt;
  return parse_double(key, v);
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(xs[i]);
    else
      out += std::to_string(xs[i]);
  }
  return out;
}

ExperimentSpec from_map(const std::map<std::string, std::string>& m) {
  auto get = [&](const std::string& k) -> const std::string& { return m.at(k); };
  ExperimentSpec s;
  s.kind = experiment_kind_from_string(get("experiment.kind"));
  const long long samples = parse_int("experiment.samples", get("experiment.samples"));
  if (samples < 1) throw ConfigError("experiment.samples must be >= 1");
  s.n_samples = static_cast<std::size_t>(samples);
  s.eps_ladder = parse_list("experiment.eps_ladder", get("experiment.eps_ladder"));
  s.eps_reference = parse_double("experiment.eps_reference", get("experiment.eps_reference"));
  s.moment_orders.clear();
  for (double p : parse_list("experiment.moment_orders", get("experiment.moment_orders")))
    s.moment_orders.push_back(static_cast<int>(p));
  s.hoelder_lags = parse_list("experiment.hoelder_lags", get("experiment.hoelder_lags"));
  s.alpha = parse_double("experiment.alpha", get("experiment.alpha"));
  s.max_exclusion = parse_double("experiment.max_exclusion", get("experiment.max_exclusion"));
  s.check_pairs = static_cast<std::size_t>(parse_int("experiment.check_pairs", get("experiment.check_pairs")));
  s.check_fields = static_cast<std::size_t>(parse_int("experiment.check_fields", get("experiment.check_fields")));
  s.output_dir = get("experiment.output_dir");

  s.grid.dim = static_cast<int>(parse_int("grid.dim", get("grid.dim")));
  s.grid.extent = parse_double("grid.length", get("grid.length"));
  const long long n = parse_int("grid.n", get("grid.n"));
  if (n < 1) throw ConfigError("grid.n must be positive");
  s.grid.points = static_cast<std::size_t>(n);
  s.grid.boundary = boundary_from_string(get("grid.boundary"));

  s.eq.lambda = parse_double("eq.lambda", get("eq.lambda"));
  s.eq.reg.family = reg_family_from_string(get("eq.reg"));
  s.eq.reg.epsilon = parse_double("eq.epsilon", get("eq.epsilon"));

  s.noise.noise_case = noise_case_from_string(get("noise.case"));
  s.noise.spectrum.decay = parse_double("noise.decay", get("noise.decay"));
  s.noise.spectrum.amplitude = parse_double("noise.amplitude", get("noise.amplitude"));
  s.noise.spectrum.mode_cutoff = static_cast<int>(parse_int("noise.kmax", get("noise.kmax")));
  s.noise.g.family = g_family_from_string(get("noise.g"));
  s.noise.g.c = parse_double("noise.c", get("noise.c"));
  s.noise.master_seed = parse_u64("noise.seed", get("noise.seed"));

  s.solver.scheme = scheme_from_string(get("solver.scheme"));
  s.solver.dt = parse_double("solver.dt", get("solver.dt"));
  s.solver.t_end = parse_double("solver.t_end", get("solver.t_end"));
  s.solver.truncation_radius = parse_optional("solver.truncation_radius", get("solver.truncation_radius"));
  s.solver.truncation_plateau = parse_optional("solver.truncation_plateau", get("solver.truncation_plateau"));
  s.solver.truncation_norm = truncation_norm_from_string(get("solver.truncation_norm"));
  s.solver.midpoint_tol = parse_double("solver.midpoint_tol", get("solver.midpoint_tol"));
  s.solver.midpoint_max_iter = static_cast<int>(parse_int("solver.midpoint_max_iter", get("solver.midpoint_max_iter")));
  s.solver.dealias = parse_bool("solver.dealias", get("solver.dealias"));
  s.solver.observe_stride = static_cast<int>(parse_int("solver.observe_stride", get("solver.observe_stride")));
  s.solver.blowup_threshold = parse_double("solver.blowup_threshold", get("solver.blowup_threshold"));
  s.solver.noise_substeps = static_cast<int>(parse_int("solver.noise_substeps", get("solver.noise_substeps")));
  s.solver.disable_laplacian = parse_bool("solver.disable_laplacian", get("solver.disable_laplacian"));

  s.initial.kind = get("initial.kind");
  s.initial.amplitude = parse_double("initial.amplitude", get("initial.amplitude"));
  s.initial.width = parse_double("initial.width", get("initial.width"));
  s.initial.center = parse_double("initial.center", get("initial.center"));
  s.initial.momentum = parse_double("initial.momentum", get("initial.momentum"));
  s.initial.mode = parse_double("initial.mode", get("initial.mode"));
  return s;
}

std::map<std::string, std::string> to_map(const ExperimentSpec& s) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("none"); };
  return {
      {"experiment.kind", to_string(s.kind)},
      {"experiment.samples", std::to_string(s.n_samples)},
      {"experiment.eps_ladder", join(s.eps_ladder)},
      {"experiment.eps_reference", format_double(s.eps_reference)},
      {"experiment.moment_orders", join(s.moment_orders)},
      {"experiment.hoelder_lags", join(s.hoelder_lags)},
      {"experiment.alpha", format_double(s.alpha)},
      {"experiment.max_exclusion", format_double(s.max_exclusion)},
      {"experiment.check_pairs", std::to_string(s.check_pairs)},
      {"experiment.check_fields", std::to_string(s.check_fields)},
      {"experiment.output_dir", s.output_dir.string()},
      {"grid.dim", std::to_string(s.grid.dim)},
      {"grid.length", format_double(s.grid.extent)},
      {"grid.n", std::to_string(s.grid.points)},
      {"grid.boundary", to_string(s.grid.boundary)},
      {"eq.lambda", format_double(s.eq.lambda)},
      {"eq.reg", to_string(s.eq.reg.family)},
      {"eq.epsilon", format_double(s.eq.reg.epsilon)},
      {"noise.case", to_string(s.noise.noise_case)},
      {"noise.decay", format_double(s.noise.spectrum.decay)},
      {"noise.amplitude", format_double(s.noise.spectrum.amplitude)},
      {"noise.kmax", std::to_string(s.noise.spectrum.mode_cutoff)},
      {"noise.g", to_string(s.noise.g.family)},
      {"noise.c", format_double(s.noise.g.c)},
      {"noise.seed", std::to_string(s.noise.master_seed)},
      {"solver.scheme", to_string(s.solver.scheme)},
      {"solver.dt", format_double(s.solver.dt)},
      {"solver.t_end", format_double(s.solver.t_end)},
      {"solver.truncation_radius", opt(s.solver.truncation_radius)},
      {"solver.truncation_plateau", opt(s.solver.truncation_plateau)},
      {"solver.truncation_norm", to_string(s.solver.truncation_norm)},
      {"solver.midpoint_tol", format_double(s.solver.midpoint_tol)},
      {"solver.midpoint_max_iter", std::to_string(s.solver.midpoint_max_iter)},
      {"solver.dealias", s.solver.dealias ? "true" : "false"},
      {"solver.observe_stride", std::to_string(s.solver.observe_stride)},
      {"solver.blowup_threshold", format_double(s.solver.blowup_threshold)},
      {"solver.noise_substeps", std::to_string(s.solver.noise_substeps)},
      {"solver.disable_laplacian", s.solver.disable_laplacian ? "true" : "false"},
      {"initial.kind", s.initial.kind},
      {"initial.amplitude", format_double(s.initial.amplitude)},
      {"initial.width", format_double(s.initial.width)},
      {"initial.center", format_double(s.initial.center)},
      {"initial.momentum", format_double(s.initial.momentum)},
      {"initial.mode", format_double(s.initial.mode)},
  };
}

}  // namespace

ComplexField InitialCondition::make(const Grid& grid, const EquationSpec& eq) const {
  const double a = amplitude;
  const bool two_d = grid.dim() == 2;
  auto r2 = [&](double x, double y) {
    const double dx = x - center;
    const double dy = two_d ? y - center : 0.0;
    return dx * dx + dy * dy;
  };
  if (kind == "gaussian")
    return ComplexField::from_function(grid, [&](double x, double y) {
      return std::polar(a * std::exp(-r2(x, y) / (2.0 * width * width)), momentum * x);
    });
  if (kind == "gausson") {
    if (!(eq.lambda > 0.0)) throw ConfigError("the Gausson profile needs lambda > 0");
    return ComplexField::from_function(grid, [&](double x, double y) {
      return Complex(a * std::exp(-0.5 * eq.lambda * (x * x + y * y)));
    });
  }
  if (kind == "constant") return ComplexField::constant(grid, Complex(a));
  if (kind == "sine")
    return ComplexField::from_function(grid, [&](double x, double y) {
      return Complex(a * std::sin(mode * x) * (two_d ? std::sin(mode * y) : 1.0));
    });
  if (kind == "plane")
    return ComplexField::from_function(grid, [&](double x, double) { return std::polar(a, mode * x); });
  if (kind == "sech")
    return ComplexField::from_function(grid, [&](double x, double y) {
      return std::polar(a / std::cosh(std::sqrt(r2(x, y)) / width), momentum * x);
    });
  throw ConfigError("unknown initial.kind '" + kind + "'");
}

void ExperimentSpec::validate() const {
  const Grid g = grid.make();
  eq.validate();
  noise.validate(g);
  solver.validate();
  if (n_samples < 1) throw ConfigError("experiment.samples must be >= 1");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ConfigError("experiment.alpha must lie in (0, 2]");
  if (!(max_exclusion >= 0.0 && max_exclusion < 1.0))
    throw ConfigError("experiment.max_exclusion must lie in [0, 1)");
  for (int p : moment_orders)
    if (p < 2 || p % 2 != 0) throw ConfigError("moment orders must be even integers >= 2");
  if (moment_orders.empty()) throw ConfigError("experiment.moment_orders is empty");

  const bool needs_ladder = kind == ExperimentKind::EpsConvergence || kind == ExperimentKind::MomentSweep;
  if (needs_ladder && eps_ladder.empty()) throw ConfigError("experiment.eps_ladder is empty");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0 && eps_ladder[i] < 1.0))
      throw ConfigError("eps_ladder entries must lie in (0, 1)");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1]))
      throw ConfigError("eps_ladder must be strictly decreasing");
  }
  if (kind == ExperimentKind::EpsConvergence) {
    if (!(eps_reference > 0.0)) throw ConfigError("eps_reference must be positive");
    if (!(eps_reference < eps_ladder.back()))
      throw ConfigError("eps_reference must be below every ladder entry");
  }
  if (kind == ExperimentKind::TemporalHoelder) {
    if (hoelder_lags.empty()) throw ConfigError("experiment.hoelder_lags is empty");
    const double spacing = solver.dt * solver.observe_stride;
    for (double lag : hoelder_lags) {
      if (!(lag >= 10.0 * solver.dt)) throw ConfigError("Hoelder lags must be at least 10 dt");
      if (lag > solver.t_end) throw ConfigError("Hoelder lag exceeds t_end");
      const double ratio = lag / spacing;
      if (std::abs(ratio - std::round(ratio)) > 1e-6)
        throw ConfigError("Hoelder lags must be multiples of dt * observe_stride");
    }
  }
  if (kind == ExperimentKind::SingleRun || kind == ExperimentKind::TemporalHoelder ||
      kind == ExperimentKind::MassDrift)
    (void)initial.make(g, eq);
}

ExperimentSpec parse_config(const std::string& text) {
  std::map<std::string, std::string> values = config_defaults();
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!values.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    values[key] = value;
  }
  ExperimentSpec spec = from_map(values);
  spec.resolved = to_map(spec);
  spec.validate();
  return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void refresh_resolved(ExperimentSpec& spec) { spec.resolved = to_map(spec); }

}  // namespace slogs
