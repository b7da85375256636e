#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "slogs/config.hpp"
#include "slogs/errors.hpp"
#include "slogs/experiments.hpp"
#include "slogs/fit.hpp"

using namespace slogs;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.grid = {1, 2.0 * std::numbers::pi, 32, Boundary::PeriodicTorus};
  s.eq = {-1.0, RegKind::log_rational(1e-2)};
  s.noise.noise_case = NoiseCase::MultiplicativeReal;
  s.noise.spectrum = {3.0, 0.5, 4};
  s.noise.g = {GFamily::Rational, 1.0};
  s.noise.master_seed = 9;
  s.solver.scheme = Scheme::SplitStep;
  s.solver.dt = 1e-3;
  s.solver.t_end = 0.05;
  s.solver.observe_stride = 5;
  s.initial.kind = "gaussian";
  s.n_samples = 6;
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("slogs_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("fit_loglog_slope examples") {
  std::vector<FitPoint> exact;
  for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) exact.push_back({x, x, 0.0});
  const auto f = fit_loglog_slope(exact);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(0.0).scale(1.0));

  std::vector<FitPoint> flat;
  for (double x : {0.1, 0.2, 0.3, 0.5}) flat.push_back({x, 3.0, 0.0});
  CHECK(fit_loglog_slope(flat).slope == doctest::Approx(0.0).scale(1.0));

  CounterRng rng(5, 0);
  std::vector<FitPoint> noisy;
  for (int i = 0; i < 12; ++i) {
    const double x = std::pow(10.0, -3.0 + 0.3 * i);
    noisy.push_back({x, std::sqrt(x) * (1.0 + 0.01 * rng.normal()), 0.0});
  }
  const double slope = fit_loglog_slope(noisy).slope;
  CHECK(slope >= 0.45);
  CHECK(slope <= 0.55);

  CHECK_THROWS_AS(fit_loglog_slope(std::vector<FitPoint>{{1, 1, 0}, {2, 2, 0}}), ParameterError);
  CHECK_THROWS_AS(fit_loglog_slope(std::vector<FitPoint>{{1, 1, 0}, {2, -2, 0}, {3, 3, 0}}), ParameterError);
  CHECK_THROWS_AS(fit_loglog_slope(std::vector<FitPoint>{{1, 1, 0}, {0, 2, 0}, {3, 3, 0}}), ParameterError);
  CHECK_THROWS_AS(fit_loglog_slope(std::vector<FitPoint>{{1, 1, 0}, {3, 2, 0}, {2, 3, 0}}), ParameterError);
  // Decreasing x is monotone too.
  CHECK(fit_loglog_slope(std::vector<FitPoint>{{4, 16, 0}, {2, 4, 0}, {1, 1, 0}}).slope == doctest::Approx(2.0));
}

TEST_CASE("weighted fit and jackknife") {
  std::vector<FitPoint> pts{{1, 1, 0.1}, {2, 2.2, 0.2}, {4, 3.9, 0.4}, {8, 8.1, 0.8}};
  const auto f = fit_loglog_slope(pts);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(f.slope_stderr > 0.0);
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 10.0};
  const auto e = jackknife_mean(v);
  double m = 4.0, ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  CHECK(e.mean == doctest::Approx(4.0));
  CHECK(e.std_error == doctest::Approx(std::sqrt(ss / 4.0 / 5.0)).epsilon(1e-12));
}

TEST_CASE("config parsing") {
  const auto spec = parse_config(
      "# comment\n"
      "experiment.kind = converge\n"
      "experiment.eps_ladder = 0.1, 0.01, 0.001\n"
      "experiment.eps_reference = 1e-5\n"
      "grid.n = 64   # trailing comment\n"
      "noise.amplitude = 0.5\n"
      "noise.decay = 3\n"
      "noise.seed = 0x10\n"
      "solver.truncation_radius = 50\n");
  CHECK(spec.kind == ExperimentKind::EpsConvergence);
  CHECK(spec.eps_ladder == std::vector<double>{0.1, 0.01, 0.001});
  CHECK(spec.grid.points == 64);
  CHECK(spec.noise.master_seed == 16);
  REQUIRE(spec.solver.truncation_radius.has_value());
  CHECK(*spec.solver.truncation_radius == 50.0);
  CHECK(spec.resolved.size() == config_defaults().size());
  CHECK(spec.resolved.at("grid.n") == "64");

  // The resolved map reproduces the same spec.
  std::string text;
  for (const auto& [k, v] : spec.resolved) text += k + " = " + v + "\n";
  const auto again = parse_config(text);
  CHECK(again.resolved == spec.resolved);

  CHECK_THROWS_AS(parse_config("grid.nn = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.n = 64\ngrid.n = 128\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.n = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just a line\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("eq.reg = nope\n"), ConfigError);
  CHECK_THROWS(parse_config("grid.n = 100\n"));
  CHECK_THROWS(parse_config("experiment.kind = converge\nexperiment.eps_ladder = 0.01, 0.1\n"));
  CHECK_THROWS(parse_config("experiment.kind = converge\nexperiment.eps_ladder = 0.1, 0.01\n"
                            "experiment.eps_reference = 0.01\n"));
  CHECK_THROWS(parse_config("experiment.kind = hoelder\nexperiment.hoelder_lags = 0.001\n"));
  CHECK_THROWS(parse_config("experiment.moment_orders = 3\n"));
  CHECK_THROWS_AS(load_config("/nonexistent/slogs.cfg"), ConfigError);
}

TEST_CASE("shipped configs parse") {
  for (const auto& entry : fs::directory_iterator(SLOGS_CONFIG_DIR)) {
    INFO(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
  }
}

TEST_CASE("eps convergence: degenerate cases give zero error") {
  auto s = small_spec();
  s.kind = ExperimentKind::EpsConvergence;
  s.eps_ladder = {1e-3};
  s.eps_reference = 1e-3;
  auto r = run_eps_convergence(s);
  CHECK(r.valid);
  CHECK(r.tables[0].rows[0][1] == "0");

  s.eq.lambda = 0.0;
  s.eps_ladder = {1e-1, 1e-2, 1e-3};
  s.eps_reference = 1e-5;
  r = run_eps_convergence(s);
  for (const auto& row : r.tables[0].rows) CHECK(row[1] == "0");
  CHECK(r.completed + r.excluded == s.n_samples);
  // Every sample reports the hash of the increments both coupled paths consumed.
  for (const auto& smp : r.samples) CHECK(smp.noise_hash != 14695981039346656037ull);
}

TEST_CASE("eps convergence: errors shrink with eps on a small problem") {
  auto s = small_spec();
  s.eps_ladder = {1e-1, 1e-2, 1e-3};
  s.eps_reference = 1e-5;
  const auto r = run_eps_convergence(s);
  REQUIRE(r.valid);
  const auto* f = r.find_fit("eps_rate");
  REQUIRE(f != nullptr);
  CHECK(f->fit.slope > 0.0);
  CHECK(f->ci_low <= f->fit.slope);
  CHECK(f->ci_high >= f->fit.slope);
}

TEST_CASE("exclusion accounting") {
  auto s = small_spec();
  s.eps_ladder = {1e-1, 1e-2};
  s.eps_reference = 1e-3;
  s.solver.blowup_threshold = 1e-6;
  const auto r = run_eps_convergence(s);
  CHECK(r.excluded == s.n_samples);
  CHECK(r.completed == 0);
  CHECK_FALSE(r.valid);
  for (const auto& smp : r.samples) CHECK(smp.status == PathStatus::BlowUp);
}

TEST_CASE("hoelder: lag 0 and the deterministic contrast case") {
  const Grid g = slogs::test::torus1(16);
  std::vector<ComplexField> snaps{ComplexField::constant(g, 1.0), ComplexField::constant(g, 2.0)};
  CHECK(mean_increment_moment(snaps, {0.0, 0.1}, 0.0) == 0.0);
  CHECK(mean_increment_moment(snaps, {0.0, 0.1}, 0.1) == doctest::Approx(g.volume()));
  CHECK_THROWS_AS(mean_increment_moment(snaps, {0.0, 0.1}, 0.05), ParameterError);

  auto s = small_spec();
  s.kind = ExperimentKind::TemporalHoelder;
  s.eq.lambda = 0.0;
  s.noise.spectrum.amplitude = 0.0;
  s.solver.dt = 5e-4;
  s.solver.t_end = 0.2;
  s.solver.observe_stride = 10;
  s.hoelder_lags = {0.005, 0.01, 0.02, 0.04};
  s.n_samples = 2;
  const auto r = run_hoelder(s);
  const auto* f = r.find_fit("hoelder_exponent");
  REQUIRE(f != nullptr);
  CHECK(f->fit.slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("moment sweep: quiet linear flow has flat columns") {
  auto s = small_spec();
  s.eq.lambda = 0.0;
  s.noise.spectrum.amplitude = 0.0;
  s.eps_ladder = {1e-2, 1e-3, 1e-4};
  s.n_samples = 2;
  const auto r = run_moment_sweep(s);
  CHECK(r.valid);
  for (const auto& f : r.fits) {
    INFO(f.name);
    CHECK(std::abs(f.fit.slope) < 1e-10);
  }
  CHECK(r.find_check("h1_p2.band")->passed);
}

TEST_CASE("mass drift and inequality check records") {
  auto s = small_spec();
  s.n_samples = 2;
  s.solver.t_end = 0.02;
  const auto r = run_mass_drift(s);
  CHECK(r.valid);
  const auto* c = r.find_check("mass_conservation:real/splitstep");
  REQUIRE(c != nullptr);
  CHECK(c->passed);
  CHECK(r.tables[0].rows.size() == 8);

  s.check_pairs = 2000;
  s.check_fields = 50;
  const auto q = run_inequality_check(s);
  CHECK(q.completed + q.excluded == s.n_samples);
  for (const auto& chk : q.checks) {
    INFO(chk.name, " ", chk.detail);
    CHECK(chk.passed);
  }
}

TEST_CASE("outputs are byte-identical across worker counts") {
  auto s = small_spec();
  s.n_samples = 5;
  const auto a = temp_dir("w1");
  const auto b = temp_dir("w4");
  write_outputs(run_single(s, {1, {}}), a);
  write_outputs(run_single(s, {4, {}}), b);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    ++compared;
  }
  CHECK(compared == 7);  // summary, final, five series
  CHECK(fs::exists(a / "manifest.json"));
  const std::string manifest = slurp(a / "manifest.json");
  CHECK(manifest.find("\"noise.seed\": \"9\"") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("parallel_map keeps index order and rethrows") {
  const auto v = parallel_map<int>(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_map<int>(10, 3,
                                    [](std::size_t i) -> int {
                                      if (i == 7) throw std::runtime_error("boom");
                                      return 0;
                                    }),
                  std::runtime_error);
}

TEST_CASE("selftest oracles pass") {
  const auto r = run_selftest();
  for (const auto& c : r.checks) {
    INFO(c.name, " = ", c.value);
    CHECK(c.passed);
  }
  CHECK(r.valid);
}
