#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "slogs/config.hpp"
#include "slogs/errors.hpp"
#include "slogs/experiments.hpp"

namespace {

enum Exit { kOk = 0, kBadConfig = 1, kInvalid = 2, kInternal = 3 };

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned workers = slogs::default_workers();
  bool quiet = false;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
  auto* opt = sub->add_option("--config", c.config, "experiment config file");
  if (needs_config) opt->required();
  sub->add_option("--out", c.out, "output directory (overrides experiment.output_dir)");
  sub->add_option("--seed", c.seed, "master seed (overrides noise.seed)");
  sub->add_option("--workers", c.workers, "worker threads (default $SLOGS_WORKERS or 1)")->check(CLI::PositiveNumber);
  sub->add_flag("--quiet", c.quiet, "no progress output");
}

int report(const slogs::RunRecord& rec, const std::filesystem::path& out, bool quiet) {
  slogs::write_outputs(rec, out);
  if (!quiet) {
    for (const auto& c : rec.checks)
      if (c.name != "skipped") std::cerr << (c.passed ? "  ok    " : "  FAIL  ") << c.name << " = " << c.value << "\n";
    std::cerr << "wrote " << out.string() << "\n";
  }
  if (!rec.valid) {
    std::cerr << "experiment invalid: " << rec.invalid_reason << "\n";
    return kInvalid;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for the regularized stochastic logarithmic Schrodinger equation"};
  app.require_subcommand(1);
  Common common;
  const std::pair<const char*, slogs::ExperimentKind> kinds[] = {
      {"simulate", slogs::ExperimentKind::SingleRun},
      {"converge", slogs::ExperimentKind::EpsConvergence},
      {"hoelder", slogs::ExperimentKind::TemporalHoelder},
      {"momentsweep", slogs::ExperimentKind::MomentSweep},
      {"massdrift", slogs::ExperimentKind::MassDrift},
      {"check", slogs::ExperimentKind::InequalityCheck},
  };
  for (const auto& [name, kind] : kinds) add_common(app.add_subcommand(name, "run the " + std::string(name) + " experiment"), common, true);
  auto* selftest = app.add_subcommand("selftest", "deterministic oracle suite");
  add_common(selftest, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? kOk : kBadConfig;
  }

  slogs::RunOptions opts;
  opts.workers = common.workers;
  if (!common.quiet) opts.log = [](const std::string& m) { std::cerr << m << "\n"; };

  try {
    if (selftest->parsed()) {
      const auto rec = slogs::run_selftest(opts);
      return report(rec, common.out.empty() ? "out/selftest" : common.out, common.quiet);
    }
    slogs::ExperimentSpec spec;
    try {
      spec = slogs::load_config(common.config);
      for (const auto& [name, kind] : kinds)
        if (app.got_subcommand(name)) spec.kind = kind;
      if (common.seed) spec.noise.master_seed = *common.seed;
      if (!common.out.empty()) spec.output_dir = common.out;
      slogs::refresh_resolved(spec);
      spec.validate();
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kBadConfig;
    }
    const auto rec = slogs::run_experiment(spec, opts);
    return report(rec, spec.output_dir, common.quiet);
  } catch (const slogs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const slogs::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
