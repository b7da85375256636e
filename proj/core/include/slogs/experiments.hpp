#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "slogs/config.hpp"
#include "slogs/fit.hpp"
#include "slogs/observables.hpp"
#include "slogs/solver.hpp"

namespace slogs {

std::string version_string();

struct SampleRecord {
  std::uint32_t sample = 0;
  PathStatus status = PathStatus::Finished;
  std::uint64_t noise_hash = 0;
  std::string note;
};

/// A CSV-shaped result: first column is the key (time, epsilon, lag or a label).
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct FitReport {
  std::string name;
  SlopeFit fit;
  /// Jackknife over samples; equal to fit.slope_stderr when the fit has no sample structure.
  double slope_stderr = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t points = 0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound_low = 0.0;
  double bound_high = 0.0;
  std::string detail;
};

struct RunRecord {
  ExperimentKind kind = ExperimentKind::SingleRun;
  std::map<std::string, std::string> config;
  std::uint64_t master_seed = 0;
  std::string version;
  std::string started;
  std::string finished;
  unsigned workers = 1;

  std::vector<SampleRecord> samples;
  std::size_t completed = 0;
  std::size_t excluded = 0;
  bool valid = true;
  std::string invalid_reason;

  std::vector<Table> tables;
  std::vector<FitReport> fits;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<CheckResult> checks;
  /// Per-path series, written as series_<name>.csv.
  std::vector<std::pair<std::string, ObservableSeries>> series;

  const CheckResult* find_check(const std::string& name) const;
  const FitReport* find_fit(const std::string& name) const;
  double scalar(const std::string& name) const;
};

struct RunOptions {
  unsigned workers = 1;
  /// Progress lines; silent when empty.
  std::function<void(const std::string&)> log;
};

/// SLOGS_WORKERS if set and positive, else 1.
unsigned default_workers();

/**
 * Runs fn(0..n-1) on up to `workers` threads and returns the results in
 * index order. Exceptions are rethrown for the lowest failing index.
 */
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned workers, const std::function<T(std::size_t)>& fn);

RunRecord run_eps_convergence(const ExperimentSpec& spec, const RunOptions& opts = {});
RunRecord run_hoelder(const ExperimentSpec& spec, const RunOptions& opts = {});
RunRecord run_moment_sweep(const ExperimentSpec& spec, const RunOptions& opts = {});
RunRecord run_mass_drift(const ExperimentSpec& spec, const RunOptions& opts = {});
RunRecord run_inequality_check(const ExperimentSpec& spec, const RunOptions& opts = {});
RunRecord run_single(const ExperimentSpec& spec, const RunOptions& opts = {});
/// Constant-field phase, stationary Gausson and unitarity oracles.
RunRecord run_selftest(const RunOptions& opts = {});

/// Mean of ||u(t+lag) - u(t)||^2 over every sampled pair exactly `lag` apart; 0 for lag = 0.
double mean_increment_moment(const std::vector<ComplexField>& snapshots, const std::vector<double>& times,
                             double lag);

/// Dispatches on spec.kind.
RunRecord run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

/// manifest.json, summary.csv, one CSV per table and per series.
void write_outputs(const RunRecord& record, const std::filesystem::path& dir);

}  // namespace slogs

#include "slogs/detail/parallel.hpp"
