#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "slogs/field.hpp"
#include "slogs/noise.hpp"
#include "slogs/regularization.hpp"
#include "slogs/solver.hpp"

namespace slogs {

enum class ExperimentKind { EpsConvergence, TemporalHoelder, MomentSweep, MassDrift, InequalityCheck, SingleRun };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct GridSpec {
  int dim = 1;
  double extent = 2.0 * 3.141592653589793;
  std::size_t points = 256;
  Boundary boundary = Boundary::PeriodicTorus;

  Grid make() const { return Grid(dim, extent, points, boundary); }
};

/// Initial datum u0, deterministic and shared by every sample.
///   gaussian:  A exp(-|x - x0|^2 / (2 w^2)) exp(i k x)
///   gausson:   A exp(-(lambda/2) |x|^2)
///   constant:  A
///   sine:      A sin(m x) (times sin(m y) in 2-D)
///   plane:     A exp(i m x)
///   sech:      A sech(|x - x0| / w) exp(i k x)
struct InitialCondition {
  std::string kind = "gaussian";
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double momentum = 0.0;
  double mode = 1.0;

  ComplexField make(const Grid& grid, const EquationSpec& eq) const;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::SingleRun;
  GridSpec grid;
  EquationSpec eq;
  NoiseSpec noise;
  SolverConfig solver;
  InitialCondition initial;

  /// Strictly decreasing, all entries in (0, 1) and above eps_reference.
  std::vector<double> eps_ladder;
  double eps_reference = 1e-6;
  std::size_t n_samples = 1;
  std::vector<int> moment_orders{2};
  std::vector<double> hoelder_lags;
  double alpha = 1.0;
  /// Largest tolerated fraction of excluded (blown-up) samples.
  double max_exclusion = 0.05;
  std::size_t check_pairs = 100000;
  std::size_t check_fields = 10000;
  std::filesystem::path output_dir = "out";

  /// The resolved key=value map, every known key included.
  std::map<std::string, std::string> resolved;

  void validate() const;
};

/// Parses flat `section.key = value` text. '#' starts a comment; unknown keys,
/// duplicate keys and malformed values throw ConfigError.
ExperimentSpec parse_config(const std::string& text);
ExperimentSpec load_config(const std::filesystem::path& path);

/// Rebuilds the resolved map after programmatic edits (e.g. a seed override).
void refresh_resolved(ExperimentSpec& spec);

/// Every accepted key with its default value.
const std::map<std::string, std::string>& config_defaults();

}  // namespace slogs
