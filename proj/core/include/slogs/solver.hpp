#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slogs/field.hpp"
#include "slogs/noise.hpp"
#include "slogs/observables.hpp"
#include "slogs/regularization.hpp"
#include "slogs/spectral.hpp"

namespace slogs {

/// ExpEuler discretises the Ito form with explicit correction drifts;
/// SplitStep and StratonovichMidpoint discretise the Stratonovich form.
enum class Scheme { ExpEuler, SplitStep, StratonovichMidpoint };
enum class TruncationNorm { H1, H2 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);
std::string to_string(TruncationNorm n);
TruncationNorm truncation_norm_from_string(const std::string& s);

struct SolverConfig {
  Scheme scheme = Scheme::SplitStep;
  double dt = 1e-3;
  double t_end = 1.0;
  /// Cutoff radius R of the truncated drift; absent means no truncation.
  std::optional<double> truncation_radius;
  /// Upper end of the theta_R == 1 plateau; defaults to R.
  std::optional<double> truncation_plateau;
  TruncationNorm truncation_norm = TruncationNorm::H2;
  double midpoint_tol = 1e-12;
  int midpoint_max_iter = 50;
  bool dealias = true;
  /// Observers fire every this many steps, plus at t = 0 and t_end.
  int observe_stride = 10;
  double blowup_threshold = 1e12;
  /// Each step's Brownian increment is the sum of this many finer ones.
  int noise_substeps = 1;
  /// Debug switch: drop the free Schrodinger flow from every scheme.
  bool disable_laplacian = false;

  void validate() const;
  /// t_end / dt, which must be an integer (to 1e-9 relative).
  std::uint64_t step_count() const;
};

enum class PathStatus { Running, Finished, BlowUp, NoConvergence };
std::string to_string(PathStatus s);

struct PathState {
  double t = 0.0;
  ComplexField u;
  std::uint64_t step_index = 0;
  std::uint32_t sample_index = 0;
  PathStatus status = PathStatus::Running;
  /// Running supremum of the truncation norm over the path so far.
  double norm_running_max = 0.0;
  /// FNV-1a hash over every Brownian coefficient consumed.
  std::uint64_t noise_hash = 14695981039346656037ull;
  int last_midpoint_iterations = 0;
};

PathState initial_state(ComplexField u0, std::uint32_t sample_index, const SolverConfig& cfg);

/// theta_R(m): 1 up to the plateau, 0 from 2R, smoothstep in between.
double truncation_factor(double running_max, const SolverConfig& cfg);
double truncation_factor(const PathState& state, const SolverConfig& cfg);

/// Caches the group operators for one (grid, dt) pair and advances paths.
/// Holds a reference to the noise model, which must outlive the stepper.
class Stepper {
 public:
  Stepper(const EquationSpec& eq, const NoiseModel& noise, const SolverConfig& cfg);

  PathState step(const PathState& state) const;
  PathState step_exp_euler(const PathState& state) const;
  PathState step_splitstep(const PathState& state) const;
  PathState step_midpoint(const PathState& state) const;

 private:
  std::vector<double> draw(const PathState& state, std::uint64_t& hash) const;
  void finish_step(PathState& next) const;
  void propagate(ComplexField& u, const SemigroupOperator& op) const;
  ComplexField maybe_dealias(ComplexField f) const;

  EquationSpec eq_;
  const NoiseModel& noise_;
  SolverConfig cfg_;
  SemigroupOperator full_;
  SemigroupOperator half_;
  SemigroupOperator back_half_;
};

PathState step_exp_euler(const PathState& state, const EquationSpec& eq, const NoiseModel& noise,
                         const SolverConfig& cfg);
PathState step_splitstep(const PathState& state, const EquationSpec& eq, const NoiseModel& noise,
                         const SolverConfig& cfg);
PathState step_midpoint(const PathState& state, const EquationSpec& eq, const NoiseModel& noise,
                        const SolverConfig& cfg);

/// Called at every sampled time with the current field.
using SnapshotFn = std::function<void(double t, std::uint64_t step, const ComplexField& u)>;

struct EvolveOptions {
  std::vector<Observer> observers;
  SnapshotFn on_sample;
  std::uint32_t sample_index = 0;
};

struct PathRecord {
  PathState final_state;
  ObservableSeries series;
};

/// Runs the configured scheme from t = 0 to t_end. Never throws on numeric
/// failure: blow-up or a stalled midpoint solve ends the path with that status.
PathRecord evolve(const ComplexField& u0, const EquationSpec& eq, const NoiseModel& noise,
                  const SolverConfig& cfg, const EvolveOptions& options = {});

}  // namespace slogs
