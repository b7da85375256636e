#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slogs/field.hpp"
#include "slogs/rng.hpp"

namespace slogs {

/// Case 1: complex W, additive. Case 2: complex W, i g(|u|^2) u.
/// Case 3: real W, i g(|u|^2) u (pathwise mass preserving).
enum class NoiseCase { AdditiveComplex, MultiplicativeComplex, MultiplicativeReal };

std::string to_string(NoiseCase c);
NoiseCase noise_case_from_string(const std::string& s);

/// g in {1, 1/(c+x), x/(c+x), x/(c+x^2), log((c+x)/(1+cx)), log(c+x)}.
enum class GFamily { One, InverseShift, Rational, RationalSq, LogRationalG, SuperLog };

std::string to_string(GFamily f);
GFamily g_family_from_string(const std::string& s);

struct GKind {
  GFamily family = GFamily::One;
  double c = 1.0;

  bool bounded() const { return family != GFamily::SuperLog; }
  void validate() const;
};

double g_eval(double x, const GKind& g);
double g_prime(double x, const GKind& g);
double g_second(double x, const GKind& g);

/// Numerically evaluated suprema over x >= 0 and the constants they imply.
struct GConstants {
  double sup_abs_g = 0.0;
  double oscillation = 0.0;     // sup g - inf g
  double sup_gprime_x = 0.0;    // sup |g'(x) x|
  double sup_gsecond_x2 = 0.0;  // sup |g''(x) x^2|
  /// sup|g| + sup|g' x| (real noise) resp. + sup|g'' x^2| (complex noise).
  double growth_real = 0.0;
  double growth_complex = 0.0;
  /// Constant in (x+y)(g(x^2) - g(y^2)) <= C |x - y|: max(3 osc, 6 ln2 sup|g' x|).
  double con_g = 0.0;
  /// Lipschitz constant of z -> h(|z|^2) z, h(s) = g'(s) g(s) s: sup |h| + 2 |h'(s) s|.
  double con_g1 = 0.0;
};

/// Evaluated on a logarithmic grid over [1e-12, 1e12] plus x = 0.
GConstants g_constants(const GKind& g);

/// q_k = amplitude (1 + |k|^2)^(-decay) for modes with |n_axis| <= mode_cutoff.
struct Spectrum {
  double decay = 2.0;
  double amplitude = 0.0;
  int mode_cutoff = 8;
};

double spectrum_q(const Spectrum& s, double k_sq);

struct NoiseSpec {
  NoiseCase noise_case = NoiseCase::MultiplicativeReal;
  Spectrum spectrum;
  GKind g;
  std::uint64_t master_seed = 0;

  void validate(const Grid& grid) const;
};

/// (sum over the omitted modes) / (full sum) of q_k (1 + |k|^2), i.e. the
/// part of the H^1 trace the cutoff throws away. 1 when the series diverges.
double spectrum_tail_fraction(const Spectrum& s, const Grid& grid);

/**
 * Q^{1/2} e_j for an orthonormal basis e_j, one real Brownian motion per
 * entry, so W = sum_j phi_j beta_j.
 *
 * Torus: Fourier modes exp(i k (x - x_0)); for real noise the cos/sin pairs.
 * Dirichlet: tensor products of sqrt(2/L) sin(m pi (x + L/2) / L).
 * Complex cases pair every real-normalised mode e with i e, each carrying q/2,
 * so an increment is sum_k sqrt(q_k dt) xi_k e_k with E|xi_k|^2 = 1.
 */
class NoiseModel {
 public:
  NoiseModel(const Grid& grid, NoiseSpec spec);

  const Grid& grid() const { return grid_; }
  const NoiseSpec& spec() const { return spec_; }
  std::size_t mode_count() const { return basis_.size(); }
  const std::vector<ComplexField>& basis() const { return basis_; }

  /// sum_j |phi_j(x)|^2 per node.
  const std::vector<double>& sum_abs_sq() const { return sum_abs_sq_; }
  /// sum_j Im(phi_j(x)) phi_j(x) per node.
  const std::vector<Complex>& sum_im_phi() const { return sum_im_phi_; }
  /// Tr Q = sum_j ||phi_j||^2.
  double trace() const { return trace_; }

  /// Brownian increments over [step dt, (step+1) dt] as the sum of `substeps`
  /// finer increments, each keyed by (seed, sample, step * substeps + s).
  std::vector<double> increment_coefficients(double dt, std::uint32_t sample_index,
                                             std::uint64_t step_index, int substeps = 1) const;
  /// sum_j coeff_j phi_j.
  ComplexField synthesize(std::span<const double> coefficients) const;

 private:
  Grid grid_;
  NoiseSpec spec_;
  std::vector<ComplexField> basis_;
  std::vector<double> sum_abs_sq_;
  std::vector<Complex> sum_im_phi_;
  double trace_ = 0.0;
};

ComplexField sample_increment(const NoiseModel& model, double dt, std::uint32_t sample_index,
                              std::uint64_t step_index, int substeps = 1);

struct ItoCorrectionTerms {
  ComplexField modulus;  // -1/2 sum|phi|^2 g^2 u
  ComplexField phase;    // -i g g' |u|^2 u sum Im(phi) phi
};

ItoCorrectionTerms ito_correction_terms(const ComplexField& u, const NoiseModel& model);
/// Drift turning the i g(|u|^2) u * dW integral into Ito form; zero for additive noise.
ComplexField ito_correction(const ComplexField& u, const NoiseModel& model);

/// Additive: dW. Multiplicative: i g(|u|^2) u dW pointwise.
ComplexField diffusion_apply(const ComplexField& u, const NoiseModel& model, const ComplexField& dw);

}  // namespace slogs
