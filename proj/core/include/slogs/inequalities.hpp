#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slogs/grid.hpp"
#include "slogs/noise.hpp"
#include "slogs/regularization.hpp"

namespace slogs {

/// Outcome of one randomised inequality audit.
struct InequalityReport {
  std::string name;
  double parameter = 0.0;  // epsilon, c, alpha ... whichever the suite varies
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Largest lhs / rhs seen; <= 1 means the bound held everywhere.
  double worst_ratio = 0.0;
};

/// Random complex pairs with |x| <= 10: independent, small-modulus and near-coincident draws.
struct ComplexPair {
  Complex x1;
  Complex x2;
};
std::vector<ComplexPair> random_complex_pairs(std::size_t n, std::uint64_t seed);

/// |Im[(f(x1) x1 - f(x2) x2)(conj(x1) - conj(x2))]| <= 4 |x1 - x2|^2 for f = log(|x|^2 + eps).
InequalityReport check_log_shift_one_sided(double eps, const std::vector<ComplexPair>& pairs);

/// The three log-rational bounds: |f| <= |log eps|, the |x|-derivative bound,
/// and the one-sided bound with constant 4(1 - eps^2).
std::vector<InequalityReport> check_log_rational_bounds(double eps,
                                                        const std::vector<ComplexPair>& pairs);

/// (x+y)(g(x^2) - g(y^2)) <= C_g |x - y| and, for complex noise, the
/// one-sided bound on g'(s) g(s) s z. Bounded families only.
std::vector<InequalityReport> check_g_conditions(const GKind& g, std::size_t n, std::uint64_t seed);

/// sup_rho (eps_m - eps_n) sqrt(rho) / (eps_m + rho) <= (eps_m - eps_n) / (2 sqrt(eps_m)) <= sqrt(eps_m)/2.
InequalityReport check_eps_difference(double eps_m, double eps_n);

/// Random Gaussian-envelope fields against interpolation_constant(d, alpha, eta).
InequalityReport check_weighted_interpolation(const Grid& grid, double alpha, double eta,
                                              std::size_t n_fields, std::uint64_t seed);

/// Random superposition of 1-3 modulated Gaussian packets well inside the box.
ComplexField random_gaussian_envelope(const Grid& grid, CounterRng& rng);

}  // namespace slogs
