#pragma once

#include <string>

#include "slogs/field.hpp"

namespace slogs {

/// LogShift: log(rho + eps). LogRational: log((rho + eps) / (1 + eps rho)).
/// Exact is the unregularised log(rho), admitted only with eps = 0 as an oracle.
enum class RegFamily { LogShift, LogRational, Exact };

std::string to_string(RegFamily f);
RegFamily reg_family_from_string(const std::string& s);

struct RegKind {
  RegFamily family = RegFamily::LogShift;
  double epsilon = 1e-3;

  static RegKind log_shift(double eps) { return {RegFamily::LogShift, eps}; }
  static RegKind log_rational(double eps) { return {RegFamily::LogRational, eps}; }
  static RegKind exact() { return {RegFamily::Exact, 0.0}; }

  /// eps in (0, 1) for the regularised families, eps == 0 for Exact.
  void validate() const;
};

/// Nonlinearity strength and regularisation for the regularised equation.
struct EquationSpec {
  double lambda = 1.0;
  RegKind reg;

  void validate() const;
};

/// f_eps(rho). Exact with rho == 0 returns -infinity.
double f_eps(double rho, const RegKind& kind);
double f_eps_prime(double rho, const RegKind& kind);

/// Antiderivative int_0^rho f_eps(s) ds, exactly 0 at rho = 0.
double entropy_density(double rho, const RegKind& kind);

/// F_eps(|u|^2): quadrature of entropy_density over the grid.
double entropy(const ComplexField& u, const RegKind& kind);

/// H_eps(u) = K(u) - (lambda/2) F_eps(|u|^2) with K = ||grad u||^2 / 2.
double modified_energy(const ComplexField& u, const EquationSpec& spec);

/// The alternate sign convention K(u) + (lambda/2) F_eps(|u|^2).
double modified_energy_plus(const ComplexField& u, const EquationSpec& spec);

/// Pointwise i lambda f_eps(|u|^2) u.
ComplexField drift_nonlinear(const ComplexField& u, const EquationSpec& spec);

}  // namespace slogs
