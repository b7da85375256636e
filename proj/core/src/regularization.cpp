#include "slogs/regularization.hpp"

#include <cmath>
#include <limits>

#include "slogs/errors.hpp"
#include "slogs/spectral.hpp"

namespace slogs {

std::string to_string(RegFamily f) {
  switch (f) {
    case RegFamily::LogShift: return "logshift";
    case RegFamily::LogRational: return "lograt";
    case RegFamily::Exact: return "exact";
  }
  return "?";
}

RegFamily reg_family_from_string(const std::string& s) {
  if (s == "logshift") return RegFamily::LogShift;
  if (s == "lograt" || s == "logrational") return RegFamily::LogRational;
  if (s == "exact") return RegFamily::Exact;
  throw ConfigError("unknown regularisation '" + s + "' (expected logshift|lograt|exact)");
}

void RegKind::validate() const {
  if (family == RegFamily::Exact) {
    if (epsilon != 0.0) throw ParameterError("the exact logarithm takes epsilon = 0");
    return;
  }
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("regularisation epsilon must lie in (0, 1)");
}

void EquationSpec::validate() const {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw ParameterError("lambda must be finite and nonzero");
  reg.validate();
}

namespace {

void require_nonnegative(double rho) {
  if (!(rho >= 0.0)) throw DomainError("f_eps is defined for rho >= 0");
}

}  // namespace

double f_eps(double rho, const RegKind& kind) {
  require_nonnegative(rho);
  const double eps = kind.epsilon;
  switch (kind.family) {
    case RegFamily::LogShift: return std::log(rho + eps);
    case RegFamily::LogRational: return std::log((rho + eps) / (1.0 + eps * rho));
    case RegFamily::Exact:
      return rho == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(rho);
  }
  return 0.0;
}

double f_eps_prime(double rho, const RegKind& kind) {
  require_nonnegative(rho);
  const double eps = kind.epsilon;
  switch (kind.family) {
    case RegFamily::LogShift: return 1.0 / (rho + eps);
    case RegFamily::LogRational: return (1.0 - eps * eps) / ((rho + eps) * (1.0 + eps * rho));
    case RegFamily::Exact:
      return rho == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / rho;
  }
  return 0.0;
}

double entropy_density(double rho, const RegKind& kind) {
  require_nonnegative(rho);
  if (rho == 0.0) return 0.0;
  const double eps = kind.epsilon;
  switch (kind.family) {
    // (eps+rho) log(eps+rho) - rho - eps log eps, rearranged around log1p(rho/eps).
    case RegFamily::LogShift:
      return rho * std::log(eps) + (eps + rho) * std::log1p(rho / eps) - rho;
    // rho f + eps log(rho+eps) - log(eps rho + 1)/eps - eps log eps.
    case RegFamily::LogRational:
      return rho * f_eps(rho, kind) + eps * std::log1p(rho / eps) - std::log1p(eps * rho) / eps;
    case RegFamily::Exact: return rho * std::log(rho) - rho;
  }
  return 0.0;
}

double entropy(const ComplexField& u, const RegKind& kind) {
  double sum = 0.0;
  for (const auto& z : u.values()) sum += entropy_density(std::norm(z), kind);
  return u.grid().cell_volume() * sum;
}

double modified_energy(const ComplexField& u, const EquationSpec& spec) {
  return 0.5 * gradient_norm_sq(u) - 0.5 * spec.lambda * entropy(u, spec.reg);
}

double modified_energy_plus(const ComplexField& u, const EquationSpec& spec) {
  return 0.5 * gradient_norm_sq(u) + 0.5 * spec.lambda * entropy(u, spec.reg);
}

ComplexField drift_nonlinear(const ComplexField& u, const EquationSpec& spec) {
  ComplexField out(u.grid());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double rho = std::norm(u[j]);
    if (rho == 0.0) continue;
    out[j] = Complex(0.0, spec.lambda * f_eps(rho, spec.reg)) * u[j];
  }
  return out;
}

}  // namespace slogs
