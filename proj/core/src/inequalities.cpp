#include "slogs/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slogs/errors.hpp"
#include "slogs/observables.hpp"

namespace slogs {

namespace {

using LComplex = std::complex<long double>;

constexpr double kRelSlack = 1e-9;

struct Tally {
  InequalityReport r;
  void add(double lhs, double rhs) {
    ++r.samples;
    if (rhs > 0.0) r.worst_ratio = std::max(r.worst_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + kRelSlack) + 1e-300) ++r.violations;
  }
};

Complex random_in_disk(CounterRng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  return std::polar(r, 2.0 * std::numbers::pi * rng.uniform());
}

/// Im[(f(|x1|^2) x1 - f(|x2|^2) x2)(conj(x1) - conj(x2))] in extended precision.
template <class F>
long double one_sided_lhs(const ComplexPair& p, F&& f) {
  const LComplex x1(p.x1.real(), p.x1.imag());
  const LComplex x2(p.x2.real(), p.x2.imag());
  const LComplex q = (f(std::norm(x1)) * x1 - f(std::norm(x2)) * x2) * (std::conj(x1) - std::conj(x2));
  return std::abs(q.imag());
}

}  // namespace

std::vector<ComplexPair> random_complex_pairs(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 1);
  std::vector<ComplexPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ComplexPair p;
    switch (i % 3) {
      case 0:
        p = {random_in_disk(rng, 10.0), random_in_disk(rng, 10.0)};
        break;
      case 1:
        p = {std::polar(rng.log_uniform(1e-6, 10.0), 2.0 * std::numbers::pi * rng.uniform()),
             std::polar(rng.log_uniform(1e-6, 10.0), 2.0 * std::numbers::pi * rng.uniform())};
        break;
      default: {
        const Complex x1 = std::polar(rng.log_uniform(1e-4, 10.0), 2.0 * std::numbers::pi * rng.uniform());
        const Complex delta = std::polar(rng.log_uniform(1e-6, 1.0), 2.0 * std::numbers::pi * rng.uniform());
        p = {x1, x1 + delta};
        break;
      }
    }
    out.push_back(p);
  }
  return out;
}

InequalityReport check_log_shift_one_sided(double eps, const std::vector<ComplexPair>& pairs) {
  Tally t;
  t.r.name = "logshift_one_sided";
  t.r.parameter = eps;
  const long double e = eps;
  for (const auto& p : pairs) {
    const double lhs = static_cast<double>(
        one_sided_lhs(p, [e](long double rho) { return std::log(rho + e); }));
    t.add(lhs, 4.0 * std::norm(p.x1 - p.x2));
  }
  return t.r;
}

std::vector<InequalityReport> check_log_rational_bounds(double eps,
                                                        const std::vector<ComplexPair>& pairs) {
  const RegKind kind = RegKind::log_rational(eps);
  const double bound = std::abs(std::log(eps));

  Tally bounded;
  bounded.r.name = "lograt_bounded";
  bounded.r.parameter = eps;
  for (const auto& p : pairs)
    for (const Complex x : {p.x1, p.x2}) bounded.add(std::abs(f_eps(std::norm(x), kind)), bound);
  for (int i = -300; i <= 300; ++i) {
    const double rho = std::pow(10.0, i);
    bounded.add(std::abs(f_eps(rho, kind)), bound);
  }
  bounded.add(std::abs(f_eps(0.0, kind)), bound);

  // |d/d|x| f(|x|^2)| by a central difference in |x|, independent of f_eps_prime.
  Tally derivative;
  derivative.r.name = "lograt_derivative";
  derivative.r.parameter = eps;
  auto deriv_bound = [eps](double r) {
    return 2.0 * (1.0 - eps * eps) * r / ((eps + r * r) * (1.0 + eps * r * r));
  };
  for (const auto& p : pairs) {
    for (const Complex x : {p.x1, p.x2}) {
      const double r = std::abs(x);
      if (r < 1e-3) continue;
      const double h = 1e-6 * r;
      // f(a) - f(b) written through log1p of the increment; a - b = 4 r h exactly up to rounding.
      const double a = (r + h) * (r + h), b = (r - h) * (r - h), diff = a - b;
      const double fd = (std::log1p(diff / (b + eps)) - std::log1p(eps * diff / (1.0 + eps * b))) / (2.0 * h);
      derivative.add(std::abs(fd), deriv_bound(r) * (1.0 + 1e-8));
    }
  }

  Tally one_sided;
  one_sided.r.name = "lograt_one_sided";
  one_sided.r.parameter = eps;
  const long double e = eps;
  for (const auto& p : pairs) {
    const double lhs = static_cast<double>(one_sided_lhs(
        p, [e](long double rho) { return std::log(rho + e) - std::log1p(e * rho); }));
    one_sided.add(lhs, 4.0 * (1.0 - eps * eps) * std::norm(p.x1 - p.x2));
  }
  return {bounded.r, derivative.r, one_sided.r};
}

std::vector<InequalityReport> check_g_conditions(const GKind& g, std::size_t n, std::uint64_t seed) {
  if (!g.bounded()) throw ConfigError("g-catalogue conditions apply to bounded families only");
  const GConstants k = g_constants(g);
  CounterRng rng(seed, 2);

  Tally cong;
  cong.r.name = "con_g:" + to_string(g.family);
  cong.r.parameter = g.c;
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0, y = 0.0;
    switch (i % 3) {
      case 0: x = rng.uniform(0.0, 10.0); y = rng.uniform(0.0, 10.0); break;
      case 1: x = rng.log_uniform(1e-4, 1e2); y = rng.log_uniform(1e-4, 1e2); break;
      default:
        x = rng.log_uniform(1e-3, 1e2);
        y = x * (1.0 + rng.uniform(-1.0, 1.0) * rng.log_uniform(1e-6, 1.0));
        break;
    }
    const double lhs = std::abs((x + y) * (g_eval(x * x, g) - g_eval(y * y, g)));
    cong.add(lhs, k.con_g * std::abs(x - y));
  }

  Tally cong1;
  cong1.r.name = "con_g1:" + to_string(g.family);
  cong1.r.parameter = g.c;
  auto h_times = [&](Complex z) {
    const double s = std::norm(z);
    return g_prime(s, g) * g_eval(s, g) * s * z;
  };
  for (std::size_t i = 0; i < n; ++i) {
    Complex x, y;
    if (i % 2 == 0) {
      x = random_in_disk(rng, 10.0);
      y = random_in_disk(rng, 10.0);
    } else {
      x = std::polar(rng.log_uniform(1e-3, 10.0), 2.0 * std::numbers::pi * rng.uniform());
      y = x + std::polar(rng.log_uniform(1e-6, 1.0), 2.0 * std::numbers::pi * rng.uniform());
    }
    const double lhs = std::abs((std::conj(y) - std::conj(x)) * (h_times(x) - h_times(y)));
    cong1.add(lhs, k.con_g1 * std::norm(x - y));
  }
  return {cong.r, cong1.r};
}

InequalityReport check_eps_difference(double eps_m, double eps_n) {
  if (!(eps_m > eps_n && eps_n > 0.0)) throw ParameterError("need eps_m > eps_n > 0");
  Tally t;
  t.r.name = "eps_difference";
  t.r.parameter = eps_m;
  const double first = (eps_m - eps_n) / (2.0 * std::sqrt(eps_m));
  double sup = 0.0;
  for (int i = -1200; i <= 1200; ++i) {
    const double rho = std::pow(10.0, i / 100.0);
    sup = std::max(sup, (eps_m - eps_n) * std::sqrt(rho) / (eps_m + rho));
  }
  t.add(sup, first);
  t.add(first, 0.5 * std::sqrt(eps_m));
  return t.r;
}

ComplexField random_gaussian_envelope(const Grid& grid, CounterRng& rng) {
  const double reach = 0.2 * grid.extent();
  const int packets = 1 + static_cast<int>(rng.uniform() * 3.0);
  struct Packet {
    double amp, cx, cy, width, kx, ky, phase;
  };
  std::vector<Packet> ps;
  for (int i = 0; i < packets; ++i)
    ps.push_back({rng.log_uniform(0.1, 10.0), rng.uniform(-reach, reach), rng.uniform(-reach, reach),
                  rng.log_uniform(0.3, 0.1 * grid.extent()), rng.uniform(-3.0, 3.0),
                  rng.uniform(-3.0, 3.0), rng.uniform(0.0, 2.0 * std::numbers::pi)});
  const bool two_d = grid.dim() == 2;
  return ComplexField::from_function(grid, [&](double x, double y) {
    Complex v{};
    for (const auto& p : ps) {
      const double dx = x - p.cx;
      const double dy = two_d ? y - p.cy : 0.0;
      const double env = p.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * p.width * p.width));
      v += std::polar(env, p.kx * x + (two_d ? p.ky * y : 0.0) + p.phase);
    }
    return v;
  });
}

InequalityReport check_weighted_interpolation(const Grid& grid, double alpha, double eta,
                                              std::size_t n_fields, std::uint64_t seed) {
  const double c = interpolation_constant(grid.dim(), alpha, eta);
  CounterRng rng(seed, 3);
  Tally t;
  t.r.name = "weighted_interpolation";
  t.r.parameter = alpha;
  for (std::size_t i = 0; i < n_fields; ++i) {
    const auto field = random_gaussian_envelope(grid, rng);
    const auto chk = interpolation_check(field, alpha, eta);
    t.add(chk.ratio, c);
  }
  return t.r;
}

}  // namespace slogs
