#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "slogs/errors.hpp"
#include "slogs/fft.hpp"
#include "slogs/norms.hpp"
#include "slogs/spectral.hpp"

using namespace slogs;
using slogs::test::kTwoPi;

TEST_CASE("grid validates shape and exposes cell-centred nodes") {
  CHECK_THROWS_AS(Grid(3, 1.0, 16, Boundary::PeriodicTorus), ConfigError);
  CHECK_THROWS_AS(Grid(1, -1.0, 16, Boundary::PeriodicTorus), ConfigError);
  CHECK_THROWS_AS(Grid(1, 1.0, 4, Boundary::PeriodicTorus), ConfigError);
  CHECK_THROWS_AS(Grid(1, 1.0, 24, Boundary::PeriodicTorus), ConfigError);

  const Grid g(2, 3.0, 16, Boundary::HomogeneousDirichlet);
  CHECK(g.cell_volume() == (3.0 / 16) * (3.0 / 16));
  CHECK(g.size() == 256);
  CHECK(g.coordinate(0) == doctest::Approx(-1.5 + 3.0 / 32));
  CHECK(g.coordinate(15) == doctest::Approx(1.5 - 3.0 / 32));
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(g.coordinate(i) >= -1.5);
    CHECK(g.coordinate(i) < 1.5);
  }
  CHECK(boundary_from_string(to_string(Boundary::HomogeneousDirichlet)) == Boundary::HomogeneousDirichlet);
}

TEST_CASE("fft round trip and known transform") {
  Fft fft(16);
  std::vector<Complex> x(16);
  for (std::size_t j = 0; j < 16; ++j) x[j] = std::polar(1.0, kTwoPi * 3.0 * j / 16.0);
  auto y = x;
  fft.forward(y);
  for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(y[k] - (k == 3 ? Complex(16.0) : Complex(0.0))) < 1e-12);
  fft.inverse(y);
  for (std::size_t j = 0; j < 16; ++j) CHECK(std::abs(y[j] - x[j]) < 1e-14);
  CHECK(is_power_of_two(64));
  CHECK_FALSE(is_power_of_two(48));
}

TEST_CASE("inner product examples") {
  const Grid g = slogs::test::torus1(64);
  const auto one = ComplexField::constant(g, 1.0);
  CHECK(inner(one, one) == doctest::Approx(kTwoPi).epsilon(1e-14));

  CounterRng rng(1, 0);
  const auto v = slogs::test::smooth_random(g, rng);
  CHECK(std::abs(inner(v * Complex(0, 1), v)) < 1e-12);

  for (int k = -5; k <= 5; ++k)
    for (int kp = -5; kp <= 5; ++kp) {
      if (k == kp) continue;
      const auto a = ComplexField::from_function(g, [&](double x, double) { return std::polar(1.0, k * x); });
      const auto b = ComplexField::from_function(g, [&](double x, double) { return std::polar(1.0, kp * x); });
      // Re<a, b> alone can vanish by symmetry; check the full complex sum by brute force.
      Complex s{};
      for (std::size_t j = 0; j < g.size(); ++j) s += a[j] * std::conj(b[j]);
      CHECK(std::abs(s) * g.cell_volume() < 1e-12);
      CHECK(std::abs(inner(a, b)) < 1e-12);
    }

  const Grid other = slogs::test::torus1(32);
  CHECK_THROWS_AS(inner(one, ComplexField::constant(other, 1.0)), ConfigError);
}

TEST_CASE("norm examples") {
  const double L = 5.0;
  const Grid g = slogs::test::torus1(64, L);
  const double c = 1.7;
  const auto u = ComplexField::constant(g, c);
  CHECK(norm_l2(u) == doctest::Approx(c * std::sqrt(L)).epsilon(1e-14));
  CHECK(norm_h1(u) == doctest::Approx(c * std::sqrt(L)).epsilon(1e-12));
  CHECK(norm_lp(u, 3.0) == doctest::Approx(c * std::cbrt(L)).epsilon(1e-14));

  const ComplexField zero(g);
  CHECK(norm_l2(zero) == 0.0);
  CHECK(norm_h1(zero) == 0.0);
  CHECK(norm_h2(zero) == 0.0);
  CHECK(norm_lp(zero, 1.5) == 0.0);
  CHECK(norm_l2_alpha(zero, 1.0) == 0.0);

  CHECK_THROWS_AS(norm_lp(u, 0.5), ParameterError);
  CHECK_THROWS_AS(norm_l2_alpha(u, 0.0), ParameterError);
  CHECK_THROWS_AS(norm_l2_alpha(u, 2.5), ParameterError);
}

TEST_CASE("weighted norm of a Gaussian against direct quadrature") {
  const Grid g(1, 40.0, 512, Boundary::PeriodicTorus);
  const auto u = ComplexField::from_function(g, [](double x, double) { return std::exp(-x * x / 2.0); });
  // int (1 + x^2) e^{-x^2} dx = sqrt(pi) (1 + 1/2), by composite Simpson on a fine grid.
  const int n = 200000;
  const double a = -20.0, h = 40.0 / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = a + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * (1.0 + x * x) * std::exp(-x * x);
  }
  s *= h / 3.0;
  CHECK(s == doctest::Approx(1.5 * std::sqrt(std::numbers::pi)).epsilon(1e-10));
  CHECK(norm_l2_alpha(u, 1.0) == doctest::Approx(std::sqrt(s)).epsilon(1e-6));
}

TEST_CASE("laplacian and gradient examples") {
  for (auto b : {Boundary::PeriodicTorus, Boundary::HomogeneousDirichlet}) {
    const Grid g(1, kTwoPi, 64, b);
    if (b == Boundary::PeriodicTorus) CHECK(laplacian(ComplexField::constant(g, 2.5)).max_abs() < 1e-12);
  }
  const Grid g = slogs::test::torus1(64);
  const auto e = ComplexField::from_function(g, [](double x, double) { return std::polar(1.0, x); });
  CHECK(slogs::test::max_diff(laplacian(e), e * Complex(-1.0)) < 1e-12);

  const auto s = ComplexField::from_function(g, [](double x, double) { return Complex(std::sin(x)); });
  const auto c = ComplexField::from_function(g, [](double x, double) { return Complex(std::cos(x)); });
  const auto grad = gradient(s);
  REQUIRE(grad.size() == 1);
  CHECK(slogs::test::max_diff(grad[0], c) < 1e-10);

  // Pure sine mode on the Dirichlet box: -Delta sin(m pi (x + L/2)/L) = (m pi / L)^2 sin(...).
  const double L = 3.0;
  const Grid d(1, L, 64, Boundary::HomogeneousDirichlet);
  const int m = 5;
  const double k = m * std::numbers::pi / L;
  const auto sm = ComplexField::from_function(d, [&](double x, double) { return Complex(std::sin(k * (x + L / 2))); });
  CHECK(slogs::test::max_diff(laplacian(sm), sm * Complex(-k * k)) < 1e-10);

  // 2-D pure mode.
  const Grid g2(2, kTwoPi, 32, Boundary::PeriodicTorus);
  const auto e2 = ComplexField::from_function(g2, [](double x, double y) { return std::polar(1.0, 2 * x - 3 * y); });
  CHECK(slogs::test::max_diff(laplacian(e2), e2 * Complex(-13.0)) < 1e-11);
}

TEST_CASE("semigroup examples") {
  const Grid g = slogs::test::torus1(64);
  CounterRng rng(3, 0);
  const auto u = slogs::test::smooth_random(g, rng);
  CHECK(slogs::test::max_diff(semigroup_apply(u, 0.0), u) < 1e-14);
  const auto c = ComplexField::constant(g, Complex(0.3, -1.2));
  CHECK(slogs::test::max_diff(semigroup_apply(c, 7.3), c) < 1e-14);
  const auto e = ComplexField::from_function(g, [](double x, double) { return std::polar(1.0, x); });
  CHECK(slogs::test::max_diff(semigroup_apply(e, std::numbers::pi), e * Complex(-1.0)) < 1e-12);

  const SemigroupOperator op(g, 0.25);
  CHECK(slogs::test::max_diff(op(u), semigroup_apply(u, 0.25)) < 1e-14);
}

TEST_CASE("dealias keeps exactly |n| <= M/3") {
  const Grid g = slogs::test::torus1(64);
  const auto& sc = g.spectral();
  std::size_t kept = 0;
  for (bool b : sc.dealias_mask()) kept += b;
  CHECK(kept == 2 * (64 / 3) + 1);
  const auto low = ComplexField::from_function(g, [](double x, double) { return std::polar(1.0, 21.0 * x); });
  const auto high = ComplexField::from_function(g, [](double x, double) { return std::polar(1.0, 22.0 * x); });
  CHECK(slogs::test::max_diff(dealias(low), low) < 1e-12);
  CHECK(dealias(high).max_abs() < 1e-12);
  for (double v : sc.laplacian_multiplier()) CHECK(v <= 0.0);
  CHECK(sc.laplacian_multiplier()[0] == 0.0);
}

// ---- properties ---------------------------------------------------------------

TEST_CASE("property: unitarity of S(t) over random fields and times") {
  CounterRng rng(11, 0);
  double worst = 0.0, worst_group = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto b = trial % 2 ? Boundary::HomogeneousDirichlet : Boundary::PeriodicTorus;
    const int dim = trial % 5 == 0 ? 2 : 1;
    const Grid g(dim, kTwoPi, dim == 1 ? 64 : 16, b);
    const auto u = slogs::test::smooth_random(g, rng, 3);
    const double t = rng.uniform(-10.0, 10.0);
    const double n0 = norm_l2(u);
    const auto v = semigroup_apply(u, t);
    worst = std::max(worst, std::abs(norm_l2(v) - n0) / n0);
    worst_group = std::max(worst_group, norm_l2(semigroup_apply(v, -t) - u) / n0);
  }
  CHECK(worst <= 1e-10);
  CHECK(worst_group <= 1e-12);
}

TEST_CASE("property: -Laplacian is self-adjoint, Parseval and gradient compatibility") {
  CounterRng rng(12, 0);
  for (auto b : {Boundary::PeriodicTorus, Boundary::HomogeneousDirichlet}) {
    for (int dim : {1, 2}) {
      const Grid g(dim, 4.0, dim == 1 ? 128 : 32, b);
      for (int trial = 0; trial < 20; ++trial) {
        const auto u = slogs::test::smooth_random(g, rng);
        const auto v = slogs::test::smooth_random(g, rng);
        const double a = inner(laplacian(u), v);
        const double c = inner(u, laplacian(v));
        CHECK(std::abs(a - c) <= 1e-9 * std::max(std::abs(a), 1.0));
        CHECK(spectral_norm_l2(u) == doctest::Approx(norm_l2(u)).epsilon(1e-10));
        if (b == Boundary::PeriodicTorus) {
          double grad_sq = 0.0;
          for (const auto& d : gradient(u)) grad_sq += std::pow(norm_l2(d), 2);
          CHECK(inner(laplacian(u), u) == doctest::Approx(-grad_sq).epsilon(1e-8));
          CHECK(gradient_norm_sq(u) == doctest::Approx(grad_sq).epsilon(1e-8));
        }
      }
    }
  }
}
