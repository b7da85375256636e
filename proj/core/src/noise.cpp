#include "slogs/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slogs/errors.hpp"

namespace slogs {

std::string to_string(NoiseCase c) {
  switch (c) {
    case NoiseCase::AdditiveComplex: return "additive";
    case NoiseCase::MultiplicativeComplex: return "complex";
    case NoiseCase::MultiplicativeReal: return "real";
  }
  return "?";
}

NoiseCase noise_case_from_string(const std::string& s) {
  if (s == "additive") return NoiseCase::AdditiveComplex;
  if (s == "complex") return NoiseCase::MultiplicativeComplex;
  if (s == "real") return NoiseCase::MultiplicativeReal;
  throw ConfigError("unknown noise case '" + s + "' (expected additive|complex|real)");
}

std::string to_string(GFamily f) {
  switch (f) {
    case GFamily::One: return "one";
    case GFamily::InverseShift: return "inverse_shift";
    case GFamily::Rational: return "rational";
    case GFamily::RationalSq: return "rational_sq";
    case GFamily::LogRationalG: return "log_rational";
    case GFamily::SuperLog: return "super_log";
  }
  return "?";
}

GFamily g_family_from_string(const std::string& s) {
  for (auto f : {GFamily::One, GFamily::InverseShift, GFamily::Rational, GFamily::RationalSq,
                 GFamily::LogRationalG, GFamily::SuperLog})
    if (to_string(f) == s) return f;
  throw ConfigError("unknown diffusion function '" + s + "'");
}

void GKind::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("diffusion parameter c must be positive");
}

double g_eval(double x, const GKind& g) {
  const double c = g.c;
  switch (g.family) {
    case GFamily::One: return 1.0;
    case GFamily::InverseShift: return 1.0 / (c + x);
    case GFamily::Rational: return x / (c + x);
    case GFamily::RationalSq: return x / (c + x * x);
    case GFamily::LogRationalG: return std::log(c + x) - std::log1p(c * x);
    case GFamily::SuperLog: return std::log(c + x);
  }
  return 0.0;
}

double g_prime(double x, const GKind& g) {
  const double c = g.c;
  switch (g.family) {
    case GFamily::One: return 0.0;
    case GFamily::InverseShift: return -1.0 / ((c + x) * (c + x));
    case GFamily::Rational: return c / ((c + x) * (c + x));
    case GFamily::RationalSq: {
      const double den = c + x * x;
      return (c - x * x) / (den * den);
    }
    case GFamily::LogRationalG: return (1.0 - c * c) / ((c + x) * (1.0 + c * x));
    case GFamily::SuperLog: return 1.0 / (c + x);
  }
  return 0.0;
}

double g_second(double x, const GKind& g) {
  const double c = g.c;
  switch (g.family) {
    case GFamily::One: return 0.0;
    case GFamily::InverseShift: return 2.0 / ((c + x) * (c + x) * (c + x));
    case GFamily::Rational: return -2.0 * c / ((c + x) * (c + x) * (c + x));
    case GFamily::RationalSq: {
      const double den = c + x * x;
      return (2.0 * x * x * x - 6.0 * c * x) / (den * den * den);
    }
    case GFamily::LogRationalG: {
      const double a = c + x;
      const double b = 1.0 + c * x;
      return -1.0 / (a * a) + c * c / (b * b);
    }
    case GFamily::SuperLog: return -1.0 / ((c + x) * (c + x));
  }
  return 0.0;
}

GConstants g_constants(const GKind& g) {
  GConstants k;
  double g_min = g_eval(0.0, g);
  double g_max = g_min;
  double sup_h = 0.0;
  double sup_hprime_s = 0.0;
  auto visit = [&](double s) {
    const double gv = g_eval(s, g);
    const double gp = g_prime(s, g);
    const double gs = g_second(s, g);
    g_min = std::min(g_min, gv);
    g_max = std::max(g_max, gv);
    k.sup_abs_g = std::max(k.sup_abs_g, std::abs(gv));
    k.sup_gprime_x = std::max(k.sup_gprime_x, std::abs(gp * s));
    k.sup_gsecond_x2 = std::max(k.sup_gsecond_x2, std::abs(gs * s * s));
    const double h = gp * gv * s;
    const double hp = gs * gv * s + gp * gp * s + gp * gv;
    sup_h = std::max(sup_h, std::abs(h));
    sup_hprime_s = std::max(sup_hprime_s, std::abs(h) + 2.0 * std::abs(hp * s));
  };
  visit(0.0);
  constexpr int kPerDecade = 400;
  for (int i = -12 * kPerDecade; i <= 12 * kPerDecade; ++i)
    visit(std::pow(10.0, static_cast<double>(i) / kPerDecade));
  k.oscillation = g_max - g_min;
  k.growth_real = k.sup_abs_g + k.sup_gprime_x;
  k.growth_complex = k.growth_real + k.sup_gsecond_x2;
  // For y/x <= 1/2 the ratio (x+y)/(x-y) is at most 3; above it the mean value
  // theorem in log s gives 2 sup|g's| (1+t) log(1/t) / (1-t) <= 6 ln2 sup|g's|.
  k.con_g = std::max(3.0 * k.oscillation, 6.0 * std::numbers::ln2 * k.sup_gprime_x);
  k.con_g1 = std::max(sup_h, sup_hprime_s);
  return k;
}

double spectrum_q(const Spectrum& s, double k_sq) {
  return s.amplitude * std::pow(1.0 + k_sq, -s.decay);
}

namespace {

/// Wavenumber of lattice index n along an axis.
double axis_wavenumber(const Grid& grid, int n) {
  return grid.boundary() == Boundary::PeriodicTorus
             ? 2.0 * std::numbers::pi * n / grid.extent()
             : std::numbers::pi * n / grid.extent();
}

/// sum of q_k (1 + k^2) over lattice indices with max|n_a| <= cutoff.
double h1_trace(const Spectrum& s, const Grid& grid, int cutoff) {
  const bool torus = grid.boundary() == Boundary::PeriodicTorus;
  const int lo = torus ? -cutoff : 1;
  double sum = 0.0;
  auto term = [&](double k2) { sum += spectrum_q(s, k2) * (1.0 + k2); };
  if (grid.dim() == 1) {
    for (int n = lo; n <= cutoff; ++n) {
      const double k = axis_wavenumber(grid, n);
      term(k * k);
    }
  } else {
    for (int a = lo; a <= cutoff; ++a) {
      const double ka = axis_wavenumber(grid, a);
      for (int b = lo; b <= cutoff; ++b) {
        const double kb = axis_wavenumber(grid, b);
        term(ka * ka + kb * kb);
      }
    }
  }
  return sum;
}

}  // namespace

double spectrum_tail_fraction(const Spectrum& s, const Grid& grid) {
  const int d = grid.dim();
  // q_k (1 + k^2) ~ k^{2 - 2r}; the lattice sum converges iff 2r - 2 > d.
  const double power = 2.0 * s.decay - 2.0;
  if (power <= d) return 1.0;
  const int big = d == 1 ? 1 << 16 : 512;
  const double kept = h1_trace(s, grid, s.mode_cutoff);
  double total = h1_trace(s, grid, big);
  // Continuum estimate of the remainder beyond the large box.
  const double unit = axis_wavenumber(grid, 1);
  const double lattice_per_k = grid.boundary() == Boundary::PeriodicTorus ? 1.0 : 0.5;
  const double kr = unit * big;
  const double shell = d == 1 ? 2.0 * lattice_per_k / unit
                              : 2.0 * std::numbers::pi * std::pow(lattice_per_k / unit, 2);
  total += s.amplitude * shell * std::pow(kr, d - power) / (power - d);
  if (total <= 0.0) return 0.0;
  return std::max(0.0, (total - kept) / total);
}

void NoiseSpec::validate(const Grid& grid) const {
  g.validate();
  if (!(spectrum.amplitude >= 0.0)) throw ParameterError("noise amplitude must be >= 0");
  if (!(spectrum.decay > 1.0)) throw ParameterError("noise decay exponent must exceed 1");
  const auto n = static_cast<int>(grid.points_per_axis());
  if (spectrum.mode_cutoff < 0 || spectrum.mode_cutoff >= n / 2)
    throw ParameterError("noise mode cutoff must lie in [0, N/2)");
  if (grid.boundary() == Boundary::HomogeneousDirichlet && spectrum.mode_cutoff < 1 &&
      spectrum.amplitude > 0.0)
    throw ParameterError("Dirichlet noise needs mode cutoff >= 1");
  if (!g.bounded() && noise_case != NoiseCase::MultiplicativeReal)
    throw ConfigError("super-linear diffusion is admitted only with real-valued noise");
  if (spectrum.amplitude > 0.0 && spectrum_tail_fraction(spectrum, grid) > 0.01)
    throw ConfigError("noise spectrum cutoff drops more than 1% of the H1 trace; raise decay or cutoff");
}

NoiseModel::NoiseModel(const Grid& grid, NoiseSpec spec) : grid_(grid), spec_(std::move(spec)) {
  spec_.g.validate();
  const std::size_t nodes = grid_.size();
  sum_abs_sq_.assign(nodes, 0.0);
  sum_im_phi_.assign(nodes, Complex{});
  if (spec_.spectrum.amplitude == 0.0) return;

  const int cutoff = spec_.spectrum.mode_cutoff;
  const bool torus = grid_.boundary() == Boundary::PeriodicTorus;
  const bool real_noise = spec_.noise_case == NoiseCase::MultiplicativeReal;
  const int d = grid_.dim();
  const double n_pts = static_cast<double>(grid_.points_per_axis());
  const double vol = grid_.volume();

  // Lattice indices inside the cutoff (axis 1 only when d == 2).
  std::vector<std::array<int, 2>> modes;
  const int lo = torus ? -cutoff : 1;
  for (int a = lo; a <= cutoff; ++a) {
    if (d == 1) {
      modes.push_back({a, 0});
      continue;
    }
    for (int b = lo; b <= cutoff; ++b) modes.push_back({a, b});
  }

  auto k_sq = [&](const std::array<int, 2>& m) {
    double s = 0.0;
    for (int axis = 0; axis < d; ++axis) {
      const double k = axis_wavenumber(grid_, m[axis]);
      s += k * k;
    }
    return s;
  };
  auto push_pair = [&](ComplexField e, double q) {
    // e is real-normalised: ||e|| = 1. Complex noise splits q between e and i e.
    if (real_noise) {
      basis_.push_back(e * Complex(std::sqrt(q)));
      return;
    }
    basis_.push_back(e * Complex(std::sqrt(0.5 * q)));
    basis_.push_back(e * Complex(0.0, std::sqrt(0.5 * q)));
  };

  for (const auto& m : modes) {
    const double q = spectrum_q(spec_.spectrum, k_sq(m));
    if (!torus) {
      const double amp = std::pow(std::sqrt(2.0 / grid_.extent()), d);
      push_pair(ComplexField::from_function(grid_,
                                            [&](double x, double y) {
                                              double v = amp;
                                              const double coord[2] = {x, y};
                                              for (int axis = 0; axis < d; ++axis)
                                                v *= std::sin(axis_wavenumber(grid_, m[axis]) *
                                                              (coord[axis] + 0.5 * grid_.extent()));
                                              return v;
                                            }),
                q);
      continue;
    }
    // Phase measured from the first node: exp(2 pi i n.j / N).
    auto phase_at = [&](std::size_t flat) {
      double theta = 0.0;
      if (d == 1) {
        theta = 2.0 * std::numbers::pi * m[0] * static_cast<double>(flat) / n_pts;
      } else {
        const auto n = grid_.points_per_axis();
        theta = 2.0 * std::numbers::pi *
                (m[0] * static_cast<double>(flat / n) + m[1] * static_cast<double>(flat % n)) / n_pts;
      }
      return theta;
    };
    if (!real_noise) {
      ComplexField e(grid_);
      for (std::size_t j = 0; j < nodes; ++j) e[j] = std::polar(1.0 / std::sqrt(vol), phase_at(j));
      push_pair(std::move(e), q);
      continue;
    }
    const bool zero_mode = m[0] == 0 && m[1] == 0;
    const bool upper_half = m[0] > 0 || (m[0] == 0 && m[1] > 0);
    if (zero_mode) {
      push_pair(ComplexField::constant(grid_, 1.0 / std::sqrt(vol)), q);
    } else if (upper_half) {
      ComplexField c(grid_), s(grid_);
      const double amp = std::sqrt(2.0 / vol);
      for (std::size_t j = 0; j < nodes; ++j) {
        c[j] = amp * std::cos(phase_at(j));
        s[j] = amp * std::sin(phase_at(j));
      }
      push_pair(std::move(c), q);
      push_pair(std::move(s), q);
    }
  }

  for (const auto& phi : basis_) {
    for (std::size_t j = 0; j < nodes; ++j) {
      sum_abs_sq_[j] += std::norm(phi[j]);
      sum_im_phi_[j] += phi[j].imag() * phi[j];
    }
    double l2 = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) l2 += std::norm(phi[j]);
    trace_ += l2 * grid_.cell_volume();
  }
}

std::vector<double> NoiseModel::increment_coefficients(double dt, std::uint32_t sample_index,
                                                       std::uint64_t step_index,
                                                       int substeps) const {
  if (!(dt > 0.0)) throw ParameterError("noise increment needs dt > 0");
  if (substeps < 1) throw ParameterError("noise substeps must be >= 1");
  std::vector<double> coeffs(basis_.size(), 0.0);
  if (basis_.empty()) return coeffs;
  std::vector<double> xi(basis_.size());
  const auto m = static_cast<std::uint64_t>(substeps);
  const double scale = std::sqrt(dt / static_cast<double>(substeps));
  for (std::uint64_t s = 0; s < m; ++s) {
    NormalStream(spec_.master_seed, sample_index, step_index * m + s).fill(xi);
    for (std::size_t j = 0; j < xi.size(); ++j) coeffs[j] += scale * xi[j];
  }
  return coeffs;
}

ComplexField NoiseModel::synthesize(std::span<const double> coefficients) const {
  if (coefficients.size() != basis_.size())
    throw ParameterError("coefficient count does not match the noise basis");
  ComplexField out(grid_);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const double c = coefficients[i];
    const auto phi = basis_[i].values();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * phi[j];
  }
  return out;
}

ComplexField sample_increment(const NoiseModel& model, double dt, std::uint32_t sample_index,
                              std::uint64_t step_index, int substeps) {
  const auto coeffs = model.increment_coefficients(dt, sample_index, step_index, substeps);
  return model.synthesize(coeffs);
}

ItoCorrectionTerms ito_correction_terms(const ComplexField& u, const NoiseModel& model) {
  require_same_grid(u.grid(), model.grid(), "ito_correction");
  ItoCorrectionTerms t{ComplexField(u.grid()), ComplexField(u.grid())};
  if (model.spec().noise_case == NoiseCase::AdditiveComplex) return t;
  const auto& a = model.sum_abs_sq();
  const auto& b = model.sum_im_phi();
  const GKind& g = model.spec().g;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double rho = std::norm(u[j]);
    const double gv = g_eval(rho, g);
    t.modulus[j] = -0.5 * a[j] * gv * gv * u[j];
    t.phase[j] = Complex(0.0, -gv * g_prime(rho, g) * rho) * u[j] * b[j];
  }
  return t;
}

ComplexField ito_correction(const ComplexField& u, const NoiseModel& model) {
  auto t = ito_correction_terms(u, model);
  t.modulus += t.phase;
  return std::move(t.modulus);
}

ComplexField diffusion_apply(const ComplexField& u, const NoiseModel& model, const ComplexField& dw) {
  require_same_grid(u.grid(), dw.grid(), "diffusion_apply");
  if (model.spec().noise_case == NoiseCase::AdditiveComplex) return dw;
  ComplexField out(u.grid());
  const GKind& g = model.spec().g;
  for (std::size_t j = 0; j < u.size(); ++j)
    out[j] = Complex(0.0, g_eval(std::norm(u[j]), g)) * u[j] * dw[j];
  return out;
}

}  // namespace slogs
