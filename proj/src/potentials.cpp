#include "swapquad/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swapquad/specfun.hpp"

namespace swapquad {

namespace {

constexpr double kNearNodeTaylor = 1e-6;  // |t_j - t0| below which Taylor steps in
constexpr double kCorrectionScale = -0.5;

double wrap_delta(double t, double a) { return std::remainder(t - a, kTwoPi); }

Complex wrapped_tau(double t, Complex t0) {
  return {wrap_delta(t, t0.real()), -t0.imag()};
}

// Im[g' conj(x - g)] = (x-y).n |g'|
double beta_ds(Complex dg, Complex diff) {
  return (dg * std::conj(diff)).imag();
}

// Truncated expansion weights of the single branch v = 1/(1 - e^{-i(t-t0)}),
// valid for either sign of Im t0 via 1/(1-q) = 1 - 1/(1-1/q).
std::vector<Complex> branch_weights_any(Complex t0, int n, const PeriodicGrid& grid) {
  if (t0.imag() > 0.0) return cauchy_branch_weights(t0, n, grid);
  std::vector<Complex> w = cauchy_branch_weights(std::conj(t0), n, grid);
  for (Complex& c : w) c = 1.0 - std::conj(c);
  return w;
}

// u + iv with u = g'/(x-g), v = 1/(1-e^{-i(t-t0)}), evaluated at complex t by
// the quotient form (both factors vanish at t0, the ratio stays O(1)).
Complex subtract_form_smooth(const CurvePiece& piece, Complex x, Complex t0,
                             Complex t) {
  const Complex g = piece.map(t);
  const Complex dg = piece.deriv(t);
  const Complex e = 1.0 - std::exp(Complex(0.0, -1.0) * (t - t0));
  const Complex num = dg * e + Complex(0.0, 1.0) * (x - g);
  const Complex den = (x - g) * e;
  return num / den;
}

}  // namespace

void PotentialSpec::validate() const {
  if (pde == Pde::helmholtz && !(kappa > 0.0)) {
    throw std::invalid_argument("helmholtz spec needs kappa > 0");
  }
  if (pde == Pde::laplace && kappa != 0.0) {
    throw std::invalid_argument("kappa is set only for helmholtz");
  }
  if (strategy == Strategy::swapped_subtraction && layer != Layer::double_layer) {
    throw std::invalid_argument("subtraction applies to the double layer only");
  }
}

void validate_density(const DensityGrid& density, std::size_t node_count) {
  if (density.samples.size() != node_count || node_count % 2 != 0) {
    throw std::invalid_argument("density needs 2n samples matching the grid");
  }
  for (const Complex& v : density.samples) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("density samples must be finite");
    }
  }
}

double mu_value(Location location) {
  switch (location) {
    case Location::inside: return -kTwoPi;
    case Location::on_boundary: return -kPi;
    case Location::outside: return 0.0;
  }
  return 0.0;
}

std::vector<double> slp_log_weights(const PieceSamples& s, Complex x, Complex t0) {
  const int n = s.grid.half_order;
  const double b = std::abs(t0.imag());
  const std::vector<double> R = log_kernel_weights(t0, n, s.grid);
  std::vector<double> w(s.grid.nodes.size());

  // Taylor data for the removable quotient at t ~ t0.
  const Complex dg0 = s.piece->deriv(t0);
  const Complex curv = s.piece->deriv2(t0) / (2.0 * dg0);

  for (std::size_t j = 0; j < w.size(); ++j) {
    const Complex tau = wrapped_tau(s.grid.nodes[j], t0);
    double log_q;
    if (std::abs(tau) < kNearNodeTaylor) {
      log_q = 2.0 * std::log(std::abs(dg0)) + 2.0 * (curv * tau).real();
    } else {
      const double sh = std::sinh(0.5 * t0.imag());
      const double sn = std::sin(0.5 * tau.real());
      const double den = 4.0 * (sh * sh + sn * sn);
      const double num = std::max(std::norm(x - s.g[j]), 1e-300);
      log_q = std::log(num) - std::log(den);
    }
    w[j] = s.grid.weight * (log_q + R[j]);
  }
  (void)b;
  return w;
}

namespace {

// Subtract-form weights (closed analytic curves), Eq. form
//   Im int [u + iv] q dt - int Re[v] q dt.
std::vector<double> dlp_weights_subtract_form(const PieceSamples& s, Complex x,
                                              Complex t0) {
  const int n = s.grid.half_order;
  const std::vector<Complex> branch = branch_weights_any(t0, n, s.grid);
  std::vector<double> w(s.grid.nodes.size());

  const Complex dg0 = s.piece->deriv(t0);
  const Complex u0 = Complex(0.0, 0.5) - s.piece->deriv2(t0) / (2.0 * dg0);
  // slope of u+iv at t0 by a central difference; only O(1e-6) accuracy needed
  const double h = 1e-3;
  const Complex slope = (subtract_form_smooth(*s.piece, x, t0, t0 + h) -
                         subtract_form_smooth(*s.piece, x, t0, t0 - h)) /
                        (2.0 * h);

  for (std::size_t j = 0; j < w.size(); ++j) {
    const Complex tau = wrapped_tau(s.grid.nodes[j], t0);
    Complex smooth;
    if (std::abs(tau) < kNearNodeTaylor) {
      smooth = u0 + slope * tau;
    } else {
      const Complex e = 1.0 - std::exp(Complex(0.0, -1.0) * tau);
      const Complex num = s.dg[j] * e + Complex(0.0, 1.0) * (x - s.g[j]);
      const Complex den = (x - s.g[j]) * e;
      smooth = num / den;
    }
    w[j] = s.grid.weight * (smooth.imag() - branch[j].real());
  }
  return w;
}

// Smooth-factor weights: Im of the complex rule for
//   int v(t) [(1 - e^{-i(t-t0)}) g'/(x-g)] q dt.
// Corner samples (g' = 0) carry zero weight, so graded pieces never touch the
// unknown density value at the joint.
std::vector<double> dlp_weights_smooth_factor(const PieceSamples& s, Complex x,
                                              Complex t0) {
  const int n = s.grid.half_order;
  const std::vector<Complex> branch = branch_weights_any(t0, n, s.grid);
  std::vector<double> w(s.grid.nodes.size());

  const Complex dg0 = s.piece->deriv(t0);
  const Complex slope = -(0.5 + Complex(0.0, 0.5) * s.piece->deriv2(t0) / dg0);

  for (std::size_t j = 0; j < w.size(); ++j) {
    const Complex tau = wrapped_tau(s.grid.nodes[j], t0);
    Complex factor;
    if (std::abs(tau) < kNearNodeTaylor) {
      factor = Complex(0.0, -1.0) + slope * tau;
    } else {
      const Complex e = 1.0 - std::exp(Complex(0.0, -1.0) * tau);
      factor = e * s.dg[j] / (x - s.g[j]);
    }
    w[j] = s.grid.weight * (branch[j] * factor).imag();
  }
  return w;
}

}  // namespace

std::vector<double> dlp_swapped_weights(const PieceSamples& s, Complex x, Complex t0) {
  return s.piece->periodic ? dlp_weights_subtract_form(s, x, t0)
                           : dlp_weights_smooth_factor(s, x, t0);
}

std::vector<double> slp_log_weights_plain(const PieceSamples& s, Complex x) {
  std::vector<double> w(s.grid.nodes.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = s.grid.weight * std::log(std::max(std::norm(x - s.g[j]), 1e-300));
  }
  return w;
}

std::vector<double> dlp_weights_plain(const PieceSamples& s, Complex x) {
  std::vector<double> w(s.grid.nodes.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = s.grid.weight * (s.dg[j] / (x - s.g[j])).imag();
  }
  return w;
}

namespace {

bool use_plain(const PieceSamples& s, const PoleEstimate& pole) {
  return !pole.detectable || !pole.converged || is_far(pole) ||
         std::abs(pole.t0.imag()) >= 0.95 * s.piece->strip_bound;
}

std::size_t nearest_node_index(const PieceSamples& s, Complex t0) {
  const int N = static_cast<int>(s.grid.nodes.size());
  const double spacing = s.grid.weight;  // pi/n
  int j = static_cast<int>(std::lround(t0.real() / spacing)) % N;
  if (j < 0) j += N;
  return static_cast<std::size_t>(j);
}

}  // namespace

double laplace_slp_close(const PieceSamples& s, const DensityGrid& density,
                         Complex x, const PoleEstimate& pole) {
  validate_density(density, s.grid.nodes.size());
  const std::vector<double> w = use_plain(s, pole)
                                    ? slp_log_weights_plain(s, x)
                                    : slp_log_weights(s, x, pole.t0);
  Complex acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double jac = density.premultiplied ? 1.0 : s.absdg[j];
    acc += w[j] * jac * density.samples[j];
  }
  return acc.real();
}

double laplace_dlp_close(const PieceSamples& s, const DensityGrid& density,
                         Complex x, const PoleEstimate& pole,
                         bool use_subtraction, Location location) {
  validate_density(density, s.grid.nodes.size());
  if (density.premultiplied) {
    throw std::invalid_argument(
        "double-layer evaluation needs raw density samples");
  }
  if (use_subtraction && location == Location::on_boundary) {
    throw std::invalid_argument("no on-surface limit support in close evaluation");
  }
  const bool plain = use_plain(s, pole);
  const std::vector<double> w = plain ? dlp_weights_plain(s, x)
                                      : dlp_swapped_weights(s, x, pole.t0);
  Complex shift = 0.0;
  Complex extra = 0.0;
  if (use_subtraction && !plain) {
    shift = density.samples[nearest_node_index(s, pole.t0)];
    extra = mu_value(location) * shift;
  }
  Complex acc = extra;
  for (std::size_t j = 0; j < w.size(); ++j) {
    acc += w[j] * (density.samples[j] - shift);
  }
  return acc.real();
}

double klinteberg_dlp_close(const PieceSamples& s, const DensityGrid& density,
                            Complex x, const PoleEstimate& pole) {
  validate_density(density, s.grid.nodes.size());
  if (density.premultiplied) {
    throw std::invalid_argument(
        "double-layer evaluation needs raw density samples");
  }
  if (use_plain(s, pole)) {
    const std::vector<double> w = dlp_weights_plain(s, x);
    Complex acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * density.samples[j];
    return acc.real();
  }
  const std::vector<double> w = dlp_weights_smooth_factor(s, x, pole.t0);
  Complex acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * density.samples[j];
  return acc.real();
}

Complex helmholtz_slp_residue(double kappa, double rho) {
  if (rho <= 0.0) return helmholtz_slp_residue_origin(kappa);
  return 0.25 * kImag * hankel1(0, kappa * rho).value +
         bessel_j(0, kappa * rho) * std::log(rho) / kTwoPi;
}

Complex helmholtz_slp_residue_origin(double kappa) {
  return Complex(0.0, 0.25) -
         (std::log(0.5 * kappa) + kEulerGamma) / kTwoPi;
}

Complex helmholtz_dlp_residue_over_rho(double kappa, double rho) {
  const double z = kappa * rho;
  if (z <= 8.0) {
    // W(rho)/rho = kappa^2 a0 J1(z)/z + (kappa^2 / 8 pi) sigma1(z^2),
    // sigma1 = sum (H_k + H_{k+1}) (-z^2/4)^k / (k! (k+1)!).
    const Complex a0 =
        Complex(0.0, 0.25) - (std::log(0.5 * kappa) + kEulerGamma) / kTwoPi;
    double sigma = 0.0;
    double p = 1.0;      // (-z^2/4)^k / (k!(k+1)!)
    double hk = 0.0;     // H_k
    for (int k = 0; k < 60; ++k) {
      const double hk1 = hk + 1.0 / (k + 1.0);
      const double term = (hk + hk1) * p;
      sigma += term;
      if (std::abs(term) < 1e-18 * (std::abs(sigma) + 1e-30)) break;
      p *= -0.25 * z * z / ((k + 1.0) * (k + 2.0));
      hk = hk1;
    }
    return kappa * kappa *
           (a0 * bessel_j1_over_x(z) + sigma / (8.0 * kPi));
  }
  const Complex w = 0.25 * kImag * kappa * hankel1(1, z).value +
                    kappa * bessel_j(1, z) * std::log(rho) / kTwoPi -
                    1.0 / (kTwoPi * rho);
  return w / rho;
}

Complex helmholtz_slp_close(const PieceSamples& s, const DensityGrid& density,
                            Complex x, double kappa, const PoleEstimate& pole) {
  validate_density(density, s.grid.nodes.size());
  const std::size_t N = s.grid.nodes.size();
  std::vector<double> rho(N);
  for (std::size_t j = 0; j < N; ++j) rho[j] = std::abs(x - s.g[j]);

  auto jacobian = [&](std::size_t j) {
    return density.premultiplied ? 1.0 : s.absdg[j];
  };
  if (use_plain(s, pole)) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      acc += s.grid.weight * 0.25 * kImag * hankel1(0, kappa * rho[j]).value *
             jacobian(j) * density.samples[j];
    }
    return acc;
  }
  const std::vector<double> w_log = slp_log_weights(s, x, pole.t0);
  Complex acc = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const Complex q = jacobian(j) * density.samples[j];
    acc += -w_log[j] / (4.0 * kPi) * bessel_j(0, kappa * rho[j]) * q;
    acc += s.grid.weight * helmholtz_slp_residue(kappa, rho[j]) * q;
  }
  return acc;
}

Complex helmholtz_dlp_eval(const PieceSamples& s, const DensityGrid& density,
                           Complex x, double kappa, const PoleEstimate& pole,
                           Complex lap_shift) {
  validate_density(density, s.grid.nodes.size());
  if (density.premultiplied) {
    throw std::invalid_argument(
        "double-layer evaluation needs raw density samples");
  }
  const std::size_t N = s.grid.nodes.size();
  if (use_plain(s, pole)) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const Complex diff = x - s.g[j];
      const double rho = std::abs(diff);
      acc += s.grid.weight * 0.25 * kImag * kappa * hankel1(1, kappa * rho).value *
             (beta_ds(s.dg[j], diff) / rho) * density.samples[j];
      // keep the boundary-wide subtraction identity exact on plain pieces
      acc -= lap_shift / kTwoPi * s.grid.weight * (s.dg[j] / (x - s.g[j])).imag();
    }
    return acc;
  }

  const std::vector<double> w_log = slp_log_weights(s, x, pole.t0);
  const std::vector<double> w_lap = dlp_swapped_weights(s, x, pole.t0);

  Complex acc = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const Complex diff = x - s.g[j];
    const double rho = std::abs(diff);
    const double bds = beta_ds(s.dg[j], diff);
    const Complex phi = density.samples[j];
    // log-type part: -(kappa/2pi) (J1(k rho)/rho) beta log(rho) phi ds
    acc += -kappa * kappa / (4.0 * kPi) * w_log[j] *
           bessel_j1_over_x(kappa * rho) * bds * phi;
    // Laplace double-layer part (subtraction acts here only)
    acc += w_lap[j] * (phi - lap_shift) / kTwoPi;
    // smooth residue
    acc += s.grid.weight * bds * helmholtz_dlp_residue_over_rho(kappa, rho) * phi;
  }
  return acc;
}

Complex helmholtz_dlp_close(const PieceSamples& s, const DensityGrid& density,
                            Complex x, double kappa, const PoleEstimate& pole,
                            bool use_subtraction, Location location) {
  Complex shift = 0.0, extra = 0.0;
  if (use_subtraction && !use_plain(s, pole)) {
    if (location == Location::on_boundary) {
      throw std::invalid_argument("no on-surface limit support in close evaluation");
    }
    shift = density.samples[nearest_node_index(s, pole.t0)];
    extra = mu_value(location) * shift / kTwoPi;
  }
  return helmholtz_dlp_eval(s, density, x, kappa, pole, shift) + extra;
}

// ---------------------------------------------------------------------------
// Non-periodic endpoint correction
// ---------------------------------------------------------------------------

namespace {

Complex cot_half(Complex t) {
  return std::cos(0.5 * t) / std::sin(0.5 * t);
}

Complex csc_half_sq(Complex t) {
  const Complex s = std::sin(0.5 * t);
  return 1.0 / (s * s);
}

struct MnEval {
  Complex e_pos, e_neg;  // e^{i n t0}, e^{-i n conj t0}
  Complex c_pos0, c_neg0;  // cot(-t0/2), cot(-conj t0 / 2)
  Complex t0;

  Complex mn(Complex t) const {
    return e_pos * (cot_half(t - t0) - c_pos0) -
           e_neg * (cot_half(t - std::conj(t0)) - c_neg0);
  }
  Complex mn_prime(Complex t) const {
    return -0.5 * e_pos * csc_half_sq(t - t0) +
           0.5 * e_neg * csc_half_sq(t - std::conj(t0));
  }
};

}  // namespace

Complex nonperiodic_correction(Complex t0, int n, SwapVariant variant,
                               Complex jump) {
  if (variant != SwapVariant::double_layer_pair) {
    throw std::invalid_argument("unsupported swap variant");
  }
  if (jump == Complex(0.0)) return 0.0;
  double re = std::fmod(t0.real(), kTwoPi);
  if (re < 0.0) re += kTwoPi;
  t0 = Complex(re, t0.imag());
  if (t0.imag() < 0.0) {
    // kernel with Im t0 < 0 equals 2 minus the conjugate-pole kernel; the
    // constant's correction integral vanishes by symmetry.
    return -nonperiodic_correction(std::conj(t0), n, variant, jump);
  }

  MnEval m;
  m.t0 = t0;
  m.e_pos = std::exp(Complex(0.0, double(n)) * t0);
  m.e_neg = std::exp(Complex(0.0, -double(n)) * std::conj(t0));
  m.c_pos0 = cot_half(-t0);
  m.c_neg0 = cot_half(-std::conj(t0));

  const bool left = t0.real() < 0.5 * kPi;
  const bool right = t0.real() > 1.5 * kPi;
  const double shift = (left || right) ? kPi : 0.0;

  // trapezoidal sum along [shift - i, shift + i]
  Complex vertical = 0.0;
  for (int k = -n; k <= n; ++k) {
    Complex term;
    if (k == 0) {
      // finite part at the on-path zero of sin(nt)
      const double cs = std::cos(n * shift);  // (+-1)^n at the shifted center
      term = m.mn_prime(Complex(shift, 0.0)) / (2.0 * n * cs);
    } else {
      const Complex t = Complex(shift, double(k) / n);
      term = m.mn(t) / (2.0 * std::sin(double(n) * t));
    }
    const double w = (k == -n || k == n) ? 0.5 : 1.0;
    vertical += w * term;
  }
  vertical *= Complex(0.0, 1.0) / double(n);

  Complex residues = 0.0;
  if (left || right) {
    const int k0 = left ? n : 0;
    const int k1 = left ? 2 * n : n;
    for (int k = k0; k <= k1; ++k) {
      const double w = (k == k0 || k == k1) ? 0.5 : 1.0;
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      residues += w * m.mn(Complex(k * kPi / n, 0.0)) / (2.0 * sgn * n);
    }
    residues *= Complex(0.0, kTwoPi);
  }

  return kCorrectionScale * jump * (vertical + residues);
}

}  // namespace swapquad
