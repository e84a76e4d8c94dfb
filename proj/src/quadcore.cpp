#include "swapquad/quadcore.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace swapquad {

namespace {

constexpr int kDirectSummationLimit = 64;

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

template <typename T>
T trap_periodic(std::span<const T> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("trapezoid_periodic needs at least 2 samples");
  }
  T acc{};
  for (const T& s : samples) acc += s;
  return acc * (kTwoPi / static_cast<double>(samples.size()));
}

template <typename T>
T trap_nonperiodic(std::span<const T> samples) {
  if (samples.size() < 3) {
    throw std::invalid_argument(
        "trapezoid_nonperiodic needs both endpoints and an interior node");
  }
  const std::size_t n = samples.size() - 1;
  T acc = 0.5 * (samples.front() + samples.back());
  for (std::size_t j = 1; j < n; ++j) acc += samples[j];
  return acc * (kTwoPi / static_cast<double>(n));
}

}  // namespace

PeriodicGrid make_periodic_grid(int n) {
  if (n < 1) throw std::invalid_argument("grid order must be positive");
  PeriodicGrid g;
  g.half_order = n;
  g.weight = kPi / n;
  g.nodes.resize(2 * static_cast<std::size_t>(n));
  for (int j = 0; j < 2 * n; ++j) g.nodes[j] = kPi * j / n;
  return g;
}

Complex trapezoid_periodic(std::span<const Complex> samples) {
  return trap_periodic(samples);
}
double trapezoid_periodic(std::span<const double> samples) {
  return trap_periodic(samples);
}
Complex trapezoid_nonperiodic(std::span<const Complex> samples) {
  return trap_nonperiodic(samples);
}
double trapezoid_nonperiodic(std::span<const double> samples) {
  return trap_nonperiodic(samples);
}

void detail::fft(std::vector<Complex>& data, bool forward) {
  if (data.empty()) return;
  std::lock_guard<std::mutex> lock(fftw_mutex());
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf,
                                    forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

std::vector<double> log_kernel_weights(Complex t0, int n, const PeriodicGrid& grid) {
  if (grid.half_order != n || static_cast<int>(grid.nodes.size()) != 2 * n) {
    throw std::invalid_argument("grid must carry 2n nodes");
  }
  const double b = std::abs(t0.imag());
  const double a = t0.real();
  std::vector<double> w(2 * static_cast<std::size_t>(n));
  if (n <= kDirectSummationLimit) {
    for (int j = 0; j < 2 * n; ++j) {
      const double s = grid.nodes[j] - a;
      double acc = b;
      for (int k = 1; k < n; ++k) {
        acc -= 2.0 / k * std::exp(-k * b) * std::cos(k * s);
      }
      acc -= std::exp(-n * b) / n * std::cos(n * s);
      w[j] = acc;
    }
    return w;
  }
  // R_n(t_j) = Re sum_{k=0}^{n} beta_k e^{i k t_j}; one inverse DFT of size 2n.
  std::vector<Complex> coef(2 * static_cast<std::size_t>(n), Complex(0.0));
  coef[0] = b;
  const Complex rot = std::exp(Complex(0.0, -a));
  Complex phase = 1.0;
  for (int k = 1; k <= n; ++k) {
    phase *= rot;
    const double mag = std::exp(-k * b);
    coef[k] = (k == n ? -mag / n : -2.0 * mag / k) * phase;
  }
  detail::fft(coef, /*forward=*/false);
  for (int j = 0; j < 2 * n; ++j) w[j] = coef[j].real();
  return w;
}

std::vector<Complex> cauchy_branch_weights(Complex t0, int n, const PeriodicGrid& grid) {
  if (t0.imag() <= 0.0) {
    throw std::invalid_argument("cauchy_branch_weights requires Im t0 > 0");
  }
  if (grid.half_order != n || static_cast<int>(grid.nodes.size()) != 2 * n) {
    throw std::invalid_argument("grid must carry 2n nodes");
  }
  std::vector<Complex> w(2 * static_cast<std::size_t>(n));
  if (n <= kDirectSummationLimit) {
    for (int j = 0; j < 2 * n; ++j) {
      const Complex q = std::exp(Complex(0.0, -1.0) * (grid.nodes[j] - t0));
      Complex acc = 0.0, pw = 1.0;
      for (int k = 0; k < n; ++k) {
        acc += pw;
        pw *= q;
      }
      acc += 0.5 * pw;
      w[j] = acc;
    }
    return w;
  }
  // S_j = sum_{k=0}^{n} gamma_k e^{-i k t_j}; one forward DFT of size 2n.
  std::vector<Complex> coef(2 * static_cast<std::size_t>(n), Complex(0.0));
  const Complex rot = std::exp(Complex(0.0, 1.0) * t0);
  Complex phase = 1.0;
  for (int k = 0; k <= n; ++k) {
    coef[k] = (k == n) ? 0.5 * phase : phase;
    phase *= rot;
  }
  detail::fft(coef, /*forward=*/true);
  return {coef.begin(), coef.end()};
}

std::vector<double> dlp_kernel_weights(Complex t0, int n, const PeriodicGrid& grid) {
  if (t0.imag() <= 0.0) {
    throw std::invalid_argument(
        "dlp_kernel_weights requires Im t0 > 0; conjugate the pole first");
  }
  const std::vector<Complex> branch = cauchy_branch_weights(t0, n, grid);
  std::vector<double> w(branch.size());
  // The second bracket of the kernel is the conjugate of the first at real t.
  for (std::size_t j = 0; j < branch.size(); ++j) w[j] = 2.0 * branch[j].real();
  return w;
}

Complex cauchy_kernel_quadrature(Complex z0, std::span<const Complex> u_samples,
                                 bool on_circle_limit) {
  if (u_samples.size() < 2 || u_samples.size() % 2 != 0) {
    throw std::invalid_argument("cauchy_kernel_quadrature needs 2n samples");
  }
  const int n = static_cast<int>(u_samples.size()) / 2;
  const double r0 = std::abs(z0);
  constexpr double kCircleTol = 1e-12;
  const bool outside = r0 > 1.0 + kCircleTol;
  const bool inside = r0 < 1.0 - kCircleTol;

  // Truncated expansions of 1/(z - z0), summed directly for stability:
  //   |z0|>1: -(1/z0) (sum_{k=0}^{n-1} (z/z0)^k + (z/z0)^n / 2)
  //   |z0|<1:  (1/z)  (sum_{k=0}^{n-2} (z0/z)^k + (z0/z)^{n-1} / 2)
  auto outer_weight = [&](Complex z) {
    const Complex q = z / z0;
    Complex acc = 0.0, pw = 1.0;
    for (int k = 0; k < n; ++k) {
      acc += pw;
      pw *= q;
    }
    acc += 0.5 * pw;
    return -acc / z0;
  };
  auto inner_weight = [&](Complex z) {
    const Complex p = z0 / z;
    Complex acc = 0.0, pw = 1.0;
    for (int k = 0; k < n - 1; ++k) {
      acc += pw;
      pw *= p;
    }
    acc += 0.5 * pw;
    return acc / z;
  };

  Complex total = 0.0;
  for (int j = 0; j < 2 * n; ++j) {
    const Complex z = std::exp(Complex(0.0, kPi * j / n));
    Complex wj;
    if (outside) {
      wj = outer_weight(z);
    } else if (inside) {
      wj = inner_weight(z);
    } else if (std::abs(z - z0) < 1e-12) {
      if (!on_circle_limit) {
        throw std::domain_error("z0 coincides with a quadrature node");
      }
      wj = -0.5 / z0;  // averaged-branch limit
    } else {
      wj = 0.5 * (outer_weight(z) + inner_weight(z));
    }
    total += wj * u_samples[j];
  }
  return total * (kPi / n);
}

LaurentCoeffs laurent_coefficients(std::span<const Complex> samples, int k_min,
                                   int k_max) {
  if (samples.empty() || k_min > k_max) {
    throw std::invalid_argument("laurent_coefficients: bad inputs");
  }
  const int N = static_cast<int>(samples.size());
  const int k_abs = std::max(std::abs(k_min), std::abs(k_max));
  std::vector<Complex> data(samples.begin(), samples.end());
  detail::fft(data, /*forward=*/true);

  LaurentCoeffs out;
  out.k_min = k_min;
  out.c.resize(static_cast<std::size_t>(k_max - k_min) + 1);
  for (int k = k_min; k <= k_max; ++k) {
    int idx = k % N;
    if (idx < 0) idx += N;
    out.c[k - k_min] = data[idx] / static_cast<double>(N);
  }
  out.undersampled = N < 4 * k_abs;
  // Aliasing estimate from the modes nearest the Nyquist index.
  double tail = 0.0;
  for (int d = -1; d <= 1; ++d) {
    int idx = (N / 2 + d) % N;
    if (idx < 0) idx += N;
    tail = std::max(tail, std::abs(data[idx]) / N);
  }
  out.est_error = out.undersampled ? std::max(tail, 1e-14) : tail;
  return out;
}

double ConvergenceModel::modified_rate(int n) const {
  if (density_radius > 1.0 && kernel_radius > 1.0) {
    return std::pow(density_radius * kernel_radius, -n);
  }
  return std::exp(-2.0 * n * std::abs(im_t0));
}

double ConvergenceModel::plain_rate(int n) const {
  if (kernel_radius > 1.0) return std::pow(kernel_radius, -n);
  return std::exp(-n * std::abs(im_t0));
}

double ConvergenceModel::corner_rate(int n) const {
  return std::pow(static_cast<double>(n), -alpha * grading_order);
}

}  // namespace swapquad
