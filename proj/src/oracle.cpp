#include "swapquad/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swapquad/specfun.hpp"

namespace swapquad {
namespace oracle {

namespace {

constexpr int kPanelOrder = 15;
constexpr int kMaxDepth = 40;

struct GaussRule {
  std::array<double, kPanelOrder> x{}, w{};
};

// Gauss-Legendre nodes on [-1,1] by Newton iteration on P_15.
GaussRule build_gauss_rule() {
  GaussRule rule;
  const int n = kPanelOrder;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.x[i] = x;
    rule.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = build_gauss_rule();
  return rule;
}

Complex panel(const std::function<Complex(double)>& f, double a, double b) {
  const GaussRule& g = gauss_rule();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Complex acc = 0.0;
  for (int i = 0; i < kPanelOrder; ++i) {
    acc += g.w[i] * f(mid + half * g.x[i]);
  }
  return acc * half;
}

void refine(const std::function<Complex(double)>& f, double a, double b,
            Complex whole, double tol, int depth, ReferenceResult& out) {
  const double mid = 0.5 * (a + b);
  const Complex left = panel(f, a, mid);
  const Complex right = panel(f, mid, b);
  const double diff = std::abs(left + right - whole);
  out.subdivisions += 1;
  // local roundoff floor: once panel sums agree to machine precision,
  // further splitting only accumulates noise
  const double floor_local =
      50.0 * std::numeric_limits<double>::epsilon() *
      (std::abs(left) + std::abs(right) + std::abs(whole));
  if (diff <= std::max(tol, floor_local) || depth >= kMaxDepth) {
    if (depth >= kMaxDepth && diff > std::max(tol, floor_local)) {
      out.converged = false;
    }
    out.value += left + right;
    out.est_error += diff;
    return;
  }
  refine(f, a, mid, left, 0.5 * tol, depth + 1, out);
  refine(f, mid, b, right, 0.5 * tol, depth + 1, out);
}

}  // namespace

ReferenceResult adaptive_integrate(const std::function<Complex(double)>& f,
                                   double a, double b, double tol) {
  ReferenceResult out;
  refine(f, a, b, panel(f, a, b), tol, 0, out);
  return out;
}

std::function<Complex(double)> trig_interpolant(std::vector<Complex> samples) {
  const int N = static_cast<int>(samples.size());
  if (N < 2 || N % 2 != 0) {
    throw std::invalid_argument("trig_interpolant needs an even sample count");
  }
  const int n = N / 2;
  // Direct DFT; the oracle path stays independent of the main transforms.
  std::vector<Complex> coef(static_cast<std::size_t>(N) + 1);  // k = -n..n
  for (int k = -n; k <= n; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < N; ++j) {
      acc += samples[j] * std::exp(Complex(0.0, -k * kPi * j / n));
    }
    acc /= static_cast<double>(N);
    if (std::abs(k) == n) acc *= 0.5;  // split the shared +-n mode
    coef[k + n] = acc;
  }
  return [coef, n](double t) {
    Complex acc = 0.0;
    for (int k = -n; k <= n; ++k) {
      acc += coef[k + n] * std::exp(Complex(0.0, k * t));
    }
    return acc;
  };
}

std::function<Complex(double)> local_poly_interpolant(std::vector<Complex> samples) {
  const int N = static_cast<int>(samples.size());
  if (N < 4) throw std::invalid_argument("local_poly_interpolant needs >= 4 samples");
  const int n = N / 2;
  const int window = std::min(10, N);
  return [samples, n, N, window](double t) {
    const double h = kPi / n;
    int center = static_cast<int>(std::lround(t / h));
    int lo = std::clamp(center - window / 2, 0, N - window);
    // Barycentric Lagrange on the window nodes.
    Complex num = 0.0;
    double den = 0.0;
    bool hit = false;
    Complex hit_value = 0.0;
    std::vector<double> bw(window, 1.0);
    for (int i = 0; i < window; ++i) {
      for (int j = 0; j < window; ++j) {
        if (i != j) bw[i] /= (i - j) * h;
      }
    }
    for (int i = 0; i < window; ++i) {
      const double ti = (lo + i) * h;
      const double d = t - ti;
      if (std::abs(d) < 1e-14) {
        hit = true;
        hit_value = samples[lo + i];
        break;
      }
      const double c = bw[i] / d;
      num += c * samples[lo + i];
      den += c;
    }
    return hit ? hit_value : num / den;
  };
}

ReferenceResult oracle_layer_potential(const CurvePiece& piece,
                                       const std::function<Complex(double)>& density,
                                       Complex x, OracleKernel kernel,
                                       double kappa, double tol, double split_at) {
  auto integrand = [&](double t) -> Complex {
    const Complex g = piece.map(t);
    const Complex dg = piece.deriv(t);
    const Complex f = density(t);
    switch (kernel) {
      case OracleKernel::laplace_slp_param: {
        const double r2 = std::norm(x - g);
        return std::log(r2) * f;
      }
      case OracleKernel::laplace_dlp_param:
        return (dg / (x - g)).imag() * f;
      case OracleKernel::helmholtz_slp: {
        const double rho = std::abs(x - g);
        return 0.25 * kImag * hankel1(0, kappa * rho).value * f * std::abs(dg);
      }
      case OracleKernel::helmholtz_dlp: {
        const double rho = std::abs(x - g);
        // (x-y).n |g'| = Im[g' conj(x-g)]
        const double beta_ds = (dg * std::conj(x - g)).imag();
        return 0.25 * kImag * kappa * hankel1(1, kappa * rho).value *
               (beta_ds / rho) * f;
      }
    }
    return 0.0;
  };

  if (split_at > 0.0 && split_at < kTwoPi) {
    ReferenceResult a = adaptive_integrate(integrand, 0.0, split_at, 0.5 * tol);
    ReferenceResult b = adaptive_integrate(integrand, split_at, kTwoPi, 0.5 * tol);
    a.value += b.value;
    a.est_error += b.est_error;
    a.subdivisions += b.subdivisions;
    a.converged = a.converged && b.converged;
    return a;
  }
  return adaptive_integrate(integrand, 0.0, kTwoPi, tol);
}

}  // namespace oracle
}  // namespace swapquad
