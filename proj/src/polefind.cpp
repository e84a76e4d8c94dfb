#include "swapquad/polefind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swapquad {

namespace {

Complex branch_log_t0(Complex z0) {
  double a = std::arg(z0);
  if (a < 0.0) a += kTwoPi;
  return {a, -std::log(std::abs(z0))};
}

double residual_at(const CurvePiece& piece, Complex x, Complex t0) {
  if (std::abs(t0.imag()) > piece.strip_bound) {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(piece.map(t0) - x);
}

}  // namespace

PieceSamples sample_piece(const CurvePiece& piece, int n) {
  PieceSamples s;
  s.piece = &piece;
  s.grid = make_periodic_grid(n);
  const std::size_t N = s.grid.nodes.size();
  s.z.resize(N);
  s.g.resize(N);
  s.dg.resize(N);
  s.absdg.resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double t = s.grid.nodes[j];
    s.z[j] = std::exp(Complex(0.0, t));
    s.g[j] = piece.map(t);
    s.dg[j] = piece.deriv(t);
    s.absdg[j] = std::abs(s.dg[j]);
  }
  return s;
}

PoleEstimate estimate_pole(const PieceSamples& samples, Complex x,
                           double tol_factor) {
  const CurvePiece& piece = *samples.piece;
  const int n = samples.grid.half_order;
  PoleEstimate est;
  est.grid_order = n;

  // z^n at the nodes is (-1)^j and z^{n-1} = (-1)^j conj(z).
  Complex num = 0.0, den = 0.0;
  double den_mag = 0.0;
  for (std::size_t j = 0; j < samples.z.size(); ++j) {
    const Complex diff = samples.g[j] - x;
    if (std::abs(diff) < 1e-14 * piece.scale) {
      throw std::invalid_argument("target coincides with a quadrature node");
    }
    const Complex w = samples.dg[j] / diff;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    num += sign * w;
    den += sign * std::conj(samples.z[j]) * w;
    den_mag += std::abs(w);
  }
  // a denominator at the cancellation-noise level carries no pole signal
  if (std::abs(den) < std::max(1e-300, 1e-12 * den_mag)) {
    est.detectable = false;
    est.converged = false;
    return est;
  }
  est.z0 = num / den;
  est.t0 = branch_log_t0(est.z0);
  est.residual = residual_at(piece, x, est.t0);
  est.converged = est.residual <= tol_factor * piece.scale;
  return est;
}

PoleEstimate estimate_pole(const CurvePiece& piece, Complex x, int n,
                           double tol_factor) {
  return estimate_pole(sample_piece(piece, n), x, tol_factor);
}

PoleEstimate refine_newton(const CurvePiece& piece, Complex x, PoleEstimate est,
                           int max_iterations, double tol_factor) {
  if (!est.detectable || !std::isfinite(est.t0.real()) ||
      !std::isfinite(est.t0.imag())) {
    throw std::invalid_argument("refine_newton needs a finite estimate");
  }
  Complex t = est.t0;
  double res = est.residual;
  int growth_streak = 0;
  for (int it = 0; it < max_iterations; ++it) {
    if (res <= tol_factor * piece.scale) break;
    if (std::abs(t.imag()) > piece.strip_bound) {
      est.converged = false;
      est.t0 = t;
      est.residual = res;
      return est;
    }
    const Complex dg = piece.deriv(t);
    if (std::abs(dg) < 1e-14 * piece.scale) {
      throw std::domain_error("refine_newton: degenerate derivative g'(t0) ~ 0");
    }
    const Complex step = (piece.map(t) - x) / dg;
    const Complex t_next = t - step;
    const double res_next = residual_at(piece, x, t_next);
    est.newton_iterations += 1;
    if (res_next >= res) {
      growth_streak += 1;
      if (growth_streak >= 2) {
        est.converged = false;
        est.t0 = t;
        est.residual = res;
        est.z0 = std::exp(Complex(0.0, 1.0) * t);
        return est;
      }
    } else {
      growth_streak = 0;
    }
    t = t_next;
    res = res_next;
  }
  // normalize the real part into [0, 2pi)
  double re = std::fmod(t.real(), kTwoPi);
  if (re < 0.0) re += kTwoPi;
  t = Complex(re, t.imag());
  est.t0 = t;
  est.z0 = std::exp(Complex(0.0, 1.0) * t);
  est.residual = res;
  est.converged = res <= tol_factor * piece.scale;
  return est;
}

Side classify_side(const PoleEstimate& est) {
  if (!est.converged) {
    throw std::runtime_error("classify_side: estimate did not converge");
  }
  const double spacing = kPi / est.grid_order;
  const double j_star = std::round(est.t0.real() / spacing);
  const Complex nearest(j_star * spacing, 0.0);
  if (std::abs(est.t0 - nearest) < 0.2 * spacing) return Side::near_node;
  return est.t0.imag() > 0.0 ? Side::inside : Side::outside;
}

double far_cutoff(int n) {
  return std::log(1.0 / std::numeric_limits<double>::epsilon()) / n;
}

bool is_far(const PoleEstimate& est) {
  if (!est.detectable) return true;
  return std::abs(est.t0.imag()) > far_cutoff(est.grid_order);
}

std::vector<Complex> preimages_by_multistart(const CurvePiece& piece, Complex x,
                                             double im_window) {
  std::vector<Complex> roots;
  const double bound = std::min(im_window, piece.strip_bound * 0.95);
  for (int ir = 0; ir < 24; ++ir) {
    for (int ii = -6; ii <= 6; ++ii) {
      Complex t(kTwoPi * ir / 24.0, bound * ii / 6.0);
      bool ok = true;
      for (int it = 0; it < 60; ++it) {
        Complex g, dg;
        try {
          g = piece.map(t);
          dg = piece.deriv(t);
        } catch (const std::domain_error&) {
          ok = false;
          break;
        }
        if (std::abs(dg) < 1e-14) {
          ok = false;
          break;
        }
        const Complex step = (g - x) / dg;
        t -= step;
        if (std::abs(t.imag()) > piece.strip_bound) {
          ok = false;
          break;
        }
        if (std::abs(step) < 1e-14) break;
      }
      if (!ok || std::abs(piece.map(t) - x) > 1e-10 * piece.scale) continue;
      double re = std::fmod(t.real(), kTwoPi);
      if (re < 0.0) re += kTwoPi;
      t = Complex(re, t.imag());
      const bool dup = std::any_of(roots.begin(), roots.end(), [&](Complex r) {
        return std::abs(r - t) < 1e-8;
      });
      if (!dup) roots.push_back(t);
    }
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return std::abs(a.imag()) < std::abs(b.imag());
  });
  return roots;
}

}  // namespace swapquad
