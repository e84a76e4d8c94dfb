#pragma once

#include <span>
#include <vector>

#include "swapquad/common.hpp"

namespace swapquad {

// 2n equispaced nodes t_j = j*pi/n on [0, 2*pi), each with weight pi/n.
struct PeriodicGrid {
  int half_order = 0;  // n
  std::vector<double> nodes;
  double weight = 0.0;
};

PeriodicGrid make_periodic_grid(int n);

// (2*pi/N) * sum of samples at the N periodic nodes.
Complex trapezoid_periodic(std::span<const Complex> samples);
double trapezoid_periodic(std::span<const double> samples);

// Endpoint-halved rule for samples at t_j = 2*pi*j/n, j = 0..n.
Complex trapezoid_nonperiodic(std::span<const Complex> samples);
double trapezoid_nonperiodic(std::span<const double> samples);

// Weights R_n(t0, t_j) approximating
//   int_0^{2pi} log(4 sin((t-t0)/2) sin((t-conj t0)/2)) f(t) dt
//   ~= (pi/n) sum_j R_n(t0, t_j) f(t_j).
// Any sign of Im t0; Im t0 = 0 reduces to the Kress weights. Direct
// summation for n <= 64, DFT beyond.
std::vector<double> log_kernel_weights(Complex t0, int n, const PeriodicGrid& grid);

// Weights K_n(t0, t_j) (Im t0 > 0 required) approximating
//   int_0^{2pi} [1/(1-e^{-i(t-t0)}) + 1/(1-e^{i(t-conj t0)})] f(t) dt.
std::vector<double> dlp_kernel_weights(Complex t0, int n, const PeriodicGrid& grid);

// Truncated expansion of the single branch 1/(1-e^{-i(t-t0)}) at the nodes,
// sum_{k=0}^{n-1} q^k + q^n/2 with q = e^{-i(t_j-t0)}; requires Im t0 > 0.
// The Im t0 < 0 case follows from 1/(1-q) = 1 - 1/(1-1/q).
std::vector<Complex> cauchy_branch_weights(Complex t0, int n, const PeriodicGrid& grid);

// Three-branch rule for the kernel 1/(z - z0) against samples of u at the 2n
// unit-circle nodes, approximating the contour integral of u(z)/(z-z0) dz/(iz).
// |z0| = 1 exists as a principal value; a node coinciding with z0 needs
// on_circle_limit, otherwise a domain error is thrown.
Complex cauchy_kernel_quadrature(Complex z0, std::span<const Complex> u_samples,
                                 bool on_circle_limit = false);

struct LaurentCoeffs {
  int k_min = 0;
  std::vector<Complex> c;  // c[k - k_min]
  double est_error = 0.0;
  bool undersampled = false;

  Complex at(int k) const { return c.at(static_cast<std::size_t>(k - k_min)); }
};

// c_k of a kernel from samples on a uniform circle grid (DFT). Intended for
// user-supplied kernels without closed-form expansions.
LaurentCoeffs laurent_coefficients(std::span<const Complex> samples, int k_min,
                                   int k_max);

// Analysis parameters used to predict error rates.
struct ConvergenceModel {
  double density_radius = 0.0;  // R > 1, 0 when unknown
  double kernel_radius = 0.0;   // r > 1, 0 when unknown
  double alpha = 1.0;           // corner exponent
  int grading_order = 1;        // p
  double im_t0 = 0.0;

  // Modified-rule estimate: (R r)^{-n}, falling back to exp(-2 n |Im t0|).
  double modified_rate(int n) const;
  // Classic-rule estimate for a kernel singular at distance |Im t0|.
  double plain_rate(int n) const;
  // Algebraic corner term n^{-alpha p}.
  double corner_rate(int n) const;
};

namespace detail {
// In-place complex DFT of any length (FFTW-backed). forward: e^{-2pi i jk/N}.
void fft(std::vector<Complex>& data, bool forward);
}  // namespace detail

}  // namespace swapquad
