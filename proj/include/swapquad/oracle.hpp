#pragma once

#include <functional>
#include <span>
#include <vector>

#include "swapquad/common.hpp"
#include "swapquad/geometry.hpp"

namespace swapquad {
namespace oracle {

struct ReferenceResult {
  Complex value;
  double est_error = 0.0;
  int subdivisions = 0;
  bool converged = true;
};

// Recursive bisection with a fixed 15-point Gauss-Legendre panel rule.
// Endpoint singularities are fine as long as the integrand stays finite on
// the open interval. Depth cap 40; on hitting it the best value is returned
// with converged = false.
ReferenceResult adaptive_integrate(const std::function<Complex(double)>& f,
                                   double a, double b, double tol);

// Band-limited continuation through 2n periodic samples.
std::function<Complex(double)> trig_interpolant(std::vector<Complex> samples);

// Windowed barycentric interpolation through samples at t_j = j*pi/n
// (j = 0..2n-1) for non-periodic pieces.
std::function<Complex(double)> local_poly_interpolant(std::vector<Complex> samples);

enum class OracleKernel {
  laplace_slp_param,   // int log|x-g(t)|^2 f(t) dt
  laplace_dlp_param,   // Im int g'(t)/(x-g(t)) f(t) dt
  helmholtz_slp,       // int (i/4) H0(k|x-g|) f |g'| dt
  helmholtz_dlp,       // int (ik/4) H1(k rho) (x-g).n/rho f |g'| dt
};

// Adaptive integration of the raw kernel against an interpolated density.
// split_at concentrates refinement when the target is nearly singular.
ReferenceResult oracle_layer_potential(const CurvePiece& piece,
                                       const std::function<Complex(double)>& density,
                                       Complex x, OracleKernel kernel,
                                       double kappa = 0.0, double tol = 1e-13,
                                       double split_at = -1.0);

}  // namespace oracle
}  // namespace swapquad
