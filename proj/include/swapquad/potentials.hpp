#pragma once

#include <span>
#include <vector>

#include "swapquad/common.hpp"
#include "swapquad/polefind.hpp"

namespace swapquad {

enum class Pde { laplace, helmholtz };
enum class Layer { single, double_layer };
enum class Strategy { plain, swapped, swapped_subtraction, swapped_correction };

struct PotentialSpec {
  Pde pde = Pde::laplace;
  double kappa = 0.0;   // set iff pde == helmholtz
  Layer layer = Layer::single;
  Strategy strategy = Strategy::swapped;

  void validate() const;  // throws std::invalid_argument
};

// Density samples on one piece's 2n grid.
struct DensityGrid {
  std::vector<Complex> samples;
  // true: samples already carry |g'| (and the transform weight w');
  // accepted by the single-layer ops only.
  bool premultiplied = false;
};

void validate_density(const DensityGrid& density, std::size_t node_count);

enum class Location { inside, on_boundary, outside };

// ---------------------------------------------------------------------------
// Close-evaluation weight rows. Each returns w with
//   integral ~= sum_j w_j * q_j
// for the raw parametric integrals named below; rows double as Nystrom blocks.
// ---------------------------------------------------------------------------

// int_0^{2pi} log|x - g(t)|^2 q(t) dt, q analytic (swapped via Corollary-1
// weights; the smooth log-quotient uses a 2-term Taylor step near t0).
std::vector<double> slp_log_weights(const PieceSamples& s, Complex x, Complex t0);

// Im int_0^{2pi} g'(t)/(x - g(t)) q(t) dt with real weights (valid for
// complex q). Periodic pieces use the subtract-form swap; non-periodic
// pieces use the smooth-factor form, whose corner samples carry zero weight.
std::vector<double> dlp_swapped_weights(const PieceSamples& s, Complex x, Complex t0);

// Plain-rule counterparts.
std::vector<double> slp_log_weights_plain(const PieceSamples& s, Complex x);
std::vector<double> dlp_weights_plain(const PieceSamples& s, Complex x);

// ---------------------------------------------------------------------------
// Raw single-piece operations (paper-parametric conventions).
// ---------------------------------------------------------------------------

// int log|x-g|^2 f dt with f = samples * |g'| unless premultiplied.
double laplace_slp_close(const PieceSamples& s, const DensityGrid& density,
                         Complex x, const PoleEstimate& pole);

// Im int g'/(x-g) f dt; f = density samples (no Jacobian; it is absorbed by
// the complex kernel). mu(x) in {-2pi, -pi, 0} enters with the subtraction.
double laplace_dlp_close(const PieceSamples& s, const DensityGrid& density,
                         Complex x, const PoleEstimate& pole,
                         bool use_subtraction, Location location);

// Alternative swap wrapping the smooth factor under the kernel expansion;
// kept for accuracy comparison.
double klinteberg_dlp_close(const PieceSamples& s, const DensityGrid& density,
                            Complex x, const PoleEstimate& pole);

// Physical Helmholtz potentials: int (i/4) H0(k|x-y|) phi ds and the normal-
// derivative kernel against phi ds.
Complex helmholtz_slp_close(const PieceSamples& s, const DensityGrid& density,
                            Complex x, double kappa, const PoleEstimate& pole);
Complex helmholtz_dlp_close(const PieceSamples& s, const DensityGrid& density,
                            Complex x, double kappa, const PoleEstimate& pole,
                            bool use_subtraction, Location location);

// One piece's contribution with the subtraction shift applied to the Laplace
// part of the kernel split only (no mu term; the caller closes the identity
// once per boundary). lap_shift = 0 reduces to the unsubtracted value.
Complex helmholtz_dlp_eval(const PieceSamples& s, const DensityGrid& density,
                           Complex x, double kappa, const PoleEstimate& pole,
                           Complex lap_shift);

// Smooth residue of the Helmholtz kernel splits.
Complex helmholtz_slp_residue(double kappa, double rho);      // S(rho)
Complex helmholtz_slp_residue_origin(double kappa);           // S(0)
Complex helmholtz_dlp_residue_over_rho(double kappa, double rho);  // W(rho)/rho

// ---------------------------------------------------------------------------
// Non-periodic endpoint correction (double-layer swap variant).
// ---------------------------------------------------------------------------

enum class SwapVariant { double_layer_pair };

// Estimated quadrature error caused by a density jump u(0+) - u(2pi-) at the
// piece joint; subtract the returned value from the modified-rule result.
// Re t0 is normalized into [0, 2pi) first.
Complex nonperiodic_correction(Complex t0, int n, SwapVariant variant,
                               Complex jump);

double mu_value(Location location);  // -2pi / -pi / 0

}  // namespace swapquad
