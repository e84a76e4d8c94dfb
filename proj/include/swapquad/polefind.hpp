#pragma once

#include <vector>

#include "swapquad/common.hpp"
#include "swapquad/geometry.hpp"
#include "swapquad/quadcore.hpp"

namespace swapquad {

// Curve data sampled on the 2n-node grid; shared by the pole finder, the
// close-evaluation weights and the Nystrom assembly.
struct PieceSamples {
  const CurvePiece* piece = nullptr;
  PeriodicGrid grid;
  std::vector<Complex> z;       // e^{i t_j}
  std::vector<Complex> g;       // g(t_j)
  std::vector<Complex> dg;      // g'(t_j)
  std::vector<double> absdg;    // |g'(t_j)|
};

PieceSamples sample_piece(const CurvePiece& piece, int n);

struct PoleEstimate {
  Complex z0{};                // \hat z_0
  Complex t0{};                // -i log z0, Re in [0, 2pi)
  double residual = 0.0;       // |g(t0) - x|
  int newton_iterations = 0;
  int grid_order = 0;          // n used for the estimate
  bool converged = false;
  bool detectable = true;      // false: no pole signal (target too far/symmetric)
};

// Contour-integral estimate of the preimage g^{-1}(x) from grid samples;
// needs no initial guess. Throws std::invalid_argument if x sits on a node.
PoleEstimate estimate_pole(const PieceSamples& samples, Complex x,
                           double tol_factor = 1e-13);
PoleEstimate estimate_pole(const CurvePiece& piece, Complex x, int n,
                           double tol_factor = 1e-13);

// Newton refinement t <- t - (g(t) - x)/g'(t). Residual growth twice in a
// row stops early with converged = false; a vanishing derivative throws.
PoleEstimate refine_newton(const CurvePiece& piece, Complex x, PoleEstimate est,
                           int max_iterations, double tol_factor = 1e-13);

enum class Side { inside, outside, near_node };

// For counterclockwise closed curves: Im t0 > 0 means the target lies inside.
// near_node when t0 is within 0.2 node spacings of a grid node. Throws if the
// estimate did not converge.
Side classify_side(const PoleEstimate& est);

// Plain-rule error e^{-2n|Im t0|} already below machine precision.
double far_cutoff(int n);
bool is_far(const PoleEstimate& est);

// All preimages found by Newton from a coarse grid of starts; used to plot
// predicted rates (the quadrature estimate itself only extracts the nearest).
std::vector<Complex> preimages_by_multistart(const CurvePiece& piece, Complex x,
                                             double im_window = 0.8);

}  // namespace swapquad
