#pragma once

#include <functional>
#include <string>
#include <vector>

#include "swapquad/common.hpp"

namespace swapquad {

// One analytic boundary piece, parametrized over [0, 2*pi]. The map and its
// first two derivatives accept complex parameters so that poles of the
// complexified distance function can be located off the real axis.
struct CurvePiece {
  std::function<Complex(Complex)> map;
  std::function<Complex(Complex)> deriv;
  std::function<Complex(Complex)> deriv2;
  // |Im t| beyond this is rejected; the map is assumed analytic and
  // single-valued inside the strip.
  double strip_bound = 1.5;
  // g(0) == g(2*pi) and g'(0) == g'(2*pi); single closed curve.
  bool periodic = false;
  // max |g| over the real period, used to scale tolerances.
  double scale = 1.0;

  Complex at(Complex t) const;      // throws std::domain_error outside strip
  Complex dat(Complex t) const;     // g'
  Complex ddat(Complex t) const;    // g''
};

Complex eval_curve(const CurvePiece& piece, Complex t);

// g(t) = sum_j coeff_j * exp(i * freq_j * t). Frequencies need not be
// integers (affinely rescaled pieces produce fractional ones).
struct ExpSumTerm {
  double freq;
  Complex coeff;
};

CurvePiece make_exp_sum_curve(std::vector<ExpSumTerm> terms, bool periodic,
                              double strip_bound = 1.5);

// Built-in catalog.
CurvePiece make_unit_circle();
CurvePiece make_star_curve(double amplitude = 0.3, int frequency = 5);

// Reparametrization t -> w(t) that vanishes to order p at both endpoints,
// built from the truncated arcsin Taylor series: w(t) = t - I_p(sin t).
struct SigmoidalTransform {
  int order = 0;  // p, odd, 3..15

  double operator()(double t) const;
  double dw(double t) const;
  double ddw(double t) const;
  Complex operator()(Complex t) const;
  Complex dw(Complex t) const;
  Complex ddw(Complex t) const;
};

SigmoidalTransform sigmoidal(int p);  // throws std::invalid_argument

// Piece reparametrized as t -> g(w(t)).
CurvePiece apply_sigmoidal(const CurvePiece& piece, const SigmoidalTransform& w);

double corner_alpha(double theta1, double theta2);

// Interior angle at a joint from the incoming and outgoing tangents,
// in (0, 2*pi). pi for a flat joint.
double joint_interior_angle(Complex tangent_in, Complex tangent_out);

struct PiecewiseBoundary {
  std::vector<CurvePiece> pieces;
  // Interior angle at the joint preceding piece k (between pieces k-1 and k,
  // cyclically). 0 marks an open-arc endpoint.
  std::vector<double> joint_angles;
  // Corner exponent of each piece, min over its two joints.
  std::vector<double> alphas;
  bool closed = true;

  bool contains(Complex x) const;          // winding-number test
  double distance_to_boundary(Complex x) const;

 private:
  mutable std::vector<Complex> polygon_;   // lazily sampled, read-only after fill
  const std::vector<Complex>& polygon() const;
};

// Single smooth closed curve as a boundary (no corners, alpha = 1).
PiecewiseBoundary make_smooth_boundary(CurvePiece piece);

// The inkblot contour (4 + 2|cos 4t| sin 4t) e^{it}, stored as 8 analytic
// pieces with |cos 4t| resolved per piece, each rescaled to [0, 2*pi] and
// reparametrized by the order-p sigmoidal transform.
PiecewiseBoundary make_inkblot_boundary(int p);

// Untransformed analytic piece k of the inkblot (for oracles/tests).
CurvePiece make_inkblot_piece_raw(int k);

}  // namespace swapquad
