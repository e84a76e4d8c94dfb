#include "swapquad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace swapquad {

namespace {

constexpr int kScaleSamples = 512;

double sampled_scale(const std::function<Complex(Complex)>& g) {
  double s = 0.0;
  for (int j = 0; j < kScaleSamples; ++j) {
    s = std::max(s, std::abs(g(kTwoPi * j / kScaleSamples)));
  }
  return s > 0.0 ? s : 1.0;
}

// Central binomial / arcsin Taylor coefficients:
// b_m = (2m)! / (4^m (m!)^2),  c_m = b_m / (2m+1),  arcsin(s) = sum c_m s^{2m+1}.
struct ArcsinCoeffs {
  std::vector<double> b, c;
  explicit ArcsinCoeffs(int count) {
    b.resize(count);
    c.resize(count);
    double bm = 1.0;
    for (int m = 0; m < count; ++m) {
      if (m > 0) bm *= (2.0 * m - 1.0) / (2.0 * m);
      b[m] = bm;
      c[m] = bm / (2.0 * m + 1.0);
    }
  }
};

const ArcsinCoeffs& arcsin_coeffs() {
  static const ArcsinCoeffs table(240);
  return table;
}

constexpr double kSeriesSinLimit = 0.9;
constexpr double kSeriesReLimit = 1.45;  // < pi/2, where arcsin(sin t) == t

template <typename T>
struct SigEval {
  T w, dw, ddw;
};

// w, w', w'' of the order-p transform at u with Re u in [0, pi]. Near the
// endpoint the direct form t - I_p(sin t) cancels catastrophically, so the
// tail of the arcsin series is summed there instead.
template <typename T>
SigEval<T> sig_eval_half(int p, T u) {
  const auto& tab = arcsin_coeffs();
  const int M = (p - 1) / 2;  // I_p keeps m = 0..M-1; the tail starts at M
  const T s = std::sin(u);
  const T cu = std::cos(u);
  const T s2 = s * s;
  const bool series = std::abs(s) < kSeriesSinLimit &&
                      std::abs(std::real(Complex(u))) < kSeriesReLimit;
  if (series) {
    if (std::abs(s) < 1e-150) return {T(0), T(0), T(0)};
    T peven = T(1);
    for (int m = 0; m < M; ++m) peven *= s2;  // s^{2M}
    // w = sum_{m>=M} c_m s^{2m+1};  A = w'/cos = sum b_m s^{2m};  A' likewise.
    T wsum = T(0), asum = T(0), apsum = T(0);
    for (int m = M; m < static_cast<int>(tab.b.size()); ++m) {
      const T term = tab.b[m] * peven;
      wsum += term * s / (2.0 * m + 1.0);
      asum += term;
      apsum += 2.0 * m * term / s;
      peven *= s2;
      if (std::abs(term) < 1e-20 * (std::abs(asum) + 1e-300)) break;
    }
    return {wsum, asum * cu, apsum * cu * cu - asum * s};
  }
  T ip = T(0), ipd = T(0), ipdd = T(0);
  T podd = s, peven = T(1), pddm = s;  // s^{2m+1}, s^{2m}, s^{2m-1} (m>=1)
  for (int m = 0; m < M; ++m) {
    ip += tab.c[m] * podd;
    ipd += tab.b[m] * peven;
    if (m >= 1) {
      ipdd += 2.0 * m * tab.b[m] * pddm;
      pddm *= s2;
    }
    podd *= s2;
    peven *= s2;
  }
  return {u - ip, T(1) - ipd * cu, -ipdd * cu * cu + ipd * s};
}

template <typename T>
SigEval<T> sig_eval(int p, T t) {
  const bool reflect = std::real(Complex(t)) > kPi;
  const T u = reflect ? T(kTwoPi) - t : t;
  const SigEval<T> e = sig_eval_half(p, u);
  if (reflect) return {T(kTwoPi) - e.w, e.dw, -e.ddw};
  return e;
}

}  // namespace

Complex CurvePiece::at(Complex t) const {
  if (std::abs(t.imag()) > strip_bound + 1e-12) {
    throw std::domain_error("curve parameter outside analyticity strip");
  }
  return map(t);
}

Complex CurvePiece::dat(Complex t) const {
  if (std::abs(t.imag()) > strip_bound + 1e-12) {
    throw std::domain_error("curve parameter outside analyticity strip");
  }
  return deriv(t);
}

Complex CurvePiece::ddat(Complex t) const {
  if (std::abs(t.imag()) > strip_bound + 1e-12) {
    throw std::domain_error("curve parameter outside analyticity strip");
  }
  return deriv2(t);
}

Complex eval_curve(const CurvePiece& piece, Complex t) { return piece.at(t); }

CurvePiece make_exp_sum_curve(std::vector<ExpSumTerm> terms, bool periodic,
                              double strip_bound) {
  auto eval = [terms](Complex t, int order) {
    Complex acc = 0.0;
    for (const auto& [freq, coeff] : terms) {
      Complex c = coeff;
      for (int d = 0; d < order; ++d) c *= Complex(0.0, freq);
      acc += c * std::exp(Complex(0.0, freq) * t);
    }
    return acc;
  };
  CurvePiece piece;
  piece.map = [eval](Complex t) { return eval(t, 0); };
  piece.deriv = [eval](Complex t) { return eval(t, 1); };
  piece.deriv2 = [eval](Complex t) { return eval(t, 2); };
  piece.strip_bound = strip_bound;
  piece.periodic = periodic;
  piece.scale = sampled_scale(piece.map);
  return piece;
}

CurvePiece make_unit_circle() { return make_exp_sum_curve({{1.0, 1.0}}, true); }

CurvePiece make_star_curve(double amplitude, int frequency) {
  // (1 + a cos(k t)) e^{it} = e^{it} + (a/2) e^{i(k+1)t} + (a/2) e^{i(1-k)t}
  return make_exp_sum_curve({{1.0, 1.0},
                             {double(frequency) + 1.0, amplitude / 2.0},
                             {1.0 - double(frequency), amplitude / 2.0}},
                            true);
}

double SigmoidalTransform::operator()(double t) const { return sig_eval(order, t).w; }
double SigmoidalTransform::dw(double t) const { return sig_eval(order, t).dw; }
double SigmoidalTransform::ddw(double t) const { return sig_eval(order, t).ddw; }
Complex SigmoidalTransform::operator()(Complex t) const { return sig_eval(order, t).w; }
Complex SigmoidalTransform::dw(Complex t) const { return sig_eval(order, t).dw; }
Complex SigmoidalTransform::ddw(Complex t) const { return sig_eval(order, t).ddw; }

SigmoidalTransform sigmoidal(int p) {
  if (p < 3 || p > 15 || p % 2 == 0) {
    throw std::invalid_argument("sigmoidal order must be odd and in [3, 15]");
  }
  return SigmoidalTransform{p};
}

CurvePiece apply_sigmoidal(const CurvePiece& piece, const SigmoidalTransform& w) {
  CurvePiece out;
  const CurvePiece base = piece;
  out.map = [base, w](Complex t) { return base.map(w(t)); };
  out.deriv = [base, w](Complex t) { return base.deriv(w(t)) * w.dw(t); };
  out.deriv2 = [base, w](Complex t) {
    const Complex wt = w(t), dwt = w.dw(t);
    return base.deriv2(wt) * dwt * dwt + base.deriv(wt) * w.ddw(t);
  };
  // The transform roughly doubles imaginary excursions mid-interval.
  out.strip_bound = 0.5 * piece.strip_bound;
  out.periodic = false;
  out.scale = piece.scale;
  return out;
}

double corner_alpha(double theta1, double theta2) {
  const double a1 = kPi / (kPi + std::abs(kPi - theta1));
  const double a2 = kPi / (kPi + std::abs(kPi - theta2));
  return std::min(a1, a2);
}

double joint_interior_angle(Complex tangent_in, Complex tangent_out) {
  const double turn = std::arg(tangent_out / tangent_in);
  double theta = kPi - turn;
  if (theta <= 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta -= kTwoPi;
  return theta;
}

const std::vector<Complex>& PiecewiseBoundary::polygon() const {
  if (polygon_.empty()) {
    constexpr int kPerPiece = 512;
    polygon_.reserve(pieces.size() * kPerPiece);
    for (const auto& piece : pieces) {
      for (int j = 0; j < kPerPiece; ++j) {
        polygon_.push_back(piece.map(kTwoPi * j / kPerPiece));
      }
    }
  }
  return polygon_;
}

bool PiecewiseBoundary::contains(Complex x) const {
  const auto& poly = polygon();
  double winding = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Complex a = poly[k] - x;
    const Complex b = poly[(k + 1) % poly.size()] - x;
    winding += std::arg(b / a);
  }
  return std::abs(winding) > kPi;
}

double PiecewiseBoundary::distance_to_boundary(Complex x) const {
  const auto& poly = polygon();
  double d = std::numeric_limits<double>::infinity();
  for (const Complex& p : poly) d = std::min(d, std::abs(x - p));
  return d;
}

PiecewiseBoundary make_smooth_boundary(CurvePiece piece) {
  PiecewiseBoundary b;
  b.pieces.push_back(std::move(piece));
  b.joint_angles = {kPi};
  b.alphas = {1.0};
  b.closed = true;
  return b;
}

CurvePiece make_inkblot_piece_raw(int k) {
  // Global map (4 + 2|cos 4t| sin 4t) e^{it}; on piece k (t in
  // [pi/8 + k pi/4, pi/8 + (k+1) pi/4]) the absolute value resolves to
  // sign s = (-1)^{k+1}, giving (4 + s sin 8t) e^{it}.
  const double a = kPi / 8.0 + k * kPi / 4.0;
  const double sign = (k % 2 == 0) ? -1.0 : 1.0;
  const Complex half_i = 1.0 / Complex(0.0, 2.0);
  // Global harmonics 4 e^{it} + s/(2i) (e^{i9t} - e^{-i7t}), shifted and
  // rescaled by t = a + tau/8.
  std::vector<ExpSumTerm> terms = {
      {1.0 / 8.0, 4.0 * std::exp(Complex(0.0, 1.0) * a)},
      {9.0 / 8.0, sign * half_i * std::exp(Complex(0.0, 9.0) * a)},
      {-7.0 / 8.0, -sign * half_i * std::exp(Complex(0.0, -7.0) * a)},
  };
  return make_exp_sum_curve(std::move(terms), false);
}

PiecewiseBoundary make_inkblot_boundary(int p) {
  const SigmoidalTransform w = sigmoidal(p);
  PiecewiseBoundary b;
  b.closed = true;
  std::vector<CurvePiece> raw;
  for (int k = 0; k < 8; ++k) raw.push_back(make_inkblot_piece_raw(k));
  for (int k = 0; k < 8; ++k) {
    const CurvePiece& prev = raw[(k + 7) % 8];
    b.joint_angles.push_back(
        joint_interior_angle(prev.deriv(kTwoPi), raw[k].deriv(0.0)));
  }
  for (int k = 0; k < 8; ++k) {
    b.alphas.push_back(
        corner_alpha(b.joint_angles[k], b.joint_angles[(k + 1) % 8]));
    b.pieces.push_back(apply_sigmoidal(raw[k], w));
  }
  return b;
}

}  // namespace swapquad
