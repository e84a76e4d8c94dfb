#pragma once

#include <utility>

#include "swapquad/common.hpp"

namespace swapquad {

struct SpecialFunctionResult {
  Complex value;
  double abs_error = 0.0;
};

// J_0 or J_1 on [0, 1e4], absolute error <= 1e-13.
double bessel_j(int order, double x);

// Y_0 or Y_1 on (0, 1e4].
double bessel_y(int order, double x);

// H^(1)_0 or H^(1)_1 = J + iY on (0, 1e4], relative error <= 1e-12.
SpecialFunctionResult hankel1(int order, double x);

// (Gamma(alpha), zeta(alpha)) for alpha in (0.5, 4], alpha != 1.
std::pair<double, double> gamma_zeta(double alpha);

// J_1(x)/x, stable through x -> 0 (limit 1/2).
double bessel_j1_over_x(double x);

}  // namespace swapquad
