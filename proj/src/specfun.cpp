#include "swapquad/specfun.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_gamma.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swapquad {

namespace {

struct GslQuietInit {
  GslQuietInit() { gsl_set_error_handler_off(); }
};
const GslQuietInit gsl_quiet_init{};

void check_order(int order) {
  if (order != 0 && order != 1) {
    throw std::invalid_argument("bessel order must be 0 or 1");
  }
}

}  // namespace

double bessel_j(int order, double x) {
  check_order(order);
  if (!(x >= 0.0) || x > 1e4) {
    throw std::domain_error("bessel_j requires 0 <= x <= 1e4");
  }
  return order == 0 ? gsl_sf_bessel_J0(x) : gsl_sf_bessel_J1(x);
}

double bessel_y(int order, double x) {
  check_order(order);
  if (!(x > 0.0) || x > 1e4) {
    throw std::domain_error("bessel_y requires 0 < x <= 1e4");
  }
  return order == 0 ? gsl_sf_bessel_Y0(x) : gsl_sf_bessel_Y1(x);
}

SpecialFunctionResult hankel1(int order, double x) {
  check_order(order);
  if (!(x > 0.0) || x > 1e4) {
    throw std::domain_error("hankel1 requires 0 < x <= 1e4 (log singularity at 0)");
  }
  gsl_sf_result j{}, y{};
  const int sj = order == 0 ? gsl_sf_bessel_J0_e(x, &j) : gsl_sf_bessel_J1_e(x, &j);
  const int sy = order == 0 ? gsl_sf_bessel_Y0_e(x, &y) : gsl_sf_bessel_Y1_e(x, &y);
  if (sj != GSL_SUCCESS || sy != GSL_SUCCESS) {
    throw std::domain_error("hankel1 evaluation failed");
  }
  const Complex value(j.val, y.val);
  // rounding plus the large-argument phase uncertainty x*eps*|H'|
  const double eps = std::numeric_limits<double>::epsilon();
  const double est = eps * (4.0 * std::max(1.0, std::abs(value)) +
                            std::sqrt(2.0 * x / 3.14159265358979323846));
  return {value, est};
}

std::pair<double, double> gamma_zeta(double alpha) {
  if (!(alpha > 0.5) || alpha > 4.0 || alpha == 1.0) {
    throw std::domain_error("gamma_zeta requires alpha in (0.5, 4], alpha != 1");
  }
  return {gsl_sf_gamma(alpha), gsl_sf_zeta(alpha)};
}

double bessel_j1_over_x(double x) {
  if (std::abs(x) < 1e-4) {
    // J_1(x)/x = 1/2 - x^2/16 + x^4/384 - ...
    const double x2 = x * x;
    return 0.5 - x2 / 16.0 + x2 * x2 / 384.0;
  }
  return gsl_sf_bessel_J1(x) / x;
}

}  // namespace swapquad
