#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "swapquad/specfun.hpp"

using namespace swapquad;

namespace {

// Test-side oracles in extended precision, fully independent of GSL.
long double j0_series(long double x) {
  long double acc = 0.0L, term = 1.0L;
  const long double q = x * x / 4.0L;
  for (int k = 0; k < 40; ++k) {
    acc += term;
    term *= -q / ((k + 1.0L) * (k + 1.0L));
  }
  return acc;
}

long double y0_series(long double x) {
  // Y0 = (2/pi)(ln(x/2)+gamma) J0 + (2/pi) sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k/(k!)^2
  const long double gammaE = 0.5772156649015328606065120900824L;
  long double sum = 0.0L, term = 1.0L, hk = 0.0L;
  const long double q = x * x / 4.0L;
  for (int k = 1; k < 40; ++k) {
    term *= q / (k * (long double)k);
    hk += 1.0L / k;
    sum += (k % 2 == 1 ? 1.0L : -1.0L) * hk * term;
  }
  const long double pi = 3.14159265358979323846264338328L;
  return 2.0L / pi * ((std::log(x / 2.0L) + gammaE) * j0_series(x) + sum);
}

long double zeta_euler_maclaurin(long double s) {
  // Dirichlet tail accelerated by Euler-Maclaurin
  const int N = 40;
  long double acc = 0.0L;
  for (int k = 1; k < N; ++k) acc += std::pow((long double)k, -s);
  const long double n = N;
  acc += std::pow(n, 1.0L - s) / (s - 1.0L) + 0.5L * std::pow(n, -s);
  // correction terms with Bernoulli numbers 1/6, -1/30, 1/42
  const long double b[] = {1.0L / 6.0L, -1.0L / 30.0L, 1.0L / 42.0L};
  long double f = s * std::pow(n, -s - 1.0L);
  acc += b[0] / 2.0L * f;
  f *= (s + 1.0L) * (s + 2.0L) / (n * n);
  acc += b[1] / 24.0L * f;
  f *= (s + 3.0L) * (s + 4.0L) / (n * n);
  acc += b[2] / 720.0L * f;
  return acc;
}

}  // namespace

TEST_CASE("bessel J trivial values and series oracle") {
  CHECK(bessel_j(0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bessel_j(1, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  const double j0_1 = static_cast<double>(j0_series(1.0L));
  CHECK(std::abs(bessel_j(0, 1.0) - j0_1) < 1e-14);
  CHECK(std::abs(bessel_j(0, 1.0) - 0.765197686557967) < 1e-13);
  // inside-range absolute accuracy spot checks
  for (double x : {0.5, 2.0, 7.5, 11.0}) {
    CHECK(std::abs(bessel_j(0, x) - static_cast<double>(j0_series(x))) < 1e-13);
  }
}

TEST_CASE("bessel domain errors") {
  CHECK_THROWS_AS((void)bessel_j(0, -1.0), std::domain_error);
  CHECK_THROWS_AS((void)bessel_j(1, 2e4), std::domain_error);
  CHECK_THROWS_AS((void)bessel_j(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)hankel1(0, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)hankel1(0, -2.0), std::domain_error);
}

TEST_CASE("hankel definition and Wronskian") {
  for (double x : {1.0, 2.0, 5.0}) {
    const auto h0 = hankel1(0, x);
    // H0 - J0 is purely imaginary
    CHECK(std::abs(h0.value.real() - bessel_j(0, x)) < 1e-14);
    const double wron = bessel_j(0, x) * bessel_y(1, x) - bessel_j(1, x) * bessel_y(0, x);
    CHECK(wron == doctest::Approx(-2.0 / (kPi * x)).epsilon(1e-13));
  }
  const auto h1 = hankel1(0, 1.0);
  CHECK(std::abs(h1.value - Complex(0.765197686557967, 0.088256964215677)) <
        1e-12 * std::abs(h1.value));
  CHECK(std::abs(h1.value.imag() - static_cast<double>(y0_series(1.0L))) < 1e-13);
  // reported error bound honors the contract
  for (double x : {1e-3, 1.0, 40.0, 1e4}) {
    const auto h = hankel1(0, x);
    CHECK(h.abs_error <= 1e-13 * std::max(1.0, std::abs(h.value)));
  }
}

TEST_CASE("derivative recurrence J0' = -J1") {
  for (double x : {0.5, 1.0, 3.0, 10.0}) {
    const double h = 1e-5;
    const double fd = (bessel_j(0, x + h) - bessel_j(0, x - h)) / (2.0 * h);
    CHECK(std::abs(fd + bessel_j(1, x)) < 1e-10);
  }
}

TEST_CASE("hankel small-argument log law") {
  // H0(x) - (2i/pi) ln x stays bounded as x -> 0+
  for (double x : {1e-4, 1e-6}) {
    const Complex v = hankel1(0, x).value - 2.0 * kImag / kPi * std::log(x);
    CHECK(std::abs(v) < 2.0);
  }
}

TEST_CASE("gamma and zeta") {
  const auto [g_half, z_half] = gamma_zeta(0.50000001);
  CHECK(g_half == doctest::Approx(std::sqrt(kPi)).epsilon(1e-6));
  (void)z_half;
  const auto [g2, z2] = gamma_zeta(2.0);
  CHECK(g2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(z2 == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-13));
  const auto [g15, z15] = gamma_zeta(1.5);
  CHECK(z15 == doctest::Approx(2.612375348685488).epsilon(1e-13));
  CHECK(z15 == doctest::Approx(static_cast<double>(zeta_euler_maclaurin(1.5L)))
                   .epsilon(1e-12));
  CHECK(g15 == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-13));
  CHECK_THROWS_AS((void)gamma_zeta(1.0), std::domain_error);
  CHECK_THROWS_AS((void)gamma_zeta(0.4), std::domain_error);
  CHECK_THROWS_AS((void)gamma_zeta(4.5), std::domain_error);
}

TEST_CASE("j1 over x is stable through zero") {
  CHECK(bessel_j1_over_x(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bessel_j1_over_x(1e-9) == doctest::Approx(0.5).epsilon(1e-12));
  for (double x : {1e-5, 1e-3, 0.5, 3.0}) {
    const double direct = bessel_j(1, x) / x;
    CHECK(bessel_j1_over_x(x) == doctest::Approx(direct).epsilon(1e-10));
  }
}
