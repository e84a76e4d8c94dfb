#include <doctest.h>

#include <cmath>
#include <random>

#include "swapquad/polefind.hpp"

using namespace swapquad;

TEST_CASE("identity map: pole equals the target") {
  // gamma(z) = z corresponds to the unit circle g(t) = e^{it}
  const CurvePiece circle = make_unit_circle();
  const PoleEstimate est = estimate_pole(circle, Complex(1.1, 0.0), 32);
  REQUIRE(est.detectable);
  CHECK(std::abs(est.z0 - Complex(1.1, 0.0)) < 1e-10);
  CHECK(est.converged);
}

TEST_CASE("identity map: center target has no pole signal") {
  const CurvePiece circle = make_unit_circle();
  const PoleEstimate est = estimate_pole(circle, Complex(0.0, 0.0), 16);
  CHECK(!est.detectable);
}

TEST_CASE("target on a node is rejected") {
  const CurvePiece circle = make_unit_circle();
  CHECK_THROWS_AS((void)estimate_pole(circle, Complex(1.0, 0.0), 16),
                  std::invalid_argument);
}

TEST_CASE("star preimage with one Newton step") {
  const CurvePiece star = make_star_curve();
  const Complex x(0.5, 1.0);
  PoleEstimate est = estimate_pole(star, x, 64);
  REQUIRE(est.detectable);
  est = refine_newton(star, x, est, 1);
  const Complex t1(1.058224887371462, 0.045168525183462);
  CHECK(std::abs(est.t0 - t1) < 1e-10);
  CHECK(est.converged);
  CHECK(est.newton_iterations <= 1);
}

TEST_CASE("small grid plus Newton reaches full residual") {
  // from the measured ~2e-2 estimate error at n=16, quadratic convergence
  // needs three steps to bottom out
  const CurvePiece star = make_star_curve();
  const Complex x(0.5, 1.0);
  PoleEstimate est = estimate_pole(star, x, 16);
  REQUIRE(est.detectable);
  const PoleEstimate two = refine_newton(star, x, est, 2);
  CHECK(two.residual <= 1e-4);
  const PoleEstimate four = refine_newton(star, x, est, 4);
  CHECK(four.residual <= 1e-12);
}

TEST_CASE("newton on an exact input is a fixed point") {
  const CurvePiece circle = make_unit_circle();
  PoleEstimate est = estimate_pole(circle, Complex(1.3, 0.2), 32);
  est = refine_newton(circle, Complex(1.3, 0.2), est, 4);
  const double res0 = est.residual;
  const PoleEstimate again = refine_newton(circle, Complex(1.3, 0.2), est, 4);
  CHECK(again.residual <= std::max(res0, 1e-14));
  CHECK(again.newton_iterations - est.newton_iterations <= 1);
}

TEST_CASE("newton converges fast for an affine-in-z map") {
  const CurvePiece curve = make_exp_sum_curve({{1.0, 2.0}, {0.0, 0.3}}, true);
  const Complex x(2.4, 0.2);
  PoleEstimate est = estimate_pole(curve, x, 16);
  est = refine_newton(curve, x, est, 3);
  CHECK(est.converged);
  CHECK(std::abs(curve.map(est.t0) - x) < 1e-12 * curve.scale);
}

TEST_CASE("halving the grid plus one Newton step is comparable") {
  const CurvePiece star = make_star_curve();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> offset(0.02, 0.1);
  const PieceSamples s32 = sample_piece(star, 32);
  const PieceSamples s16 = sample_piece(star, 16);
  for (int k = 0; k < 20; ++k) {
    const double t = angle(rng);
    const Complex x = star.map(t) * (1.0 - offset(rng));  // slightly inside
    PoleEstimate coarse = estimate_pole(s16, x);
    if (!coarse.detectable) continue;
    coarse = refine_newton(star, x, coarse, 1);
    const PoleEstimate fine = estimate_pole(s32, x);
    const double ra = std::max(coarse.residual, 1e-15);
    const double rb = std::max(fine.residual, 1e-15);
    CHECK(ra <= 100.0 * rb + 1e-12);
  }
}

TEST_CASE("conjugate symmetry for real-axis-symmetric curves") {
  const CurvePiece star = make_star_curve();
  for (Complex x : {Complex(0.5, 1.0), Complex(-0.3, 0.8), Complex(1.05, 0.1)}) {
    const PoleEstimate plus = estimate_pole(star, x, 32);
    const PoleEstimate minus = estimate_pole(star, std::conj(x), 32);
    REQUIRE(plus.detectable);
    REQUIRE(minus.detectable);
    CHECK(std::abs(minus.z0 - std::conj(plus.z0)) < 1e-9);
  }
}

TEST_CASE("side classification") {
  const CurvePiece circle = make_unit_circle();
  {
    PoleEstimate est = estimate_pole(circle, Complex(0.5, 0.0), 32);
    est = refine_newton(circle, Complex(0.5, 0.0), est, 2);
    CHECK(classify_side(est) == Side::inside);
    CHECK(est.t0.imag() == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  }
  {
    PoleEstimate est = estimate_pole(circle, Complex(2.0, 0.001), 32);
    est = refine_newton(circle, Complex(2.0, 0.001), est, 2);
    CHECK(classify_side(est) == Side::outside);
  }
  {
    const CurvePiece star = make_star_curve();
    PoleEstimate est = estimate_pole(star, Complex(0.5, 1.0), 64);
    est = refine_newton(star, Complex(0.5, 1.0), est, 1);
    CHECK(classify_side(est) == Side::inside);
  }
  {
    // pole sitting almost on a node
    const CurvePiece star = make_star_curve();
    const int n = 32;
    const double tnode = kPi * 7 / n;
    const Complex x = star.map(Complex(tnode + 1e-4, 0.01));
    PoleEstimate est = estimate_pole(star, x, n);
    est = refine_newton(star, x, est, 5);
    REQUIRE(est.converged);
    CHECK(classify_side(est) == Side::near_node);
  }
  {
    PoleEstimate bad;
    bad.converged = false;
    CHECK_THROWS_AS((void)classify_side(bad), std::runtime_error);
  }
}

TEST_CASE("far cutoff") {
  CHECK(far_cutoff(32) ==
        doctest::Approx(std::log(1.0 / 2.220446049250313e-16) / 32.0));
  // deep targets lose their pole signal entirely; that also counts as far
  const CurvePiece circle = make_unit_circle();
  const PoleEstimate deep = estimate_pole(circle, Complex(0.05, 0.0), 32);
  CHECK(!deep.detectable);
  CHECK(is_far(deep));
  // threshold branch on a converged estimate
  PoleEstimate est;
  est.detectable = true;
  est.converged = true;
  est.grid_order = 32;
  est.t0 = Complex(1.0, 2.0);
  CHECK(is_far(est));
  est.t0 = Complex(1.0, 0.5);
  CHECK(!is_far(est));
}

TEST_CASE("multistart recovers the two quoted star preimages") {
  const CurvePiece star = make_star_curve();
  const auto roots = preimages_by_multistart(star, Complex(0.5, 1.0));
  REQUIRE(roots.size() >= 2);
  const Complex t1(1.058224887371462, 0.045168525183462);
  const Complex t2(0.422785911369020, -0.293359723744667);
  CHECK(std::abs(roots[0] - t1) < 1e-9);
  CHECK(std::abs(roots[1] - t2) < 1e-9);
}
