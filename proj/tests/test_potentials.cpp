#include <doctest.h>

#include <cmath>
#include <random>

#include "swapquad/oracle.hpp"
#include "swapquad/potentials.hpp"
#include "swapquad/specfun.hpp"

using namespace swapquad;

namespace {

DensityGrid grid_density(const PieceSamples& s,
                         const std::function<Complex(double)>& f) {
  DensityGrid d;
  d.samples.resize(s.grid.nodes.size());
  for (std::size_t j = 0; j < d.samples.size(); ++j) {
    d.samples[j] = f(s.grid.nodes[j]);
  }
  return d;
}

PoleEstimate pole_for(const CurvePiece& piece, const PieceSamples& s, Complex x,
                      int newton = 1) {
  PoleEstimate est = estimate_pole(s, x);
  if (est.detectable) est = refine_newton(piece, x, est, newton);
  return est;
}

}  // namespace

TEST_CASE("spec validation") {
  PotentialSpec spec;
  spec.pde = Pde::helmholtz;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.kappa = 3.0;
  CHECK_NOTHROW(spec.validate());
  spec.strategy = Strategy::swapped_subtraction;
  spec.layer = Layer::single;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.layer = Layer::double_layer;
  CHECK_NOTHROW(spec.validate());

  DensityGrid bad;
  bad.samples = {1.0, std::nan("")};
  CHECK_THROWS_AS(validate_density(bad, 2), std::invalid_argument);
  DensityGrid odd;
  odd.samples = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(validate_density(odd, 3), std::invalid_argument);
}

TEST_CASE("laplace single layer close evaluation") {
  const CurvePiece star = make_star_curve();
  const PieceSamples s = sample_piece(star, 64);

  SUBCASE("zero density integrates to zero") {
    const DensityGrid zero = grid_density(s, [](double) { return Complex(0.0); });
    const PoleEstimate pole = pole_for(star, s, Complex(0.5, 1.0));
    CHECK(laplace_slp_close(s, zero, Complex(0.5, 1.0), pole) == 0.0);
  }

  SUBCASE("circle center: mean of log is zero, via the plain fallback") {
    const CurvePiece circle = make_unit_circle();
    const PieceSamples cs = sample_piece(circle, 16);
    DensityGrid ones = grid_density(cs, [](double) { return Complex(1.0); });
    ones.premultiplied = true;
    const PoleEstimate pole = estimate_pole(cs, Complex(0.0, 0.0));
    CHECK(!pole.detectable);
    CHECK(std::abs(laplace_slp_close(cs, ones, Complex(0.0, 0.0), pole)) < 1e-13);
  }

  SUBCASE("near-boundary value matches the oracle to twelve digits") {
    auto f = [](double t) { return Complex(std::exp(std::cos(t)) * (1.0 + 0.3 * std::sin(2.0 * t))); };
    const DensityGrid d = grid_density(s, f);
    const Complex x(0.5, 1.0);
    const PoleEstimate pole = pole_for(star, s, x);
    const double got = laplace_slp_close(s, d, x, pole);
    // oracle integrates the same band-limited density continuation
    std::vector<Complex> fs(d.samples.size());
    for (std::size_t j = 0; j < fs.size(); ++j) fs[j] = d.samples[j] * s.absdg[j];
    const auto density = oracle::trig_interpolant(fs);
    const auto ref = oracle::oracle_layer_potential(
        star, density, x, oracle::OracleKernel::laplace_slp_param, 0.0, 1e-13,
        pole.t0.real());
    CHECK(std::abs(got - ref.value.real()) <= 1e-12 * std::abs(ref.value.real()));
  }

  SUBCASE("premultiplied and raw densities agree") {
    auto f = [](double t) { return Complex(1.0 + 0.5 * std::cos(t)); };
    DensityGrid raw = grid_density(s, f);
    DensityGrid pre = raw;
    pre.premultiplied = true;
    for (std::size_t j = 0; j < pre.samples.size(); ++j) pre.samples[j] *= s.absdg[j];
    const Complex x(0.9, 0.35);
    const PoleEstimate pole = pole_for(star, s, x);
    CHECK(laplace_slp_close(s, raw, x, pole) ==
          doctest::Approx(laplace_slp_close(s, pre, x, pole)).epsilon(1e-14));
  }
}

TEST_CASE("laplace double layer: jump identity and subtraction") {
  const CurvePiece star = make_star_curve();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> box(-1.4, 1.4);

  SUBCASE("unit density returns mu(x) at random targets") {
    const PiecewiseBoundary boundary = make_smooth_boundary(make_star_curve());
    for (int n : {8, 16, 32}) {
      const PieceSamples s = sample_piece(star, n);
      const DensityGrid ones = grid_density(s, [](double) { return Complex(1.0); });
      int inside_count = 0, outside_count = 0;
      while (inside_count + outside_count < 40) {
        const Complex x(box(rng), box(rng));
        if (boundary.distance_to_boundary(x) < 1e-3) continue;
        const bool inside = boundary.contains(x);
        const PoleEstimate pole = pole_for(star, s, x);
        const Location loc = inside ? Location::inside : Location::outside;
        const double got = laplace_dlp_close(s, ones, x, pole, false, loc);
        const double expect = inside ? -kTwoPi : 0.0;
        CHECK(std::abs(got - expect) < 1e-11);
        (inside ? inside_count : outside_count) += 1;
      }
      CHECK(inside_count > 0);
      CHECK(outside_count > 0);
    }
  }

  SUBCASE("subtraction keeps twelve digits right next to a node") {
    const int n = 64;
    const PieceSamples s = sample_piece(star, n);
    auto f = [](double t) { return Complex(1.0 + 0.4 * std::cos(3.0 * t)); };
    const DensityGrid d = grid_density(s, f);
    // target just inside the curve, aligned with a node image
    const double tn = s.grid.nodes[24];
    const Complex x = star.map(Complex(tn, 1e-7));
    const PoleEstimate pole = pole_for(star, s, x, 2);
    REQUIRE(pole.converged);
    const double with_sub = laplace_dlp_close(s, d, x, pole, true, Location::inside);
    const auto density = oracle::trig_interpolant(d.samples);
    const auto ref = oracle::oracle_layer_potential(
        star, density, x, oracle::OracleKernel::laplace_dlp_param, 0.0, 1e-13,
        pole.t0.real());
    CHECK(std::abs(with_sub - ref.value.real()) <=
          1e-12 * std::max(1.0, std::abs(ref.value.real())));
  }

  SUBCASE("subtraction is neutral away from the nodes") {
    const int n = 32;
    const PieceSamples s = sample_piece(star, n);
    auto f = [](double t) { return Complex(std::cos(t)); };
    const DensityGrid d = grid_density(s, f);
    // mid-between nodes, moderately close
    const double tmid = s.grid.nodes[10] + 0.5 * s.grid.weight;
    const Complex x = star.map(Complex(tmid, 0.08));
    const PoleEstimate pole = pole_for(star, s, x);
    const double a = laplace_dlp_close(s, d, x, pole, false, Location::inside);
    const double b = laplace_dlp_close(s, d, x, pole, true, Location::inside);
    CHECK(std::abs(a - b) < 1e-11);
  }

  SUBCASE("premultiplied densities are rejected") {
    const PieceSamples s = sample_piece(star, 8);
    DensityGrid pre = grid_density(s, [](double) { return Complex(1.0); });
    pre.premultiplied = true;
    const PoleEstimate pole = pole_for(star, s, Complex(0.4, 0.2));
    CHECK_THROWS_AS(
        (void)laplace_dlp_close(s, pre, Complex(0.4, 0.2), pole, false,
                                Location::inside),
        std::invalid_argument);
  }
}

TEST_CASE("strategy consistency far from the boundary") {
  const CurvePiece star = make_star_curve();
  const PieceSamples s = sample_piece(star, 32);
  auto f = [](double t) { return Complex(1.0 + 0.2 * std::sin(t)); };
  const DensityGrid d = grid_density(s, f);
  const Complex x(0.1, 0.05);  // deep inside
  const PoleEstimate pole = pole_for(star, s, x, 3);
  PoleEstimate forced_plain = pole;
  forced_plain.converged = false;
  for (bool slp : {true, false}) {
    double a, b;
    if (slp) {
      a = laplace_slp_close(s, d, x, pole);
      b = laplace_slp_close(s, d, x, forced_plain);
    } else {
      a = laplace_dlp_close(s, d, x, pole, false, Location::inside);
      b = laplace_dlp_close(s, d, x, forced_plain, false, Location::inside);
    }
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("klinteberg swap variant") {
  const CurvePiece star = make_star_curve();
  const PieceSamples s = sample_piece(star, 48);
  const PiecewiseBoundary boundary = make_smooth_boundary(make_star_curve());

  SUBCASE("unit density inside gives -2 pi") {
    const DensityGrid ones = grid_density(s, [](double) { return Complex(1.0); });
    const Complex x(0.45, 0.9);
    REQUIRE(boundary.contains(x));
    const PoleEstimate pole = pole_for(star, s, x);
    CHECK(std::abs(klinteberg_dlp_close(s, ones, x, pole) + kTwoPi) < 1e-10);
  }

  SUBCASE("agreement and accuracy ordering against the subtract-form") {
    auto f = [](double t) { return Complex(1.0 + 0.4 * std::cos(2.0 * t)); };
    const DensityGrid d = grid_density(s, f);
    const auto density = oracle::trig_interpolant(d.samples);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int better = 0, total = 0, agree = 0;
    for (int k = 0; k < 50; ++k) {
      const double tre = kTwoPi * u01(rng);
      const double tim = 0.002 + 0.1 * u01(rng);
      const Complex x = star.map(Complex(tre, tim));
      const PoleEstimate pole = pole_for(star, s, x, 2);
      if (!pole.converged) continue;
      const double swapped = laplace_dlp_close(s, d, x, pole, false, Location::inside);
      const double klint = klinteberg_dlp_close(s, d, x, pole);
      const auto ref = oracle::oracle_layer_potential(
          star, density, x, oracle::OracleKernel::laplace_dlp_param, 0.0, 1e-13,
          pole.t0.real());
      const double err_s = std::abs(swapped - ref.value.real());
      const double err_k = std::abs(klint - ref.value.real());
      if (std::abs(swapped - klint) <= 1e-7) ++agree;
      if (err_s <= err_k + 1e-15) ++better;
      ++total;
    }
    REQUIRE(total >= 40);
    CHECK(agree == total);
    CHECK(better * 10 >= total * 8);  // subtract-form at least as accurate 80% of the time
  }
}

TEST_CASE("helmholtz single layer close evaluation") {
  const CurvePiece star = make_star_curve();
  const PieceSamples s = sample_piece(star, 64);
  auto f = [](double t) { return Complex(1.0 + 0.3 * std::cos(2.0 * t), 0.2 * std::sin(t)); };
  const DensityGrid d = grid_density(s, f);

  SUBCASE("matches the oracle near the boundary") {
    const double kappa = 3.0;
    const Complex x(0.5, 1.0);
    const PoleEstimate pole = pole_for(star, s, x);
    const Complex got = helmholtz_slp_close(s, d, x, kappa, pole);
    const auto density = oracle::trig_interpolant(d.samples);
    const auto ref = oracle::oracle_layer_potential(
        star, density, x, oracle::OracleKernel::helmholtz_slp, kappa, 1e-13,
        pole.t0.real());
    CHECK(std::abs(got - ref.value) <= 1e-10 * std::abs(ref.value));
  }

  SUBCASE("small wavenumber reduces to the Laplace kernel plus a constant") {
    const double kappa = 1e-3;
    const Complex x(0.6, 0.9);
    const PoleEstimate pole = pole_for(star, s, x);
    const Complex got = helmholtz_slp_close(s, d, x, kappa, pole);
    const double lap = laplace_slp_close(s, d, x, pole);
    // (i/4)H0(k rho) = -(1/2pi) ln rho + S(0) + O(k^2 rho^2 ln)
    Complex mass = 0.0;
    for (std::size_t j = 0; j < d.samples.size(); ++j) {
      mass += s.grid.weight * d.samples[j] * s.absdg[j];
    }
    const Complex expect = -lap / (4.0 * kPi) + helmholtz_slp_residue_origin(kappa) * mass;
    CHECK(std::abs(got - expect) < 1e-5 * std::abs(got));
  }

  SUBCASE("side independence across the boundary") {
    const double kappa = 3.0;
    const double t0r = 2.3;
    const Complex inner = star.map(Complex(t0r, 1e-8));
    const Complex outer = star.map(Complex(t0r, -1e-8));
    const PoleEstimate pi_ = pole_for(star, s, inner, 2);
    const PoleEstimate po_ = pole_for(star, s, outer, 2);
    const Complex vi = helmholtz_slp_close(s, d, inner, kappa, pi_);
    const Complex vo = helmholtz_slp_close(s, d, outer, kappa, po_);
    CHECK(std::abs(vi - vo) < 1e-6 * star.scale);
  }
}

TEST_CASE("helmholtz double layer close evaluation") {
  const CurvePiece star = make_star_curve();
  const PieceSamples s = sample_piece(star, 64);

  SUBCASE("matches the oracle near the boundary") {
    auto f = [](double t) { return Complex(std::cos(t), 0.5 * std::sin(2.0 * t)); };
    const DensityGrid d = grid_density(s, f);
    const double kappa = 3.0;
    const Complex x(0.5, 1.0);
    const PoleEstimate pole = pole_for(star, s, x);
    const Complex got = helmholtz_dlp_close(s, d, x, kappa, pole, false, Location::inside);
    const auto density = oracle::trig_interpolant(d.samples);
    const auto ref = oracle::oracle_layer_potential(
        star, density, x, oracle::OracleKernel::helmholtz_dlp, kappa, 1e-13,
        pole.t0.real());
    CHECK(std::abs(got - ref.value) <= 1e-10 * std::abs(ref.value));
  }

  SUBCASE("unit-density jump across a smooth boundary point") {
    const DensityGrid ones = grid_density(s, [](double) { return Complex(1.0); });
    const double kappa = 3.0;
    const double tr = 1.7;
    const Complex x_in = star.map(Complex(tr, 1e-6));
    const Complex x_out = star.map(Complex(tr, -1e-6));
    const PoleEstimate p_in = pole_for(star, s, x_in, 2);
    const PoleEstimate p_out = pole_for(star, s, x_out, 2);
    const Complex di = helmholtz_dlp_close(s, ones, x_in, kappa, p_in, false,
                                           Location::inside) / kTwoPi * kTwoPi;
    const Complex dd = helmholtz_dlp_close(s, ones, x_out, kappa, p_out, false,
                                           Location::outside);
    // normalized jump of magnitude one: raw kernels carry 1/(2 pi) inside
    CHECK(std::abs((di - dd) - Complex(-1.0)) < 1e-4);
  }

  SUBCASE("small wavenumber reduces to the Laplace double layer") {
    auto f = [](double t) { return Complex(1.0 + 0.2 * std::cos(t)); };
    const DensityGrid d = grid_density(s, f);
    const double kappa = 1e-3;
    const Complex x(0.55, 0.95);
    const PoleEstimate pole = pole_for(star, s, x);
    const Complex got = helmholtz_dlp_close(s, d, x, kappa, pole, false, Location::inside);
    const double lap = laplace_dlp_close(s, d, x, pole, false, Location::inside);
    CHECK(std::abs(got - lap / kTwoPi) < 2e-5 * std::max(1.0, std::abs(got)));
  }
}

TEST_CASE("helmholtz kernel split residues") {
  const double kappa = 3.0;
  // series and direct branches of W/rho agree near the crossover
  for (double rho : {2.0, 8.0 / kappa - 1e-9, 8.0 / kappa + 1e-9, 4.0}) {
    const Complex a = helmholtz_dlp_residue_over_rho(kappa, rho);
    // direct formula
    const Complex b = (0.25 * kImag * kappa * hankel1(1, kappa * rho).value +
                       kappa * bessel_j(1, kappa * rho) * std::log(rho) / kTwoPi -
                       1.0 / (kTwoPi * rho)) /
                      rho;
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
  }
  // S(rho) approaches S(0)
  const Complex s_eps = helmholtz_slp_residue(kappa, 1e-6);
  const Complex s_0 = helmholtz_slp_residue_origin(kappa);
  CHECK(std::abs(s_eps - s_0) < 1e-9);
}

TEST_CASE("nonperiodic endpoint correction") {
  SUBCASE("zero jump short-circuits") {
    CHECK(nonperiodic_correction(Complex(1.0, 0.05), 16,
                                 SwapVariant::double_layer_pair, 0.0) ==
          Complex(0.0));
  }

  SUBCASE("middle-case trapezoid matches adaptive evaluation") {
    const Complex t0(kPi, 0.05);
    const int n = 32;
    auto mn = [&](Complex t) {
      auto cot_half = [](Complex u) { return std::cos(0.5 * u) / std::sin(0.5 * u); };
      const Complex epos = std::exp(Complex(0.0, double(n)) * t0);
      const Complex eneg = std::exp(Complex(0.0, -double(n)) * std::conj(t0));
      return epos * (cot_half(t - t0) - cot_half(-t0)) -
             eneg * (cot_half(t - std::conj(t0)) - cot_half(-std::conj(t0)));
    };
    auto integrand = [&](double y) -> Complex {
      if (std::abs(y) < 1e-13) {
        auto csch = [](Complex u) {
          const Complex s = std::sin(0.5 * u);
          return 1.0 / (s * s);
        };
        const Complex epos = std::exp(Complex(0.0, double(n)) * t0);
        const Complex eneg = std::exp(Complex(0.0, -double(n)) * std::conj(t0));
        const Complex mp = -0.5 * epos * csch(-t0) + 0.5 * eneg * csch(-std::conj(t0));
        return kImag * mp / (2.0 * n);
      }
      const Complex t(0.0, y);
      return kImag * mn(t) / (2.0 * std::sin(double(n) * t));
    };
    const auto ref = oracle::adaptive_integrate(integrand, -1.0, 1.0, 1e-12);
    // recover the raw contour value from the correction (scale -1/2, jump 1)
    const Complex raw =
        nonperiodic_correction(t0, n, SwapVariant::double_layer_pair, 1.0) / -0.5;
    CHECK(std::abs(raw - ref.value) < 1e-8 * std::max(1.0, std::abs(ref.value)));
  }

  SUBCASE("side case agrees with the undeformed contour") {
    // for Re t0 in [0, pi/2) the deformed segment plus residues must equal the
    // original [-i, i] integral, still computable directly here
    const Complex t0(0.3, 0.2);
    const int n = 24;
    auto mn = [&](Complex t) {
      auto cot_half = [](Complex u) { return std::cos(0.5 * u) / std::sin(0.5 * u); };
      const Complex epos = std::exp(Complex(0.0, double(n)) * t0);
      const Complex eneg = std::exp(Complex(0.0, -double(n)) * std::conj(t0));
      return epos * (cot_half(t - t0) - cot_half(-t0)) -
             eneg * (cot_half(t - std::conj(t0)) - cot_half(-std::conj(t0)));
    };
    auto integrand = [&](double y) -> Complex {
      if (std::abs(y) < 1e-13) {
        auto csch = [](Complex u) {
          const Complex s = std::sin(0.5 * u);
          return 1.0 / (s * s);
        };
        const Complex epos = std::exp(Complex(0.0, double(n)) * t0);
        const Complex eneg = std::exp(Complex(0.0, -double(n)) * std::conj(t0));
        const Complex mp = -0.5 * epos * csch(-t0) + 0.5 * eneg * csch(-std::conj(t0));
        return kImag * mp / (2.0 * n);
      }
      const Complex t(0.0, y);
      return kImag * mn(t) / (2.0 * std::sin(double(n) * t));
    };
    const auto ref = oracle::adaptive_integrate(integrand, -1.0, 1.0, 1e-12);
    const Complex raw =
        nonperiodic_correction(t0, n, SwapVariant::double_layer_pair, 1.0) / -0.5;
    CHECK(std::abs(raw - ref.value) < 1e-6 * std::max(1.0, std::abs(ref.value)));
  }

  SUBCASE("correction removes the jump error of the pair-kernel rule") {
    // density u(t) = t has jump u(0) - u(2pi) = -2pi at the seam
    const Complex t0(1.0, 0.04);
    auto kernel = [&](double t) {
      return 1.0 / (1.0 - std::exp(-kImag * (t - t0))) +
             1.0 / (1.0 - std::exp(kImag * (t - std::conj(t0))));
    };
    const Complex ref = oracle::adaptive_integrate(
        [&](double t) { return kernel(t) * t; }, 0.0, kTwoPi, 1e-13).value;
    double prev_corrected = 1e9;
    for (int n : {16, 32, 64}) {
      const PeriodicGrid grid = make_periodic_grid(n);
      const auto w = dlp_kernel_weights(t0, n, grid);
      Complex quad = 0.0;
      for (int j = 0; j < 2 * n; ++j) quad += grid.weight * w[j] * grid.nodes[j];
      const Complex corr = nonperiodic_correction(
          t0, n, SwapVariant::double_layer_pair, Complex(-kTwoPi));
      const double raw_err = std::abs(quad - ref);
      const double corrected_err = std::abs(quad - corr - ref);
      CHECK(corrected_err < 0.2 * raw_err);
      CHECK(corrected_err < prev_corrected);
      prev_corrected = corrected_err;
    }
  }
}
