#include <catch2/catch_amalgamated.hpp>

#include "igc/dynamics.hpp"
#include "igc/entropy.hpp"
#include "igc/families.hpp"

using namespace igc;
using Catch::Approx;

TEST_CASE("box volume closed form agrees with quadrature") {
  const ProductChart eg = ProductChart::exp_gauss();
  Vec a3(3), b3(3);
  a3 << 1.0, 0.2, 0.9;
  b3 << 2.5, 0.8, 1.4;
  const VolumeValue v = region_volume(eg, a3, b3);
  const VolumeValue q = region_volume_quadrature(eg, a3, b3);
  REQUIRE(v.sign == 1);
  REQUIRE(q.sign == 1);
  REQUIRE(v.volume == Approx(q.volume).epsilon(1e-8));

  const ProductChart gp = ProductChart::gauss_pair();
  Vec a4(4), b4(4);
  a4 << -0.4, 0.7, 0.3, 1.1;
  b4 << 0.6, 1.2, 0.9, 0.5;
  const VolumeValue v4 = region_volume(gp, a4, b4);
  const VolumeValue q4 = region_volume_quadrature(gp, a4, b4);
  REQUIRE(v4.volume == Approx(q4.volume).epsilon(1e-6));
  REQUIRE(v4.sign == q4.sign);
}

TEST_CASE("sweep orientation is tracked separately from magnitude") {
  const ProductChart chart = ProductChart::gaussian();
  Vec a(2), b(2);
  a << 0.0, 1.0;
  b << -0.5, 2.0;  // mean decreases while the scale grows
  const VolumeValue v = region_volume(chart, a, b);
  REQUIRE(v.sign == -1);
  REQUIRE(v.volume > 0.0);
  REQUIRE(v.signed_volume() < 0.0);

  // Degenerate sweep has zero volume and zero sign.
  const VolumeValue z = region_volume(chart, a, a);
  REQUIRE(z.sign == 0);
  REQUIRE(z.volume == 0.0);
}

TEST_CASE("frozen reference volumes") {
  // Two-block value at tau = 1 with unit amplitude and rate.
  const double e2 = std::exp(2.0);
  REQUIRE(reference_volume_gauss_pair(1.0, 1.0, 1.0) == Approx((e2 - 1.0) / 2.0).epsilon(1e-14));
  // One-block mixed form at A = 1: (alpha tau) e^{alpha tau} / sqrt(2 alpha^2).
  const double tau = 2.0;
  REQUIRE(reference_volume_exp_gauss(1.0, 1.0, tau) ==
          Approx(tau * std::exp(tau) / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("trajectory volume growth tracks the block rates") {
  const ProductChart gp = ProductChart::gauss_pair();
  const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical(gp, 1.0, 1.0);
  // Endpoint boxes grow like e^{2 tau}: doubling tau squares the volume scale.
  const double v1 = region_volume(gp, cf, 8.0).volume;
  const double v2 = region_volume(gp, cf, 9.0).volume;
  REQUIRE(std::log(v2 / v1) == Approx(2.0).epsilon(0.01));

  // Against direct quadrature along the flow.
  const VolumeValue q = region_volume_quadrature(gp, cf.theta(0.0), cf.theta(2.0));
  const VolumeValue c = region_volume(gp, cf, 2.0);
  REQUIRE(c.volume == Approx(q.volume).epsilon(1e-6));
}

TEST_CASE("time grid and averaged integral helpers") {
  const std::vector<double> grid = make_tau_grid(30.0);
  REQUIRE(grid.front() == 0.0);
  REQUIRE(grid.back() == Approx(30.0));
  for (size_t i = 1; i < grid.size(); ++i) REQUIRE(grid[i] > grid[i - 1]);

  // Cumulative Simpson integral of e^{2t} matches the closed antiderivative.
  const auto F = cumulative_integral([](double t) { return std::exp(2.0 * t); }, grid);
  REQUIRE(F.size() == grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const double ref = 0.5 * (std::exp(2.0 * grid[i]) - 1.0);
    REQUIRE(F[i] == Approx(ref).epsilon(1e-5).margin(1e-10));
  }
}

TEST_CASE("averaged-volume indicator recovers a pure exponential rate") {
  const double rate = 3.0, tau_end = 20.0;
  const IgeResult res =
      ige_from_volume([&](double t) { return std::exp(rate * t); }, tau_end);
  REQUIRE(res.slope.ok);
  REQUIRE(res.slope.n >= 8);
  REQUIRE(res.slope.r2 > 0.999);
  // The time average shifts the fitted slope by about 1/mean(tau).
  REQUIRE(res.slope.lambda == Approx(rate).epsilon(0.05));
  REQUIRE(res.trace.S.back() ==
          Approx(std::log((std::exp(rate * tau_end) - 1.0) / (rate * tau_end)))
              .epsilon(1e-5));
}

TEST_CASE("indicator chain along a closed-form trajectory") {
  const ProductChart eg = ProductChart::exp_gauss();
  const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical(eg, 1.0, 1.0);
  const IgeResult res = ige_along(eg, cf, 25.0);
  REQUIRE(res.slope.r2 > 0.999);
  REQUIRE(res.slope.lambda == Approx(1.0).epsilon(0.05));
}

TEST_CASE("paired-indicator ratios between one- and two-block charts") {
  const RatiosReport rep = indicator_ratios(1.0, 1.0, 8.0, 18.0);
  REQUIRE(rep.scalar_ratio == Approx(2.0).margin(1e-12));
  REQUIRE(rep.scalar1 == Approx(-1.0).margin(1e-10));
  REQUIRE(rep.scalar2 == Approx(-2.0).margin(1e-10));
  REQUIRE(rep.s_slope_ratio == Approx(2.0).epsilon(0.1));
  REQUIRE(rep.j_block_ratio == Approx(2.0).epsilon(0.1));
  REQUIRE(rep.j_norm_ratio == Approx(std::sqrt(2.0)).epsilon(0.1));
}
