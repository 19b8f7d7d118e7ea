#include <catch2/catch_amalgamated.hpp>

#include "igc/dynamics.hpp"
#include "igc/families.hpp"
#include "igc/jacobi.hpp"

using namespace igc;
using Catch::Approx;

TEST_CASE("deviation on the hyperbolic plane grows like sinh") {
  const HalfPlaneChart chart;
  Vec th0(2), v0(2), d0(2), w0(2);
  th0 << 0.0, 1.0;  // vertical unit-speed geodesic y = e^tau
  v0 << 0.0, 1.0;
  d0 << 0.0, 0.0;
  w0 << 1.0, 0.0;  // unit seed orthogonal to the flow
  const JacobiField jf = integrate_jlc(chart, th0, v0, d0, w0, 3.0);
  REQUIRE_FALSE(jf.clipped);
  for (size_t i = 0; i < jf.tau.size(); ++i) {
    const double ref = std::sinh(jf.tau[i]);
    REQUIRE(jf.intensity[i] == Approx(ref).margin(1e-9).epsilon(1e-8));
  }
}

TEST_CASE("orthogonal seeds are orthogonal and normalized") {
  const ProductChart chart = ProductChart::exp_gauss();
  Vec th0(3), v0(3);
  th0 << 2.0, 0.3, 0.8;
  v0 << -0.6, 0.5, -0.2;
  const Mat g = chart.metric(th0);
  const Vec w = perp_seed(chart, th0, v0);
  REQUIRE(std::abs(w.dot(g * w) - 1.0) < 1e-12);
  REQUIRE(std::abs(w.dot(g * v0)) < 1e-12);

  const Vec wb = blockwise_perp_seed(chart, th0, v0);
  REQUIRE(wb[0] == 0.0);  // one-parameter block carries no seed
  const Vec wg = wb.segment(1, 2);
  const Mat gg = g.block(1, 1, 2, 2);
  REQUIRE(std::abs(wg.dot(gg * wg) - 1.0) < 1e-12);
  REQUIRE(std::abs(wg.dot(gg * v0.segment(1, 2))) < 1e-12);

  const ProductChart expo = ProductChart::exponential();
  Vec et(1), ev(1);
  et << 1.0;
  ev << -1.0;
  REQUIRE_THROWS_AS(blockwise_perp_seed(expo, et, ev), std::domain_error);
}

TEST_CASE("time-translation mode rides the flow") {
  const ProductChart chart = ProductChart::exp_gauss();
  const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical(chart, 1.0, 1.0);
  // Seeding with (velocity, acceleration) makes delta(tau) = velocity(tau).
  const JacobiField jf =
      integrate_jlc(chart, cf.theta(0.0), cf.vel(0.0), cf.vel(0.0), cf.acc(0.0), 10.0);
  double worst = 0, scale = 0;
  for (size_t i = 0; i < jf.tau.size(); ++i) {
    const Vec vref = cf.vel(jf.tau[i]);
    worst = std::max(worst, (jf.delta[i] - vref).cwiseAbs().maxCoeff());
    scale = std::max(scale, vref.cwiseAbs().maxCoeff());
  }
  REQUIRE(worst / scale < 1e-6);
}

TEST_CASE("linearized flow is homogeneous in the seed") {
  const ProductChart chart = ProductChart::gauss_pair();
  const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical(chart, 1.0, 1.0);
  const Vec th0 = cf.theta(0.0), v0 = cf.vel(0.0);
  const Vec w0 = blockwise_perp_seed(chart, th0, v0);
  const Vec d0 = Vec::Zero(4);
  // Tight control keeps step-choice noise well below the homogeneity bound.
  JacobiOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-16;
  const JacobiField j1 = integrate_jlc(chart, th0, v0, d0, w0, 6.0, opt);
  const JacobiField j2 = integrate_jlc(chart, th0, v0, d0, 2.0 * w0, 6.0, opt);
  double worst = 0;
  for (size_t i = 0; i < j1.tau.size(); ++i) {
    const double ref = 2.0 * j1.intensity[i];
    if (ref > 1e-8) worst = std::max(worst, std::abs(j2.intensity[i] - ref) / ref);
  }
  REQUIRE(worst < 1e-9);
}

TEST_CASE("linearized flow matches a two-geodesic variation") {
  const ProductChart chart = ProductChart::exp_gauss();
  const double alpha = 1.0, dalpha = 1e-5, tau_end = 8.0;
  const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical(chart, 1.0, alpha);

  auto family = [&](double a) {
    const ClosedFormGeodesic c = ClosedFormGeodesic::canonical(chart, 1.0, a);
    return std::pair<Vec, Vec>(c.theta(0.0), c.vel(0.0));
  };
  const VariationResult var = jacobi_by_variation(chart, family, alpha, dalpha, tau_end);
  // Seed the linear flow with the variation's own initial data.
  const JacobiField jf =
      integrate_jlc(chart, cf.theta(0.0), cf.vel(0.0), var.delta.front(), var.dw.front(),
                    tau_end);
  REQUIRE(jf.tau.size() == var.tau.size());
  const double mismatch = max_rel_mismatch(jf.delta, var.delta);
  REQUIRE(mismatch < 1e-3);
  REQUIRE(var.nonlinearity < 1e-3);
}

TEST_CASE("independent blocks add their deviation intensities") {
  const double alpha = 1.0, tau_end = 12.0;

  const ProductChart one = ProductChart::gauss_pair();
  const ClosedFormGeodesic cf1 = ClosedFormGeodesic::canonical(one, 1.0, alpha);
  const Vec w1 = blockwise_perp_seed(one, cf1.theta(0.0), cf1.vel(0.0));
  const JacobiField j1 =
      integrate_jlc(one, cf1.theta(0.0), cf1.vel(0.0), Vec::Zero(4), w1, tau_end);

  const ProductChart three = ProductChart::gauss_blocks(3);
  const ClosedFormGeodesic cf3 = ClosedFormGeodesic::canonical(three, 1.0, alpha);
  const Vec w3 = blockwise_perp_seed(three, cf3.theta(0.0), cf3.vel(0.0));
  const JacobiField j3 =
      integrate_jlc(three, cf3.theta(0.0), cf3.vel(0.0), Vec::Zero(6), w3, tau_end);

  // gauss_pair holds two identical blocks, gauss_blocks(3) holds three.
  const double r = j3.block_intensity.back() / j1.block_intensity.back();
  REQUIRE(r == Approx(1.5).epsilon(1e-6));
}

TEST_CASE("asymptotic growth rate extraction") {
  // Synthetic signal J = 3 e^{2 tau} over a uniform grid.
  std::vector<double> tau, J;
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.05 * i;
    tau.push_back(t);
    J.push_back(3.0 * std::exp(2.0 * t));
  }
  const LyapunovEstimate est = intensity_asymptote(tau, J);
  REQUIRE(est.ok);
  REQUIRE(est.lambda == Approx(2.0).epsilon(1e-12));
  REQUIRE(est.intercept == Approx(std::log(3.0)).epsilon(1e-10));
  REQUIRE(est.r2 == Approx(1.0).margin(1e-12));

  // Too few usable points reports failure instead of a number.
  const LyapunovEstimate bad =
      intensity_asymptote({0.0, 1.0}, {1.0, 2.0});
  REQUIRE_FALSE(bad.ok);
}

TEST_CASE("fitted growth rate tracks the block rate") {
  const ProductChart chart = ProductChart::gauss_pair();
  const double alpha = 1.0, tau_end = 15.0;
  const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical(chart, 1.0, alpha);
  const Vec th0 = cf.theta(0.0), v0 = cf.vel(0.0);
  const Vec w0 = blockwise_perp_seed(chart, th0, v0);
  const JacobiField jf = integrate_jlc(chart, th0, v0, Vec::Zero(4), w0, tau_end);
  const LyapunovEstimate est = intensity_asymptote(jf.tau, jf.intensity);
  REQUIRE(est.ok);
  REQUIRE(est.lambda == Approx(alpha).epsilon(0.05));
  REQUIRE(est.r2 > 0.999);
}
