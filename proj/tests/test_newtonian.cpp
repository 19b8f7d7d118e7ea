#include <catch2/catch_amalgamated.hpp>

#include "igc/entropy.hpp"
#include "igc/geometry.hpp"
#include "igc/newtonian.hpp"
#include "igc/quadrature.hpp"

using namespace igc;
using Catch::Approx;

TEST_CASE("conformal connection closed form") {
  Vec m(2), w2(2);
  m << 1.0, 2.0;
  w2 << 1.0, 0.49;
  const Mat K = oscillator_matrix(m, w2, 0.3);
  Vec th0(2), v0(2);
  th0 << 0.3, -0.2;
  v0 << 0.4, 0.3;
  const ConformalChart chart = quadratic_conformal_chart(m, K, th0, v0);

  Vec th(2);
  th << 0.1, -0.15;
  const Tensor3 Gref = conformal_christoffel_reference(chart, th);
  const Tensor3 G = christoffel(chart, th);
  double worst = 0;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(G(k, i, j) - Gref(k, i, j)));
  REQUIRE(worst < 1e-12);
}

TEST_CASE("exact linear modes") {
  // Single stable mode.
  Vec m1(1), w1(1);
  m1 << 1.0;
  w1 << 4.0;
  const LinearOscillatorExact ex(m1, oscillator_matrix(m1, w1));
  Vec th0(1), v0(1);
  th0 << 0.5;
  v0 << 0.3;
  for (const double t : {0.0, 0.7, 2.0}) {
    const double ref = 0.5 * std::cos(2.0 * t) + 0.15 * std::sin(2.0 * t);
    REQUIRE(ex.theta(th0, v0, t)[0] == Approx(ref).margin(1e-12));
  }

  // Inverted mode uses hyperbolic functions.
  Vec wneg(1);
  wneg << -0.25;
  const LinearOscillatorExact exn(m1, oscillator_matrix(m1, wneg));
  for (const double t : {0.0, 1.0, 3.0}) {
    const double ref = 0.2 * std::cosh(0.5 * t) + 0.3 * std::sinh(0.5 * t);
    Vec a(1), b(1);
    a << 0.2;
    b << 0.15;
    REQUIRE(exn.theta(a, b, t)[0] == Approx(ref).margin(1e-12));
  }

  // Zero stiffness degenerates to free motion.
  Vec wz(1);
  wz << 0.0;
  const LinearOscillatorExact exz(m1, oscillator_matrix(m1, wz));
  Vec a(1), b(1);
  a << 0.2;
  b << 0.15;
  REQUIRE(exz.theta(a, b, 2.0)[0] == Approx(0.2 + 0.15 * 2.0).margin(1e-12));
}

TEST_CASE("direct equations of motion match the exact modes") {
  Vec m(2), w2(2);
  m << 1.0, 2.0;
  w2 << 1.0, 0.49;
  const double k = 0.3;
  const Mat K = oscillator_matrix(m, w2, k);
  Vec th0(2), v0(2);
  th0 << 0.3, -0.2;
  v0 << 0.4, 0.3;
  const LinearOscillatorExact ex(m, K);

  auto phi = [&](const Vec& th) { return 0.5 * th.dot(K * th); };
  auto grad = [&](const Vec& th) { return Vec(K * th); };
  const NewtonTrajectory tr = newton_trajectory(m, grad, phi, th0, v0, 10.0);
  double worst = 0;
  for (size_t i = 0; i < tr.tau.size(); ++i)
    worst = std::max(worst, (tr.theta[i] - ex.theta(th0, v0, tr.tau[i])).cwiseAbs().maxCoeff());
  REQUIRE(worst < 1e-8);
  REQUIRE(tr.energy_drift < 1e-9);
}

TEST_CASE("reparametrized geodesic reproduces the trajectory in time") {
  // Phase-shifted planar oscillator: the kinetic energy never vanishes, so
  // the conformal factor stays clear of the domain boundary.
  Vec m(2), w2(2);
  m << 1.0, 1.0;
  w2 << 1.0, 1.0;
  const Mat K = oscillator_matrix(m, w2);
  Vec th0(2), v0(2);
  th0 << 0.5, 0.0;
  v0 << 0.0, 0.6;
  const ConformalChart chart = quadratic_conformal_chart(m, K, th0, v0);
  const TimeTrajectory geo = conformal_time_trajectory(chart, th0, v0, 3.0);
  REQUIRE_FALSE(geo.clipped);

  const LinearOscillatorExact ex(m, K);
  double worst = 0;
  for (size_t i = 0; i < geo.tau.size(); ++i)
    worst = std::max(worst, (geo.theta[i] - ex.theta(th0, v0, geo.tau[i])).cwiseAbs().maxCoeff());
  REQUIRE(worst < 1e-6);

  // The remap keeps kinetic + potential energy pinned at E.
  REQUIRE(geo.energy_drift < 1e-9);
  REQUIRE(geo.max_identity_residual < 1e-7);
  REQUIRE(geo.xi_end > 0.0);
}

TEST_CASE("inverted potential accelerates the clock change") {
  Vec m(1), w2(1);
  m << 1.0;
  w2 << -0.25;
  const Mat K = oscillator_matrix(m, w2);
  Vec th0(1), v0(1);
  th0 << 0.2;
  v0 << 0.15;
  const ConformalChart chart = quadratic_conformal_chart(m, K, th0, v0);
  const TimeTrajectory geo = conformal_time_trajectory(chart, th0, v0, 6.0);
  const LinearOscillatorExact ex(m, K);
  double worst = 0;
  for (size_t i = 0; i < geo.tau.size(); ++i)
    worst = std::max(worst,
                     std::abs(geo.theta[i][0] - ex.theta(th0, v0, geo.tau[i])[0]));
  REQUIRE(worst < 1e-6);
  // The departing trajectory inflates the conformal factor, so unit time
  // costs ever more parameter span.
  REQUIRE(geo.xi_end > 6.0);
}

TEST_CASE("inverted-oscillator chart curvature") {
  Vec w(2);
  w << 1.3, 0.6;
  const IhoChart chart{w};
  Vec th(2);
  th << 0.4, -0.7;

  // Closed metric derivatives match finite differences of the metric.
  const Tensor3 d1 = chart.metric_d1(th);
  const double h = 1e-6;
  for (int k = 0; k < 2; ++k) {
    Vec up = th, dn = th;
    up[k] += h;
    dn[k] -= h;
    const Mat fd = (chart.metric(up) - chart.metric(dn)) / (2.0 * h);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        REQUIRE(d1(k, i, j) == Approx(fd(i, j)).margin(1e-7));
  }

  const CurvatureReport rep = curvature(chart, th);
  REQUIRE(rep.scalar == Approx(iho_scalar_reference(w, th)).margin(1e-10));

  // Equal frequencies collapse onto the radial closed form.
  Vec we(2);
  we << 0.9, 0.9;
  const IhoChart eq{we};
  REQUIRE(curvature(eq, th).scalar ==
          Approx(iho_scalar_equal_reference(0.9, th)).margin(1e-10));

  // At the origin the scalar is minus the squared frequency sum.
  Vec origin = Vec::Zero(2);
  REQUIRE(curvature(chart, origin).scalar ==
          Approx(-(w.squaredNorm())).margin(1e-10));

  // Vanishing frequencies flatten the chart.
  Vec wf(2);
  wf << 1e-4, 1e-4;
  const IhoChart flat{wf};
  REQUIRE(std::abs(curvature(flat, th).scalar) < 1e-6);
}

TEST_CASE("expanding box volume in the oscillator chart") {
  Vec w(2);
  w << 1.0, 1.0;
  Vec corner(2);
  corner << 0.8, 1.7;
  const double closed = iho_box_volume(w, corner);
  const Box box = {{0.0, 0.8}, {0.0, 1.7}};
  const double quad = integrate_box(
      [&](const Vec& th) { return volume_element(IhoChart{w}, th); }, box, 1e-13, 1e-10);
  REQUIRE(closed == Approx(quad).epsilon(1e-9));

  // Exact polynomial for two equal frequencies at the corner.
  const double q = sq(1.0 * 0.8) + sq(1.0 * 1.7);
  REQUIRE(closed == Approx(0.8 * 1.7 * (1.0 + q / 6.0)).epsilon(1e-12));
}

TEST_CASE("volume growth prefactor for the equal-frequency chart") {
  const double omega = 1.0, Xi = 1.0, tau_end = 10.0;
  Vec w(2);
  w << omega, omega;
  const IhoIgeResult r = iho_ige(w, Xi, tau_end);
  REQUIRE(r.slope_predicted == Approx(4.0 * omega));
  REQUIRE(r.slope_printed_alt == Approx(2.0 * omega));
  REQUIRE(r.ige.slope.lambda == Approx(4.0 * omega).epsilon(0.05));
  REQUIRE(r.ige.slope.r2 > 0.999);

  // Late-time prefactor: V_avg ~ omega Xi^4 e^{4 omega tau} / (12 tau).
  const double Vavg = r.ige.trace.V_avg.back();
  const double ratio =
      Vavg * tau_end * std::exp(-4.0 * omega * tau_end) * 12.0 / (omega * std::pow(Xi, 4));
  REQUIRE(ratio == Approx(1.0).epsilon(0.03));
}

TEST_CASE("frequency-disparate growth tracks the dominant mode") {
  Vec w(2);
  w << 10.0, 0.1;
  REQUIRE(iho_corner_slope(w) == Approx(10.1 + 2.0 * 10.0));
  const IhoIgeResult r = iho_ige(w, 1.0, 1.5);
  REQUIRE(r.ige.slope.lambda == Approx(30.0).epsilon(0.05));
  REQUIRE_FALSE(r.discrepancy_note.empty());
}

TEST_CASE("spectral density sampling") {
  const double cutoff = 10.0;
  const double mass = integrate_adaptive(
      [&](double x) { return ohmic_density(x, cutoff); }, 0.0, cutoff, 1e-13, 1e-11);
  REQUIRE(mass == Approx(1.0).margin(1e-10));
  const double mean = integrate_adaptive(
      [&](double x) { return x * ohmic_density(x, cutoff); }, 0.0, cutoff, 1e-13, 1e-11);
  REQUIRE(mean == Approx(ohmic_mean(cutoff)).margin(1e-10));

  const auto draws = ohmic_draws(5000, cutoff, 42);
  double sum = 0;
  for (const double d : draws) {
    REQUIRE(d >= 0.0);
    REQUIRE(d <= cutoff);
    sum += d;
  }
  REQUIRE(sum / draws.size() == Approx(ohmic_mean(cutoff)).epsilon(0.02));
  // Deterministic for a fixed seed.
  REQUIRE(ohmic_draws(5, cutoff, 42) == std::vector<double>(draws.begin(), draws.begin() + 5));
}

TEST_CASE("ensemble-averaged volume reference") {
  // The closed form factorizes as C(n) e^{(3/2) n xi Omega tau} / tau: the
  // prefactor must not depend on tau.
  const double c1 = ohmic_average_volume_reference(1, 1.0, 2.0, 5.0, 1.0) * 1.0 *
                    std::exp(-15.0 * 1.0);
  const double c2 = ohmic_average_volume_reference(1, 1.0, 2.0, 5.0, 2.0) * 2.0 *
                    std::exp(-15.0 * 2.0);
  REQUIRE(c1 == Approx(c2).epsilon(1e-12));
  REQUIRE(ohmic_reference_slope(1, 2.0, 5.0) == Approx(15.0));

  const OhmicReport rep = ohmic_ensemble(1, 1.0, 2.0, 5.0, 6.0);
  REQUIRE(rep.slope_fit == Approx(rep.slope_reference).epsilon(0.05));
  REQUIRE(rep.r2 > 0.999);
  REQUIRE(rep.draws.size() == 3);
  for (const double d : rep.draws) {
    REQUIRE(d >= 0.0);
    REQUIRE(d <= 10.0);
  }
  REQUIRE(rep.corner_slope_sampled > 0.0);
}

TEST_CASE("growth rate scales linearly with the cutoff frequency") {
  const LinearFit fit = ohmic_omega_sweep({2.0, 3.0, 4.0}, 1, 1.0, 2.0, 4.0);
  REQUIRE(fit.r2 > 0.999);
  // Slope of fitted-rate vs Omega is (3/2) n xi.
  REQUIRE(fit.slope == Approx(3.0).epsilon(0.1));
}
