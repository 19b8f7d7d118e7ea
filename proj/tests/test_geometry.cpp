#include <catch2/catch_amalgamated.hpp>

#include "igc/families.hpp"
#include "igc/geometry.hpp"

using namespace igc;
using Catch::Approx;

TEST_CASE("flat chart has vanishing curvature") {
  const FlatChart chart;
  Vec th(2);
  th << 0.4, -1.2;
  const CurvatureReport r = curvature(chart, th);
  REQUIRE(r.gamma.max_abs() == 0.0);
  REQUIRE(r.riemann_low.max_abs() < 1e-14);
  REQUIRE(std::abs(r.scalar) < 1e-14);
}

TEST_CASE("hyperbolic half plane") {
  const HalfPlaneChart chart;
  Vec th(2);
  th << 0.3, 0.7;
  const CurvatureReport r = curvature(chart, th);
  const double y = th[1];

  REQUIRE(r.scalar == Approx(-2.0).margin(1e-10));
  REQUIRE(r.riemann_low(0, 1, 0, 1) == Approx(-1.0 / std::pow(y, 4)).margin(1e-9));

  Vec u(2), v(2);
  u << 1.0, 0.0;
  v << 0.0, 1.0;
  REQUIRE(sectional(r, u, v) == Approx(-1.0).margin(1e-10));
  // Sectional curvature ignores the basis of the plane.
  Vec w = 0.3 * u + 1.7 * v;
  REQUIRE(sectional(r, u, w) == Approx(-1.0).margin(1e-10));
  REQUIRE_THROWS_AS(sectional(r, u, 2.0 * u), std::domain_error);

  // Constant-curvature space: the projective tensor vanishes.
  REQUIRE(weyl_projective(r).max_abs() < 1e-10);
}

TEST_CASE("connection coefficients for a location-scale block") {
  const ProductChart chart = ProductChart::gaussian();
  Vec th(2);
  th << 0.5, 1.2;
  const double s = th[1];
  const Tensor3 G = christoffel(chart, th);
  REQUIRE(G(1, 0, 0) == Approx(1.0 / (2.0 * s)).margin(1e-12));
  REQUIRE(G(0, 0, 1) == Approx(-1.0 / s).margin(1e-12));
  REQUIRE(G(0, 1, 0) == Approx(-1.0 / s).margin(1e-12));
  REQUIRE(G(1, 1, 1) == Approx(-1.0 / s).margin(1e-12));
  REQUIRE(G(1, 0, 1) == Approx(0.0).margin(1e-14));
  REQUIRE(G(0, 0, 0) == Approx(0.0).margin(1e-14));

  // Finite-difference connection agrees with the closed one.
  const Tensor3 Gfd = christoffel_fd(chart, th);
  double worst = 0;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(Gfd(k, i, j) - G(k, i, j)));
  REQUIRE(worst < 1e-8);
}

TEST_CASE("connection derivative closed form matches finite differences") {
  const ProductChart chart = ProductChart::exp_gauss();
  Vec th(3);
  th << 1.3, 0.4, 0.9;
  const Tensor4 dG = christoffel_d1(chart, th);
  const int n = chart.dim();
  const double h = 1e-5;
  double worst = 0;
  for (int m = 0; m < n; ++m) {
    Vec up = th, dn = th;
    const double step = fd_step(h, th[m]);
    up[m] += step;
    dn[m] -= step;
    const Tensor3 Gp = christoffel(chart, up);
    const Tensor3 Gm = christoffel(chart, dn);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double fd = (Gp(k, i, j) - Gm(k, i, j)) / (2.0 * step);
          worst = std::max(worst, std::abs(fd - dG(m, k, i, j)));
        }
  }
  REQUIRE(worst < 1e-6);
}

TEST_CASE("correlated pair scalar curvature across correlations") {
  // The computed scalar of the correlated chart is -2 for every admissible r
  // (confirmed independently by symbolic algebra and by the finite-difference
  // pipeline); the closed-form reference expression coincides with it only in
  // the r -> 0 limit.
  for (const double r : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const CorrGaussChart chart(r);
    Vec th(4);
    th << 0.3, 0.8, -0.4, 1.1;
    const CurvatureReport rep = curvature(chart, th);
    REQUIRE(rep.scalar == Approx(-2.0).margin(1e-9));
  }
  REQUIRE(corr_gauss_scalar_reference(0.0) == Approx(-2.0).epsilon(1e-15));
  REQUIRE(corr_gauss_scalar_reference(0.5) == Approx(-2.4375).epsilon(1e-13));
  REQUIRE(corr_gauss_scalar_reference(-0.5) == Approx(-2.4375).epsilon(1e-13));
  REQUIRE(corr_gauss_scalar_reference(1e-4) == Approx(-2.0).margin(1e-6));
}

TEST_CASE("correlated pair volume element") {
  const double r = 0.5;
  const CorrGaussChart chart(r);
  Vec th(4);
  th << 0.3, 0.8, -0.4, 1.1;
  const MetricValue mv = fisher_metric(chart, th);
  const double sx = th[1], sy = th[3];
  const double ref = 2.0 / (sx * sx * sy * sy * (1.0 - r * r));
  REQUIRE(mv.sqrt_det == Approx(ref).epsilon(1e-12));
  REQUIRE(mv.eig_min > 0.0);
}

TEST_CASE("scalar curvature counts two-parameter blocks") {
  Vec th3(3);
  th3 << 1.3, 0.4, 0.9;
  REQUIRE(curvature(ProductChart::exp_gauss(), th3).scalar == Approx(-1.0).margin(1e-10));

  Vec th4(4);
  th4 << 0.4, 0.9, -0.6, 1.7;
  REQUIRE(curvature(ProductChart::gauss_pair(), th4).scalar == Approx(-2.0).margin(1e-10));

  const ProductChart six = ProductChart::gauss_blocks(3);
  Vec th6(6);
  th6 << 0.1, 1.0, -0.3, 0.7, 0.5, 1.4;
  REQUIRE(curvature(six, th6).scalar == Approx(-3.0).margin(1e-10));
}

TEST_CASE("finite-difference pipeline tracks the analytic one") {
  const ProductChart chart = ProductChart::exp_gauss();
  Vec th(3);
  th << 1.3, 0.6, 0.9;
  const CurvatureReport a = curvature(chart, th);
  const CurvatureReport f = curvature_fd(chart, th);
  REQUIRE(std::abs(f.scalar - a.scalar) < 1e-4);
  double worst = 0;
  const int n = chart.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(f.ricci(i, j) - a.ricci(i, j)));
  REQUIRE(worst < 1e-4);
}

TEST_CASE("curvature tensor symmetries hold") {
  const ProductChart chart = ProductChart::gauss_pair();
  Vec th(4);
  th << 0.4, 0.9, -0.6, 1.7;
  const CurvatureReport r = curvature(chart, th);
  REQUIRE(riemann_symmetry_residual(r) < 1e-10);

  const CorrGaussChart corr(0.7);
  Vec cth(4);
  cth << 0.0, 1.0, 0.5, 1.3;
  REQUIRE(riemann_symmetry_residual(curvature(corr, cth)) < 1e-9);
}

TEST_CASE("sectional curvature of product blocks") {
  const ProductChart chart = ProductChart::gauss_pair();
  Vec th(4);
  th << 0.0, 1.0, 0.0, 1.0;
  const CurvatureReport r = curvature(chart, th);
  Vec u = Vec::Zero(4), v = Vec::Zero(4);
  u[0] = 1.0;
  v[1] = 1.0;
  REQUIRE(sectional(r, u, v) == Approx(-0.5).margin(1e-10));

  // Planes spanning different blocks are flat.
  Vec w = Vec::Zero(4);
  w[2] = 1.0;
  REQUIRE(sectional(r, u, w) == Approx(0.0).margin(1e-12));
}

TEST_CASE("projective tensor distinguishes anisotropic products") {
  const ProductChart chart = ProductChart::gauss_pair();
  Vec th(4);
  th << 0.0, 1.0, 0.0, 1.0;
  const CurvatureReport r = curvature(chart, th);
  const Tensor4 W = weyl_projective(r);
  REQUIRE(W(0, 1, 0, 1) == Approx(-2.0 / 3.0).margin(1e-10));
  REQUIRE(W.max_abs() > 0.01);

  const ProductChart six = ProductChart::gauss_blocks(3);
  Vec th6(6);
  th6 << 0.0, 1.0, 0.0, 1.0, 0.0, 1.0;
  REQUIRE(weyl_projective(curvature(six, th6)).max_abs() > 0.01);
}

TEST_CASE("symmetry directions annihilate the flow residual") {
  const ProductChart chart = ProductChart::exp_gauss();
  Vec th(3);
  th << 1.3, 0.4, 0.9;

  // Scale symmetry in the positive-mean block plus location shift in the
  // location-scale block.
  Vec K = Vec::Zero(3);
  K[0] = th[0];
  K[1] = 1.0;
  Mat dK = Mat::Zero(3, 3);
  dK(0, 0) = 1.0;
  REQUIRE(killing_residual(chart, th, K, dK).cwiseAbs().maxCoeff() < 1e-12);

  // A bare scale translation is not a symmetry.
  Vec Kbad = Vec::Zero(3);
  Kbad[2] = 1.0;
  Mat dKbad = Mat::Zero(3, 3);
  REQUIRE(killing_residual(chart, th, Kbad, dKbad).cwiseAbs().maxCoeff() > 0.1);
}
