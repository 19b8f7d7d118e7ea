#include <catch2/catch_amalgamated.hpp>

#include "igc/families.hpp"
#include "igc/geometry.hpp"
#include "igc/quadrature.hpp"

using namespace igc;
using Catch::Approx;

TEST_CASE("relative entropy closed forms match frozen values") {
  const ProductChart gauss = ProductChart::gaussian();
  Vec a(2), b(2);
  a << 1.0, 1.0;
  b << 0.0, 1.0;
  // Unit mean shift at unit scale costs exactly 1/2.
  REQUIRE(relative_entropy(gauss, a, b) == Approx(0.5).epsilon(1e-14));

  const ProductChart expo = ProductChart::exponential();
  Vec c(1), d(1);
  c << 2.0;
  d << 1.0;
  REQUIRE(relative_entropy(expo, c, d) == Approx(std::log(0.5) + 2.0 - 1.0).epsilon(1e-14));

  // Composite chart adds blockwise.
  const ProductChart eg = ProductChart::exp_gauss();
  Vec p(3), q(3);
  p << 2.0, 1.0, 1.0;
  q << 1.0, 0.0, 1.0;
  REQUIRE(relative_entropy(eg, p, q) ==
          Approx(relative_entropy(expo, c, d) + relative_entropy(gauss, a, b)).epsilon(1e-14));
}

TEST_CASE("relative entropy agrees with direct integration") {
  const ProductChart gauss = ProductChart::gaussian();
  Vec a(2), b(2);
  a << 0.7, 1.3;
  b << -0.2, 0.8;
  const double closed = relative_entropy(gauss, a, b);
  const double numeric = relative_entropy_numeric(gauss, a, b);
  REQUIRE(std::abs(numeric - closed) < 1e-8);

  const CorrGaussChart corr(0.6);
  Vec ca(4), cb(4);
  ca << 0.3, 1.1, -0.4, 0.9;
  cb << 0.0, 1.0, 0.0, 1.0;
  const double cclosed = relative_entropy(corr, ca, cb);
  const double cnumeric = relative_entropy_numeric(corr, ca, cb);
  REQUIRE(std::abs(cnumeric - cclosed) < 1e-7);
  REQUIRE(cclosed > 0.0);
}

TEST_CASE("divergence hessian reproduces the metric") {
  const ProductChart chart = ProductChart::exp_gauss();
  Vec th(3);
  th << 1.3, 0.4, 0.9;
  const Mat g = chart.metric(th);
  const double h = 1e-4;
  const int n = chart.dim();
  auto kl = [&](const Vec& u) { return relative_entropy(chart, u, th); };
  Mat H(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        Vec up = th, dn = th;
        up[i] += h;
        dn[i] -= h;
        H(i, i) = (kl(up) - 2.0 * kl(th) + kl(dn)) / (h * h);
      } else {
        Vec pp = th, pm = th, mp = th, mm = th;
        pp[i] += h; pp[j] += h;
        pm[i] += h; pm[j] -= h;
        mp[i] -= h; mp[j] += h;
        mm[i] -= h; mm[j] -= h;
        H(i, j) = (kl(pp) - kl(pm) - kl(mp) + kl(mm)) / (4.0 * h * h);
      }
    }
  }
  const double scale = g.cwiseAbs().maxCoeff();
  REQUIRE((H - g).cwiseAbs().maxCoeff() / scale < 1e-5);
}

TEST_CASE("maximum entropy constructions") {
  const GaussianDensity gm = maxent_gaussian(0.3, 0.49);
  REQUIRE(gm.mu == Approx(0.3));
  REQUIRE(gm.sigma == Approx(0.7));

  // Closed entropy matches the integral of -p log p.
  const double Hq = integrate_adaptive(
      [&](double x) {
        const double lp = gm.log_pdf(x);
        return -std::exp(lp) * lp;
      },
      0.3 - 14 * 0.7, 0.3 + 14 * 0.7, 1e-13, 1e-11);
  REQUIRE(Hq == Approx(gm.entropy()).margin(1e-9));

  // Beats the uniform density with the same mean and variance.
  const double Hu = std::log(std::sqrt(12.0 * 0.49));
  REQUIRE(gm.entropy() > Hu);

  const ExponentialDensity em = maxent_positive_mean(1.7);
  REQUIRE(em.mu == Approx(1.7));
  // Beats the uniform density on [0, 2*mean] with the same mean.
  REQUIRE(em.entropy() > std::log(2.0 * 1.7));
  const double He = integrate_adaptive(
      [&](double x) {
        const double lp = em.log_pdf(x);
        return -std::exp(lp) * lp;
      },
      0.0, 60.0 * 1.7, 1e-13, 1e-11);
  REQUIRE(He == Approx(em.entropy()).margin(1e-8));

  REQUIRE_THROWS_AS(maxent_gaussian(0.0, -1.0), std::domain_error);
  REQUIRE_THROWS_AS(maxent_positive_mean(0.0), std::domain_error);
}

TEST_CASE("domain guards reject degenerate parameters") {
  const ProductChart chart = ProductChart::gaussian();
  Vec bad(2);
  bad << 0.0, 1e-13;
  REQUIRE_FALSE(chart.in_domain(bad));
  REQUIRE_THROWS_AS(chart.metric(bad), std::domain_error);

  const ProductChart expo = ProductChart::exponential();
  Vec neg(1);
  neg << -0.5;
  REQUIRE_THROWS_AS(expo.metric(neg), std::domain_error);

  REQUIRE_THROWS_AS(CorrGaussChart(1.0), std::domain_error);
}

TEST_CASE("sampled information matrix matches the closed metric") {
  const ProductChart chart = ProductChart::exp_gauss();
  Vec th(3);
  th << 1.3, 0.4, 0.9;
  const Mat g = chart.metric(th);
  const Mat gn = fisher_metric_numeric(chart, th);
  REQUIRE((gn - g).cwiseAbs().maxCoeff() < 1e-8);

  const CorrGaussChart corr(0.5);
  Vec cth(4);
  cth << 0.0, 1.0, 0.0, 1.0;
  const Mat cg = corr.metric(cth);
  const Mat cgn = fisher_metric_numeric(corr, cth);
  REQUIRE((cgn - cg).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("score integrates to zero") {
  const CorrGaussChart corr(-0.4);
  Vec th(4);
  th << 0.2, 0.9, -0.1, 1.4;
  const Vec m = score_mean_numeric(corr, th);
  REQUIRE(m.cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("correlated pair covariance and density") {
  const double r = 0.5;
  const CorrGaussChart corr(r);
  Vec th(4);
  th << 0.3, 0.8, -0.4, 1.1;
  const Mat S = corr.covariance(th);
  REQUIRE(S(0, 0) == Approx(0.64));
  REQUIRE(S(1, 1) == Approx(1.21));
  REQUIRE(S(0, 1) == Approx(r * 0.8 * 1.1));
  // Density normalizes to one.
  Box box = corr.sample_box(th);
  const double mass = integrate_box(
      [&](const Vec& x) { return std::exp(corr.log_pdf(th, x)); }, box, 1e-12, 1e-9);
  REQUIRE(mass == Approx(1.0).margin(1e-8));
}
