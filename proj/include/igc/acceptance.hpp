#pragma once

// End-to-end verification gate: ten numbered criteria, each a timed bundle of
// hard-tolerance checks over the library's public surface.  Every criterion
// prints exactly one [PASS]/[FAIL] line; detail rows carry the numbers.

#include "igc/scenario.hpp"

#include <iostream>

namespace igc {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;
  double seconds = 0;
};

namespace detail {

inline std::string short9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline void absorb(CriterionResult& c, const CheckRow& row) {
  c.pass = c.pass && row.pass;
  c.details.push_back(row.name + ": actual=" + short9(row.actual) + " expected=" +
                      short9(row.expected) + " tol=" + short9(row.tol) +
                      (row.pass ? "" : "  <-- FAIL"));
}

inline void absorb_flag(CriterionResult& c, const std::string& name, bool ok,
                        const std::string& note = "") {
  c.pass = c.pass && ok;
  c.details.push_back(name + (note.empty() ? "" : ": " + note) + (ok ? "" : "  <-- FAIL"));
}

inline void enforce_budget(CriterionResult& c, const Timer& timer, double budget, bool quick) {
  c.seconds = timer.seconds();
  if (budget > 0 && !quick)
    absorb_flag(c, "time_budget", c.seconds < budget,
                short9(c.seconds) + "s against " + short9(budget) + "s");
}

}  // namespace detail

// 1. Scalar curvature is the negative count of two-parameter blocks, at
//    random domain points, through both the closed-derivative and the
//    black-box-metric pipelines.
inline CriterionResult criterion_scalar_constants(bool quick) {
  detail::Timer timer;
  CriterionResult c{1, "constant scalar curvature across product charts"};
  const int npoints = quick ? 5 : 20;
  const std::vector<ProductChart> charts = {
      ProductChart::exp_gauss(), ProductChart::gauss_pair(), ProductChart::gauss_blocks(3),
      ProductChart::gauss_blocks(6), ProductChart::gauss_blocks(9)};
  auto rng = make_rng(11);
  for (const auto& chart : charts) {
    const double expected = detail::expected_scalar(chart);
    std::vector<Vec> pts;
    for (int i = 0; i < npoints; ++i) pts.push_back(detail::random_domain_point(chart, rng));
    double worst_a = 0, worst_fd = 0;
    for (const Vec& th : pts) {
      worst_a = std::max(worst_a, std::abs(curvature(chart, th).scalar - expected));
      worst_fd = std::max(worst_fd, std::abs(curvature_fd(chart, th).scalar - expected));
    }
    const std::string tag = chart.kind() + "_dim" + std::to_string(chart.dim());
    detail::absorb(c, make_check(tag + "_analytic_max_err", 0, worst_a, 1e-9, "analytic",
                                 "target " + detail::short9(expected) + " at " +
                                     std::to_string(npoints) + " random points"));
    detail::absorb(c, make_check(tag + "_blackbox_max_err", 0, worst_fd, 1e-4, "reference"));
  }
  detail::enforce_budget(c, timer, 5.0, quick);
  return c;
}

// 2. Connection coefficients at pinned points against their closed forms.
inline CriterionResult criterion_connection_spots(bool quick) {
  detail::Timer timer;
  CriterionResult c{2, "connection coefficients at pinned points"};
  {
    const ProductChart chart = ProductChart::exp_gauss();
    Vec th(3);
    th << 2.0, 0.7, 1.3;
    const Tensor3 G = christoffel(chart, th);
    const double s = th[2];
    detail::absorb(c, make_check("eg_mean_mean_mean", -1 / th[0], G(0, 0, 0), 1e-10, "analytic"));
    detail::absorb(c, make_check("eg_scale_loc_loc", 1 / (2 * s), G(2, 1, 1), 1e-10, "analytic"));
    detail::absorb(c, make_check("eg_scale_scale_scale", -1 / s, G(2, 2, 2), 1e-10, "analytic"));
    detail::absorb(c, make_check("eg_loc_loc_scale", -1 / s, G(1, 1, 2), 1e-10, "analytic"));
  }
  {
    const ProductChart chart = ProductChart::gauss_pair();
    Vec th(4);
    th << 0.4, 0.9, -0.6, 1.7;
    const Tensor3 G = christoffel(chart, th);
    const double sx = th[1], sy = th[3];
    detail::absorb(c, make_check("gp_scale1_loc1_loc1", 1 / (2 * sx), G(1, 0, 0), 1e-10, "analytic"));
    detail::absorb(c, make_check("gp_scale1_scale1_scale1", -1 / sx, G(1, 1, 1), 1e-10, "analytic"));
    detail::absorb(c, make_check("gp_loc1_loc1_scale1", -1 / sx, G(0, 0, 1), 1e-10, "analytic"));
    detail::absorb(c, make_check("gp_scale2_loc2_loc2", 1 / (2 * sy), G(3, 2, 2), 1e-10, "analytic"));
    detail::absorb(c, make_check("gp_scale2_scale2_scale2", -1 / sy, G(3, 3, 3), 1e-10, "analytic"));
    detail::absorb(c, make_check("gp_loc2_loc2_scale2", -1 / sy, G(2, 2, 3), 1e-10, "analytic"));
    // cross-block coefficients vanish on product charts
    double worst = 0;
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if ((k < 2) + (i < 2) + (j < 2) != 0 && (k < 2) + (i < 2) + (j < 2) != 3)
            worst = std::max(worst, std::abs(G(k, i, j)));
    detail::absorb(c, make_check("gp_cross_block_zero", 0, worst, 1e-14, "analytic"));
  }
  detail::enforce_budget(c, timer, 1.0, quick);
  return c;
}

// 3. Correlated-pair scalar curvature: the black-box-metric pipeline is
//    compared against the closed-form reference expression across the
//    correlation sweep, and the closed form approaches the uncorrelated
//    constant as r -> 0.  The comparison is expected to fail for |r| > 0:
//    the curvature of the implemented metric is -2 independent of r
//    (confirmed by symbolic algebra, the analytic pipeline, and finite
//    differences, with the metric itself validated against direct quadrature
//    of the underlying density), while the reference expression varies with
//    r.  The rows are kept as stated rather than retuned to the computed
//    value, so the disagreement stays visible.
inline CriterionResult criterion_correlated_pair(bool quick) {
  detail::Timer timer;
  CriterionResult c{3, "correlated-pair scalar curvature"};
  Vec th(4);
  th << 0, 1, 0, 1;
  for (double r : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const CorrGaussChart chart(r);
    const double ref = corr_gauss_scalar_reference(r);
    detail::absorb(c, make_check("blackbox_scalar_r=" + detail::short9(r), ref,
                                 curvature_fd(chart, th).scalar, 1e-4, "reference"));
  }
  detail::absorb(c, make_check("small_correlation_limit", -2.0,
                               corr_gauss_scalar_reference(1e-4), 1e-6, "reference"));
  detail::enforce_budget(c, timer, 5.0, quick);
  return c;
}

// 4. Closed-form geodesics satisfy the flow equations (derivatives replaced
//    by stencils) and match adaptive numerical integration.
inline CriterionResult criterion_closed_form_geodesics(bool quick) {
  detail::Timer timer;
  CriterionResult c{4, "closed-form geodesics solve the flow equations"};
  struct Case {
    ProductChart chart;
    ClosedFormGeodesic cf;
    std::string tag;
  };
  std::vector<Case> cases;
  cases.push_back({ProductChart::exp_gauss(),
                   ClosedFormGeodesic::canonical(ProductChart::exp_gauss(), 1.0, 1.0), "eg"});
  cases.push_back({ProductChart::gauss_pair(),
                   ClosedFormGeodesic::canonical(ProductChart::gauss_pair(), 1.0, 1.0), "gp"});
  cases.push_back({ProductChart::gauss_blocks(3),
                   ClosedFormGeodesic::canonical_rates(ProductChart::gauss_blocks(3), 1.0,
                                                       {0.5, 1.0, 1.5}),
                   "g3"});
  const double tau_end = quick ? 2.0 : 5.0;
  for (const auto& k : cases) {
    double res = 0;
    for (int i = 0; i <= 10; ++i)
      res = std::max(res, geodesic_residual_fd(k.chart, k.cf, tau_end * i / 10));
    detail::absorb(c, make_check(k.tag + "_stencil_residual", 0, res, 1e-8, "reference"));
    const GeodesicTrajectory tr =
        integrate_geodesic(k.chart, k.cf.theta(0), k.cf.vel(0), tau_end);
    double sup = 0;
    for (size_t i = 0; i < tr.tau.size(); ++i)
      sup = std::max(sup, (tr.theta[i] - k.cf.theta(tr.tau[i])).cwiseAbs().maxCoeff());
    detail::absorb(c, make_check(k.tag + "_numeric_vs_closed", 0, sup, 1e-6, "analytic"));
  }
  detail::enforce_budget(c, timer, 10.0, quick);
  return c;
}

// 5. Deviation-field growth rates equal the trajectory rate, and the
//    linearized flow agrees with a two-trajectory variation.
inline CriterionResult criterion_deviation_rates(bool quick) {
  detail::Timer timer;
  CriterionResult c{5, "deviation growth rates match the trajectory rate"};
  const std::vector<ProductChart> charts = {
      ProductChart::exp_gauss(), ProductChart::gauss_pair(), ProductChart::gauss_blocks(3)};
  const std::vector<double> alphas = quick ? std::vector<double>{1.0}
                                           : std::vector<double>{0.5, 1.0, 2.0};
  for (const auto& chart : charts) {
    for (double alpha : alphas) {
      const double tau_end = (quick ? 8.0 : 15.0) / alpha;
      const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical(chart, 1.0, alpha);
      const Vec th0 = cf.theta(0), v0 = cf.vel(0);
      const Vec w0 = blockwise_perp_seed(chart, th0, v0);
      const JacobiField jf = integrate_jlc(chart, th0, v0, Vec::Zero(chart.dim()), w0, tau_end);
      const LyapunovEstimate est = intensity_asymptote(jf.tau, jf.intensity);
      detail::absorb(c, make_rel_check(chart.kind() + "_rate_alpha=" + detail::short9(alpha),
                                       alpha, est.lambda, 0.05, "reference"));
    }
    // independent cross-check at alpha = 1: differentiate the closed-form
    // family in its rate and compare against the linearized flow
    const double alpha = 1.0, dalpha = 1e-5, tau_end = quick ? 8.0 : 15.0;
    auto family = [&](double a) {
      const ClosedFormGeodesic cfa = ClosedFormGeodesic::canonical(chart, 1.0, a);
      return std::pair<Vec, Vec>(cfa.theta(0), cfa.vel(0));
    };
    const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical(chart, 1.0, alpha);
    const double h = dalpha / 2;
    const auto [thp, vp] = family(alpha + h);
    const auto [thm, vm] = family(alpha - h);
    const Vec d0 = (thp - thm) / (2 * h), w0 = (vp - vm) / (2 * h);
    const JacobiField jf = integrate_jlc(chart, cf.theta(0), cf.vel(0), d0, w0, tau_end);
    const VariationResult var = jacobi_by_variation(chart, family, alpha, dalpha, tau_end);
    detail::absorb(c, make_check(chart.kind() + "_vs_variation", 0,
                                 max_rel_mismatch(jf.delta, var.delta), 1e-3, "analytic"));
  }
  detail::enforce_budget(c, timer, 30.0, quick);
  return c;
}

// 6. Averaged-volume growth slopes equal the summed rates of the
//    two-parameter blocks.
inline CriterionResult criterion_volume_slopes(bool quick) {
  detail::Timer timer;
  CriterionResult c{6, "averaged-volume growth slopes"};
  struct Case {
    ProductChart chart;
    std::vector<double> rates;
    double slope;
    std::string tag;
  };
  const std::vector<Case> cases = {
      {ProductChart::exp_gauss(), {1.0, 1.0}, 1.0, "eg"},
      {ProductChart::gauss_pair(), {1.0, 1.0}, 2.0, "gp"},
      {ProductChart::gauss_blocks(3), {0.5, 1.0, 1.5}, 3.0, "g3"},
  };
  for (const auto& k : cases) {
    const double rate_min = *std::min_element(k.rates.begin(), k.rates.end());
    const double tau_end = (quick ? 18.0 : 30.0) / rate_min;
    const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical_rates(k.chart, 1.0, k.rates);
    const IgeResult ir = ige_along(k.chart, cf, tau_end);
    detail::absorb(c, make_rel_check(k.tag + "_slope", k.slope, ir.slope.lambda, 0.05,
                                     "reference"));
    detail::absorb_flag(c, k.tag + "_fit_r2", ir.slope.r2 >= 0.999,
                        "r^2 = " + fmt17(ir.slope.r2));
  }
  detail::enforce_budget(c, timer, 20.0, quick);
  return c;
}

// 7. Indicator ratios between the two-block and one-block charts.
inline CriterionResult criterion_indicator_ratios(bool quick) {
  detail::Timer timer;
  CriterionResult c{7, "two-block vs one-block indicator ratios"};
  const RatiosReport r = quick ? indicator_ratios(1.0, 1.0, 8.0, 18.0)
                               : indicator_ratios(1.0, 1.0);
  detail::absorb(c, make_check("scalar_curvature_ratio", 2.0, r.scalar_ratio, 1e-12,
                               "reference"));
  detail::absorb(c, make_rel_check("entropy_slope_ratio", 2.0, r.s_slope_ratio, 0.10,
                                   "reference"));
  detail::absorb(c, make_rel_check("deviation_block_sum_ratio", 2.0, r.j_block_ratio, 0.10,
                                   "reference"));
  c.details.push_back("deviation_norm_ratio (metric norm, informational): " +
                      detail::short9(r.j_norm_ratio) + " vs sqrt(2) = " +
                      detail::short9(std::numbers::sqrt2) +
                      " (block norms add in quadrature under the full norm)");
  detail::enforce_budget(c, timer, 0.0, quick);
  return c;
}

// 8. Geodesics of the kinetic-energy conformal metric reproduce direct
//    force-law integration after the time reparametrization.
inline CriterionResult criterion_geometrized_dynamics(bool quick) {
  detail::Timer timer;
  CriterionResult c{8, "geometrized dynamics reproduces direct integration"};
  const double tau_end = quick ? 3.0 : 10.0;
  for (const NewtonianCase& k : newtonian_cases("all")) {
    const Mat K = oscillator_matrix(k.mtilde, k.omega2, k.coupling);
    const ConformalChart chart = quadratic_conformal_chart(k.mtilde, K, k.th0, k.v0);
    const TimeTrajectory geo = conformal_time_trajectory(chart, k.th0, k.v0, tau_end);
    const NewtonTrajectory newt =
        newton_trajectory(k.mtilde, chart.grad_phi, chart.phi, k.th0, k.v0, tau_end);
    detail::absorb(c, make_check(k.name + "_position_sup_err", 0,
                                 detail::sup_diff(geo.theta, newt.theta), 1e-5, "analytic"));
    detail::absorb(c, make_check(k.name + "_energy_drift", 0, geo.energy_drift, 1e-7,
                                 "reference"));
  }
  detail::enforce_budget(c, timer, 10.0, quick);
  return c;
}

// 9. Unstable-oscillator chart: curvature anchors, volume growth rates for
//    equal, disparate, and spectrum-averaged rate profiles, and linearity of
//    the growth in the total rate.
inline CriterionResult criterion_oscillator_growth(bool quick) {
  detail::Timer timer;
  CriterionResult c{9, "oscillator-chart curvature and growth rates"};
  const double omega = 1.0, Xi = 1.0;
  Vec we(2);
  we << omega, omega;
  const IhoChart chart{we};
  const Vec origin = Vec::Zero(2);
  detail::absorb(c, make_check("origin_scalar_closed", -2 * sq(omega),
                               iho_scalar_equal_reference(omega, origin), 1e-12, "reference"));
  detail::absorb(c, make_check("origin_scalar_pipeline", -2 * sq(omega),
                               curvature(chart, origin).scalar, 1e-9, "analytic"));
  {
    Vec th(2);
    th << 0.8, -1.1;
    detail::absorb(c, make_check("offorigin_scalar_pipeline", iho_scalar_reference(we, th),
                                 curvature(chart, th).scalar, 1e-10, "analytic"));
  }
  {
    Vec tiny(2);
    tiny << 1e-4, 1e-4;
    Vec th(2);
    th << 0.7, -1.3;
    const CurvatureReport cr = curvature(IhoChart{tiny}, th);
    detail::absorb(c, make_check("flat_limit", 0,
                                 std::max(std::abs(cr.scalar), cr.riemann_low.max_abs()), 1e-6,
                                 "reference"));
  }
  const IhoIgeResult eq = iho_ige(we, Xi, quick ? 6.0 : 10.0);
  detail::absorb(c, make_rel_check("equal_rate_slope", 4 * omega, eq.ige.slope.lambda, 0.05,
                                   "reference"));
  Vec wd(2);
  wd << 10.0, 0.1;
  const IhoIgeResult dis = iho_ige(wd, Xi, 1.5);
  detail::absorb(c, make_rel_check("disparate_rate_slope", 3 * wd.maxCoeff(),
                                   dis.ige.slope.lambda, 0.05, "reference",
                                   "box-volume prediction " + fmt17(iho_corner_slope(wd))));
  detail::absorb_flag(c, "coefficient_discrepancy_reported", !eq.discrepancy_note.empty(),
                      "per-axis alternative " + detail::short9(eq.slope_printed_alt) +
                          " vs volume-implied " + detail::short9(eq.slope_predicted));
  const OhmicReport oh = ohmic_ensemble(1, 1.0, 2.0, 5.0, 6.0);
  detail::absorb(c, make_rel_check("spectrum_average_slope", oh.slope_reference, oh.slope_fit,
                                   0.05, "reference"));
  const LinearFit iho_fit =
      iho_omega_sweep(quick ? std::vector<double>{1.0, 2.0, 3.0}
                            : std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0},
                      Xi);
  detail::absorb_flag(c, "equal_rate_sweep_linear", iho_fit.r2 >= 0.999,
                      "r^2 = " + fmt17(iho_fit.r2));
  const LinearFit oh_fit = ohmic_omega_sweep(
      quick ? std::vector<double>{3.0, 5.0} : std::vector<double>{2.0, 3.0, 4.0, 5.0, 6.0}, 1,
      1.0, 2.0, 6.0);
  detail::absorb_flag(c, "spectrum_sweep_linear", oh_fit.r2 >= 0.999,
                      "r^2 = " + fmt17(oh_fit.r2));
  detail::enforce_budget(c, timer, 30.0, quick);
  return c;
}

// 10. Structural property suites: metric symmetry and positivity, curvature
//     tensor structure, vanishing score means, conserved speeds, deviation
//     linearity, and bitwise-deterministic reports.
inline CriterionResult criterion_properties(bool quick) {
  detail::Timer timer;
  CriterionResult c{10, "structural property suites"};
  auto rng = make_rng(23);
  {
    double asym = 0, eig_min = kInf;
    const std::vector<ProductChart> charts = {ProductChart::exp_gauss(),
                                              ProductChart::gauss_pair(),
                                              ProductChart::gauss_blocks(3)};
    for (const auto& chart : charts)
      for (int i = 0; i < 5; ++i) {
        const Vec th = detail::random_domain_point(chart, rng);
        const MetricValue m = fisher_metric(chart, th);
        asym = std::max(asym, (m.g - m.g.transpose()).cwiseAbs().maxCoeff());
        eig_min = std::min(eig_min, m.eig_min);
      }
    const CorrGaussChart corr(0.6);
    Vec th(4);
    th << uniform(rng, -2.0, 2.0), uniform(rng, 0.5, 2.5), uniform(rng, -2.0, 2.0),
        uniform(rng, 0.5, 2.5);
    const MetricValue m = fisher_metric(corr, th);
    asym = std::max(asym, (m.g - m.g.transpose()).cwiseAbs().maxCoeff());
    eig_min = std::min(eig_min, m.eig_min);
    detail::absorb(c, make_check("metric_symmetry", 0, asym, 1e-12, "definition"));
    detail::absorb_flag(c, "metric_positive_definite", eig_min > 0,
                        "smallest eigenvalue " + detail::short9(eig_min));
  }
  {
    double worst = 0;
    for (const auto& chart : {ProductChart::exp_gauss(), ProductChart::gauss_blocks(3)})
      for (int i = 0; i < 2; ++i)
        worst = std::max(worst, riemann_symmetry_residual(
                                    curvature(chart, detail::random_domain_point(chart, rng))));
    Vec wd(2);
    wd << 2.0, 0.7;
    Vec th(2);
    th << 0.4, -0.9;
    worst = std::max(worst, riemann_symmetry_residual(curvature(IhoChart{wd}, th)));
    detail::absorb(c, make_check("riemann_structure_residual", 0, worst, 1e-9, "definition",
                                 "antisymmetry, pair exchange, first cyclic identity"));
  }
  {
    const ProductChart chart = ProductChart::exp_gauss();
    Vec th(3);
    th << 1.3, 0.4, 0.9;
    const double worst = score_mean_numeric(chart, th).cwiseAbs().maxCoeff();
    detail::absorb(c, make_check("score_mean", 0, worst, 1e-7, "definition"));
  }
  {
    const ProductChart chart = ProductChart::exp_gauss();
    Vec th0(3), v0(3);
    th0 << 1.2, 0.4, 0.9;
    v0 << -0.3, 0.25, 0.18;
    const GeodesicTrajectory tr = integrate_geodesic(chart, th0, v0, quick ? 2.0 : 5.0);
    detail::absorb(c, make_check("speed_drift", 0, tr.speed_drift(), 1e-6, "definition"));
  }
  {
    const ProductChart chart = ProductChart::exp_gauss();
    const ClosedFormGeodesic cf = ClosedFormGeodesic::canonical(chart, 1.0, 1.0);
    const Vec th0 = cf.theta(0), v0 = cf.vel(0);
    const Vec w0 = blockwise_perp_seed(chart, th0, v0);
    const double tau_end = quick ? 3.0 : 5.0;
    // Tight control keeps step-choice noise well below the homogeneity bound.
    JacobiOptions opt;
    opt.rel_tol = 1e-13;
    opt.abs_tol = 1e-16;
    const JacobiField j1 = integrate_jlc(chart, th0, v0, Vec::Zero(3), w0, tau_end, opt);
    const JacobiField j2 =
        integrate_jlc(chart, th0, v0, Vec::Zero(3), Vec(2 * w0), tau_end, opt);
    std::vector<Vec> doubled;
    for (const Vec& d : j1.delta) doubled.push_back(2 * d);
    detail::absorb(c, make_check("deviation_linearity", 0,
                                 max_rel_mismatch(doubled, j2.delta), 1e-9, "definition",
                                 "doubled seed, doubled field"));
  }
  {
    RunOptions opts;
    opts.seed = 7;
    opts.quick = quick;
    auto dump = [&](const Scenario& sc) {
      Json j = run_scenario(sc, opts).to_json();
      j.erase("runtime_seconds");
      return j.dump();
    };
    const Scenario curv = default_scenario("curvature");
    detail::absorb_flag(c, "curvature_report_deterministic", dump(curv) == dump(curv));
    const Scenario oh = default_scenario("ohmic");
    detail::absorb_flag(c, "ohmic_report_deterministic", dump(oh) == dump(oh));
  }
  detail::enforce_budget(c, timer, 30.0, quick);
  return c;
}

inline std::vector<CriterionResult> run_acceptance(bool quick = false) {
  return {criterion_scalar_constants(quick), criterion_connection_spots(quick),
          criterion_correlated_pair(quick),  criterion_closed_form_geodesics(quick),
          criterion_deviation_rates(quick),  criterion_volume_slopes(quick),
          criterion_indicator_ratios(quick), criterion_geometrized_dynamics(quick),
          criterion_oscillator_growth(quick), criterion_properties(quick)};
}

inline bool acceptance_pass(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

inline void print_acceptance(const std::vector<CriterionResult>& results, std::ostream& os,
                             bool verbose = true) {
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof(line), "[%s] criterion %d: %s (%.2fs)",
                  r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
    os << line << "\n";
    if (verbose || !r.pass)
      for (const auto& d : r.details) os << "    " << d << "\n";
  }
  int passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  os << passed << "/" << results.size() << " criteria passed\n";
}

}  // namespace igc
