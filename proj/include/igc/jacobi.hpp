#pragma once

// Geodesic deviation flow.  The deviation field delta and its coordinate
// derivative w are integrated jointly with the base geodesic on the stacked
// state (theta, v, delta, w).  The deviation acceleration is the expanded
// form of the covariant deviation equation  D^2 delta / dtau^2 = -R(delta, v) v:
//
//   ddot(delta)^m = - 2 G^m_ab w^a v^b
//                   - dG(nu, m, a, b) v^nu delta^a v^b
//                   - G^m_ab delta^a accel^b
//                   - G^m_{nu l} G^nu_ab delta^a v^b v^l
//                   - R^m_{nu r s} v^nu delta^r v^s
//
// which is algebraically identical to the linearization of the geodesic
// equation itself; the two-trajectory variation below provides an
// independent cross-check of the whole assembly.

#include "igc/core.hpp"
#include "igc/dynamics.hpp"
#include "igc/families.hpp"
#include "igc/geometry.hpp"
#include "igc/rk.hpp"

#include <string>
#include <utility>

namespace igc {

struct JacobiOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int samples = 400;
};

// Deviation-magnitude conventions: `intensity` is the full metric norm
// sqrt(g(delta, delta)); `block_intensity` sums the per-block metric norms on
// product charts (each block evolves independently there, so the sum tracks
// the number of expanding blocks rather than their quadrature).  On
// non-product charts the two coincide.
struct JacobiField {
  std::vector<double> tau;
  std::vector<Vec> theta;  // base geodesic
  std::vector<Vec> vel;
  std::vector<Vec> delta;
  std::vector<Vec> dw;  // d(delta)/dtau in coordinates
  std::vector<double> intensity;
  std::vector<double> block_intensity;
  bool clipped = false;
  double tau_end = 0;
};

namespace detail {

template <GeomChart C>
double block_norm_sum(const C& chart, const Mat& g, const Vec& d) {
  if constexpr (requires(const C& c) { c.blocks(); }) {
    double s = 0;
    for (const auto& b : chart.blocks()) {
      double q = 0;
      for (int i = 0; i < b.np; ++i)
        for (int j = 0; j < b.np; ++j) q += g(b.p0 + i, b.p0 + j) * d[b.p0 + i] * d[b.p0 + j];
      s += std::sqrt(std::max(0.0, q));
    }
    return s;
  } else {
    (void)chart;
    return std::sqrt(std::max(0.0, d.dot(g * d)));
  }
}

}  // namespace detail

template <GeomChart C>
JacobiField integrate_jlc(const C& chart, const Vec& th0, const Vec& v0, const Vec& d0,
                          const Vec& w0, double tau_end, const JacobiOptions& opt = {}) {
  const int n = chart.dim();
  if (!chart.in_domain(th0)) fail_domain("integrate_jlc: initial point outside chart");
  auto rhs = [&](double, const Vec& y) {
    const Vec th = y.segment(0, n), v = y.segment(n, n);
    const Vec d = y.segment(2 * n, n), w = y.segment(3 * n, n);
    const Tensor3 G = christoffel(chart, th);
    const Tensor4 dG = christoffel_d1(chart, th);
    const Tensor4 R = riemann_up_from(G, dG);
    Vec acc = Vec::Zero(n);
    for (int k = 0; k < n; ++k) {
      double s = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += G(k, i, j) * v[i] * v[j];
      acc[k] = -s;
    }
    Vec dwdt = Vec::Zero(n);
    for (int m = 0; m < n; ++m) {
      double s = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          s -= 2 * G(m, a, b) * w[a] * v[b];
          s -= G(m, a, b) * d[a] * acc[b];
          for (int c = 0; c < n; ++c) s -= dG(c, m, a, b) * v[c] * d[a] * v[b];
        }
      dwdt[m] = s;
    }
    // Quadratic connection and curvature contractions, kept separate for
    // clarity of index placement.
    for (int m = 0; m < n; ++m) {
      double s = 0;
      for (int nu = 0; nu < n; ++nu)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double inner = G(nu, a, b) * d[a] * v[b];
            if (inner != 0)
              for (int l = 0; l < n; ++l) s -= G(m, nu, l) * inner * v[l];
            s -= R(m, nu, a, b) * v[nu] * d[a] * v[b];
          }
      dwdt[m] += s;
    }
    Vec dy(4 * n);
    dy << v, acc, w, dwdt;
    return dy;
  };
  Vec y0(4 * n);
  y0 << th0, v0, d0, w0;
  OdeOptions oo;
  oo.abs_tol = opt.abs_tol;
  oo.rel_tol = opt.rel_tol;
  auto ok = [&](const Vec& y) { return chart.in_domain(y.head(n)); };
  const OdeSolution sol = integrate_ode(rhs, y0, 0.0, tau_end, oo, ok);

  JacobiField jf;
  jf.clipped = sol.clipped;
  jf.tau_end = sol.t_end;
  const int m = std::max(2, opt.samples);
  for (int i = 0; i <= m; ++i) {
    const double t = jf.tau_end * i / m;
    const Vec y = sol.eval(t);
    const Vec th = y.segment(0, n), d = y.segment(2 * n, n);
    jf.tau.push_back(t);
    jf.theta.push_back(th);
    jf.vel.push_back(y.segment(n, n));
    jf.delta.push_back(d);
    jf.dw.push_back(y.segment(3 * n, n));
    // Interpolation near a clipped boundary can land a hair outside the
    // chart; carry the previous norms there instead of evaluating the metric.
    if (chart.in_domain(th)) {
      const Mat g = chart.metric(th);
      jf.intensity.push_back(std::sqrt(std::max(0.0, d.dot(g * d))));
      jf.block_intensity.push_back(detail::block_norm_sum(chart, g, d));
    } else {
      jf.intensity.push_back(jf.intensity.empty() ? 0.0 : jf.intensity.back());
      jf.block_intensity.push_back(jf.block_intensity.empty() ? 0.0 : jf.block_intensity.back());
    }
  }
  return jf;
}

// --- deviation seeds ------------------------------------------------------

// Unit-norm direction orthogonal to v0 in the metric at th0, built
// deterministically from coordinate basis vectors (most-orthogonal candidate
// wins, earliest index on ties).
template <GeomChart C>
Vec perp_seed(const C& chart, const Vec& th0, const Vec& v0) {
  const int n = chart.dim();
  const Mat g = chart.metric(th0);
  const double vv = v0.dot(g * v0);
  Vec best;
  double best_q = -1;
  for (int k = 0; k < n; ++k) {
    Vec u = Vec::Unit(n, k);
    if (vv > 0) u -= (u.dot(g * v0) / vv) * v0;
    const double q = u.dot(g * u);
    if (q > best_q) {
      best_q = q;
      best = u;
    }
  }
  if (best_q <= 0) fail_domain("perp_seed: no direction orthogonal to the velocity");
  return best / std::sqrt(best_q);
}

// Blockwise orthogonal seed on a product chart: within every two-parameter
// block, the direction orthogonal to the block velocity with unit block
// norm; one-parameter blocks admit no orthogonal direction and get zero.
// Seeding every curved block identically makes the summed block intensities
// directly comparable across charts with different block counts.
inline Vec blockwise_perp_seed(const ProductChart& chart, const Vec& th0, const Vec& v0) {
  const int n = chart.dim();
  const Mat g = chart.metric(th0);
  Vec w = Vec::Zero(n);
  bool any = false;
  for (const auto& b : chart.blocks()) {
    if (b.np != 2) continue;
    const int i = b.p0, j = b.p0 + 1;
    // rotate the metric image of the block velocity by a quarter turn
    const double p = g(i, i) * v0[i] + g(i, j) * v0[j];
    const double q = g(i, j) * v0[i] + g(j, j) * v0[j];
    Vec u = Vec::Zero(n);
    if (p == 0 && q == 0) {
      u[i] = 1;  // block at rest: location direction
    } else {
      u[i] = -q;
      u[j] = p;
    }
    const double norm = std::sqrt(u.dot(g * u));
    if (norm <= 0) fail_domain("blockwise_perp_seed: degenerate block metric");
    w += u / norm;
    any = true;
  }
  if (!any) fail_domain("blockwise_perp_seed: chart has no two-parameter block");
  return w;
}

// --- independent cross-check by trajectory variation -----------------------

struct VariationResult {
  std::vector<double> tau;
  std::vector<Vec> delta;
  std::vector<Vec> dw;
  std::vector<double> intensity;
  std::vector<double> block_intensity;
  // Max relative disagreement between the full-step and half-step central
  // difference estimates; large values mean dalpha is outside the linear
  // regime.
  double nonlinearity = 0;
};

// Central-difference deviation field of a one-parameter family of initial
// conditions alpha -> (theta0, v0).  Four auxiliary geodesics are integrated
// (at alpha +- dalpha and alpha +- dalpha/2); the half-step estimate is
// returned.
template <GeomChart C, class Family>
VariationResult jacobi_by_variation(const C& chart, Family&& family, double alpha,
                                    double dalpha, double tau_end,
                                    const JacobiOptions& opt = {}) {
  GeodesicOptions go;
  go.abs_tol = opt.abs_tol;
  go.rel_tol = opt.rel_tol;
  go.samples = opt.samples;
  auto run = [&](double a) {
    const auto [th0, v0] = family(a);
    GeodesicTrajectory tr = integrate_geodesic(chart, th0, v0, tau_end, go);
    if (tr.clipped) fail_domain("jacobi_by_variation: varied trajectory left the domain");
    return tr;
  };
  const GeodesicTrajectory base = run(alpha);
  const GeodesicTrajectory p1 = run(alpha + dalpha), m1 = run(alpha - dalpha);
  const GeodesicTrajectory p2 = run(alpha + dalpha / 2), m2 = run(alpha - dalpha / 2);

  VariationResult out;
  out.tau = base.tau;
  const size_t ns = base.tau.size();
  double scale = 0, diff = 0;
  for (size_t i = 0; i < ns; ++i) {
    const Vec d_full = (p1.theta[i] - m1.theta[i]) / (2 * dalpha);
    const Vec d_half = (p2.theta[i] - m2.theta[i]) / dalpha;
    const Vec w_half = (p2.vel[i] - m2.vel[i]) / dalpha;
    const Mat g = chart.metric(base.theta[i]);
    out.delta.push_back(d_half);
    out.dw.push_back(w_half);
    out.intensity.push_back(std::sqrt(std::max(0.0, d_half.dot(g * d_half))));
    out.block_intensity.push_back(detail::block_norm_sum(chart, g, d_half));
    scale = std::max(scale, d_half.cwiseAbs().maxCoeff());
    diff = std::max(diff, (d_full - d_half).cwiseAbs().maxCoeff());
  }
  out.nonlinearity = diff / std::max(scale, 1e-300);
  return out;
}

// Sup mismatch between two sampled vector fields, relative to the sup of the
// reference field (pointwise relative error is meaningless where an
// exponentially growing field is still near zero).
inline double max_rel_mismatch(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double scale = 0, diff = 0;
  const size_t ns = std::min(a.size(), b.size());
  for (size_t i = 0; i < ns; ++i) {
    scale = std::max(scale, b[i].cwiseAbs().maxCoeff());
    diff = std::max(diff, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  return diff / std::max(scale, 1e-300);
}

// --- growth-rate estimation -------------------------------------------------

struct LyapunovEstimate {
  double lambda = kNaN;
  double intercept = kNaN;
  double r2 = 0;
  int n = 0;
  bool ok = false;
  std::string message;
};

// Least-squares slope of ln J over the trailing window
// [w0, w1] * tau_back of the sample grid.
inline LyapunovEstimate intensity_asymptote(const std::vector<double>& tau,
                                            const std::vector<double>& J, double w0 = 0.6,
                                            double w1 = 1.0) {
  LyapunovEstimate est;
  if (tau.size() != J.size() || tau.empty()) {
    est.message = "empty or mismatched samples";
    return est;
  }
  const double T = tau.back();
  std::vector<double> x, y;
  for (size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < w0 * T || tau[i] > w1 * T) continue;
    if (!(J[i] > 0) || !std::isfinite(J[i])) continue;
    x.push_back(tau[i]);
    y.push_back(std::log(J[i]));
  }
  if (x.size() < 8) {
    est.message = "fewer than 8 usable points in the fit window";
    return est;
  }
  const LinearFit fit = fit_line(x, y);
  est.lambda = fit.slope;
  est.intercept = fit.intercept;
  est.r2 = fit.r2;
  est.n = fit.n;
  est.ok = true;
  return est;
}

}  // namespace igc
