#pragma once

// Statistical volumes and entropy-like growth indicators.  The volume of the
// coordinate box spanned by the endpoints of a trajectory is measured with
// the metric volume element; its time average drives the logarithmic
// indicator S = ln((1/tau) Int_0^tau V).

#include "igc/core.hpp"
#include "igc/dynamics.hpp"
#include "igc/families.hpp"
#include "igc/geometry.hpp"
#include "igc/jacobi.hpp"
#include "igc/quadrature.hpp"

#include <functional>

namespace igc {

template <GeomChart C>
double volume_element(const C& chart, const Vec& th) {
  // Plain determinant; cheap enough to sit inside nested quadrature loops.
  const Mat g = chart.metric(th);
  return std::sqrt(std::max(0.0, g.determinant()));
}

// Unsigned volume plus the orientation of the coordinate sweep (-1, 0, +1).
struct VolumeValue {
  double volume = 0;
  int sign = 0;
  double signed_volume() const { return sign * volume; }
};

// Box volume between two endpoints via per-coordinate antiderivatives of the
// factorized volume element (sqrt2 / sigma^2 per location-scale block,
// 1 / mu per positive-mean block).
inline VolumeValue region_volume(const ProductChart& chart, const Vec& th_a, const Vec& th_b) {
  // The exact antiderivatives are finite for any strictly positive scale
  // coordinates, so only positivity is required here: endpoints of long
  // decaying sweeps sit far below the integrator's domain guard while their
  // box volume is still perfectly well defined.
  for (const auto& b : chart.blocks()) {
    const int ps = (b.type == ProductChart::Block::gauss) ? b.p0 + 1 : b.p0;
    if (!(th_a[ps] > 0) || !(th_b[ps] > 0))
      fail_domain("region_volume: scale coordinate at index " + std::to_string(ps) +
                  " must be positive");
  }
  double v = 1;
  for (const auto& b : chart.blocks()) {
    if (b.type == ProductChart::Block::gauss) {
      const double dmu = th_b[b.p0] - th_a[b.p0];
      const double dinv = 1.0 / th_a[b.p0 + 1] - 1.0 / th_b[b.p0 + 1];
      v *= std::numbers::sqrt2 * dmu * dinv;
    } else {
      v *= std::log(th_b[b.p0] / th_a[b.p0]);
    }
  }
  VolumeValue out;
  out.volume = std::abs(v);
  out.sign = v > 0 ? 1 : v < 0 ? -1 : 0;
  return out;
}

inline VolumeValue region_volume(const ProductChart& chart, const ClosedFormGeodesic& cf,
                                 double tau) {
  return region_volume(chart, cf.theta(0.0), cf.theta(tau));
}

// Same region measured by adaptive quadrature of the volume element (works on
// any chart; used as the independent check of the closed antiderivatives).
template <GeomChart C>
VolumeValue region_volume_quadrature(const C& chart, const Vec& th_a, const Vec& th_b,
                                     double atol = 1e-12, double rtol = 1e-8) {
  const int n = chart.dim();
  Box box(n);
  int sign = 1;
  for (int i = 0; i < n; ++i) {
    const double lo = std::min(th_a[i], th_b[i]), hi = std::max(th_a[i], th_b[i]);
    if (lo == hi) sign = 0;
    if (th_b[i] < th_a[i]) sign = -sign;
    box[i] = {lo, hi};
  }
  VolumeValue out;
  out.sign = sign;
  if (sign == 0) return out;
  out.volume =
      integrate_box([&](const Vec& th) { return volume_element(chart, th); }, box, atol, rtol);
  return out;
}

// --- printed reference volumes (half-open sweep convention) ------------------
//
// For the canonical decaying trajectories these closed forms take the region
// swept in the scale/mean coordinates all the way down to their limits; they
// are kept for comparison against published constants and tail slopes.

inline double reference_volume_exp_gauss(double A, double alpha, double tau) {
  return A / (std::numbers::sqrt2 * alpha) *
         ((alpha * tau - std::log(A)) * std::exp(alpha * tau) + std::log(A));
}

inline double reference_volume_gauss_pair(double A, double alpha, double tau) {
  return sq(A) / (2 * sq(alpha)) * (std::exp(2 * alpha * tau) - 1);
}

// --- averaged-volume indicator -----------------------------------------------

struct VolumeTrace {
  std::vector<double> tau;
  std::vector<double> V;      // region volume at tau
  std::vector<double> V_avg;  // (1/tau) Int_0^tau V dtau'
  std::vector<double> S;      // ln V_avg (-inf where the average vanishes)
};

// Output grid: tau = 0, a uniform ramp to 1, then geometric spacing to the
// end (growth indicators are read off a log-scale tail).
inline std::vector<double> make_tau_grid(double tau_end, int n_uniform = 16, int n_geo = 96) {
  std::vector<double> g{0.0};
  if (tau_end <= 1.0) {
    for (int i = 1; i <= n_uniform; ++i) g.push_back(tau_end * i / n_uniform);
    return g;
  }
  for (int i = 1; i <= n_uniform; ++i) g.push_back(double(i) / n_uniform);
  for (int i = 1; i <= n_geo; ++i) g.push_back(std::pow(tau_end, double(i) / n_geo));
  return g;
}

// Running integral of f over a grid, composite Simpson with `sub` (even)
// panels per grid segment.
inline std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                               const std::vector<double>& grid, int sub = 32) {
  std::vector<double> I(grid.size(), 0.0);
  for (size_t k = 1; k < grid.size(); ++k) {
    const double a = grid[k - 1], b = grid[k];
    const double h = (b - a) / sub;
    double s = f(a) + f(b);
    for (int i = 1; i < sub; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    I[k] = I[k - 1] + s * h / 3.0;
  }
  return I;
}

struct IgeResult {
  VolumeTrace trace;
  LyapunovEstimate slope;  // tail fit of S against tau
};

inline IgeResult ige_from_volume(const std::function<double(double)>& V, double tau_end,
                                 double w0 = 0.6, double w1 = 1.0, int sub = 32) {
  IgeResult r;
  r.trace.tau = make_tau_grid(tau_end);
  const std::vector<double> I = cumulative_integral(V, r.trace.tau, sub);
  for (size_t k = 0; k < r.trace.tau.size(); ++k) {
    const double t = r.trace.tau[k];
    const double v = V(t);
    const double avg = (k == 0) ? v : I[k] / t;
    r.trace.V.push_back(v);
    r.trace.V_avg.push_back(avg);
    r.trace.S.push_back(avg > 0 ? std::log(avg) : -kInf);
  }
  // intensity_asymptote fits ln of its second argument over the tail window
  r.slope = intensity_asymptote(r.trace.tau, r.trace.V_avg, w0, w1);
  return r;
}

inline IgeResult ige_along(const ProductChart& chart, const ClosedFormGeodesic& cf,
                           double tau_end, double w0 = 0.6, double w1 = 1.0) {
  return ige_from_volume(
      [&](double t) { return region_volume(chart, cf, t).volume; }, tau_end, w0, w1);
}

// --- chaoticity-indicator ratios across the one- and two-block charts --------

struct RatiosReport {
  double scalar_ratio = kNaN;   // curvature constants (exactly 2)
  double s_slope_ratio = kNaN;  // fitted averaged-volume slopes
  double j_norm_ratio = kNaN;   // final deviation magnitude, metric norm
  double j_block_ratio = kNaN;  // final deviation magnitude, summed block norms
  LyapunovEstimate s1, s2;      // per-chart entropy slopes
  LyapunovEstimate j1, j2;      // per-chart deviation growth rates
  double scalar1 = kNaN, scalar2 = kNaN;
};

// The two charts share the trajectory parameters (A, alpha) and identical
// per-block deviation seeds, so block counts alone drive the ratios.
inline RatiosReport indicator_ratios(double A, double alpha, double tau_j = -1,
                                     double tau_v = -1) {
  if (tau_j <= 0) tau_j = 15.0 / alpha;
  if (tau_v <= 0) tau_v = 30.0 / alpha;
  const ProductChart c1 = ProductChart::exp_gauss();
  const ProductChart c2 = ProductChart::gauss_pair();
  const ClosedFormGeodesic cf1 = ClosedFormGeodesic::canonical(c1, A, alpha);
  const ClosedFormGeodesic cf2 = ClosedFormGeodesic::canonical(c2, A, alpha);

  RatiosReport r;
  r.scalar1 = curvature(c1, cf1.theta(0)).scalar;
  r.scalar2 = curvature(c2, cf2.theta(0)).scalar;
  r.scalar_ratio = r.scalar2 / r.scalar1;

  const IgeResult e1 = ige_along(c1, cf1, tau_v);
  const IgeResult e2 = ige_along(c2, cf2, tau_v);
  r.s1 = e1.slope;
  r.s2 = e2.slope;
  r.s_slope_ratio = e2.slope.lambda / e1.slope.lambda;

  auto deviate = [&](const ProductChart& c, const ClosedFormGeodesic& cf) {
    const Vec th0 = cf.theta(0), v0 = cf.vel(0);
    const Vec w0 = blockwise_perp_seed(c, th0, v0);
    return integrate_jlc(c, th0, v0, Vec::Zero(c.dim()), w0, tau_j);
  };
  const JacobiField f1 = deviate(c1, cf1);
  const JacobiField f2 = deviate(c2, cf2);
  r.j1 = intensity_asymptote(f1.tau, f1.intensity);
  r.j2 = intensity_asymptote(f2.tau, f2.intensity);
  r.j_norm_ratio = f2.intensity.back() / f1.intensity.back();
  r.j_block_ratio = f2.block_intensity.back() / f1.block_intensity.back();
  return r;
}

}  // namespace igc
