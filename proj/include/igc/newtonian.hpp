#pragma once

// Geometrized Newtonian dynamics.  The kinetic-energy conformal metric
// g = (E - phi(theta)) * mtilde turns the energy-E trajectories of
// mtilde_i theta_i'' = -d phi / d theta_i into geodesics; integrating the
// geodesic in its affine parameter xi and reparametrizing through
// dtau = sqrt(T_xi / Phi) dxi recovers the Newtonian time evolution, with
// T_tau = Phi and T_tau + phi = E holding identically on the way back.
// The inverted-oscillator chart (W = 1 + (1/2) sum omega_j^2 theta_j^2, unit
// masses, E = 1) gets dedicated curvature and volume-growth helpers, plus the
// linear-frequency-spectrum oscillator ensemble.

#include "igc/core.hpp"
#include "igc/entropy.hpp"
#include "igc/geometry.hpp"
#include "igc/quadrature.hpp"
#include "igc/rk.hpp"

#include <Eigen/Eigenvalues>

#include <cstdint>
#include <functional>
#include <string>

namespace igc {

// --- conformal kinetic-energy chart ------------------------------------------

struct ConformalChart {
  Vec mtilde;    // diagonal mass weights
  double E = 0;  // energy constant defining Phi = E - phi
  std::function<double(const Vec&)> phi;
  std::function<Vec(const Vec&)> grad_phi;
  std::function<Mat(const Vec&)> hess_phi;

  int dim() const { return static_cast<int>(mtilde.size()); }
  double Phi(const Vec& th) const { return E - phi(th); }
  bool in_domain(const Vec& th) const { return Phi(th) > kScaleGuard; }
  void check_domain(const Vec& th) const {
    if (!in_domain(th)) fail_domain("conformal chart: E - phi must stay positive");
  }

  Mat metric(const Vec& th) const {
    return Phi(th) * Mat(mtilde.asDiagonal());
  }
  Tensor3 metric_d1(const Vec& th) const {
    const int n = dim();
    const Vec dPhi = -grad_phi(th);
    Tensor3 dg(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) dg(k, i, i) = dPhi[k] * mtilde[i];
    return dg;
  }
  Tensor4 metric_d2(const Vec& th) const {
    const int n = dim();
    const Mat ddPhi = -hess_phi(th);
    Tensor4 ddg(n);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) ddg(l, k, i, i) = ddPhi(l, k) * mtilde[i];
    return ddg;
  }
};

inline double kinetic_energy(const Vec& mtilde, const Vec& v) {
  return 0.5 * v.dot(mtilde.cwiseProduct(v));
}

// phi(theta) = (1/2) theta^T K theta with symmetric K; E fixed from the
// initial state so that Phi(theta0) equals the initial kinetic energy.
inline ConformalChart quadratic_conformal_chart(const Vec& mtilde, const Mat& K,
                                                const Vec& th0, const Vec& v0) {
  ConformalChart c;
  c.mtilde = mtilde;
  c.phi = [K](const Vec& th) { return 0.5 * th.dot(K * th); };
  c.grad_phi = [K](const Vec& th) { return Vec(K * th); };
  c.hess_phi = [K](const Vec&) { return K; };
  c.E = kinetic_energy(mtilde, v0) + c.phi(th0);
  return c;
}

// Stiffness matrix of per-coordinate oscillators m_j omega_j^2 (negative
// omega2 entries give unstable directions) plus optional nearest-neighbor
// springs of strength k on (theta_j - theta_{j+1}).
inline Mat oscillator_matrix(const Vec& mtilde, const Vec& omega2, double k = 0) {
  const int n = static_cast<int>(mtilde.size());
  Mat K = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) K(j, j) = mtilde[j] * omega2[j];
  for (int j = 0; j + 1 < n; ++j) {
    K(j, j) += k;
    K(j + 1, j + 1) += k;
    K(j, j + 1) -= k;
    K(j + 1, j) -= k;
  }
  return K;
}

// Printed closed form of the conformal connection, used as a cross-check of
// the generic metric-derivative path:
//   G^k_ij = (1/2 Phi) [ d_i Phi delta^k_j + d_j Phi delta^k_i
//                        - (mtilde_i / mtilde_k) delta_ij d_k Phi ]
inline Tensor3 conformal_christoffel_reference(const ConformalChart& c, const Vec& th) {
  const int n = c.dim();
  const double P = c.Phi(th);
  const Vec dP = -c.grad_phi(th);
  Tensor3 G(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        if (k == j) s += dP[i];
        if (k == i) s += dP[j];
        if (i == j) s -= c.mtilde[i] / c.mtilde[k] * dP[k];
        G(k, i, j) = s / (2 * P);
      }
  return G;
}

// --- geodesic flow in xi and the return to Newtonian time ---------------------

struct TimeTrajectory {
  std::vector<double> tau;
  std::vector<Vec> theta;
  std::vector<Vec> vel;  // d theta / d tau
  std::vector<double> T;       // kinetic energy in tau
  std::vector<double> Phi;     // conformal factor along the path
  std::vector<double> energy;  // T + phi
  double energy_drift = 0;           // max |energy - E|
  double max_identity_residual = 0;  // max |T - Phi|
  double xi_end = 0;                 // affine-parameter span consumed
  bool clipped = false;
};

// Integrates the geodesic of the conformal metric in its affine parameter,
// accumulating tau alongside, then resamples uniformly in tau.  The affine
// span needed to reach tau_end is unknown a priori (d tau / d xi = T0 / Phi
// shrinks wherever Phi grows), so the span doubles until the stop event at
// tau = tau_end fires.
inline TimeTrajectory conformal_time_trajectory(const ConformalChart& chart, const Vec& th0,
                                                const Vec& v0, double tau_end,
                                                int samples = 400, double tol = 1e-12) {
  const int n = chart.dim();
  chart.check_domain(th0);
  auto rhs = [&](double, const Vec& y) {
    const Vec th = y.head(n), v = y.segment(n, n);
    const Tensor3 G = christoffel(chart, th);
    Vec dy(2 * n + 1);
    for (int k = 0; k < n; ++k) {
      double s = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += G(k, i, j) * v[i] * v[j];
      dy[n + k] = -s;
    }
    dy.head(n) = v;
    const double Txi = kinetic_energy(chart.mtilde, v);
    dy[2 * n] = std::sqrt(std::max(0.0, Txi / chart.Phi(th)));
    return dy;
  };
  Vec y0(2 * n + 1);
  y0 << th0, v0, 0.0;
  OdeOptions oo;
  oo.abs_tol = tol;
  oo.rel_tol = tol;
  auto ok = [&](const Vec& y) { return chart.in_domain(y.head(n)); };
  auto stop = [&](double, const Vec& y) { return y[2 * n] - tau_end; };

  OdeSolution sol;
  double span = std::max(tau_end, 1.0);
  for (int attempt = 0;; ++attempt) {
    sol = integrate_ode(rhs, y0, 0.0, span, oo, ok, stop);
    if (sol.event_hit || sol.clipped) break;
    if (attempt >= 40) fail_domain("conformal_time_trajectory: time horizon unreachable");
    span *= 2;
  }

  TimeTrajectory out;
  out.clipped = sol.clipped;
  out.xi_end = sol.t_end;
  const double tau_reached = sol.eval(sol.t_end)[2 * n];
  const double tau_max = std::min(tau_end, tau_reached);
  const int m = std::max(2, samples);
  for (int i = 0; i <= m; ++i) {
    const double t = tau_max * i / m;
    // invert the monotone tau(xi) accumulator by bisection
    double lo = 0, hi = sol.t_end;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, sol.t_end); ++it) {
      const double mid = 0.5 * (lo + hi);
      (sol.eval(mid)[2 * n] < t ? lo : hi) = mid;
    }
    const Vec y = sol.eval(0.5 * (lo + hi));
    const Vec th = y.head(n), vxi = y.segment(n, n);
    const double Txi = kinetic_energy(chart.mtilde, vxi);
    const double P = chart.Phi(th);
    if (!(Txi > 0)) fail_domain("conformal_time_trajectory: stalled affine flow");
    const Vec vtau = vxi * std::sqrt(P / Txi);
    const double Ttau = kinetic_energy(chart.mtilde, vtau);
    out.tau.push_back(t);
    out.theta.push_back(th);
    out.vel.push_back(vtau);
    out.T.push_back(Ttau);
    out.Phi.push_back(P);
    out.energy.push_back(Ttau + chart.phi(th));
    out.energy_drift = std::max(out.energy_drift, std::abs(out.energy.back() - chart.E));
    out.max_identity_residual = std::max(out.max_identity_residual, std::abs(Ttau - P));
  }
  return out;
}

struct NewtonTrajectory {
  std::vector<double> tau;
  std::vector<Vec> theta;
  std::vector<Vec> vel;
  double energy_drift = 0;
};

// Direct second-order integration of mtilde_i theta_i'' = -grad phi.
inline NewtonTrajectory newton_trajectory(const Vec& mtilde,
                                          const std::function<Vec(const Vec&)>& grad_phi,
                                          const std::function<double(const Vec&)>& phi,
                                          const Vec& th0, const Vec& v0, double tau_end,
                                          int samples = 400, double tol = 1e-12) {
  const int n = static_cast<int>(mtilde.size());
  auto rhs = [&](double, const Vec& y) {
    Vec dy(2 * n);
    dy.head(n) = y.tail(n);
    dy.tail(n) = -grad_phi(y.head(n)).cwiseQuotient(mtilde);
    return dy;
  };
  Vec y0(2 * n);
  y0 << th0, v0;
  OdeOptions oo;
  oo.abs_tol = tol;
  oo.rel_tol = tol;
  const OdeSolution sol = integrate_ode(rhs, y0, 0.0, tau_end, oo);
  NewtonTrajectory out;
  const double E0 = kinetic_energy(mtilde, v0) + phi(th0);
  const int m = std::max(2, samples);
  for (int i = 0; i <= m; ++i) {
    const double t = tau_end * i / m;
    const Vec y = sol.eval(t);
    out.tau.push_back(t);
    out.theta.push_back(y.head(n));
    out.vel.push_back(y.tail(n));
    const double e = kinetic_energy(mtilde, y.tail(n)) + phi(y.head(n));
    out.energy_drift = std::max(out.energy_drift, std::abs(e - E0));
  }
  return out;
}

// Exact flow of mtilde theta'' = -K theta by generalized eigen-decomposition
// (modes rotate for positive eigenvalues, stretch for negative ones).
struct LinearOscillatorExact {
  Mat U;       // mtilde-orthonormal eigenvector columns
  Vec lambda;  // generalized eigenvalues of (K, diag(mtilde))
  Vec mtilde;

  LinearOscillatorExact(const Vec& m, const Mat& K) : mtilde(m) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(K, Mat(m.asDiagonal()));
    if (es.info() != Eigen::Success)
      fail_domain("LinearOscillatorExact: eigen-decomposition failed");
    U = es.eigenvectors();
    lambda = es.eigenvalues();
  }

  void state(const Vec& th0, const Vec& v0, double t, Vec& th, Vec& v) const {
    const Vec q0 = U.transpose() * mtilde.cwiseProduct(th0);
    const Vec p0 = U.transpose() * mtilde.cwiseProduct(v0);
    Vec q(q0.size()), p(p0.size());
    for (int j = 0; j < q0.size(); ++j) {
      const double l = lambda[j];
      if (l > 1e-12) {
        const double w = std::sqrt(l);
        q[j] = q0[j] * std::cos(w * t) + p0[j] / w * std::sin(w * t);
        p[j] = -q0[j] * w * std::sin(w * t) + p0[j] * std::cos(w * t);
      } else if (l < -1e-12) {
        const double w = std::sqrt(-l);
        q[j] = q0[j] * std::cosh(w * t) + p0[j] / w * std::sinh(w * t);
        p[j] = q0[j] * w * std::sinh(w * t) + p0[j] * std::cosh(w * t);
      } else {
        q[j] = q0[j] + p0[j] * t;
        p[j] = p0[j];
      }
    }
    th = U * q;
    v = U * p;
  }

  Vec theta(const Vec& th0, const Vec& v0, double t) const {
    Vec th, v;
    state(th0, v0, t, th, v);
    return th;
  }
};

// --- unstable-oscillator chart ------------------------------------------------

// Conformal chart with unit masses and W(theta) = 1 + (1/2) sum w_j^2 th_j^2
// (the E = 1, phi = -(1/2) sum w_j^2 th_j^2 member of the family above, in a
// closed-form friendly shape; W >= 1 keeps the whole plane in-domain).
struct IhoChart {
  Vec omegas;

  int dim() const { return static_cast<int>(omegas.size()); }
  double W(const Vec& th) const {
    return 1 + 0.5 * omegas.cwiseProduct(th).squaredNorm();
  }
  bool in_domain(const Vec&) const { return true; }
  void check_domain(const Vec&) const {}

  Mat metric(const Vec& th) const { return W(th) * Mat::Identity(dim(), dim()); }
  Tensor3 metric_d1(const Vec& th) const {
    const int n = dim();
    Tensor3 dg(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) dg(k, i, i) = sq(omegas[k]) * th[k];
    return dg;
  }
  Tensor4 metric_d2(const Vec&) const {
    const int n = dim();
    Tensor4 ddg(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) ddg(k, k, i, i) = sq(omegas[k]);
    return ddg;
  }
};

// Scalar curvature of the two-oscillator chart,
//   [ -(w1^2 + w2^2) W + w1^4 th1^2 + w2^4 th2^2 ] / W^3,
// the two-dimensional conformal identity R = -(1/W) lap(ln W); at equal
// rates it collapses to -16 w^2 / (2 + w^2 |th|^2)^3 and to -(w1^2 + w2^2)
// at the origin.
inline double iho_scalar_reference(const Vec& omegas, const Vec& th) {
  if (omegas.size() != 2) fail_domain("iho_scalar_reference: two coordinates only");
  const double W = 1 + 0.5 * omegas.cwiseProduct(th).squaredNorm();
  const double num = -omegas.squaredNorm() * W +
                     sq(sq(omegas[0])) * sq(th[0]) + sq(sq(omegas[1])) * sq(th[1]);
  return num / std::pow(W, 3);
}

inline double iho_scalar_equal_reference(double omega, const Vec& th) {
  return -16 * sq(omega) / std::pow(2 + sq(omega) * th.squaredNorm(), 3);
}

// Volume of the coordinate box between the origin and `corner` under the
// W^{n/2} volume element; exact polynomial for two coordinates, numeric
// elsewhere.
inline double iho_box_volume(const Vec& omegas, const Vec& corner, double rtol = 1e-9) {
  const int n = static_cast<int>(omegas.size());
  if (n == 2) {
    const double q = sq(omegas[0] * corner[0]) + sq(omegas[1] * corner[1]);
    return std::abs(corner[0] * corner[1]) * (1 + q / 6);
  }
  const IhoChart chart{omegas};
  Box box(n);
  for (int i = 0; i < n; ++i) box[i] = {std::min(0.0, corner[i]), std::max(0.0, corner[i])};
  return integrate_box(
      [&](const Vec& th) { return std::pow(chart.W(th), n / 2.0); }, box, 1e-12, rtol);
}

// Asymptotic growth rate of the box volume along theta_j = Xi e^{w_j tau}:
// the coordinate sweep contributes sum(w) and the corner value of W^{n/2}
// contributes n * max(w).
inline double iho_corner_slope(const Vec& omegas) {
  return omegas.sum() + omegas.size() * omegas.maxCoeff();
}

// Printed asymptotic region volume for the two-oscillator flow (the exact
// box volume reduces to this as tau grows).
inline double iho_delta_v_reference(const Vec& omegas, double Xi, double tau) {
  const double t1 = Xi * std::exp(omegas[0] * tau), t2 = Xi * std::exp(omegas[1] * tau);
  return t1 * t2 / 6 * (sq(omegas[0] * t1) + sq(omegas[1] * t2));
}

struct IhoIgeResult {
  IgeResult ige;
  double slope_predicted = kNaN;    // sum(w) + n max(w), from the box volume
  double slope_printed_alt = kNaN;  // per-axis alternative: sum(w)
  std::string discrepancy_note;
};

// Averaged-volume growth along the unstable flow theta_j = Xi e^{w_j tau}
// (two coordinates; exact box volumes feed the trace).
inline IhoIgeResult iho_ige(const Vec& omegas, double Xi, double tau_end, double w0 = 0.6,
                            double w1 = 1.0) {
  if (omegas.size() != 2) fail_domain("iho_ige: two coordinates only");
  IhoIgeResult r;
  r.ige = ige_from_volume(
      [&](double t) {
        Vec corner(2);
        corner << Xi * std::exp(omegas[0] * t), Xi * std::exp(omegas[1] * t);
        return iho_box_volume(omegas, corner);
      },
      tau_end, w0, w1);
  r.slope_predicted = iho_corner_slope(omegas);
  r.slope_printed_alt = omegas.sum();
  r.discrepancy_note =
      "The logarithm of the averaged box volume grows with slope sum(omega) + "
      "2*max(omega) (4*omega at equal rates, 3*omega_1 + omega_2 when omega_1 "
      "dominates), as the closed-form box volume dictates; a per-axis accounting "
      "that assigns each oscillator its bare rate would give sum(omega) "
      "(2*omega at equal rates) instead. This library reports the volume-implied "
      "slope and surfaces the alternative here.";
  return r;
}

// Fitted equal-rate growth slopes against the total rate Omega = 2 omega;
// the relation is affine in Omega, so the linear fit's r^2 measures the
// proportionality claim.
inline LinearFit iho_omega_sweep(const std::vector<double>& Omegas, double Xi,
                                 double tau_per_rate = 10.0) {
  std::vector<double> x, y;
  for (double Om : Omegas) {
    const double w = Om / 2;
    Vec ww(2);
    ww << w, w;
    const IhoIgeResult r = iho_ige(ww, Xi, tau_per_rate / w);
    x.push_back(Om);
    y.push_back(r.ige.slope.lambda);
  }
  return fit_line(x, y);
}

// --- linear-spectrum oscillator ensemble --------------------------------------

inline double ohmic_density(double w, double cutoff) {
  return (w < 0 || w > cutoff) ? 0.0 : 2 * w / sq(cutoff);
}

inline double ohmic_mean(double cutoff) { return 2 * cutoff / 3; }

// Inverse-CDF draws: w = cutoff sqrt(u).
inline std::vector<double> ohmic_draws(int count, double cutoff, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<double> w(count);
  for (double& wi : w) wi = cutoff * std::sqrt(uniform(rng, 0.0, 1.0));
  return w;
}

// Printed ensemble-averaged region volume for n particles (3n oscillators,
// common amplitude Xi, cutoff xi * Omega):
//   (1/3n) 2^{-3n/2} Xi^{6n} (xi^2 Omega^2 / 2)^{3n/2} e^{(3/2) n xi Omega tau} / tau
inline double ohmic_average_volume_reference(int n, double Xi, double xi, double Omega,
                                             double tau) {
  const double d = 3.0 * n;
  return std::pow(2.0, -d / 2) / d * std::pow(Xi, 2 * d) *
         std::pow(sq(xi * Omega) / 2, d / 2) * std::exp(1.5 * n * xi * Omega * tau) / tau;
}

inline double ohmic_reference_slope(int n, double xi, double Omega) {
  return 1.5 * n * xi * Omega;
}

struct OhmicReport {
  std::vector<double> tau;
  std::vector<double> avg_volume;  // printed ensemble average
  std::vector<double> S;           // its logarithm
  double slope_fit = kNaN;
  double r2 = 0;
  double slope_reference = kNaN;   // (3/2) n xi Omega
  std::vector<double> draws;       // seeded sample spectrum
  double mean_draw = kNaN;
  double mean_reference = kNaN;
  double corner_slope_sampled = kNaN;  // sum(w) + 3n max(w) of the drawn spectrum
};

inline OhmicReport ohmic_ensemble(int n, double Xi, double xi, double Omega, double tau_end,
                                  std::uint64_t seed = 0, double w0 = 0.6, double w1 = 1.0) {
  OhmicReport r;
  r.slope_reference = ohmic_reference_slope(n, xi, Omega);
  const double cutoff = xi * Omega;
  r.mean_reference = ohmic_mean(cutoff);
  r.draws = ohmic_draws(3 * n, cutoff, seed);
  double sum = 0, mx = 0;
  for (double w : r.draws) {
    sum += w;
    mx = std::max(mx, w);
  }
  r.mean_draw = sum / (3 * n);
  r.corner_slope_sampled = sum + 3 * n * mx;

  for (double t : make_tau_grid(tau_end))
    if (t > 0) {
      const double v = ohmic_average_volume_reference(n, Xi, xi, Omega, t);
      r.tau.push_back(t);
      r.avg_volume.push_back(v);
      r.S.push_back(std::log(v));
    }
  const LyapunovEstimate est = intensity_asymptote(r.tau, r.avg_volume, w0, w1);
  r.slope_fit = est.lambda;
  r.r2 = est.r2;
  return r;
}

// Fitted printed-formula slopes across a sweep of total rates Omega; affine
// in Omega, so the fit's r^2 measures the proportionality claim.
inline LinearFit ohmic_omega_sweep(const std::vector<double>& Omegas, int n, double Xi,
                                   double xi, double tau_end) {
  std::vector<double> x, y;
  for (double Om : Omegas) {
    const OhmicReport rep = ohmic_ensemble(n, Xi, xi, Om, tau_end);
    x.push_back(Om);
    y.push_back(rep.slope_fit);
  }
  return fit_line(x, y);
}

}  // namespace igc
