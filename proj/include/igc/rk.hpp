#pragma once

// Embedded Dormand–Prince 5(4) integrator with adaptive step control,
// cubic-Hermite dense output, domain clipping, and a scalar stop event.

#include "igc/core.hpp"

#include <functional>

namespace igc {

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double h_init = 1e-4;
  double h_max = kInf;
  long max_steps = 5'000'000;
};

struct OdeSolution {
  std::vector<double> t;
  std::vector<Vec> y;
  std::vector<Vec> f;  // derivatives at the knots (for Hermite interpolation)
  bool clipped = false;     // stopped at the domain boundary
  bool event_hit = false;   // stopped by the event function crossing zero
  double t_end = 0;

  int segment(double tq) const {
    // Knots are strictly increasing; returns i with t[i] <= tq <= t[i+1].
    int lo = 0, hi = static_cast<int>(t.size()) - 1;
    if (tq <= t.front()) return 0;
    if (tq >= t.back()) return hi - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (t[mid] <= tq ? lo : hi) = mid;
    }
    return lo;
  }

  Vec eval(double tq) const {
    const int i = segment(tq);
    const double h = t[i + 1] - t[i];
    const double s = (tq - t[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * y[i] + (h10 * h) * f[i] + h01 * y[i + 1] + (h11 * h) * f[i + 1];
  }
};

namespace detail {
// Dormand–Prince coefficients.
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640,
                        e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
}  // namespace detail

// Integrates dy/dt = f(t, y) from t0 to t1 (t1 > t0).
//  - `in_domain(y)`: returning false clips the trajectory (flagged).
//  - `event(t, y)`: optional; integration stops where it first crosses
//    from negative to non-negative (located by bisection on dense output).
template <class F>
OdeSolution integrate_ode(F&& f, Vec y0, double t0, double t1, const OdeOptions& opt = {},
                          const std::function<bool(const Vec&)>& in_domain = nullptr,
                          const std::function<double(double, const Vec&)>& event = nullptr) {
  using namespace detail;
  OdeSolution sol;
  double t = t0;
  Vec y = std::move(y0);
  Vec k1 = f(t, y);
  sol.t.push_back(t);
  sol.y.push_back(y);
  sol.f.push_back(k1);
  double h = std::min(opt.h_init, t1 - t0);
  double ev_prev = event ? event(t, y) : -1.0;
  const double h_floor = std::max(1e-14, 1e-14 * (t1 - t0));
  long steps = 0;

  auto finish = [&](double te) {
    sol.t_end = te;
    return sol;
  };

  while (t < t1) {
    if (++steps > opt.max_steps)
      throw std::runtime_error("integrate_ode: step limit exceeded");
    h = std::min(h, t1 - t);
    h = std::min(h, opt.h_max);

    // Trial stages may probe outside a guarded domain; treat that like a
    // too-large step and shrink toward the boundary instead of propagating.
    Vec y5, k7, err_vec;
    try {
      const Vec k2 = f(t + c2 * h, y + h * (a21 * k1));
      const Vec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const Vec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const Vec k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Vec k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = f(t + h, y5);
      err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    } catch (const std::domain_error&) {
      if (h <= h_floor * 4) {
        sol.clipped = true;
        return finish(t);
      }
      h *= 0.25;
      continue;
    }

    double err = 0;
    const int n = static_cast<int>(y.size());
    for (int i = 0; i < n; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err += sq(err_vec[i] / sc);
    }
    err = std::sqrt(err / n);

    const bool y5_finite = y5.allFinite();
    if (err <= 1.0 && y5_finite) {
      // Domain check; if the step leaves the chart, shrink toward the
      // boundary until the step floor is reached, then clip.
      if (in_domain && !in_domain(y5)) {
        if (h <= h_floor * 4) {
          sol.clipped = true;
          return finish(t);
        }
        h *= 0.25;
        continue;
      }
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      sol.t.push_back(t);
      sol.y.push_back(y);
      sol.f.push_back(k1);
      if (event) {
        const double ev = event(t, y);
        if (ev_prev < 0 && ev >= 0) {
          // Bisect on dense output for the crossing point.
          double lo = sol.t[sol.t.size() - 2], hi = t;
          for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (event(mid, sol.eval(mid)) < 0 ? lo : hi) = mid;
          }
          const double te = hi;
          Vec ye = sol.eval(te);
          sol.t.back() = te;
          sol.y.back() = ye;
          sol.f.back() = f(te, ye);
          sol.event_hit = true;
          return finish(te);
        }
        ev_prev = ev;
      }
      h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 1.0, 5.0);
    } else {
      if (!y5_finite) {
        h *= 0.25;
      } else {
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
      }
      if (h <= h_floor) {
        sol.clipped = true;
        return finish(t);
      }
    }
  }
  return finish(t1);
}

}  // namespace igc
