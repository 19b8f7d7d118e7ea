#pragma once

// Geodesic flow: adaptive numerical integration on any chart, exact
// closed-form solutions on the product charts, arc length, and length
// sensitivity to the trajectory's rate parameter.

#include "igc/core.hpp"
#include "igc/geometry.hpp"
#include "igc/rk.hpp"

#include <variant>

namespace igc {

struct GeodesicOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int samples = 400;
};

struct GeodesicTrajectory {
  std::vector<double> tau;
  std::vector<Vec> theta;
  std::vector<Vec> vel;
  std::vector<double> speed;  // sqrt(g_ij v^i v^j) at each sample
  bool clipped = false;
  double tau_end = 0;
  OdeSolution sol;  // dense output over the stacked state (theta, vel)
  int dim = 0;

  Vec theta_at(double t) const { return sol.eval(t).head(dim); }
  Vec vel_at(double t) const { return sol.eval(t).tail(dim); }
  double speed_drift() const {
    if (speed.empty()) return 0;
    double lo = speed.front(), hi = speed.front();
    for (double s : speed) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    return (hi - lo) / std::max(1e-300, std::abs(speed.front()));
  }
};

template <GeomChart C>
GeodesicTrajectory integrate_geodesic(const C& chart, const Vec& th0, const Vec& v0,
                                      double tau_end, const GeodesicOptions& opt = {}) {
  const int n = chart.dim();
  if (!chart.in_domain(th0)) fail_domain("integrate_geodesic: initial point outside chart");
  auto rhs = [&](double, const Vec& y) {
    const Vec th = y.head(n), v = y.tail(n);
    const Tensor3 G = christoffel(chart, th);
    Vec a = Vec::Zero(n);
    for (int k = 0; k < n; ++k) {
      double s = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += G(k, i, j) * v[i] * v[j];
      a[k] = -s;
    }
    Vec dy(2 * n);
    dy << v, a;
    return dy;
  };
  Vec y0(2 * n);
  y0 << th0, v0;
  OdeOptions oo;
  oo.abs_tol = opt.abs_tol;
  oo.rel_tol = opt.rel_tol;
  auto ok = [&](const Vec& y) { return chart.in_domain(y.head(n)); };
  GeodesicTrajectory tr;
  tr.dim = n;
  tr.sol = integrate_ode(rhs, y0, 0.0, tau_end, oo, ok);
  tr.clipped = tr.sol.clipped;
  tr.tau_end = tr.sol.t_end;
  const int m = std::max(2, opt.samples);
  for (int i = 0; i <= m; ++i) {
    const double t = tr.tau_end * i / m;
    const Vec y = tr.sol.eval(t);
    const Vec th = y.head(n), v = y.tail(n);
    tr.tau.push_back(t);
    tr.theta.push_back(th);
    tr.vel.push_back(v);
    // Interpolation near a clipped boundary can land a hair outside the
    // chart; reuse the previous speed there instead of evaluating the metric.
    if (chart.in_domain(th))
      tr.speed.push_back(std::sqrt(std::max(0.0, v.dot(chart.metric(th) * v))));
    else
      tr.speed.push_back(tr.speed.empty() ? 0.0 : tr.speed.back());
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Closed-form geodesics on the product charts.
//
// Location/scale block (y = e^{-beta tau}, b = B^2 / (8 beta^2)):
//   mu(tau)    = S (B^2/(2 beta)) / (y^2 + b) + C
//   sigma(tau) = S B y / (y^2 + b)
// S is the overall scale freedom of the equations of motion (the conserved
// location momentum is mu_dot / sigma^2 = 1/S); C shifts the cyclic location
// coordinate. A sigma-offset is NOT a solution and is excluded here.
// Block speed is sqrt(2) beta, independently of tau.
//
// Positive-mean block: mu1(tau) = A e^{-alpha tau}; speed alpha.

struct GaussBlockGeodesic {
  double B = 1, beta = 1, C = 0, S = 1;
  bool reflect = false;     // evaluate with mu -> -mu (negative location momentum)
  bool pure_scale = false;  // branch with constant location: sigma = sig0 e^{u0 tau}
  double sig0 = 1, u0 = 0, mu_const = 0;

  double b() const { return sq(B) / (8 * sq(beta)); }
  double flip() const { return reflect ? -1.0 : 1.0; }

  // position (mu, sigma), velocity, acceleration
  std::array<double, 2> pos(double tau) const {
    if (pure_scale) return {mu_const, sig0 * std::exp(u0 * tau)};
    const double y = std::exp(-beta * tau), den = sq(y) + b();
    const double mu = S * (sq(B) / (2 * beta)) / den + C;
    return {flip() * mu, S * B * y / den};
  }
  std::array<double, 2> vel(double tau) const {
    if (pure_scale) return {0.0, sig0 * u0 * std::exp(u0 * tau)};
    const double y = std::exp(-beta * tau), den = sq(y) + b();
    return {flip() * S * sq(B) * sq(y) / sq(den),
            S * B * beta * y * (sq(y) - b()) / sq(den)};
  }
  std::array<double, 2> acc(double tau) const {
    if (pure_scale) return {0.0, sig0 * sq(u0) * std::exp(u0 * tau)};
    const double y = std::exp(-beta * tau), den = sq(y) + b();
    return {flip() * 2 * beta * S * sq(B) * sq(y) * (sq(y) - b()) / std::pow(den, 3),
            S * B * sq(beta) * y * (std::pow(y, 4) - 6 * b() * sq(y) + sq(b())) /
                std::pow(den, 3)};
  }
  double speed() const { return pure_scale ? std::abs(u0) : std::numbers::sqrt2 * beta; }

  // Scale bounds over tau in [0, inf): the infimum is 0 and the supremum is
  // S sqrt(2) beta when B <= 2 sqrt(2) beta (interior maximum), else sigma(0).
  double sigma_sup() const {
    if (pure_scale) return u0 > 0 ? kInf : sig0;
    return (b() <= 1.0) ? S * std::numbers::sqrt2 * beta : S * B / (1 + b());
  }

  static GaussBlockGeodesic canonical(double A, double alpha) {
    GaussBlockGeodesic g;
    g.B = A;
    g.beta = alpha;
    return g;
  }

  // Exact inverse of the tau = 0 state map. Requires sigma0 > 0.
  static GaussBlockGeodesic from_ic(double mu0, double sig0, double dmu0, double dsig0) {
    if (!(sig0 > kScaleGuard)) fail_domain("gauss geodesic: sigma(0) must be positive");
    GaussBlockGeodesic g;
    if (dmu0 == 0.0) {
      g.pure_scale = true;
      g.sig0 = sig0;
      g.u0 = dsig0 / sig0;
      g.mu_const = mu0;
      return g;
    }
    g.reflect = dmu0 < 0;
    const double mu0_eff = g.flip() * mu0;   // solve in the mirrored frame if needed
    const double dmu = std::abs(dmu0);
    g.S = sq(sig0) / dmu;
    const double sp0 = sig0 / g.S;  // sigma in the unit-momentum frame
    const double u0 = dsig0 / sig0;  // scale-invariant log-derivative
    g.beta = std::sqrt(sq(u0) + sq(sp0) / 2);
    const double bb = (g.beta - u0) / (g.beta + u0);
    g.B = 2 * std::numbers::sqrt2 * g.beta * std::sqrt(bb);
    g.C = mu0_eff - g.S * (sq(g.B) / (2 * g.beta)) / (1 + bb);
    return g;
  }
};

struct ExpBlockGeodesic {
  double A = 1, alpha = 1;  // mu1(tau) = A e^{-alpha tau}
  double pos(double tau) const { return A * std::exp(-alpha * tau); }
  double vel(double tau) const { return -alpha * pos(tau); }
  double acc(double tau) const { return sq(alpha) * pos(tau); }
  double speed() const { return std::abs(alpha); }
  static ExpBlockGeodesic from_ic(double mu0, double dmu0) {
    if (!(mu0 > kScaleGuard)) fail_domain("exponential geodesic: mu(0) must be positive");
    return {mu0, -dmu0 / mu0};
  }
};

struct ClosedFormGeodesic {
  std::vector<std::variant<GaussBlockGeodesic, ExpBlockGeodesic>> blocks;

  Vec theta(double tau) const { return assemble(tau, 0); }
  Vec vel(double tau) const { return assemble(tau, 1); }
  Vec acc(double tau) const { return assemble(tau, 2); }

  double speed() const {
    double s2 = 0;
    for (const auto& blk : blocks)
      std::visit([&](const auto& g) { s2 += sq(g.speed()); }, blk);
    return std::sqrt(s2);
  }

  // All blocks share the rate alpha; location/scale blocks use B = A.
  static ClosedFormGeodesic canonical(const ProductChart& chart, double A, double alpha) {
    std::vector<double> rates(chart.blocks().size(), alpha);
    return canonical_rates(chart, A, rates);
  }

  static ClosedFormGeodesic canonical_rates(const ProductChart& chart, double A,
                                            const std::vector<double>& rates) {
    if (rates.size() != chart.blocks().size())
      fail_domain("canonical_rates: one rate per block required");
    ClosedFormGeodesic cf;
    size_t i = 0;
    for (const auto& b : chart.blocks()) {
      if (b.type == ProductChart::Block::gauss)
        cf.blocks.emplace_back(GaussBlockGeodesic::canonical(A, rates[i]));
      else
        cf.blocks.emplace_back(ExpBlockGeodesic{A, rates[i]});
      ++i;
    }
    return cf;
  }

  static ClosedFormGeodesic from_ic(const ProductChart& chart, const Vec& th0, const Vec& v0) {
    ClosedFormGeodesic cf;
    for (const auto& b : chart.blocks()) {
      if (b.type == ProductChart::Block::gauss)
        cf.blocks.emplace_back(GaussBlockGeodesic::from_ic(th0[b.p0], th0[b.p0 + 1],
                                                           v0[b.p0], v0[b.p0 + 1]));
      else
        cf.blocks.emplace_back(ExpBlockGeodesic::from_ic(th0[b.p0], v0[b.p0]));
    }
    return cf;
  }

 private:
  Vec assemble(double tau, int order) const {
    std::vector<double> out;
    for (const auto& blk : blocks) {
      if (std::holds_alternative<GaussBlockGeodesic>(blk)) {
        const auto& g = std::get<GaussBlockGeodesic>(blk);
        const auto v = (order == 0) ? g.pos(tau) : (order == 1) ? g.vel(tau) : g.acc(tau);
        out.push_back(v[0]);
        out.push_back(v[1]);
      } else {
        const auto& e = std::get<ExpBlockGeodesic>(blk);
        out.push_back((order == 0) ? e.pos(tau) : (order == 1) ? e.vel(tau) : e.acc(tau));
      }
    }
    return Eigen::Map<Vec>(out.data(), static_cast<long>(out.size()));
  }
};

// Residual of the geodesic equation, using the closed form's own analytic
// first and second derivatives.
inline double geodesic_residual(const ProductChart& chart, const ClosedFormGeodesic& cf,
                                double tau) {
  const Vec th = cf.theta(tau), v = cf.vel(tau), a = cf.acc(tau);
  const Tensor3 G = christoffel(chart, th);
  const int n = chart.dim();
  double worst = 0;
  for (int k = 0; k < n; ++k) {
    double s = a[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += G(k, i, j) * v[i] * v[j];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

// Residual with derivatives taken numerically from the position history
// (five-point central stencils; h balances truncation against roundoff).
inline double geodesic_residual_fd(const ProductChart& chart, const ClosedFormGeodesic& cf,
                                   double tau, double h = 4e-3) {
  const int n = chart.dim();
  Vec th[5];
  for (int s = -2; s <= 2; ++s) th[s + 2] = cf.theta(tau + s * h);
  const Vec v = (th[0] - 8 * th[1] + 8 * th[3] - th[4]) / (12 * h);
  const Vec a = (-th[0] + 16 * th[1] - 30 * th[2] + 16 * th[3] - th[4]) / (12 * h * h);
  const Tensor3 G = christoffel(chart, th[2]);
  double worst = 0;
  for (int k = 0; k < n; ++k) {
    double s = a[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += G(k, i, j) * v[i] * v[j];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

// Arc length along a trajectory up to tau (adaptive quadrature of the speed).
template <GeomChart C>
double geodesic_length(const C& chart, const GeodesicTrajectory& tr, double tau) {
  auto speed = [&](double t) {
    const Vec y = tr.sol.eval(t);
    const Vec th = y.head(tr.dim), v = y.tail(tr.dim);
    return std::sqrt(std::max(0.0, v.dot(chart.metric(th) * v)));
  };
  return integrate_adaptive(speed, 0.0, tau, 1e-12, 1e-10);
}

inline double closed_form_length(const ClosedFormGeodesic& cf, double tau) {
  return cf.speed() * tau;  // closed-form geodesics have constant speed
}

// |Theta(tau; alpha + dalpha) - Theta(tau; alpha)| for the canonical family.
inline double length_sensitivity(const ProductChart& chart, double A, double alpha,
                                 double dalpha, double tau) {
  const auto a = ClosedFormGeodesic::canonical(chart, A, alpha);
  const auto b = ClosedFormGeodesic::canonical(chart, A, alpha + dalpha);
  return std::abs(closed_form_length(b, tau) - closed_form_length(a, tau));
}

}  // namespace igc
