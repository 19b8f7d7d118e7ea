#pragma once

// Metric evaluation (closed-form and by quadrature), Christoffel symbols,
// Riemann/Ricci/scalar curvature, sectional curvature, the projective
// curvature tensor, and the Killing-equation residual.
//
// Index conventions used throughout (pinned by the validation suite):
//   Gamma(k,i,j)            = Gamma^k_{ij}
//   dGamma(m,k,i,j)         = d_m Gamma^k_{ij}
//   R^a_{bcd}               = d_c Gamma^a_{bd} - d_d Gamma^a_{bc}
//                             + Gamma^a_{ec} Gamma^e_{bd} - Gamma^a_{ed} Gamma^e_{bc}
//   R_{abcd}                = g_{ae} R^e_{bcd}      (lowering the first index)
//   Ricci R_{bd}            = R^a_{bad}
//   sectional K(u,v)        = R(u,v,u,v) / (g(u,u) g(v,v) - g(u,v)^2)

#include "igc/core.hpp"
#include "igc/families.hpp"
#include "igc/quadrature.hpp"

#include <concepts>

namespace igc {

template <class C>
concept GeomChart = requires(const C& c, const Vec& th) {
  { c.dim() } -> std::convertible_to<int>;
  { c.metric(th) } -> std::convertible_to<Mat>;
  { c.in_domain(th) } -> std::convertible_to<bool>;
};

template <class C>
concept HasClosedD1 = requires(const C& c, const Vec& th) {
  { c.metric_d1(th) } -> std::convertible_to<Tensor3>;
};
template <class C>
concept HasClosedD2 = requires(const C& c, const Vec& th) {
  { c.metric_d2(th) } -> std::convertible_to<Tensor4>;
};

template <class C>
concept StatChart = GeomChart<C> && requires(const C& c, const Vec& th, const Vec& x) {
  { c.sample_dim() } -> std::convertible_to<int>;
  { c.log_pdf(th, x) } -> std::convertible_to<double>;
  { c.score(th, x) } -> std::convertible_to<Vec>;
  { c.sample_box(th) } -> std::convertible_to<Box>;
};

struct MetricValue {
  Mat g, g_inv;
  double det = 0, sqrt_det = 0, eig_min = 0;
};

template <GeomChart C>
MetricValue fisher_metric(const C& chart, const Vec& th) {
  MetricValue m;
  m.g = chart.metric(th);
  m.g_inv = m.g.inverse();
  m.det = m.g.determinant();
  m.sqrt_det = std::sqrt(std::max(0.0, m.det));
  Eigen::SelfAdjointEigenSolver<Mat> es(m.g);
  m.eig_min = es.eigenvalues().minCoeff();
  return m;
}

// --- metric derivatives -----------------------------------------------------

template <GeomChart C>
Tensor3 metric_d1_fd(const C& chart, const Vec& th, double h0 = 1e-5) {
  const int n = chart.dim();
  Tensor3 d(n);
  Vec t = th;
  for (int k = 0; k < n; ++k) {
    const double h = fd_step(h0, th[k]);
    t[k] = th[k] + h;
    const Mat gp = chart.metric(t);
    t[k] = th[k] - h;
    const Mat gm = chart.metric(t);
    t[k] = th[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(k, i, j) = (gp(i, j) - gm(i, j)) / (2 * h);
  }
  return d;
}

template <GeomChart C>
Tensor3 metric_d1_any(const C& chart, const Vec& th) {
  if constexpr (HasClosedD1<C>)
    return chart.metric_d1(th);
  else
    return metric_d1_fd(chart, th);
}

// --- Christoffel symbols ----------------------------------------------------

inline Tensor3 christoffel_from(const Mat& g_inv, const Tensor3& dg) {
  const int n = dg.dim();
  Tensor3 G(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l)
          s += g_inv(k, l) * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
        G(k, i, j) = 0.5 * s;
        G(k, j, i) = G(k, i, j);
      }
  return G;
}

template <GeomChart C>
Tensor3 christoffel(const C& chart, const Vec& th) {
  return christoffel_from(chart.metric(th).inverse(), metric_d1_any(chart, th));
}

// Forced finite-difference variant (treats the metric as a black box).
template <GeomChart C>
Tensor3 christoffel_fd(const C& chart, const Vec& th, double h0 = 1e-5) {
  return christoffel_from(chart.metric(th).inverse(), metric_d1_fd(chart, th, h0));
}

// dGamma(m,k,i,j) from closed-form first and second metric derivatives.
inline Tensor4 christoffel_d1_from(const Mat& g_inv, const Tensor3& dg, const Tensor4& ddg) {
  const int n = dg.dim();
  // d_m g^{kl} = -g^{ka} (d_m g_{ab}) g^{bl}
  Tensor3 dginv(n);
  for (int m = 0; m < n; ++m) {
    Mat dgm(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dgm(a, b) = dg(m, a, b);
    const Mat d = -g_inv * dgm * g_inv;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) dginv(m, k, l) = d(k, l);
  }
  Tensor4 dG(n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0;
          for (int l = 0; l < n; ++l) {
            s += dginv(m, k, l) * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
            s += g_inv(k, l) * (ddg(m, i, l, j) + ddg(m, j, l, i) - ddg(m, l, i, j));
          }
          dG(m, k, i, j) = 0.5 * s;
          dG(m, k, j, i) = dG(m, k, i, j);
        }
  return dG;
}

template <GeomChart C>
Tensor4 christoffel_d1(const C& chart, const Vec& th) {
  if constexpr (HasClosedD1<C> && HasClosedD2<C>) {
    return christoffel_d1_from(chart.metric(th).inverse(), chart.metric_d1(th),
                               chart.metric_d2(th));
  } else {
    // Central differences of the (closed-derivative) Christoffel symbols.
    const int n = chart.dim();
    Tensor4 dG(n);
    Vec t = th;
    for (int m = 0; m < n; ++m) {
      const double h = fd_step(1e-5, th[m]);
      t[m] = th[m] + h;
      const Tensor3 Gp = christoffel(chart, t);
      t[m] = th[m] - h;
      const Tensor3 Gm = christoffel(chart, t);
      t[m] = th[m];
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) dG(m, k, i, j) = (Gp(k, i, j) - Gm(k, i, j)) / (2 * h);
    }
    return dG;
  }
}

// --- curvature ----------------------------------------------------------------

inline Tensor4 riemann_up_from(const Tensor3& G, const Tensor4& dG) {
  const int n = G.dim();
  Tensor4 R(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          double s = dG(c, a, b, d) - dG(d, a, b, c);
          for (int e = 0; e < n; ++e)
            s += G(a, e, c) * G(e, b, d) - G(a, e, d) * G(e, b, c);
          R(a, b, c, d) = s;
          R(a, b, d, c) = -s;
        }
  return R;
}

inline Tensor4 lower_first(const Mat& g, const Tensor4& Rup) {
  const int n = Rup.dim();
  Tensor4 R(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0;
          for (int e = 0; e < n; ++e) s += g(a, e) * Rup(e, b, c, d);
          R(a, b, c, d) = s;
        }
  return R;
}

struct CurvatureReport {
  MetricValue metric;
  Tensor3 gamma;
  Tensor4 riemann_up;   // R^a_{bcd}
  Tensor4 riemann_low;  // R_{abcd}
  Mat ricci;
  double scalar = 0;
};

inline CurvatureReport curvature_from(const MetricValue& m, const Tensor3& G,
                                      const Tensor4& dG) {
  CurvatureReport r;
  r.metric = m;
  r.gamma = G;
  r.riemann_up = riemann_up_from(G, dG);
  r.riemann_low = lower_first(m.g, r.riemann_up);
  const int n = G.dim();
  r.ricci = Mat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double s = 0;
      for (int a = 0; a < n; ++a) s += r.riemann_up(a, b, a, d);
      r.ricci(b, d) = s;
    }
  r.scalar = (m.g_inv * r.ricci).trace();
  return r;
}

template <GeomChart C>
CurvatureReport curvature(const C& chart, const Vec& th) {
  return curvature_from(fisher_metric(chart, th), christoffel(chart, th),
                        christoffel_d1(chart, th));
}

// Pure finite-difference pipeline: the metric is evaluated as a black box;
// Christoffels come from central differences at h_in, their derivatives from
// a second central difference at h_out (wider to limit noise amplification).
template <GeomChart C>
CurvatureReport curvature_fd(const C& chart, const Vec& th, double h_in = 1e-5,
                             double h_out = 1e-4) {
  const int n = chart.dim();
  const Tensor3 G = christoffel_fd(chart, th, h_in);
  Tensor4 dG(n);
  Vec t = th;
  for (int m = 0; m < n; ++m) {
    const double h = fd_step(h_out, th[m]);
    t[m] = th[m] + h;
    const Tensor3 Gp = christoffel_fd(chart, t, h_in);
    t[m] = th[m] - h;
    const Tensor3 Gm = christoffel_fd(chart, t, h_in);
    t[m] = th[m];
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dG(m, k, i, j) = (Gp(k, i, j) - Gm(k, i, j)) / (2 * h);
  }
  return curvature_from(fisher_metric(chart, th), G, dG);
}

inline double sectional(const CurvatureReport& r, const Vec& u, const Vec& v) {
  const int n = r.gamma.dim();
  double num = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) num += r.riemann_low(a, b, c, d) * u[a] * v[b] * u[c] * v[d];
  const double guu = u.dot(r.metric.g * u);
  const double gvv = v.dot(r.metric.g * v);
  const double guv = u.dot(r.metric.g * v);
  const double den = guu * gvv - sq(guv);
  if (!(den > 0)) fail_domain("sectional: degenerate plane (u, v linearly dependent)");
  return num / den;
}

// Projective curvature tensor: W_{abcd} = R_{abcd} - S/(n(n-1)) (g_{bd} g_{ac} - g_{bc} g_{ad}).
// Vanishes identically on constant-curvature charts.
inline Tensor4 weyl_projective(const CurvatureReport& r) {
  const int n = r.gamma.dim();
  const double k = r.scalar / (n * (n - 1));
  Tensor4 W(n);
  const Mat& g = r.metric.g;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          W(a, b, c, d) = r.riemann_low(a, b, c, d) - k * (g(b, d) * g(a, c) - g(b, c) * g(a, d));
  return W;
}

// Worst violation of the lowered Riemann tensor's algebraic structure:
// antisymmetry in both index pairs, pair exchange, and the first cyclic
// identity R_{a[bcd]} = 0.
inline double riemann_symmetry_residual(const CurvatureReport& r) {
  const int n = r.gamma.dim();
  const Tensor4& R = r.riemann_low;
  double worst = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          worst = std::max(worst, std::abs(R(a, b, c, d) + R(a, b, d, c)));
          worst = std::max(worst, std::abs(R(a, b, c, d) + R(b, a, c, d)));
          worst = std::max(worst, std::abs(R(a, b, c, d) - R(c, d, a, b)));
          worst = std::max(worst, std::abs(R(a, b, c, d) + R(a, c, d, b) + R(a, d, b, c)));
        }
  return worst;
}

// Symmetrized covariant derivative of a (contravariant) vector field:
//   T_{mn} = D_m K_n + D_n K_m,   D_m K_n = d_m K_n - Gamma^p_{mn} K_p,
// with K_n = g_{nl} K^l. Vanishes iff K generates an isometry.
// `K` is the field value at th; `dK(l, m) = d_m K^l` its Jacobian there.
template <GeomChart C>
Mat killing_residual(const C& chart, const Vec& th, const Vec& K, const Mat& dK) {
  const int n = chart.dim();
  const Mat g = chart.metric(th);
  const Tensor3 dg = metric_d1_any(chart, th);
  const Tensor3 G = christoffel_from(g.inverse(), dg);
  const Vec K_low = g * K;
  // d_m K_n = (d_m g_{nl}) K^l + g_{nl} d_m K^l
  Mat dK_low(n, n);  // (m, n)
  for (int m = 0; m < n; ++m)
    for (int nn = 0; nn < n; ++nn) {
      double s = 0;
      for (int l = 0; l < n; ++l) s += dg(m, nn, l) * K[l] + g(nn, l) * dK(l, m);
      dK_low(m, nn) = s;
    }
  Mat T(n, n);
  for (int m = 0; m < n; ++m)
    for (int nn = 0; nn < n; ++nn) {
      double cov_mn = dK_low(m, nn), cov_nm = dK_low(nn, m);
      for (int p = 0; p < n; ++p) {
        cov_mn -= G(p, m, nn) * K_low[p];
        cov_nm -= G(p, nn, m) * K_low[p];
      }
      T(m, nn) = cov_mn + cov_nm;
    }
  return T;
}

// --- metric by quadrature ----------------------------------------------------

// E[score_i score_j] over the sampling density: nested adaptive quadrature of
// a single vector integrand carrying all metric entries plus the score mean.
template <StatChart C>
Mat fisher_metric_numeric(const C& chart, const Vec& th, double atol = 1e-12,
                          double rtol = 1e-9) {
  const int d = chart.dim();
  const int m = d * (d + 1) / 2;
  auto integrand = [&](const Vec& x) {
    const double p = std::exp(chart.log_pdf(th, x));
    const Vec s = chart.score(th, x);
    Vec out(m);
    int idx = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) out[idx++] = p * s[i] * s[j];
    return out;
  };
  const Vec flat = integrate_box_vec(integrand, m, chart.sample_box(th), atol, rtol);
  Mat g(d, d);
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      g(i, j) = flat[idx];
      g(j, i) = flat[idx];
      ++idx;
    }
  return g;
}

// Product-chart overload: independent factors make cross-block second moments
// factor into products of per-block first moments (zero in exact arithmetic),
// so each block needs only a one-dimensional quadrature.
inline Mat fisher_metric_numeric(const ProductChart& chart, const Vec& th,
                                 double atol = 1e-12, double rtol = 1e-9) {
  const int d = chart.dim();
  Mat g = Mat::Zero(d, d);
  Vec block_mean = Vec::Zero(d);
  const Box box = chart.sample_box(th);
  Vec x = Vec::Zero(chart.sample_dim());
  for (const auto& b : chart.blocks()) {
    const int np = b.np;
    const int m = np * (np + 1) / 2 + np;
    auto integrand = [&](double xb) {
      x[b.x] = xb;
      const Vec s = chart.score(th, x);
      // Only this block's density factor matters; the others integrate to one.
      double lp;
      if (b.type == ProductChart::Block::gauss) {
        const double mu = th[b.p0], sg = th[b.p0 + 1];
        lp = -0.5 * sq((xb - mu) / sg) - std::log(sg) - 0.5 * kLog2Pi;
      } else {
        const double mm = th[b.p0];
        lp = -std::log(mm) - xb / mm;
      }
      const double p = std::exp(lp);
      Vec out(m);
      int idx = 0;
      for (int i = 0; i < np; ++i)
        for (int j = i; j < np; ++j) out[idx++] = p * s[b.p0 + i] * s[b.p0 + j];
      for (int i = 0; i < np; ++i) out[idx++] = p * s[b.p0 + i];
      return out;
    };
    const Vec flat = integrate_adaptive_vec(integrand, m, box[b.x].first, box[b.x].second,
                                            atol, rtol);
    int idx = 0;
    for (int i = 0; i < np; ++i)
      for (int j = i; j < np; ++j) {
        g(b.p0 + i, b.p0 + j) = flat[idx];
        g(b.p0 + j, b.p0 + i) = flat[idx];
        ++idx;
      }
    for (int i = 0; i < np; ++i) block_mean[b.p0 + i] = flat[idx++];
  }
  // Cross-block entries: E[s_i s_j] = E[s_i] E[s_j] for independent blocks.
  for (const auto& bi : chart.blocks())
    for (const auto& bj : chart.blocks()) {
      if (bi.p0 == bj.p0) continue;
      for (int i = 0; i < bi.np; ++i)
        for (int j = 0; j < bj.np; ++j)
          g(bi.p0 + i, bj.p0 + j) = block_mean[bi.p0 + i] * block_mean[bj.p0 + j];
    }
  return g;
}

// Mean score by quadrature (should vanish identically in theta).
template <StatChart C>
Vec score_mean_numeric(const C& chart, const Vec& th, double atol = 1e-12,
                       double rtol = 1e-9) {
  const int d = chart.dim();
  auto integrand = [&](const Vec& x) {
    return Vec(std::exp(chart.log_pdf(th, x)) * chart.score(th, x));
  };
  return integrate_box_vec(integrand, d, chart.sample_box(th), atol, rtol);
}

// Relative entropy by quadrature: E_{thp}[log p_{thp} - log p_{th}].
template <StatChart C>
double relative_entropy_numeric(const C& chart, const Vec& thp, const Vec& th,
                                double atol = 1e-12, double rtol = 1e-9) {
  auto integrand = [&](const Vec& x) {
    const double lpp = chart.log_pdf(thp, x);
    return std::exp(lpp) * (lpp - chart.log_pdf(th, x));
  };
  return integrate_box(integrand, chart.sample_box(thp), atol, rtol);
}

}  // namespace igc
