#pragma once

// Adaptive Gauss–Kronrod (15-point) quadrature for scalar and vector
// integrands, plus nested integration over axis-aligned boxes.

#include "igc/core.hpp"

#include <functional>

namespace igc {
namespace detail {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
inline constexpr double kGk15X[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGk15WK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGk15WG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double integral = 0;
  double error = 0;
};

template <class F>
PanelResult gk15_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0, resg = 0;
  for (int j = 0; j < 8; ++j) {
    const double x = kGk15X[j];
    double fsum;
    if (j == 7) {
      fsum = f(c);
      resg += kGk15WG[3] * fsum;
    } else {
      fsum = f(c - h * x) + f(c + h * x);
      if (j % 2 == 1) resg += kGk15WG[j / 2] * fsum;
    }
    resk += kGk15WK[j] * fsum;
  }
  PanelResult r;
  r.integral = resk * h;
  r.error = std::abs((resk - resg) * h);
  // QUADPACK-style sharpening of the raw Gauss/Kronrod gap.
  if (r.error > 0) {
    const double scale = std::pow(200.0 * r.error / std::max(1e-300, std::abs(r.integral)), 1.5);
    if (scale < 1.0) r.error = std::abs(r.integral) * scale;
  }
  return r;
}

}  // namespace detail

// Adaptive bisection on [a, b] until |error| <= atol + rtol*|I|.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double atol = 1e-12,
                          double rtol = 1e-10, int max_depth = 52) {
  struct Item {
    double a, b;
    detail::PanelResult r;
    int depth;
  };
  std::vector<Item> stack;
  stack.push_back({a, b, detail::gk15_panel(f, a, b), 0});
  double total = 0, err = 0;
  // Crude global estimate for the relative-tolerance scale.
  double scale = std::abs(stack.front().r.integral);
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const double tol_here =
        std::max(atol * (it.b - it.a) / std::max(1e-300, b - a), rtol * scale * 0.01);
    if (it.r.error <= tol_here || it.depth >= max_depth) {
      total += it.r.integral;
      err += it.r.error;
      continue;
    }
    const double m = 0.5 * (it.a + it.b);
    Item left{it.a, m, detail::gk15_panel(f, it.a, m), it.depth + 1};
    Item right{m, it.b, detail::gk15_panel(f, m, it.b), it.depth + 1};
    scale = std::max(scale, std::abs(left.r.integral) + std::abs(right.r.integral));
    stack.push_back(left);
    stack.push_back(right);
  }
  (void)err;
  return total;
}

// Vector-valued integrand version; refinement is driven by the worst
// component. `m` is the integrand dimension.
template <class F>
Vec integrate_adaptive_vec(F&& f, int m, double a, double b, double atol = 1e-12,
                           double rtol = 1e-10, int max_depth = 40) {
  struct Panel {
    double a, b;
    Vec integral;
    Vec error;
    int depth;
  };
  auto eval_panel = [&](double pa, double pb) {
    const double c = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
    Vec resk = Vec::Zero(m), resg = Vec::Zero(m);
    for (int j = 0; j < 8; ++j) {
      const double x = detail::kGk15X[j];
      Vec fsum;
      if (j == 7) {
        fsum = f(c);
        resg += detail::kGk15WG[3] * fsum;
      } else {
        fsum = f(c - h * x) + f(c + h * x);
        if (j % 2 == 1) resg += detail::kGk15WG[j / 2] * fsum;
      }
      resk += detail::kGk15WK[j] * fsum;
    }
    Panel p;
    p.a = pa;
    p.b = pb;
    p.integral = resk * h;
    p.error = ((resk - resg) * h).cwiseAbs();
    return p;
  };
  std::vector<Panel> stack;
  stack.push_back(eval_panel(a, b));
  stack.back().depth = 0;
  Vec total = Vec::Zero(m);
  Vec scale = stack.front().integral.cwiseAbs();
  while (!stack.empty()) {
    Panel it = stack.back();
    stack.pop_back();
    bool ok = true;
    for (int i = 0; i < m; ++i) {
      const double tol_here = std::max(atol * (it.b - it.a) / std::max(1e-300, b - a),
                                       rtol * scale[i] * 0.01);
      if (it.error[i] > tol_here) ok = false;
    }
    if (ok || it.depth >= max_depth) {
      total += it.integral;
      continue;
    }
    const double mid = 0.5 * (it.a + it.b);
    Panel left = eval_panel(it.a, mid);
    Panel right = eval_panel(mid, it.b);
    left.depth = right.depth = it.depth + 1;
    scale = scale.cwiseMax(left.integral.cwiseAbs() + right.integral.cwiseAbs());
    stack.push_back(left);
    stack.push_back(right);
  }
  return total;
}

using Box = std::vector<std::pair<double, double>>;

// Iterated (nested) adaptive quadrature of f over an axis-aligned box.
inline double integrate_box(const std::function<double(const Vec&)>& f, const Box& box,
                            double atol = 1e-12, double rtol = 1e-9) {
  const int d = static_cast<int>(box.size());
  Vec x = Vec::Zero(d);
  std::function<double(int)> level = [&](int k) -> double {
    if (k == d) return f(x);
    return integrate_adaptive(
        [&](double xk) {
          x[k] = xk;
          return level(k + 1);
        },
        box[k].first, box[k].second, atol, rtol);
  };
  return level(0);
}

// Nested vector version (outermost drives a full vector integrand).
inline Vec integrate_box_vec(const std::function<Vec(const Vec&)>& f, int m, const Box& box,
                             double atol = 1e-12, double rtol = 1e-9) {
  const int d = static_cast<int>(box.size());
  Vec x = Vec::Zero(d);
  std::function<Vec(int)> level = [&](int k) -> Vec {
    if (k == d) return f(x);
    return integrate_adaptive_vec(
        [&](double xk) {
          x[k] = xk;
          return level(k + 1);
        },
        m, box[k].first, box[k].second, atol, rtol);
  };
  return level(0);
}

}  // namespace igc
