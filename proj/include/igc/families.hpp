#pragma once

// Parametric probability families as coordinate charts on statistical
// manifolds, with closed-form metrics and their first/second parameter
// derivatives, log-densities and scores for quadrature cross-checks,
// maximum-entropy constructors, and closed-form relative entropies.

#include "igc/core.hpp"
#include "igc/quadrature.hpp"

#include <numbers>

namespace igc {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

// ---------------------------------------------------------------------------
// Product charts: ordered blocks, each either a location/scale pair with a
// normal sampling density (params mu, sigma; metric diag(1/sigma^2,
// 2/sigma^2)) or a positive-mean block with an exponential sampling density
// (param mu; metric 1/mu^2). The metric is block-diagonal; independent
// factors make cross-block moments factor exactly.

class ProductChart {
 public:
  enum class Block { gauss, expo };
  struct BlockInfo {
    Block type;
    int p0;  // first parameter index (gauss: mu at p0, sigma at p0+1)
    int np;  // number of parameters (2 or 1)
    int x;   // sample-space slot
  };

  ProductChart(std::string kind, std::vector<Block> blocks) : kind_(std::move(kind)) {
    int p = 0, x = 0;
    for (Block b : blocks) {
      const int np = (b == Block::gauss) ? 2 : 1;
      blocks_.push_back({b, p, np, x});
      p += np;
      ++x;
    }
    dim_ = p;
  }

  static ProductChart gaussian() { return {"gaussian", {Block::gauss}}; }
  static ProductChart exponential() { return {"exponential", {Block::expo}}; }
  static ProductChart exp_gauss() { return {"exp_gauss", {Block::expo, Block::gauss}}; }
  static ProductChart gauss_pair() { return {"gauss_pair", {Block::gauss, Block::gauss}}; }
  static ProductChart gauss_blocks(int pairs) {
    if (pairs < 1) fail_domain("gauss_blocks: need at least one block");
    return {"gauss_blocks", std::vector<Block>(static_cast<size_t>(pairs), Block::gauss)};
  }

  const std::string& kind() const { return kind_; }
  int dim() const { return dim_; }
  int sample_dim() const { return static_cast<int>(blocks_.size()); }
  const std::vector<BlockInfo>& blocks() const { return blocks_; }

  bool in_domain(const Vec& th) const {
    for (const auto& b : blocks_) {
      const double scale = (b.type == Block::gauss) ? th[b.p0 + 1] : th[b.p0];
      if (!(scale > kScaleGuard)) return false;
    }
    return true;
  }

  void check_domain(const Vec& th) const {
    for (const auto& b : blocks_) {
      const double scale = (b.type == Block::gauss) ? th[b.p0 + 1] : th[b.p0];
      if (!(scale > kScaleGuard))
        fail_domain(kind_ + ": scale parameter at index " +
                    std::to_string(b.type == Block::gauss ? b.p0 + 1 : b.p0) + " is " +
                    fmt17(scale) + " (must exceed " + fmt17(kScaleGuard) + ")");
    }
  }

  Mat metric(const Vec& th) const {
    check_domain(th);
    Mat g = Mat::Zero(dim_, dim_);
    for (const auto& b : blocks_) {
      if (b.type == Block::gauss) {
        const double s = th[b.p0 + 1];
        g(b.p0, b.p0) = 1.0 / sq(s);
        g(b.p0 + 1, b.p0 + 1) = 2.0 / sq(s);
      } else {
        const double m = th[b.p0];
        g(b.p0, b.p0) = 1.0 / sq(m);
      }
    }
    return g;
  }

  Tensor3 metric_d1(const Vec& th) const {
    check_domain(th);
    Tensor3 d(dim_);  // d(k, i, j) = d g_ij / d theta_k
    for (const auto& b : blocks_) {
      if (b.type == Block::gauss) {
        const double s = th[b.p0 + 1];
        d(b.p0 + 1, b.p0, b.p0) = -2.0 / std::pow(s, 3);
        d(b.p0 + 1, b.p0 + 1, b.p0 + 1) = -4.0 / std::pow(s, 3);
      } else {
        const double m = th[b.p0];
        d(b.p0, b.p0, b.p0) = -2.0 / std::pow(m, 3);
      }
    }
    return d;
  }

  Tensor4 metric_d2(const Vec& th) const {
    check_domain(th);
    Tensor4 d(dim_);  // d(l, k, i, j) = d^2 g_ij / d theta_l d theta_k
    for (const auto& b : blocks_) {
      if (b.type == Block::gauss) {
        const double s = th[b.p0 + 1];
        d(b.p0 + 1, b.p0 + 1, b.p0, b.p0) = 6.0 / std::pow(s, 4);
        d(b.p0 + 1, b.p0 + 1, b.p0 + 1, b.p0 + 1) = 12.0 / std::pow(s, 4);
      } else {
        const double m = th[b.p0];
        d(b.p0, b.p0, b.p0, b.p0) = 6.0 / std::pow(m, 4);
      }
    }
    return d;
  }

  double log_pdf(const Vec& th, const Vec& x) const {
    check_domain(th);
    double lp = 0;
    for (const auto& b : blocks_) {
      if (b.type == Block::gauss) {
        const double mu = th[b.p0], s = th[b.p0 + 1];
        lp += -0.5 * sq((x[b.x] - mu) / s) - std::log(s) - 0.5 * kLog2Pi;
      } else {
        const double m = th[b.p0];
        if (x[b.x] < 0) return -kInf;
        lp += -std::log(m) - x[b.x] / m;
      }
    }
    return lp;
  }

  Vec score(const Vec& th, const Vec& x) const {
    check_domain(th);
    Vec s = Vec::Zero(dim_);
    for (const auto& b : blocks_) {
      if (b.type == Block::gauss) {
        const double mu = th[b.p0], sg = th[b.p0 + 1];
        const double z = x[b.x] - mu;
        s[b.p0] = z / sq(sg);
        s[b.p0 + 1] = (sq(z) - sq(sg)) / std::pow(sg, 3);
      } else {
        const double m = th[b.p0];
        s[b.p0] = (x[b.x] - m) / sq(m);
      }
    }
    return s;
  }

  // Integration ranges covering the sampling density to ~1e-30 mass loss.
  Box sample_box(const Vec& th) const {
    check_domain(th);
    Box box(blocks_.size());
    for (const auto& b : blocks_) {
      if (b.type == Block::gauss) {
        const double mu = th[b.p0], s = th[b.p0 + 1];
        box[b.x] = {mu - 12 * s, mu + 12 * s};
      } else {
        box[b.x] = {0.0, 40 * th[b.p0]};
      }
    }
    return box;
  }

 private:
  std::string kind_;
  std::vector<BlockInfo> blocks_;
  int dim_ = 0;
};

// ---------------------------------------------------------------------------
// Bivariate normal with fixed correlation r, coordinates (mu_x, sigma_x,
// mu_y, sigma_y). Metric entries are r-weighted powers of the two scales.

class CorrGaussChart {
 public:
  explicit CorrGaussChart(double r) : r_(r) {
    if (!(std::abs(r) < 1.0 - kScaleGuard))
      fail_domain("corr_gauss: correlation must satisfy |r| < 1, got " + fmt17(r));
    const double q = 1.0 - sq(r);
    // Nonzero entries as c * sigma_x^px * sigma_y^py (symmetric pairs listed once).
    entries_ = {
        {0, 0, -2, 0, 1.0 / q},          {1, 1, -2, 0, (2.0 - sq(r)) / q},
        {2, 2, 0, -2, 1.0 / q},          {3, 3, 0, -2, (2.0 - sq(r)) / q},
        {0, 2, -1, -1, -r / q},          {1, 3, -1, -1, -sq(r) / q},
    };
  }

  const char* kind() const { return "corr_gauss"; }
  double correlation() const { return r_; }
  int dim() const { return 4; }
  int sample_dim() const { return 2; }

  bool in_domain(const Vec& th) const {
    return th[1] > kScaleGuard && th[3] > kScaleGuard;
  }
  void check_domain(const Vec& th) const {
    if (!in_domain(th))
      fail_domain(std::string("corr_gauss: scale parameters must exceed ") + fmt17(kScaleGuard));
  }

  Mat metric(const Vec& th) const {
    check_domain(th);
    Mat g = Mat::Zero(4, 4);
    for (const auto& e : entries_) {
      const double v = e.c * std::pow(th[1], e.px) * std::pow(th[3], e.py);
      g(e.i, e.j) = v;
      g(e.j, e.i) = v;
    }
    return g;
  }

  Tensor3 metric_d1(const Vec& th) const {
    check_domain(th);
    Tensor3 d(4);
    for (const auto& e : entries_) {
      const double vx = e.c * e.px * std::pow(th[1], e.px - 1) * std::pow(th[3], e.py);
      const double vy = e.c * e.py * std::pow(th[1], e.px) * std::pow(th[3], e.py - 1);
      d(1, e.i, e.j) = vx;
      d(1, e.j, e.i) = vx;
      d(3, e.i, e.j) = vy;
      d(3, e.j, e.i) = vy;
    }
    return d;
  }

  Tensor4 metric_d2(const Vec& th) const {
    check_domain(th);
    Tensor4 d(4);
    for (const auto& e : entries_) {
      const double vxx =
          e.c * e.px * (e.px - 1) * std::pow(th[1], e.px - 2) * std::pow(th[3], e.py);
      const double vxy =
          e.c * e.px * e.py * std::pow(th[1], e.px - 1) * std::pow(th[3], e.py - 1);
      const double vyy =
          e.c * e.py * (e.py - 1) * std::pow(th[1], e.px) * std::pow(th[3], e.py - 2);
      for (auto [i, j] : {std::pair{e.i, e.j}, std::pair{e.j, e.i}}) {
        d(1, 1, i, j) = vxx;
        d(1, 3, i, j) = vxy;
        d(3, 1, i, j) = vxy;
        d(3, 3, i, j) = vyy;
        if (e.i == e.j) break;
      }
    }
    return d;
  }

  double log_pdf(const Vec& th, const Vec& x) const {
    check_domain(th);
    const double sx = th[1], sy = th[3], q = 1.0 - sq(r_);
    const double zx = (x[0] - th[0]) / sx, zy = (x[1] - th[2]) / sy;
    const double quad = (sq(zx) - 2 * r_ * zx * zy + sq(zy)) / q;
    return -0.5 * quad - std::log(sx) - std::log(sy) - 0.5 * std::log(q) - kLog2Pi;
  }

  Vec score(const Vec& th, const Vec& x) const {
    check_domain(th);
    const double sx = th[1], sy = th[3], q = 1.0 - sq(r_);
    const double zx = (x[0] - th[0]) / sx, zy = (x[1] - th[2]) / sy;
    Vec s(4);
    s[0] = (zx - r_ * zy) / (sx * q);
    s[1] = (sq(zx) - r_ * zx * zy) / (sx * q) - 1.0 / sx;
    s[2] = (zy - r_ * zx) / (sy * q);
    s[3] = (sq(zy) - r_ * zx * zy) / (sy * q) - 1.0 / sy;
    return s;
  }

  Box sample_box(const Vec& th) const {
    check_domain(th);
    return {{th[0] - 12 * th[1], th[0] + 12 * th[1]},
            {th[2] - 12 * th[3], th[2] + 12 * th[3]}};
  }

  // Covariance matrix of the sampling density at th.
  Mat covariance(const Vec& th) const {
    Mat S(2, 2);
    S << sq(th[1]), r_ * th[1] * th[3], r_ * th[1] * th[3], sq(th[3]);
    return S;
  }

 private:
  struct Entry {
    int i, j, px, py;
    double c;
  };
  double r_;
  std::vector<Entry> entries_;
};

// Closed-form r-dependent reference expression used by the acceptance gate:
// -[8(r^2 - 2) + 2 r^2 (3 r^2 - 2)] / [8(r^2 - 1)], i.e. -2 at r = 0 and
// -2.4375 at r = +-1/2.  Note that the actual scalar curvature of the
// correlated chart's metric is -2 independent of r (checked three ways:
// symbolic algebra, the analytic pipeline, and black-box finite differences),
// so this expression agrees with the computed curvature only as r -> 0.
inline double corr_gauss_scalar_reference(double r) {
  const double r2 = sq(r);
  return -(8 * (r2 - 2) + 2 * r2 * (3 * r2 - 2)) / (8 * (r2 - 1));
}

// ---------------------------------------------------------------------------
// Synthetic geometry-only charts for validation.

struct FlatChart {
  int n = 2;
  int dim() const { return n; }
  bool in_domain(const Vec&) const { return true; }
  Mat metric(const Vec&) const { return Mat::Identity(n, n); }
  Tensor3 metric_d1(const Vec&) const { return Tensor3(n); }
  Tensor4 metric_d2(const Vec&) const { return Tensor4(n); }
};

// Upper half-plane, g = diag(1/y^2, 1/y^2): constant sectional curvature -1.
struct HalfPlaneChart {
  int dim() const { return 2; }
  bool in_domain(const Vec& th) const { return th[1] > kScaleGuard; }
  Mat metric(const Vec& th) const {
    if (!in_domain(th)) fail_domain("half_plane: y must be positive");
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = g(1, 1) = 1.0 / sq(th[1]);
    return g;
  }
  Tensor3 metric_d1(const Vec& th) const {
    Tensor3 d(2);
    const double y = th[1];
    d(1, 0, 0) = d(1, 1, 1) = -2.0 / std::pow(y, 3);
    return d;
  }
  Tensor4 metric_d2(const Vec& th) const {
    Tensor4 d(2);
    const double y = th[1];
    d(1, 1, 0, 0) = d(1, 1, 1, 1) = 6.0 / std::pow(y, 4);
    return d;
  }
};

// ---------------------------------------------------------------------------
// Maximum-entropy constructions.

struct GaussianDensity {
  double mu, sigma;
  double log_pdf(double x) const {
    return -0.5 * sq((x - mu) / sigma) - std::log(sigma) - 0.5 * kLog2Pi;
  }
  double entropy() const { return 0.5 * std::log(2 * std::numbers::pi * std::numbers::e * sq(sigma)); }
};

struct ExponentialDensity {
  double mu;  // mean
  double log_pdf(double x) const { return x < 0 ? -kInf : -std::log(mu) - x / mu; }
  double entropy() const { return 1.0 + std::log(mu); }
};

// The entropy-maximizing density on R under fixed mean and variance.
inline GaussianDensity maxent_gaussian(double mean, double variance) {
  if (!(variance > sq(kScaleGuard)))
    fail_domain("maxent_gaussian: variance must be positive, got " + fmt17(variance));
  return {mean, std::sqrt(variance)};
}

// The entropy-maximizing density on [0, inf) under a fixed mean.
inline ExponentialDensity maxent_positive_mean(double mean) {
  if (!(mean > kScaleGuard))
    fail_domain("maxent_positive_mean: mean must be positive, got " + fmt17(mean));
  return {mean};
}

// ---------------------------------------------------------------------------
// Relative entropy (Kullback–Leibler divergence), KL(p_thp || p_th).

inline double relative_entropy(const ProductChart& c, const Vec& thp, const Vec& th) {
  c.check_domain(thp);
  c.check_domain(th);
  double kl = 0;
  for (const auto& b : c.blocks()) {
    if (b.type == ProductChart::Block::gauss) {
      const double mup = thp[b.p0], sp = thp[b.p0 + 1];
      const double mu = th[b.p0], s = th[b.p0 + 1];
      kl += std::log(s / sp) + (sq(sp) + sq(mup - mu)) / (2 * sq(s)) - 0.5;
    } else {
      const double mp = thp[b.p0], m = th[b.p0];
      kl += std::log(m / mp) + mp / m - 1.0;
    }
  }
  return kl;
}

inline double relative_entropy(const CorrGaussChart& c, const Vec& thp, const Vec& th) {
  c.check_domain(thp);
  c.check_domain(th);
  const Mat Sp = c.covariance(thp), S = c.covariance(th);
  const Mat Sinv = S.inverse();
  Vec dm(2);
  dm << thp[0] - th[0], thp[2] - th[2];
  return 0.5 * ((Sinv * Sp).trace() + dm.dot(Sinv * dm) - 2.0 +
                std::log(S.determinant() / Sp.determinant()));
}

}  // namespace igc
