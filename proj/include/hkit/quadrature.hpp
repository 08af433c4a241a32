#pragma once

// Numerical building blocks shared by every module: Gauss-Legendre rules,
// breakpoint-aware adaptive integration, sign-change location, grid extrema
// and adaptive piecewise-Chebyshev tabulation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "hkit/errors.hpp"

namespace hkit {

struct QuadratureOptions {
  int order = 64;           // Gauss-Legendre nodes per subinterval
  double rel_tol = 1e-10;   // relative tolerance of the halving test
  double abs_tol = 1e-14;   // absolute floor, per unit length
  int max_depth = 48;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace detail

// Cached n-point Gauss-Legendre rule on [-1, 1].
inline const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

template <class F>
double gauss_panel(const F& f, double lo, double hi, const GaussRule& rule) {
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

namespace detail {

template <class F>
double adaptive_piece(const F& f, double lo, double hi, double whole, const GaussRule& rule,
                      const QuadratureOptions& opt, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double left = gauss_panel(f, lo, mid, rule);
  const double right = gauss_panel(f, mid, hi, rule);
  const double halves = left + right;
  if (!std::isfinite(halves))
    throw QuadratureFailure("non-finite integrand value on [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
  const double tol = std::max(opt.rel_tol * std::abs(halves), opt.abs_tol * (hi - lo));
  if (std::abs(halves - whole) <= tol) return halves;
  if (depth >= opt.max_depth)
    throw QuadratureFailure("adaptive quadrature did not reach tolerance near [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return adaptive_piece(f, lo, mid, left, rule, opt, depth + 1) +
         adaptive_piece(f, mid, hi, right, rule, opt, depth + 1);
}

// Sorted breakpoints strictly inside (lo, hi), with lo and hi at the ends.
inline std::vector<double> split_points(double lo, double hi, std::span<const double> breaks) {
  std::vector<double> pts{lo};
  for (double x : breaks)
    if (x > lo && x < hi) pts.push_back(x);
  std::sort(pts.begin() + 1, pts.end());
  pts.push_back(hi);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

// Integral of f over [lo, hi]. The domain is first split at `breaks` (points
// where f is not smooth); each piece is then integrated by Gauss-Legendre with
// adaptive halving until the rule and its two halves agree.
template <class F>
double integrate(const F& f, double lo, double hi, std::span<const double> breaks = {},
                 const QuadratureOptions& opt = {}) {
  if (hi < lo) return -integrate(f, hi, lo, breaks, opt);
  if (hi == lo) return 0.0;
  const GaussRule& rule = gauss_legendre(opt.order);
  const auto pts = detail::split_points(lo, hi, breaks);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double whole = gauss_panel(f, pts[i], pts[i + 1], rule);
    total += detail::adaptive_piece(f, pts[i], pts[i + 1], whole, rule, opt, 0);
  }
  return total;
}

template <class F>
double integrate(const F& f, double lo, double hi, std::initializer_list<double> breaks,
                 const QuadratureOptions& opt = {}) {
  return integrate(f, lo, hi, std::span<const double>(breaks.begin(), breaks.size()), opt);
}

// Root of f in [lo, hi] given f(lo), f(hi) of opposite sign (Illinois variant
// of regula falsi, with a bisection safeguard).
template <class F>
double bracketed_root(const F& f, double lo, double hi, double flo, double fhi,
                      double xtol = 1e-14) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw RootFindFailure("root is not bracketed");
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    if (it % 8 == 7) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (!std::isfinite(fx)) throw RootFindFailure("non-finite function value");
    if (fx == 0.0) return x;
    if ((fx > 0) == (fhi > 0)) {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    }
    if (hi - lo <= xtol * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

// Locations in (lo, hi) where f changes sign, found by sampling `samples`
// equispaced points per piece between `breaks` and refining each bracket.
template <class F>
std::vector<double> sign_changes(const F& f, double lo, double hi, std::span<const double> breaks,
                                 int samples = 48) {
  std::vector<double> roots;
  const auto pts = detail::split_points(lo, hi, breaks);
  for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
    const double a = pts[p], b = pts[p + 1];
    double xprev = a, fprev = f(a);
    for (int i = 1; i <= samples; ++i) {
      const double x = (i == samples) ? b : a + (b - a) * i / samples;
      const double fx = f(x);
      if ((fprev < 0 && fx > 0) || (fprev > 0 && fx < 0))
        roots.push_back(bracketed_root(f, xprev, x, fprev, fx));
      xprev = x;
      fprev = fx;
    }
  }
  return roots;
}

enum class Part { positive, negative, absolute };

// Integral of f^+ (or f^-, |f|) over [lo, hi]: sign changes of f are located
// and added to the breakpoints so every piece has a smooth integrand.
template <class F>
double integrate_part(const F& f, Part part, double lo, double hi, std::span<const double> breaks = {},
                      const QuadratureOptions& opt = {}) {
  auto roots = sign_changes(f, lo, hi, breaks);
  roots.insert(roots.end(), breaks.begin(), breaks.end());
  auto g = [&](double s) {
    const double v = f(s);
    switch (part) {
      case Part::positive: return v > 0 ? v : 0.0;
      case Part::negative: return v < 0 ? -v : 0.0;
      case Part::absolute: return std::abs(v);
    }
    return 0.0;
  };
  return integrate(g, lo, hi, roots, opt);
}

struct PartIntegrals {
  double positive;
  double negative;
};

// Both parts at once, sharing the sign-change search.
template <class F>
PartIntegrals integrate_pm(const F& f, double lo, double hi, std::span<const double> breaks = {},
                           const QuadratureOptions& opt = {}) {
  auto roots = sign_changes(f, lo, hi, breaks);
  roots.insert(roots.end(), breaks.begin(), breaks.end());
  const double pos = integrate([&](double s) { return std::max(f(s), 0.0); }, lo, hi, roots, opt);
  const double neg = integrate([&](double s) { return std::max(-f(s), 0.0); }, lo, hi, roots, opt);
  return {pos, neg};
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = lo;
    return x;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  x.back() = hi;
  return x;
}

struct Extremum {
  double value;
  double arg;
};

namespace detail {

// Golden-section refinement of a maximum of f on [lo, hi].
template <class F>
Extremum golden_max(const F& f, double lo, double hi, Extremum best) {
  constexpr double r = 0.6180339887498949;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    }
  }
  if (f1 > best.value) best = {f1, x1};
  if (f2 > best.value) best = {f2, x2};
  return best;
}

}  // namespace detail

// Maximum of f over a uniform n-point grid on [lo, hi], then polished by
// golden-section search between the grid neighbours of the best point.
template <class F>
Extremum grid_max(const F& f, double lo, double hi, std::size_t n = 2000, bool refine = true) {
  const auto x = linspace(lo, hi, n);
  std::vector<double> v(n);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = f(x[i]);
    if (v[i] > v[best]) best = i;
  }
  Extremum e{v[best], x[best]};
  if (refine && n > 2 && hi > lo) {
    const double l = x[best == 0 ? 0 : best - 1];
    const double h = x[best + 1 >= n ? n - 1 : best + 1];
    e = detail::golden_max(f, l, h, e);
  }
  return e;
}

template <class F>
Extremum grid_min(const F& f, double lo, double hi, std::size_t n = 2000, bool refine = true) {
  auto neg = [&](double t) { return -f(t); };
  Extremum e = grid_max(neg, lo, hi, n, refine);
  return {-e.value, e.arg};
}

// Adaptive piecewise-Chebyshev interpolant of a smooth function on [lo, hi].
// Panels are halved until the trailing coefficients fall below tol * scale.
class ChebyshevTable {
 public:
  ChebyshevTable() = default;

  template <class F>
  ChebyshevTable(const F& f, double lo, double hi, double tol = 1e-13, int degree = 16,
                 int max_panels = 4096)
      : lo_(lo), hi_(hi), degree_(degree) {
    std::vector<std::pair<double, double>> todo{{lo, hi}};
    std::vector<Panel> done;
    double scale = 0.0;
    while (!todo.empty()) {
      auto [a, b] = todo.back();
      todo.pop_back();
      Panel p = fit(f, a, b);
      for (double c : p.coeffs) scale = std::max(scale, std::abs(c));
      const double tail = std::abs(p.coeffs[degree_]) + std::abs(p.coeffs[degree_ - 1]);
      if (tail <= tol * std::max(scale, 1e-300) || b - a < 1e-7 ||
          static_cast<int>(done.size() + todo.size()) > max_panels) {
        done.push_back(std::move(p));
      } else {
        const double m = 0.5 * (a + b);
        todo.push_back({m, b});
        todo.push_back({a, m});
      }
    }
    std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    panels_ = std::move(done);
  }

  double operator()(double x) const {
    if (panels_.empty()) return 0.0;
    auto it = std::upper_bound(panels_.begin(), panels_.end(), x,
                               [](double v, const Panel& p) { return v < p.lo; });
    const Panel& p = (it == panels_.begin()) ? panels_.front() : *std::prev(it);
    const double u = (2.0 * x - p.lo - p.hi) / (p.hi - p.lo);
    double b1 = 0.0, b2 = 0.0;
    for (int k = degree_; k >= 1; --k) {
      const double b0 = 2.0 * u * b1 - b2 + p.coeffs[k];
      b2 = b1;
      b1 = b0;
    }
    return u * b1 - b2 + p.coeffs[0];
  }

  std::size_t panel_count() const { return panels_.size(); }

 private:
  struct Panel {
    double lo, hi;
    std::vector<double> coeffs;
  };

  template <class F>
  Panel fit(const F& f, double a, double b) const {
    const int n = degree_;
    std::vector<double> vals(n + 1);
    for (int j = 0; j <= n; ++j) {
      const double u = std::cos(std::numbers::pi * j / n);
      vals[j] = f(0.5 * (a + b) + 0.5 * (b - a) * u);
    }
    Panel p{a, b, std::vector<double>(n + 1)};
    for (int k = 0; k <= n; ++k) {
      double s = 0.0;
      for (int j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        s += w * vals[j] * std::cos(std::numbers::pi * k * j / n);
      }
      p.coeffs[k] = s * 2.0 / n;
    }
    p.coeffs[0] *= 0.5;
    p.coeffs[n] *= 0.5;
    return p;
  }

  double lo_ = 0.0, hi_ = 1.0;
  int degree_ = 16;
  std::vector<Panel> panels_;
};

// lim_{h->0+} f(h) by Neville extrapolation of f(h0), f(h0/2), ... for
// functions smooth in h with a removable singularity at h = 0.
template <class F>
double limit_at_zero(const F& f, double h0 = 0.02, int levels = 6) {
  std::vector<double> hs, p;
  for (int k = 0; k < levels; ++k) {
    hs.push_back(h0 / static_cast<double>(1 << k));
    p.push_back(f(hs.back()));
  }
  for (int m = 1; m < levels; ++m)
    for (int i = levels - 1; i >= m; --i) p[i] = (hs[i - m] * p[i] - hs[i] * p[i - 1]) / (hs[i - m] - hs[i]);
  return p.back();
}

}  // namespace hkit
