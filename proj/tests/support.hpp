#pragma once

// Test-only helpers: deterministic random problem generators and brute-force
// oracles that share no code with the library's closed forms or integrators.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "hkit/golden.hpp"
#include "hkit/problem.hpp"

namespace hkit::testing {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// Composite Simpson rule with `n` (even) subintervals on each piece between
// sorted cut points.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, std::vector<double> cuts = {},
                      int n = 400) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = std::max(lo, cuts[p]), b = std::min(hi, cuts[p + 1]);
    if (!(b > a)) continue;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    total += s * h / 3.0;
  }
  return total;
}

// Independent evaluation of the shifted kernel.
inline double oracle_kernel(int eps, double w, double t, double s) {
  const double lo = std::min(t, s), hi = std::max(t, s);
  if (eps < 0) return std::cosh(w * (1 - hi)) * std::cosh(w * lo) / (w * std::sinh(w));
  return std::cos(w * (1 - hi)) * std::cos(w * lo) / (w * std::sin(w));
}

// Zero lines of the eps = +1 kernel in s, for a row t.
inline std::vector<double> oracle_cuts(int eps, double w, double t) {
  std::vector<double> c{t};
  if (eps > 0 && w > kPi / 2) {
    const double z1 = kPi / (2 * w), z2 = 1 - kPi / (2 * w);
    if (z1 < t) c.push_back(z1);   // cos(w s) = 0 on s <= t
    if (z2 > t) c.push_back(z2);   // cos(w (1-s)) = 0 on s >= t
  }
  return c;
}

// Extremum over a uniform grid, polished by the vertex of the parabola
// through the best point and its neighbours.
inline double grid_extremum(const std::function<double(double)>& f, double lo, double hi, bool want_max,
                            int n = 2000) {
  std::vector<double> x(n), v(n);
  int best = 0;
  for (int i = 0; i < n; ++i) {
    x[i] = lo + (hi - lo) * i / (n - 1);
    v[i] = f(x[i]);
    if (want_max ? v[i] > v[best] : v[i] < v[best]) best = i;
  }
  if (best == 0 || best == n - 1) return v[best];
  const double h = x[1] - x[0];
  const double y0 = v[best - 1], y1 = v[best], y2 = v[best + 1];
  const double den = y0 - 2 * y1 + y2;
  if (den == 0.0) return y1;
  const double off = 0.5 * h * (y0 - y2) / den;
  const double cand = f(x[best] + off);
  return want_max ? std::max(y1, cand) : std::min(y1, cand);
}

// 1/m = sup_t max{int k^+ g, int k^- g}.
inline double oracle_m(int eps, double w, const std::function<double(double)>& g) {
  auto row = [&](double t) {
    const auto cuts = oracle_cuts(eps, w, t);
    const double pos = simpson([&](double s) { return std::max(oracle_kernel(eps, w, t, s), 0.0) * g(s); }, 0, 1, cuts);
    const double neg = simpson([&](double s) { return std::max(-oracle_kernel(eps, w, t, s), 0.0) * g(s); }, 0, 1, cuts);
    return std::max(pos, neg);
  };
  return 1.0 / grid_extremum(row, 0.0, 1.0, true);
}

// 1/M = inf_{[a,b]} int_a^b k g.
inline double oracle_M(int eps, double w, double a, double b, const std::function<double(double)>& g) {
  auto row = [&](double t) {
    return simpson([&](double s) { return oracle_kernel(eps, w, t, s) * g(s); }, a, b, {t});
  };
  return 1.0 / grid_extremum(row, a, b, false);
}

struct RandomGreens {
  int eps;
  double omega, a, b;
  bool linear_g;
};

// (eps, omega, a, b) with [a,b] inside the positivity strip for eps = +1.
inline RandomGreens random_greens(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  RandomGreens r{};
  r.eps = U(rng) < 0.5 ? -1 : 1;
  r.linear_g = U(rng) < 0.5;
  if (r.eps < 0) {
    r.omega = 0.2 + 3.8 * U(rng);
    r.a = 0.45 * U(rng);
    r.b = 0.55 + 0.45 * U(rng);
  } else {
    r.omega = 0.3 + (kPi - 0.5) * U(rng);
    const double lo = std::max(0.0, 1.0 - kPi / (2 * r.omega)), hi = std::min(1.0, kPi / (2 * r.omega));
    const double pad = 0.02 + 0.05 * (hi - lo);
    const double l = lo + pad, h = hi - pad;
    const double x = l + (h - l) * U(rng) * 0.45, y = h - (h - l) * U(rng) * 0.45;
    r.a = lo == 0.0 && U(rng) < 0.2 ? 0.0 : x;
    r.b = hi == 1.0 && U(rng) < 0.2 ? 1.0 : y;
    if (r.a == 0.0 && r.b == 1.0 && r.omega >= kPi / 2) r.a = x;
  }
  return r;
}

inline Weight weight_of(bool linear) { return linear ? Weight::linear() : Weight::one(); }

// Positive boundary data: gamma, delta are kernel columns at 0 and 1 scaled
// by random factors, alpha and beta random atoms plus a density. Rejected
// draws (C5-C8 violated) are redrawn.
inline BoundaryData random_boundary(std::mt19937_64& rng, Shift eps, double omega, double a, double b) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    BoundaryData bd;
    const double sg = 0.2 + U(rng), sd = 0.2 + U(rng);
    bd.gamma = [eps, omega, sg](double t) { return sg * kernel_eval(eps, omega, t, 0.0); };
    bd.delta = [eps, omega, sd](double t) { return sd * kernel_eval(eps, omega, t, 1.0); };
    auto draw = [&]() {
      std::vector<Atom> atoms;
      const int na = static_cast<int>(U(rng) * 3);
      for (int i = 0; i < na; ++i) atoms.push_back({U(rng), 0.3 * U(rng)});
      std::function<double(double)> dens;
      if (U(rng) < 0.5) {
        const double h = 0.3 * U(rng);
        dens = [h](double t) { return h * std::sin(kPi * t); };
      }
      return StieltjesMeasure(atoms, dens);
    };
    bd.alpha = draw();
    bd.beta = draw();
    try {
      const ShiftedKernel k(eps, omega);
      (void)assemble(k.kernel(), bd, a, b, c_of_interval(eps, omega, a, b));
      return bd;
    } catch (const Error&) {
    }
  }
  return BoundaryData::trivial();
}

inline ProblemSpec problem(Shift eps, double omega, double a, double b, Weight g = Weight::one()) {
  ProblemSpec ps;
  ps.epsilon = eps;
  ps.omega = omega;
  ps.a = a;
  ps.b = b;
  ps.g = std::move(g);
  return ps;
}

// Example 3: eps = -1, omega = 1, g(s) = s, f = lambda e^u on [0,1].
inline ProblemSpec example3(double lambda, std::size_t nodes = 200) {
  ProblemSpec ps = parse_problem(std::string(scenarios::by_name("example3")), {{"lambda", lambda}});
  ps.solver.nodes = nodes;
  return ps;
}

// f(t,u) = lambda exp(u), time independent.
inline Nonlinearity exp_nonlinearity(double lambda) {
  Nonlinearity f;
  f.eval = [lambda](double, double u) { return lambda * std::exp(u); };
  f.depends_on_t = false;
  f.description = "lambda exp(u)";
  return f;
}

}  // namespace hkit::testing
