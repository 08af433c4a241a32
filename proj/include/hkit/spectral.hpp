#pragma once

// Nystrom discretisation of the positive integral operators L, L~ and L+ built
// from k_S, and power-iteration estimates of their spectral radii.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hkit/errors.hpp"
#include "hkit/kernel.hpp"
#include "hkit/kernel_s.hpp"
#include "hkit/quadrature.hpp"

namespace hkit {

// Composite Gauss-Legendre nodes on [0,1]. Panel edges include every
// requested breakpoint, so kernel singular lines between rows never fall inside
// a panel.
struct NodeSet {
  struct Panel {
    double lo, hi;
    std::size_t first, count;
  };
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<Panel> panels;

  std::size_t size() const { return nodes.size(); }

  std::size_t panel_of(double x) const {
    auto it = std::upper_bound(panels.begin(), panels.end(), x,
                               [](double v, const Panel& p) { return v < p.lo; });
    if (it == panels.begin()) return 0;
    return static_cast<std::size_t>(std::prev(it) - panels.begin());
  }

  // Lagrange basis of panel p evaluated at x (one value per panel node).
  std::vector<double> basis(std::size_t p, double x) const {
    const Panel& P = panels[p];
    std::vector<double> l(P.count, 1.0);
    for (std::size_t j = 0; j < P.count; ++j) {
      const double xj = nodes[P.first + j];
      for (std::size_t m = 0; m < P.count; ++m)
        if (m != j) l[j] *= (x - nodes[P.first + m]) / (xj - nodes[P.first + m]);
    }
    return l;
  }

  // Piecewise-polynomial interpolant of node values.
  double interpolate(std::span<const double> values, double x) const {
    const std::size_t p = panel_of(x);
    const auto l = basis(p, x);
    double v = 0.0;
    for (std::size_t j = 0; j < l.size(); ++j) v += l[j] * values[panels[p].first + j];
    return v;
  }
};

namespace detail {

inline std::size_t panel_order(std::size_t n) {
  if (n % 8 == 0) return 8;
  for (std::size_t p : {10, 6, 12, 9, 7, 5, 11, 4})
    if (n % p == 0) return p;
  throw DomainError("node count " + std::to_string(n) + " has no panel size between 4 and 12");
}

}  // namespace detail

inline NodeSet make_panels(std::size_t n, std::span<const double> breaks = {}) {
  if (n < 4) throw DomainError("at least 4 nodes are required");
  const std::size_t p = detail::panel_order(n);
  const std::size_t total = n / p;

  std::vector<double> edges{0.0};
  for (double x : breaks)
    if (x > 1e-12 && x < 1.0 - 1e-12) edges.push_back(x);
  edges.push_back(1.0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(), [](double x, double y) { return y - x < 1e-12; }),
              edges.end());
  const std::size_t segs = edges.size() - 1;
  if (segs > total)
    throw DomainError("too few nodes (" + std::to_string(n) + ") for " + std::to_string(segs) + " segments");

  // One panel per segment, the rest by largest remainder of length share.
  std::vector<std::size_t> count(segs, 1);
  std::vector<double> want(segs);
  for (std::size_t k = 0; k < segs; ++k) want[k] = (edges[k + 1] - edges[k]) * static_cast<double>(total);
  std::size_t used = segs;
  while (used < total) {
    std::size_t best = 0;
    double gap = -1e300;
    for (std::size_t k = 0; k < segs; ++k) {
      const double d = want[k] - static_cast<double>(count[k]);
      if (d > gap) {
        gap = d;
        best = k;
      }
    }
    ++count[best];
    ++used;
  }

  const GaussRule& rule = gauss_legendre(static_cast<int>(p));
  NodeSet ns;
  for (std::size_t k = 0; k < segs; ++k) {
    const double h = (edges[k + 1] - edges[k]) / static_cast<double>(count[k]);
    for (std::size_t q = 0; q < count[k]; ++q) {
      const double lo = edges[k] + h * static_cast<double>(q);
      const double hi = (q + 1 == count[k]) ? edges[k + 1] : lo + h;
      ns.panels.push_back({lo, hi, ns.nodes.size(), p});
      for (std::size_t j = 0; j < p; ++j) {
        ns.nodes.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[j]);
        ns.weights.push_back(0.5 * (hi - lo) * rule.weights[j]);
      }
    }
  }
  return ns;
}

enum class Transform { signed_value, absolute, positive };

struct MatrixRecipe {
  std::function<double(double, double)> kernel;
  bool diagonal_kink = true;
  Transform transform = Transform::signed_value;
  double s_lo = 0.0, s_hi = 1.0;  // columns outside are zero
  bool clamp_negative = false;
};

namespace detail {

inline double apply_transform(Transform tr, double v) {
  switch (tr) {
    case Transform::signed_value: return v;
    case Transform::absolute: return std::abs(v);
    case Transform::positive: return v > 0 ? v : 0.0;
  }
  return v;
}

}  // namespace detail

// W(i,j) ~ int kappa(t_i,s) g(s) l_j(s) ds. Panels containing the diagonal
// t_i, or a sign change of the kernel when a part is taken, are integrated
// with product weights against the panel's Lagrange basis.
inline Eigen::MatrixXd nystrom_matrix(const NodeSet& ns, const MatrixRecipe& rc, const Weight& g) {
  const std::size_t n = ns.size();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const GaussRule& fine = gauss_legendre(24);
  std::vector<double> gvals(n);
  for (std::size_t j = 0; j < n; ++j) gvals[j] = g(ns.nodes[j]);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = ns.nodes[i];
    for (std::size_t p = 0; p < ns.panels.size(); ++p) {
      const auto& P = ns.panels[p];
      if (P.hi <= rc.s_lo + 1e-14 || P.lo >= rc.s_hi - 1e-14) continue;
      std::vector<double> raw(P.count);
      for (std::size_t j = 0; j < P.count; ++j) raw[j] = rc.kernel(t, ns.nodes[P.first + j]);

      std::vector<double> cuts;
      if (rc.diagonal_kink && t > P.lo && t < P.hi) cuts.push_back(t);
      if (rc.transform != Transform::signed_value) {
        auto f = [&](double s) { return rc.kernel(t, s); };
        std::vector<double> xs{P.lo};
        std::vector<double> fs{f(P.lo)};
        for (std::size_t j = 0; j < P.count; ++j) {
          xs.push_back(ns.nodes[P.first + j]);
          fs.push_back(raw[j]);
        }
        if (!cuts.empty()) {
          xs.push_back(t);
          fs.push_back(f(t));
        }
        xs.push_back(P.hi);
        fs.push_back(f(P.hi));
        std::vector<std::size_t> ord(xs.size());
        std::iota(ord.begin(), ord.end(), 0);
        std::sort(ord.begin(), ord.end(), [&](std::size_t x, std::size_t y) { return xs[x] < xs[y]; });
        for (std::size_t q = 0; q + 1 < ord.size(); ++q) {
          const double x0 = xs[ord[q]], x1 = xs[ord[q + 1]];
          const double f0 = fs[ord[q]], f1 = fs[ord[q + 1]];
          if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0)) cuts.push_back(bracketed_root(f, x0, x1, f0, f1));
        }
      }

      if (cuts.empty()) {
        for (std::size_t j = 0; j < P.count; ++j) {
          const std::size_t col = P.first + j;
          W(i, col) = ns.weights[col] * detail::apply_transform(rc.transform, raw[j]) * gvals[col];
        }
        continue;
      }
      std::sort(cuts.begin(), cuts.end());
      std::vector<double> pts{P.lo};
      pts.insert(pts.end(), cuts.begin(), cuts.end());
      pts.push_back(P.hi);
      std::vector<double> acc(P.count, 0.0);
      for (std::size_t q = 0; q + 1 < pts.size(); ++q) {
        const double lo = pts[q], hi = pts[q + 1];
        if (hi <= lo) continue;
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t r = 0; r < fine.nodes.size(); ++r) {
          const double s = mid + half * fine.nodes[r];
          const double v = half * fine.weights[r] * detail::apply_transform(rc.transform, rc.kernel(t, s)) * g(s);
          const auto l = ns.basis(p, s);
          for (std::size_t j = 0; j < P.count; ++j) acc[j] += v * l[j];
        }
      }
      for (std::size_t j = 0; j < P.count; ++j)
        W(i, P.first + j) = rc.clamp_negative ? std::max(acc[j], 0.0) : acc[j];
    }
  }
  return W;
}

enum class OperatorKind { L, Ltilde, Lplus };

inline std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::L: return "L";
    case OperatorKind::Ltilde: return "Ltilde";
    case OperatorKind::Lplus: return "Lplus";
  }
  return "?";
}

struct NystromOperator {
  OperatorKind kind;
  NodeSet nodes;
  Eigen::MatrixXd matrix;
  // Rebuilds the same operator on a different node count.
  std::function<NystromOperator(std::size_t)> rebuild;
};

inline NystromOperator discretize(OperatorKind kind, const AssembledKernel& ak, const Weight& g, double a,
                                  double b, std::size_t n) {
  if (n < 16) throw DomainError("Nystrom discretisation needs at least 16 nodes");
  auto shared = std::make_shared<const AssembledKernel>(ak);
  std::vector<double> br = ak.common_breaks;
  br.push_back(a);
  br.push_back(b);

  MatrixRecipe rc;
  rc.kernel = [shared](double t, double s) { return shared->eval(t, s); };
  rc.diagonal_kink = ak.base.diagonal_kink;
  rc.clamp_negative = true;
  rc.transform = kind == OperatorKind::L ? Transform::absolute : Transform::positive;
  if (kind == OperatorKind::Ltilde) {
    rc.s_lo = a;
    rc.s_hi = b;
  }

  NystromOperator op{kind, make_panels(n, br), {}, {}};
  op.matrix = nystrom_matrix(op.nodes, rc, g);
  op.rebuild = [kind, shared, g, a, b](std::size_t m) { return discretize(kind, *shared, g, a, b, m); };
  return op;
}

struct SpectralEstimate {
  double rho = 0.0;
  double mu = 0.0;
  std::vector<double> eigenfunction;
  std::size_t node_count = 0;
  double refinement_gap = 0.0;
  int iterations = 0;
  // Collatz-Wielandt bounds min/max (Av)_i / v_i at the last iterate.
  double cw_lower = 0.0, cw_upper = 0.0;
  std::vector<std::pair<double, double>> cw_history;
};

struct PowerOptions {
  double tol = 1e-12;
  int max_iter = 100000;
  bool refine = true;
  bool record_history = false;
};

inline SpectralEstimate power_iteration(const Eigen::MatrixXd& A, const PowerOptions& opt = {}) {
  const Eigen::Index n = A.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  SpectralEstimate est;
  est.node_count = static_cast<std::size_t>(n);
  double rho_prev = -1.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Eigen::VectorXd w = A * v;
    const double rho = w.cwiseAbs().maxCoeff();
    if (!std::isfinite(rho)) throw ConvergenceFailure("power iteration produced non-finite values");
    if (rho == 0.0) throw ConvergenceFailure("operator annihilates the iterate; spectral radius is zero");
    double lo = 1e300, hi = 0.0;
    const double floor = 1e-12 * v.maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (v[i] <= floor) continue;
      const double r = w[i] / v[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    est.cw_lower = lo;
    est.cw_upper = hi;
    if (opt.record_history) est.cw_history.emplace_back(lo, hi);
    v = w / rho;
    est.iterations = it;
    if (std::abs(rho - rho_prev) <= opt.tol * rho) {
      est.rho = rho;
      est.mu = 1.0 / rho;
      est.eigenfunction.assign(v.data(), v.data() + n);
      return est;
    }
    rho_prev = rho;
  }
  throw ConvergenceFailure("power iteration did not converge in " + std::to_string(opt.max_iter) + " steps");
}

// Perron root of a nonnegative Nystrom operator, from the all-ones start. With
// refine set, the operator is rebuilt on twice the nodes to fill
// refinement_gap = |mu_n - mu_2n|.
inline SpectralEstimate principal_value(const NystromOperator& op, const PowerOptions& opt = {}) {
  SpectralEstimate est = power_iteration(op.matrix, opt);
  if (opt.refine && op.rebuild) {
    PowerOptions o = opt;
    o.refine = false;
    o.record_history = false;
    const SpectralEstimate fine = power_iteration(op.rebuild(2 * op.nodes.size()).matrix, o);
    est.refinement_gap = std::abs(est.mu - fine.mu);
  }
  return est;
}

inline SpectralEstimate principal_value(const NystromOperator& op, double tol) {
  PowerOptions o;
  o.tol = tol;
  return principal_value(op, o);
}

struct OrderingCheck {
  double M_S = 0.0, mu_Ltilde = 0.0, mu_L = 0.0, m_S = 0.0;
  double gap_Ltilde = 0.0, gap_L = 0.0;
  // 1/sup int |k_S| g: the lower bound for mu(L) that survives a sign-changing
  // k_S, where m_S itself can exceed mu(L).
  double m_abs = 0.0;
  bool pass = false;
  bool pass_abs = false;  // same chain with m_abs in place of m_S
};

inline bool leq_rel(double x, double y, double rel = 1e-6) {
  return x <= y + rel * std::max(std::abs(x), std::abs(y));
}

// M_S >= mu(L~) >= mu(L) >= m_S within 1e-6 relative.
inline OrderingCheck mu_ordering_check(const AssembledKernel& ak, const Weight& g, double a, double b,
                                       std::size_t n, const QuadratureOptions& qopt = {}) {
  OrderingCheck oc;
  const SConstants sc = mS_MS(ak, g, a, b, qopt);
  oc.M_S = sc.M_S;
  oc.m_S = sc.m_S;
  const SpectralEstimate lt = principal_value(discretize(OperatorKind::Ltilde, ak, g, a, b, n));
  const SpectralEstimate l = principal_value(discretize(OperatorKind::L, ak, g, a, b, n));
  oc.mu_Ltilde = lt.mu;
  oc.mu_L = l.mu;
  oc.gap_Ltilde = lt.refinement_gap;
  oc.gap_L = l.refinement_gap;
  oc.m_abs = m_abs(ak, g, qopt);
  const bool upper = leq_rel(oc.mu_Ltilde, oc.M_S) && leq_rel(oc.mu_L, oc.mu_Ltilde);
  oc.pass = upper && leq_rel(oc.m_S, oc.mu_L);
  oc.pass_abs = upper && leq_rel(oc.m_abs, oc.mu_L);
  return oc;
}

}  // namespace hkit
