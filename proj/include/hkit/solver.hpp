#pragma once

// Nystrom discretisation of u = gamma alpha[u] + delta beta[u] + int k g f(.,u)
// and damped fixed-point iteration on it.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hkit/errors.hpp"
#include "hkit/problem.hpp"
#include "hkit/spectral.hpp"

namespace hkit {

enum class SolveStatus { converged, diverged, stalled };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "CONVERGED";
    case SolveStatus::diverged: return "DIVERGED";
    case SolveStatus::stalled: return "STALLED";
  }
  return "?";
}

inline SolveStatus solve_status_from_string(const std::string& s) {
  if (s == "CONVERGED") return SolveStatus::converged;
  if (s == "DIVERGED") return SolveStatus::diverged;
  if (s == "STALLED") return SolveStatus::stalled;
  throw DomainError("unknown solver status '" + s + "'");
}

struct ConeCheck {
  bool in_cone = false;
  double c_used = 0.0;
  double min_ab = 0.0;   // min of u over [a,b]
  double norm = 0.0;     // max |u| over [0,1]
  double alpha_u = 0.0;  // alpha[u]
  double beta_u = 0.0;   // beta[u]
  bool alpha_nonneg = false;
  bool beta_nonneg = false;
  bool operator==(const ConeCheck&) const = default;
};

struct DiscreteSolution {
  std::vector<double> nodes;
  std::vector<double> values;
  double residual = 0.0;
  SolveStatus status = SolveStatus::stalled;
  int iterations = 0;
  ConeCheck cone_check;
  double band_lo = 0.0;  // min over [a,b]
  double band_hi = 0.0;  // max over [0,1]
  bool operator==(const DiscreteSolution&) const = default;

  bool nontrivial_in_cone(double floor = 1e-8) const {
    return status == SolveStatus::converged && cone_check.in_cone && cone_check.norm > floor;
  }
};

struct IterationOptions {
  double damping = 0.5;
  double tol = 1e-10;
  int max_iter = 20000;
  bool anderson = false;
  int anderson_depth = 5;
  double divergence_bound = 1e6;
};

inline IterationOptions iteration_options(const SolverSettings& s) {
  return {s.damping, s.tol, s.max_iter, s.anderson, s.anderson_depth, 1e6};
}

// The discrete operator T on a fixed node set.
class HammersteinSystem {
 public:
  explicit HammersteinSystem(const Analysis& an, std::size_t n = 0) : an_(&an) {
    const auto& sp = an.spec();
    if (n == 0) n = sp.solver.nodes;
    if (n < 16) throw DomainError("the solver needs at least 16 nodes");
    std::vector<double> br = sp.boundary.alpha.singular_points();
    for (double x : sp.boundary.beta.singular_points()) br.push_back(x);
    for (double x : an.base().kernel().extra_breaks) br.push_back(x);
    br.push_back(sp.a);
    br.push_back(sp.b);
    ns_ = make_panels(n, br);

    MatrixRecipe rc;
    const ShiftedKernel k = an.base();
    rc.kernel = [k](double t, double s) { return k(t, s); };
    W_ = nystrom_matrix(ns_, rc, sp.g);

    const std::size_t m = ns_.size();
    gamma_.resize(m);
    delta_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      gamma_[i] = sp.boundary.gamma(ns_.nodes[i]);
      delta_[i] = sp.boundary.delta(ns_.nodes[i]);
    }
    aw_ = functional_weights(sp.boundary.alpha);
    bw_ = functional_weights(sp.boundary.beta);
    has_bc_ = !sp.boundary.alpha.is_trivial() || !sp.boundary.beta.is_trivial();
  }

  const Analysis& analysis() const { return *an_; }
  const NodeSet& nodes() const { return ns_; }
  std::size_t size() const { return ns_.size(); }
  const Eigen::MatrixXd& matrix() const { return W_; }

  // mu[u] for u given by node values, exact on the panel interpolant.
  double alpha_of(std::span<const double> u) const { return dot(aw_, u); }
  double beta_of(std::span<const double> u) const { return dot(bw_, u); }

  Eigen::VectorXd nonlinearity(std::span<const double> u) const {
    const auto& f = an_->spec().f;
    Eigen::VectorXd F(static_cast<Eigen::Index>(u.size()));
    for (std::size_t j = 0; j < u.size(); ++j) F[static_cast<Eigen::Index>(j)] = f(ns_.nodes[j], u[j]);
    return F;
  }

  std::vector<double> apply_T(std::span<const double> u) const {
    if (u.size() != size()) throw DomainError("node vector has the wrong length");
    const Eigen::VectorXd v = W_ * nonlinearity(u);
    std::vector<double> out(v.data(), v.data() + v.size());
    if (has_bc_) {
      const double au = alpha_of(u), bu = beta_of(u);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += gamma_[i] * au + delta_[i] * bu;
    }
    return out;
  }

  // S u = int k_S g f(.,u); shares its fixed points in K with T.
  std::vector<double> apply_S(std::span<const double> u) const {
    std::call_once(s_once_, [&] {
      MatrixRecipe rc;
      auto ak = std::make_shared<const AssembledKernel>(an_->kernel_s());
      rc.kernel = [ak](double t, double s) { return ak->eval(t, s); };
      rc.diagonal_kink = ak->base.diagonal_kink;
      S_ = nystrom_matrix(ns_, rc, an_->spec().g);
    });
    const Eigen::VectorXd v = S_ * nonlinearity(u);
    return {v.data(), v.data() + v.size()};
  }

  double interpolate(std::span<const double> u, double x) const { return ns_.interpolate(u, x); }

 private:
  static double dot(const std::vector<double>& w, std::span<const double> u) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * u[j];
    return s;
  }

  // w_j = mu[l_j] for the panel Lagrange basis l_j.
  std::vector<double> functional_weights(const StieltjesMeasure& mu) const {
    std::vector<double> w(ns_.size(), 0.0);
    for (const Atom& a : mu.atoms()) {
      const std::size_t p = ns_.panel_of(a.location);
      const auto l = ns_.basis(p, a.location);
      for (std::size_t j = 0; j < l.size(); ++j) w[ns_.panels[p].first + j] += a.weight * l[j];
    }
    if (mu.has_density()) {
      const GaussRule& rule = gauss_legendre(24);
      for (std::size_t p = 0; p < ns_.panels.size(); ++p) {
        const auto& P = ns_.panels[p];
        const double half = 0.5 * (P.hi - P.lo), mid = 0.5 * (P.hi + P.lo);
        for (std::size_t r = 0; r < rule.nodes.size(); ++r) {
          const double s = mid + half * rule.nodes[r];
          const double v = half * rule.weights[r] * mu.density(s);
          const auto l = ns_.basis(p, s);
          for (std::size_t j = 0; j < l.size(); ++j) w[P.first + j] += v * l[j];
        }
      }
    }
    return w;
  }

  const Analysis* an_;
  NodeSet ns_;
  Eigen::MatrixXd W_;
  mutable Eigen::MatrixXd S_;
  mutable std::once_flag s_once_;
  std::vector<double> gamma_, delta_, aw_, bw_;
  bool has_bc_ = false;
};

inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

// Cone predicates of the panel interpolant on a 2001-point grid.
inline ConeCheck verify_membership(const HammersteinSystem& sys, std::span<const double> u) {
  const auto& sp = sys.analysis().spec();
  ConeCheck cc;
  cc.c_used = sys.analysis().cone_c();
  cc.min_ab = std::numeric_limits<double>::infinity();
  for (double x : linspace(0.0, 1.0, 2001)) {
    const double v = sys.interpolate(u, x);
    cc.norm = std::max(cc.norm, std::abs(v));
  }
  for (double x : linspace(sp.a, sp.b, 2001)) cc.min_ab = std::min(cc.min_ab, sys.interpolate(u, x));
  for (double x : u) cc.norm = std::max(cc.norm, std::abs(x));
  cc.alpha_u = sys.alpha_of(u);
  cc.beta_u = sys.beta_of(u);
  const double slack = 1e-9 * std::max(cc.norm, 1e-300);
  cc.alpha_nonneg = cc.alpha_u >= -slack;
  cc.beta_nonneg = cc.beta_u >= -slack;
  cc.in_cone = cc.min_ab >= cc.c_used * cc.norm - slack && cc.alpha_nonneg && cc.beta_nonneg;
  return cc;
}

namespace detail {

inline void finish_solution(const HammersteinSystem& sys, DiscreteSolution& sol) {
  sol.nodes = sys.nodes().nodes;
  if (sol.status == SolveStatus::diverged) return;
  sol.cone_check = verify_membership(sys, sol.values);
  const auto& sp = sys.analysis().spec();
  sol.band_lo = sol.cone_check.min_ab;
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : linspace(0.0, 1.0, 2001)) hi = std::max(hi, sys.interpolate(sol.values, x));
  sol.band_hi = hi;
  (void)sp;
}

}  // namespace detail

// u <- (1-theta) u + theta T u, or Anderson mixing with the same damping.
inline DiscreteSolution solve_fixed_point(const HammersteinSystem& sys, std::vector<double> u,
                                          const IterationOptions& opt = {}) {
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw DomainError("damping must lie in (0,1]");
  if (u.size() != sys.size()) throw DomainError("initial vector has the wrong length");
  for (double x : u)
    if (!std::isfinite(x)) throw DomainError("initial vector must be finite");

  const Eigen::Index n = static_cast<Eigen::Index>(u.size());
  DiscreteSolution sol;
  std::deque<Eigen::VectorXd> dX, dF;
  Eigen::VectorXd x_prev, f_prev;
  for (int it = 0;; ++it) {
    const std::vector<double> Tu = sys.apply_T(u);
    Eigen::Map<const Eigen::VectorXd> xv(u.data(), n), tv(Tu.data(), n);
    const Eigen::VectorXd f = tv - xv;
    const double r = f.cwiseAbs().maxCoeff();
    sol.iterations = it;
    sol.residual = r;
    if (!std::isfinite(r) || !xv.allFinite() || xv.cwiseAbs().maxCoeff() > opt.divergence_bound) {
      sol.status = SolveStatus::diverged;
      break;
    }
    if (r < opt.tol) {
      sol.status = SolveStatus::converged;
      break;
    }
    if (it >= opt.max_iter) {
      sol.status = SolveStatus::stalled;
      break;
    }
    Eigen::VectorXd next = xv + opt.damping * f;
    if (opt.anderson) {
      if (x_prev.size() == n) {
        dX.push_back(xv - x_prev);
        dF.push_back(f - f_prev);
        if (static_cast<int>(dX.size()) > opt.anderson_depth) {
          dX.pop_front();
          dF.pop_front();
        }
      }
      x_prev = xv;
      f_prev = f;
      if (!dF.empty()) {
        Eigen::MatrixXd Fm(n, static_cast<Eigen::Index>(dF.size())), Xm(n, static_cast<Eigen::Index>(dX.size()));
        for (std::size_t k = 0; k < dF.size(); ++k) {
          Fm.col(static_cast<Eigen::Index>(k)) = dF[k];
          Xm.col(static_cast<Eigen::Index>(k)) = dX[k];
        }
        const Eigen::VectorXd gam = Fm.colPivHouseholderQr().solve(f);
        if (gam.allFinite()) next -= (Xm + opt.damping * Fm) * gam;
      }
    }
    u.assign(next.data(), next.data() + n);
  }
  sol.values = std::move(u);
  detail::finish_solution(sys, sol);
  return sol;
}

// Initial vectors kappa (c + (1-c) shape(t)) with kappa log-spaced over
// [1e-3, 1e3] and shapes cycling through sin(pi t), 1, t(1-t)*4. Each lies in
// the cone when the measures are positive.
inline std::vector<std::vector<double>> cone_starts(const HammersteinSystem& sys, int count) {
  const double c = sys.analysis().cone_c();
  std::vector<std::vector<double>> out;
  for (int k = 0; k < count; ++k) {
    const double kappa = count == 1 ? 1.0 : std::pow(10.0, -3.0 + 6.0 * k / (count - 1));
    std::vector<double> u(sys.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double t = sys.nodes().nodes[i];
      double shape = 1.0;
      if (k % 3 == 0) shape = std::sin(std::numbers::pi * t);
      else if (k % 3 == 2) shape = 4.0 * t * (1.0 - t);
      u[i] = kappa * (c + (1.0 - c) * shape);
    }
    out.push_back(std::move(u));
  }
  return out;
}

// Runs every start concurrently; each run is sequential and owns its state.
inline std::vector<DiscreteSolution> multi_start(const HammersteinSystem& sys,
                                                 const std::vector<std::vector<double>>& starts,
                                                 const IterationOptions& opt = {}) {
  std::vector<std::future<DiscreteSolution>> jobs;
  for (const auto& u0 : starts)
    jobs.push_back(std::async(std::launch::async, [&sys, u0, opt] { return solve_fixed_point(sys, u0, opt); }));
  std::vector<DiscreteSolution> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// Preferred run: converged nontrivial cone solutions first, then any
// converged run, then the smallest residual.
inline const DiscreteSolution& best_solution(const std::vector<DiscreteSolution>& runs) {
  if (runs.empty()) throw DomainError("no solver runs");
  auto rank = [](const DiscreteSolution& s) {
    if (s.nontrivial_in_cone()) return 0;
    if (s.status == SolveStatus::converged) return 1;
    return 2;
  };
  return *std::min_element(runs.begin(), runs.end(), [&](const auto& x, const auto& y) {
    if (rank(x) != rank(y)) return rank(x) < rank(y);
    return x.residual < y.residual;
  });
}

// Solver runs as configured in the problem: one run from the declared
// initial guess, plus cone starts when more are requested.
inline std::vector<DiscreteSolution> solve(const HammersteinSystem& sys, int starts = 0) {
  const auto& s = sys.analysis().spec().solver;
  if (starts <= 0) starts = s.starts;
  std::vector<std::vector<double>> u0;
  std::vector<double> first(sys.size());
  for (std::size_t i = 0; i < first.size(); ++i) first[i] = s.initial(sys.nodes().nodes[i]);
  u0.push_back(std::move(first));
  if (starts > 1)
    for (auto& v : cone_starts(sys, starts - 1)) u0.push_back(std::move(v));
  return multi_start(sys, u0, iteration_options(s));
}

// max |u - S u| at node values.
inline double s_residual(const HammersteinSystem& sys, std::span<const double> u) {
  const auto Su = sys.apply_S(u);
  return max_abs_diff(u, Su);
}

}  // namespace hkit
