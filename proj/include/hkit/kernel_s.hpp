#pragma once

// The auxiliary kernel k_S that folds the boundary terms gamma(t) alpha[u] and
// delta(t) beta[u] into a single Hammerstein kernel, its positive and negative
// parts, and the constants m_S, M_S and c~ built from it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hkit/errors.hpp"
#include "hkit/kernel.hpp"
#include "hkit/measures.hpp"
#include "hkit/quadrature.hpp"

namespace hkit {

namespace detail {

// s -> int k(t,s) dmu(t). Atoms are evaluated exactly; the density part is
// smooth in s and is tabulated once by an adaptive Chebyshev fit.
inline std::function<double(double)> tabulated_functional(const StieltjesMeasure& mu, const Kernel& k,
                                                          const QuadratureOptions& opt) {
  if (mu.is_trivial()) return [](double) { return 0.0; };
  std::vector<Atom> atoms = mu.atoms();
  std::shared_ptr<const ChebyshevTable> table;
  if (mu.has_density()) {
    StieltjesMeasure dens({}, [mu](double s) { return mu.density(s); }, mu.density_breaks());
    auto direct = kernel_functionals(dens, k, opt);
    table = std::make_shared<const ChebyshevTable>(direct, 0.0, 1.0, 1e-13);
  }
  return [k, atoms = std::move(atoms), table](double s) {
    double v = table ? (*table)(s) : 0.0;
    for (const Atom& a : atoms) v += a.weight * k(a.location, s);
    return v;
  };
}

// Sampled envelope sup_t |k(t,s)| for kernels without a closed form.
inline std::function<double(double)> sampled_envelope(const Kernel& k) {
  auto ts = std::make_shared<const std::vector<double>>(linspace(0.0, 1.0, 401));
  return [k, ts](double s) {
    double m = std::abs(k(s, s));
    for (double t : *ts) m = std::max(m, std::abs(k(t, s)));
    return m;
  };
}

}  // namespace detail

struct AssembledKernel {
  Kernel base;
  BoundaryData boundary;
  BoundaryScalars scalars;
  std::function<double(double)> KA, KB;
  std::function<double(double)> phi, upsilon, psi;
  double a = 0.0, b = 1.0;
  double c1 = 1.0;
  double cone_c = 1.0;
  // Breakpoints in s shared by every row: base kernel breaks plus the
  // singular points of both measures.
  std::vector<double> common_breaks;

  // Coefficients of K_A(s) and K_B(s) in k_S(t,s).
  double coef_A(double t) const {
    const auto& c = scalars;
    return (boundary.gamma(t) * (1.0 - c.beta_delta) + boundary.delta(t) * c.beta_gamma) / c.D;
  }
  double coef_B(double t) const {
    const auto& c = scalars;
    return (boundary.gamma(t) * c.alpha_delta + boundary.delta(t) * (1.0 - c.alpha_gamma)) / c.D;
  }

  double eval(double t, double s) const {
    double v = base(t, s);
    if (!boundary.alpha.is_trivial() || !boundary.beta.is_trivial()) v += coef_A(t) * KA(s) + coef_B(t) * KB(s);
    return v;
  }
  double operator()(double t, double s) const { return eval(t, s); }

  std::vector<double> breaks_at(double t) const {
    std::vector<double> br = common_breaks;
    if (base.diagonal_kink) br.push_back(t);
    return br;
  }

  // Generic kernel view of k_S.
  Kernel kernel() const {
    Kernel k;
    auto self = std::make_shared<const AssembledKernel>(*this);
    k.eval = [self](double t, double s) { return self->eval(t, s); };
    k.diagonal_kink = base.diagonal_kink;
    k.extra_breaks = common_breaks;
    k.envelope = psi;
    return k;
  }
};

// Builds k_S on [a,b] with c1 = c(a,b) of the base kernel. Enforces C5-C8.
inline AssembledKernel assemble(const Kernel& k, const BoundaryData& bd, double a, double b, double c1,
                                const QuadratureOptions& opt = {}) {
  AssembledKernel ak;
  ak.base = k;
  ak.boundary = bd;
  ak.a = a;
  ak.b = b;
  ak.c1 = c1;
  ak.scalars = boundary_scalars(bd, a, b, opt);
  ak.KA = detail::tabulated_functional(bd.alpha, k, opt);
  ak.KB = detail::tabulated_functional(bd.beta, k, opt);
  if (!bd.alpha.is_trivial()) check_nonnegative_on_grid(ak.KA, "K_A");
  if (!bd.beta.is_trivial()) check_nonnegative_on_grid(ak.KB, "K_B");
  ak.phi = k.envelope ? k.envelope : detail::sampled_envelope(k);

  const BoundaryScalars sc = ak.scalars;
  auto KA = ak.KA, KB = ak.KB, phi = ak.phi;
  ak.upsilon = [sc, KA, KB](double s) {
    const double ka = KA(s), kb = KB(s);
    return sc.gamma_norm / sc.D * ((1.0 - sc.beta_delta) * ka + sc.alpha_delta * kb) +
           sc.delta_norm / sc.D * (sc.beta_gamma * ka + (1.0 - sc.alpha_gamma) * kb);
  };
  auto ups = ak.upsilon;
  ak.psi = [ups, phi](double s) { return ups(s) + phi(s); };
  ak.cone_c = std::min({c1, sc.c2, sc.c3});

  ak.common_breaks = k.extra_breaks;
  for (const StieltjesMeasure* m : {&bd.alpha, &bd.beta})
    for (double x : m->singular_points()) ak.common_breaks.push_back(x);
  std::sort(ak.common_breaks.begin(), ak.common_breaks.end());
  ak.common_breaks.erase(std::unique(ak.common_breaks.begin(), ak.common_breaks.end()), ak.common_breaks.end());
  return ak;
}

struct PMKernels {
  std::function<double(double, double)> plus;
  std::function<double(double, double)> minus;
};

inline PMKernels decompose_pm(const AssembledKernel& ak) {
  auto self = std::make_shared<const AssembledKernel>(ak);
  return {[self](double t, double s) { return std::max(self->eval(t, s), 0.0); },
          [self](double t, double s) { return std::max(-self->eval(t, s), 0.0); }};
}

// int k_S^+(t,.) g and int k_S^-(t,.) g over [lo,hi].
inline PartIntegrals row_parts(const AssembledKernel& ak, const Weight& g, double t, double lo, double hi,
                               const QuadratureOptions& opt = {}) {
  const auto br = ak.breaks_at(t);
  return integrate_pm([&](double s) { return ak.eval(t, s) * g(s); }, lo, hi, br, opt);
}

// The four s-integrals of K_A g and K_B g over [0,1] and [a,b].
struct FunctionalIntegrals {
  double KA_full = 0.0, KB_full = 0.0;
  double KA_ab = 0.0, KB_ab = 0.0;
};

inline FunctionalIntegrals functional_integrals(const AssembledKernel& ak, const Weight& g,
                                                const QuadratureOptions& opt = {}) {
  FunctionalIntegrals fi;
  const auto& br = ak.common_breaks;
  if (!ak.boundary.alpha.is_trivial()) {
    auto f = [&](double s) { return ak.KA(s) * g(s); };
    fi.KA_full = integrate(f, 0.0, 1.0, br, opt);
    fi.KA_ab = integrate(f, ak.a, ak.b, br, opt);
  }
  if (!ak.boundary.beta.is_trivial()) {
    auto f = [&](double s) { return ak.KB(s) * g(s); };
    fi.KB_full = integrate(f, 0.0, 1.0, br, opt);
    fi.KB_ab = integrate(f, ak.a, ak.b, br, opt);
  }
  return fi;
}

struct SConstants {
  double m_S;
  double M_S;
};

// 1/m_S = sup_t max{int k_S^+ g, int k_S^- g}, 1/M_S = inf_{[a,b]} int_a^b k_S g,
// both on 2000-point t-grids with golden-section polishing.
// 1 / sup_t int_0^1 |k_S(t,s)| g(s) ds. Equals m_S for a nonnegative k_S and
// is smaller otherwise; it is the bound mu(L) >= 1/||L|| that always holds.
inline double m_abs(const AssembledKernel& ak, const Weight& g, const QuadratureOptions& opt = {}) {
  auto row = [&](double t) {
    const PartIntegrals p = row_parts(ak, g, t, 0.0, 1.0, opt);
    return p.positive + p.negative;
  };
  return 1.0 / grid_max(row, 0.0, 1.0).value;
}

inline SConstants mS_MS(const AssembledKernel& ak, const Weight& g, double a, double b,
                        const QuadratureOptions& opt = {}) {
  auto row = [&](double t) {
    const PartIntegrals p = row_parts(ak, g, t, 0.0, 1.0, opt);
    return std::max(p.positive, p.negative);
  };
  const double inv_m = grid_max(row, 0.0, 1.0).value;
  if (!(inv_m > 0.0)) throw DomainError("k_S g integrates to zero; m_S is undefined");

  AssembledKernel sub = ak;
  sub.a = a;
  sub.b = b;
  const FunctionalIntegrals fi = functional_integrals(sub, g, opt);
  auto inner = [&](double t) {
    const double kpart =
        integrate([&](double s) { return ak.base(t, s) * g(s); }, a, b, ak.base.breaks_at(t), opt);
    return ak.coef_A(t) * fi.KA_ab + ak.coef_B(t) * fi.KB_ab + kpart;
  };
  const Extremum lo = grid_min(inner, a, b);
  if (!(lo.value > 0.0))
    throw NonpositiveInfimum("int_a^b k_S(t,s) g(s) ds = " + std::to_string(lo.value) + " at t = " +
                             std::to_string(lo.arg));
  return {1.0 / inv_m, 1.0 / lo.value};
}

// c~ = (1/c) sup_t int_0^1 k_S^- g / int_a^b k_S^+ g.
inline double c_tilde(const AssembledKernel& ak, const Weight& g, double a, double b,
                      const QuadratureOptions& opt = {}) {
  double scale = 0.0;
  auto ratio = [&](double t) {
    const double neg = row_parts(ak, g, t, 0.0, 1.0, opt).negative;
    if (neg == 0.0) return 0.0;
    const double den = row_parts(ak, g, t, a, b, opt).positive;
    scale = std::max(scale, neg);
    if (!(den > 1e-14 * std::max(scale, 1e-300)))
      throw DivisionByZeroRegion("int_a^b k_S^+(t,s) g(s) ds vanishes at t = " + std::to_string(t));
    return neg / den;
  };
  return grid_max(ratio, 0.0, 1.0).value / ak.cone_c;
}

}  // namespace hkit
