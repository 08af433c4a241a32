#pragma once

// Boundary functionals alpha[u], beta[u] given as Stieltjes measures (finitely
// many atoms plus a density), the scalars they produce on gamma and delta, and
// the 2x2 order-preserving resolvent algebra.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hkit/errors.hpp"
#include "hkit/kernel.hpp"
#include "hkit/quadrature.hpp"

namespace hkit {

struct Atom {
  double location;
  double weight;
};

class StieltjesMeasure {
 public:
  StieltjesMeasure() = default;
  explicit StieltjesMeasure(std::vector<Atom> atoms, std::function<double(double)> density = {},
                            std::vector<double> density_breaks = {})
      : atoms_(std::move(atoms)), density_(std::move(density)), density_breaks_(std::move(density_breaks)) {
    for (const Atom& a : atoms_)
      if (!(a.location >= 0.0 && a.location <= 1.0) || !std::isfinite(a.weight))
        throw DomainError("atom location must lie in [0,1] with a finite weight");
  }

  static StieltjesMeasure trivial() { return {}; }

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool has_density() const { return static_cast<bool>(density_); }
  double density(double s) const { return density_ ? density_(s) : 0.0; }
  const std::vector<double>& density_breaks() const { return density_breaks_; }

  bool is_trivial() const {
    if (density_) return false;
    return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.weight == 0.0; });
  }

  // Positive measure: nonnegative atoms and a density that is nonnegative on a
  // 2000-point grid.
  bool is_positive() const {
    for (const Atom& a : atoms_)
      if (a.weight < 0.0) return false;
    if (!density_) return true;
    for (double s : linspace(0.0, 1.0, 2000))
      if (density_(s) < -1e-14) return false;
    return true;
  }

  // Locations where functions built from this measure may lose smoothness.
  std::vector<double> singular_points() const {
    std::vector<double> pts = density_breaks_;
    for (const Atom& a : atoms_) pts.push_back(a.location);
    return pts;
  }

  template <class F>
  double apply(const F& u, std::span<const double> breaks = {}, const QuadratureOptions& opt = {}) const {
    double sum = 0.0;
    for (const Atom& a : atoms_) sum += a.weight * u(a.location);
    if (density_) {
      std::vector<double> br(breaks.begin(), breaks.end());
      br.insert(br.end(), density_breaks_.begin(), density_breaks_.end());
      sum += integrate([&](double s) { return density_(s) * u(s); }, 0.0, 1.0, br, opt);
    }
    return sum;
  }

 private:
  std::vector<Atom> atoms_;
  std::function<double(double)> density_;
  std::vector<double> density_breaks_;
};

inline double apply_functional(const StieltjesMeasure& mu, const std::function<double(double)>& u,
                               const QuadratureOptions& opt = {}) {
  return mu.apply(u, {}, opt);
}

// s -> int_0^1 k(t,s) dmu(t), evaluated directly (one quadrature per call).
inline std::function<double(double)> kernel_functionals(const StieltjesMeasure& mu, const Kernel& k,
                                                        const QuadratureOptions& opt = {}) {
  if (mu.is_trivial()) return [](double) { return 0.0; };
  return [mu, k, opt](double s) {
    std::vector<double> br = k.extra_breaks;
    if (k.diagonal_kink) br.push_back(s);
    return mu.apply([&](double t) { return k(t, s); }, br, opt);
  };
}

struct BoundaryData {
  std::function<double(double)> gamma = [](double) { return 0.0; };
  std::function<double(double)> delta = [](double) { return 0.0; };
  StieltjesMeasure alpha;
  StieltjesMeasure beta;

  static BoundaryData trivial() { return {}; }
  bool is_trivial() const { return alpha.is_trivial() && beta.is_trivial(); }
};

struct BoundaryScalars {
  double alpha_gamma = 0.0, alpha_delta = 0.0, beta_gamma = 0.0, beta_delta = 0.0;
  double D = 1.0;
  double gamma_norm = 0.0, delta_norm = 0.0;
  double c2 = 1.0, c3 = 1.0;
};

namespace detail {
constexpr double kSignTolerance = 1e-12;
}

// Throws ConditionViolation naming the first of C6, C7, C8 that fails.
inline double determinant_D(const BoundaryScalars& s) {
  const double tol = detail::kSignTolerance;
  if (s.alpha_gamma < -tol || s.alpha_gamma >= 1.0)
    throw ConditionViolation("C6", "alpha[gamma] = " + std::to_string(s.alpha_gamma) + " is not in [0,1)");
  if (s.beta_gamma < -tol)
    throw ConditionViolation("C6", "beta[gamma] = " + std::to_string(s.beta_gamma) + " is negative");
  if (s.beta_delta < -tol || s.beta_delta >= 1.0)
    throw ConditionViolation("C7", "beta[delta] = " + std::to_string(s.beta_delta) + " is not in [0,1)");
  if (s.alpha_delta < -tol)
    throw ConditionViolation("C7", "alpha[delta] = " + std::to_string(s.alpha_delta) + " is negative");
  const double D = (1.0 - s.alpha_gamma) * (1.0 - s.beta_delta) - s.alpha_delta * s.beta_gamma;
  if (!(D > 0.0)) throw ConditionViolation("C8", "D = " + std::to_string(D) + " is not positive");
  return D;
}

// D without validation, for scanning parameter families.
inline double raw_determinant(const BoundaryScalars& s) {
  return (1.0 - s.alpha_gamma) * (1.0 - s.beta_delta) - s.alpha_delta * s.beta_gamma;
}

// min_{[a,b]} f / ||f|| on a 2000-point grid; 1 when f vanishes.
inline double cone_fraction(const std::function<double(double)>& f, double a, double b) {
  const double norm = grid_max([&](double t) { return std::abs(f(t)); }, 0.0, 1.0).value;
  if (norm == 0.0) return 1.0;
  return grid_min(f, a, b).value / norm;
}

// All scalars of the boundary data on [a,b], without checking C6-C8.
inline BoundaryScalars boundary_scalars_unchecked(const BoundaryData& bd, double a, double b,
                                                  const QuadratureOptions& opt = {}) {
  BoundaryScalars s;
  s.alpha_gamma = bd.alpha.apply(bd.gamma, {}, opt);
  s.alpha_delta = bd.alpha.apply(bd.delta, {}, opt);
  s.beta_gamma = bd.beta.apply(bd.gamma, {}, opt);
  s.beta_delta = bd.beta.apply(bd.delta, {}, opt);
  s.D = raw_determinant(s);
  s.gamma_norm = grid_max([&](double t) { return std::abs(bd.gamma(t)); }, 0.0, 1.0).value;
  s.delta_norm = grid_max([&](double t) { return std::abs(bd.delta(t)); }, 0.0, 1.0).value;
  // gamma only enters through alpha[u], so a trivial alpha puts no constraint on it.
  s.c2 = bd.alpha.is_trivial() ? 1.0 : cone_fraction(bd.gamma, a, b);
  s.c3 = bd.beta.is_trivial() ? 1.0 : cone_fraction(bd.delta, a, b);
  return s;
}

// Scalars with C6-C8 enforced, including c2, c3 in (0,1].
inline BoundaryScalars boundary_scalars(const BoundaryData& bd, double a, double b,
                                        const QuadratureOptions& opt = {}) {
  BoundaryScalars s = boundary_scalars_unchecked(bd, a, b, opt);
  if (!(s.c2 > 0.0)) throw ConditionViolation("C6", "gamma is not bounded below by c2 ||gamma|| on [a,b]");
  if (!(s.c3 > 0.0)) throw ConditionViolation("C7", "delta is not bounded below by c3 ||delta|| on [a,b]");
  s.D = determinant_D(s);
  return s;
}

// D with the scalar parts of C6-C8 enforced (c2, c3 are not needed here).
inline double determinant_D(const BoundaryData& bd, const QuadratureOptions& opt = {}) {
  BoundaryScalars s;
  s.alpha_gamma = bd.alpha.apply(bd.gamma, {}, opt);
  s.alpha_delta = bd.alpha.apply(bd.delta, {}, opt);
  s.beta_gamma = bd.beta.apply(bd.gamma, {}, opt);
  s.beta_delta = bd.beta.apply(bd.delta, {}, opt);
  return determinant_D(s);
}

// Throws ConditionViolation("C5") if fn dips below -1e-10 on a 2000-point grid.
inline void check_nonnegative_on_grid(const std::function<double(double)>& fn, const std::string& name) {
  for (double s : linspace(0.0, 1.0, 2000)) {
    const double v = fn(s);
    if (v < -1e-10) throw ConditionViolation("C5", name + "(" + std::to_string(s) + ") = " + std::to_string(v) + " < 0");
  }
}

struct Mat2 {
  double a11, a12, a21, a22;
  double det() const { return a11 * a22 - a12 * a21; }
};

// N_mu = [[mu - alpha[gamma], -alpha[delta]], [-beta[gamma], mu - beta[delta]]].
inline Mat2 n_matrix(const BoundaryScalars& s, double mu = 1.0) {
  return {mu - s.alpha_gamma, -s.alpha_delta, -s.beta_gamma, mu - s.beta_delta};
}

// Solves [[a11,a12],[a21,a22]] (x,y) = (p,q). The order-preserving structure
// needs a positive determinant, so det <= 0 is reported as singular.
inline std::pair<double, double> resolvent_2x2(double a11, double a12, double a21, double a22, double p,
                                               double q) {
  const double det = a11 * a22 - a12 * a21;
  const double scale = std::max({std::abs(a11 * a22), std::abs(a12 * a21), 1e-300});
  if (!(det > 1e-14 * scale)) throw SingularMatrix("2x2 determinant " + std::to_string(det) + " is not positive");
  return {(a22 * p - a12 * q) / det, (a11 * q - a21 * p) / det};
}

inline std::pair<double, double> resolvent_2x2(const Mat2& m, double p, double q) {
  return resolvent_2x2(m.a11, m.a12, m.a21, m.a22, p, q);
}

}  // namespace hkit
