#pragma once

// Green's functions of the shifted Neumann problems
//
//   eps u'' + omega^2 u = y,   u'(0) = u'(1) = 0,   eps = -1 or +1,
//
// and the constants Phi, c(a,b), m and M(a,b) attached to them.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "hkit/errors.hpp"
#include "hkit/kernel.hpp"
#include "hkit/quadrature.hpp"

namespace hkit {

enum class Shift : int { minus = -1, plus = 1 };

inline Shift shift_from_int(int eps) {
  if (eps == -1) return Shift::minus;
  if (eps == 1) return Shift::plus;
  throw DomainError("epsilon must be -1 or +1, got " + std::to_string(eps));
}

inline int to_int(Shift eps) { return static_cast<int>(eps); }

namespace detail {

constexpr double kNearSingularOmega = 1e-8;

inline void check_omega(Shift eps, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw DomainError("omega must be a positive finite number");
  if (eps == Shift::plus) {
    const double k = std::round(omega / std::numbers::pi);
    if (k >= 1.0 && std::abs(omega - k * std::numbers::pi) < kNearSingularOmega)
      throw DomainError("sin(omega) = 0: omega is a multiple of pi");
  }
}

// Constants are only derived for omega in (0, pi) on the trigonometric branch.
inline void check_constant_range(Shift eps, double omega) {
  check_omega(eps, omega);
  if (eps == Shift::plus && omega >= std::numbers::pi)
    throw DomainError("constants for eps = +1 require omega in (0, pi)");
}

}  // namespace detail

inline double kernel_eval(Shift eps, double omega, double t, double s) {
  detail::check_omega(eps, omega);
  const double lo = std::min(t, s), hi = std::max(t, s);
  if (eps == Shift::minus)
    return std::cosh(omega * (1.0 - hi)) * std::cosh(omega * lo) / (omega * std::sinh(omega));
  return std::cos(omega * (1.0 - hi)) * std::cos(omega * lo) / (omega * std::sin(omega));
}

struct SignClass {
  enum class Tag { positive_everywhere, positive_except_corners, positive_on_strip, no_strip };
  Tag tag;
  // Open strip (strip_lo, strip_hi) x [0,1] on which the kernel is positive;
  // [0,1] when the kernel is positive everywhere.
  double strip_lo = 0.0;
  double strip_hi = 1.0;
};

inline std::string to_string(SignClass::Tag tag) {
  switch (tag) {
    case SignClass::Tag::positive_everywhere: return "PositiveEverywhere";
    case SignClass::Tag::positive_except_corners: return "PositiveExceptCorners";
    case SignClass::Tag::positive_on_strip: return "PositiveOnStrip";
    case SignClass::Tag::no_strip: return "NoStrip";
  }
  return "?";
}

// Sign structure of the eps = +1 kernel as a function of omega alone.
inline SignClass classify_sign(double omega) {
  detail::check_omega(Shift::plus, omega);
  constexpr double half_pi = std::numbers::pi / 2;
  if (std::abs(omega - half_pi) <= 1e-12) return {SignClass::Tag::positive_except_corners, 0.0, 1.0};
  if (omega < half_pi) return {SignClass::Tag::positive_everywhere, 0.0, 1.0};
  if (omega < std::numbers::pi)
    return {SignClass::Tag::positive_on_strip, 1.0 - half_pi / omega, half_pi / omega};
  return {SignClass::Tag::no_strip, 0.0, 0.0};
}

// Phi(s) = sup_t |k(t,s)|, closed form.
inline std::function<double(double)> phi_envelope(Shift eps, double omega) {
  detail::check_constant_range(eps, omega);
  if (eps == Shift::minus)
    return [omega](double s) {
      return std::cosh(omega * (1.0 - s)) * std::cosh(omega * s) / (omega * std::sinh(omega));
    };
  return [omega](double s) {
    return std::max(std::cos(omega * (1.0 - s)), std::cos(omega * s)) / (omega * std::sin(omega));
  };
}

struct ShiftedKernel {
  Shift epsilon;
  double omega;

  ShiftedKernel(Shift eps, double w) : epsilon(eps), omega(w) { detail::check_omega(eps, w); }

  double operator()(double t, double s) const { return kernel_eval(epsilon, omega, t, s); }

  // Generic view used by the integrators. The zero lines of the eps = +1
  // kernel are listed as breakpoints so positive/negative parts integrate
  // cleanly.
  Kernel kernel() const {
    Kernel k;
    const Shift eps = epsilon;
    const double w = omega;
    k.eval = [eps, w](double t, double s) { return kernel_eval(eps, w, t, s); };
    k.diagonal_kink = true;
    if (eps == Shift::plus && w > std::numbers::pi / 2) {
      for (double x : {std::numbers::pi / (2 * w), 1.0 - std::numbers::pi / (2 * w)})
        if (x > 0.0 && x < 1.0) k.extra_breaks.push_back(x);
    }
    if (eps == Shift::minus || w < std::numbers::pi) k.envelope = phi_envelope(eps, w);
    return k;
  }
};

namespace detail {

inline void check_subinterval(double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a < b)) throw DomainError("[a,b] must satisfy 0 <= a < b <= 1");
}

inline double c_closed_form(Shift eps, double omega, double a, double b) {
  if (eps == Shift::minus)
    return std::min(std::cosh(omega * a), std::cosh(omega * (1.0 - b))) / std::cosh(omega);
  return std::min({std::cos(omega * a), std::cos(omega * (1.0 - a)), std::cos(omega * b),
                   std::cos(omega * (1.0 - b))});
}

}  // namespace detail

// Throws StripViolation unless [a,b] lies in the positivity strip of the
// eps = +1 kernel. Interval ends that coincide with 0 or 1 are accepted when the
// strip reaches them, provided c(a,b) > 0.
inline void check_strip(Shift eps, double omega, double a, double b) {
  detail::check_subinterval(a, b);
  detail::check_constant_range(eps, omega);
  if (eps == Shift::minus) return;
  const double edge = std::numbers::pi / (2.0 * omega);
  const double lo = 1.0 - edge, hi = edge;
  if ((lo >= 0.0 && a <= lo) || (hi <= 1.0 && b >= hi))
    throw StripViolation("[" + std::to_string(a) + ", " + std::to_string(b) +
                         "] is not inside the positivity strip (" + std::to_string(std::max(0.0, lo)) +
                         ", " + std::to_string(std::min(1.0, hi)) + ")");
  if (!(detail::c_closed_form(eps, omega, a, b) > 0.0))
    throw StripViolation("kernel vanishes on [a,b] x [0,1]");
}

// c(a,b) = inf_s min_{t in [a,b]} k(t,s) / Phi(s).
inline double c_of_interval(Shift eps, double omega, double a, double b) {
  check_strip(eps, omega, a, b);
  return detail::c_closed_form(eps, omega, a, b);
}

namespace detail {

inline double m_closed_form(Shift eps, double omega) {
  const double w2 = omega * omega;
  if (eps == Shift::minus || omega < std::numbers::pi / 2) return w2;
  return w2 * std::sin(omega);
}

// xi_1 for eps = -1: the supremum sits at an endpoint, b when a + b <= 1.
inline double inv_M_minus(double omega, double a, double b) {
  auto xi1 = [&](double t) {
    return std::sinh(omega * a) * std::cosh(omega * (1.0 - t)) +
           std::sinh(omega * (1.0 - b)) * std::cosh(omega * t);
  };
  const double top = (a + b <= 1.0) ? xi1(b) : xi1(a);
  const double w2 = omega * omega;
  return 1.0 / w2 - top / (w2 * std::sinh(omega));
}

// Maximiser of xi_3 on [a,b]: a + b = 1 gives t0 = 1/2; otherwise bisection
// on xi_3' when it changes sign, else the larger endpoint value.
inline double xi3_max(double omega, double a, double b) {
  const double sa = std::sin(omega * a), sb = std::sin(omega * (1.0 - b));
  auto xi3 = [&](double t) { return std::cos(omega * (1.0 - t)) * sa + std::cos(omega * t) * sb; };
  auto dxi3 = [&](double t) {
    return omega * (std::sin(omega * (1.0 - t)) * sa - std::sin(omega * t) * sb);
  };
  if (std::abs(a + b - 1.0) < 1e-14) return sa * (std::cos(omega / 2) + std::cos(omega / 2));
  const double da = dxi3(a), db = dxi3(b);
  if (da * db < 0.0) {
    double lo = a, hi = b, flo = da;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = dxi3(mid);
      if (!std::isfinite(fm)) throw RootFindFailure("non-finite derivative while locating t0");
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const double t0 = 0.5 * (lo + hi);
    return std::max({xi3(t0), xi3(a), xi3(b)});
  }
  return std::max(xi3(a), xi3(b));
}

inline double inv_M_plus(double omega, double a, double b) {
  const double w2 = omega * omega;
  return 1.0 / w2 - xi3_max(omega, a, b) / (w2 * std::sin(omega));
}

}  // namespace detail

// m = 1 / sup_t max{ int k^+ g, int k^- g }.
inline double m_constant(Shift eps, double omega, const Weight& g, const QuadratureOptions& opt = {}) {
  detail::check_constant_range(eps, omega);
  if (g.is_one()) return detail::m_closed_form(eps, omega);
  const Kernel k = ShiftedKernel(eps, omega).kernel();
  auto row = [&](double t) {
    auto f = [&](double s) { return k(t, s) * g(s); };
    const auto br = k.breaks_at(t);
    if (eps == Shift::minus) return integrate(f, 0.0, 1.0, br, opt);
    return std::max(integrate_part(f, Part::positive, 0.0, 1.0, br, opt),
                    integrate_part(f, Part::negative, 0.0, 1.0, br, opt));
  };
  const double sup = grid_max(row, 0.0, 1.0).value;
  if (!(sup > 0.0)) throw DomainError("weight g gives a vanishing kernel integral");
  return 1.0 / sup;
}

// M(a,b) = 1 / inf_{t in [a,b]} int_a^b k(t,s) g(s) ds.
inline double M_constant(Shift eps, double omega, double a, double b, const Weight& g,
                         const QuadratureOptions& opt = {}) {
  check_strip(eps, omega, a, b);
  double inv = 0.0;
  if (g.is_one()) {
    inv = (eps == Shift::minus) ? detail::inv_M_minus(omega, a, b) : detail::inv_M_plus(omega, a, b);
  } else {
    const Kernel k = ShiftedKernel(eps, omega).kernel();
    auto row = [&](double t) {
      return integrate([&](double s) { return k(t, s) * g(s); }, a, b, k.breaks_at(t), opt);
    };
    inv = grid_min(row, a, b).value;
  }
  if (!(inv > 0.0)) throw StripViolation("inf_t int_a^b k g is not positive on [a,b]");
  return 1.0 / inv;
}

struct ConstantsBundle {
  Shift epsilon;
  double omega;
  double a, b;
  std::function<double(double)> phi;
  double c_ab;
  double m;
  double M_ab;
};

inline ConstantsBundle greens_constants(Shift eps, double omega, double a, double b, const Weight& g,
                                        const QuadratureOptions& opt = {}) {
  return {eps,
          omega,
          a,
          b,
          phi_envelope(eps, omega),
          c_of_interval(eps, omega, a, b),
          m_constant(eps, omega, g, opt),
          M_constant(eps, omega, a, b, g, opt)};
}

}  // namespace hkit
