#pragma once

// Bundled problem files, identical to scenarios/*.yaml (a test keeps them in
// sync).

#include <map>
#include <string>
#include <string_view>

#include "hkit/errors.hpp"

namespace hkit::scenarios {

inline constexpr std::string_view example1 = R"yaml(# Local Neumann problem u'' + (7 pi/12)^2 u = f(t,u), u'(0) = u'(1) = 0,
# localized on [1/4, 3/4]. Two nontrivial solutions once tau1/tau2 clears
# the bump threshold (about 42.3 with the computed M).
name: example1
parameters:
  tau1: 45
  tau2: 1
epsilon: 1
omega: 7*pi/12
interval: [0.25, 0.75]
weight: one
nonlinearity:
  f: tau1*u^2*exp(-tau2*abs(u))/(1+t^2)
  # sup over |u| <= rho: the bump peaks at u = 2/tau2
  envelope_sup: tau1*min(rho, 2/tau2)^2*exp(-tau2*min(rho, 2/tau2))/rho
  # inf over [a,b] of 1/(1+t^2) is 16/25; the bump is unimodal in u
  envelope_inf: 0.64*tau1*min(rho^2*exp(-tau2*rho), (rho/c)^2*exp(-tau2*rho/c))/rho
  asymptotics: {f_sup_zero: 0, f_inf_zero: 0, f_sup_inf: 0, f_inf_inf: 0, f_tilde_zero: 0}
check:
  rhos: [0.5, 0.7, 0.79, 0.9, 1.2]
  menu: Z
)yaml";

inline constexpr std::string_view example2 = R"yaml(# u'' + w^2 u = exp(-|u|) with u'(0) = u(0) + u(1) and
# u'(1) = int_0^1 u(t) sin(pi t) dt, w in (pi/2, pi).
name: example2
parameters:
  w: 2
epsilon: 1
omega: w
interval: [0.3, 0.7]
weight: one
nonlinearity:
  f: exp(-abs(u))
  envelope_sup: 1/rho
  envelope_inf: exp(-rho/c)/rho
  asymptotics: {f_sup_zero: inf, f_inf_zero: inf, f_sup_inf: 0, f_inf_inf: 0, f_tilde_zero: inf}
boundary:
  gamma: left
  delta: right
  alpha: {atoms: [[0, 1], [1, 1]]}
  beta: {density: sin(pi*t)}
solver: {nodes: 200, initial: 0.5, damping: 0.5}
check:
  rhos: [0.01, 100]
  menu: S
)yaml";

inline constexpr std::string_view example3 = R"yaml(# -u'' + u = lambda t exp(u), u'(0) = u'(1) = 0.
name: example3
parameters:
  lambda: 0.25
epsilon: -1
omega: 1
interval: [0, 1]
weight: linear
nonlinearity:
  f: lambda*exp(u)
  envelope_sup: lambda*exp(rho)/rho
  envelope_inf: lambda*exp(rho)/rho
  asymptotics: {f_sup_zero: inf, f_inf_zero: inf, f_sup_inf: inf, f_inf_inf: inf, f_tilde_zero: inf}
solver: {nodes: 200, tol: 1e-10, damping: 1, initial: 0.1}
check:
  rhos: [0.1, 2]
  menu: S
)yaml";

inline constexpr std::string_view zero = R"yaml(# f = 0 with trivial boundary data: only the zero solution.
name: zero
epsilon: -1
omega: 1
nonlinearity:
  f: 0
check:
  rhos: [1, 2]
  menu: S
)yaml";

inline std::string_view by_name(const std::string& name) {
  if (name == "example1") return example1;
  if (name == "example2") return example2;
  if (name == "example3") return example3;
  if (name == "zero") return zero;
  throw DomainError("no bundled scenario named '" + name + "'");
}

inline const std::map<std::string, std::string_view>& all() {
  static const std::map<std::string, std::string_view> m = {
      {"example1", example1},
      {"example2", example2},
      {"example3", example3},
      {"zero", zero},
  };
  return m;
}

}  // namespace hkit::scenarios
