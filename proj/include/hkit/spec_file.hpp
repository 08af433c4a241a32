#pragma once

// YAML problem files. Layout (every block except epsilon/omega optional):
//
//   name: example3
//   parameters: {lambda: 0.25}
//   epsilon: -1
//   omega: 1
//   interval: [0, 1]
//   weight: linear              # one | linear | expression in s
//   nonlinearity:
//     f: lambda*exp(u)          # expression in t, u
//     envelope_sup: ...         # expression in rho
//     envelope_inf: ...         # expression in rho, c
//     asymptotics: {f_sup_zero: inf, f_sup_inf: 0, ...}
//   boundary:
//     gamma: left               # left | right | zero | expression in t
//     alpha: {atoms: [[0, 1]], density: sin(pi*t), breaks: [0.5]}
//   solver: {nodes: 200, tol: 1e-10, damping: 0.5, max_iter: 20000,
//            starts: 1, initial: 0.1, anderson: false, anderson_depth: 5}
//   check: {rhos: [0.1, 2], menu: S, mode: full}
//
// Numeric fields accept expressions over the parameters.

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hkit/errors.hpp"
#include "hkit/expr.hpp"
#include "hkit/greens.hpp"
#include "hkit/problem.hpp"

namespace hkit {

namespace detail {

[[noreturn]] inline void fail_at(const YAML::Node& n, const std::string& msg) {
  const auto m = n.Mark();
  throw ParseError(m.line + 1, m.column + 1, msg);
}

inline void allow_keys(const YAML::Node& n, const std::string& where, std::initializer_list<const char*> keys) {
  if (!n.IsMap()) fail_at(n, where + " must be a mapping");
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) fail_at(kv.first, "unknown key '" + key + "' in " + where);
  }
}

class SpecReader {
 public:
  explicit SpecReader(std::map<std::string, double> consts) : consts_(std::move(consts)) {}

  std::string scalar(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) fail_at(n, what + " must be a scalar");
    return n.Scalar();
  }

  // Column of the expression text: quoted scalars start one column later.
  static int text_column(const YAML::Node& n) {
    const bool quoted = n.Tag() == "!";
    return n.Mark().column + 1 + (quoted ? 1 : 0);
  }

  Expression expr(const YAML::Node& n, const std::vector<std::string>& vars, const std::string& what) const {
    const std::string s = scalar(n, what);
    return Expression::parse(s, vars, consts_, n.Mark().line + 1, text_column(n));
  }

  double number(const YAML::Node& n, const std::string& what) const {
    const std::string s = scalar(n, what);
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    const double v = expr(n, {}, what)();
    if (std::isnan(v)) fail_at(n, what + " evaluates to NaN");
    return v;
  }

  long integer(const YAML::Node& n, const std::string& what) const {
    const double v = number(n, what);
    if (v != std::floor(v) || std::isinf(v)) fail_at(n, what + " must be an integer");
    return static_cast<long>(v);
  }

  bool boolean(const YAML::Node& n, const std::string& what) const {
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fail_at(n, what + " must be true or false");
    }
  }

  std::vector<double> numbers(const YAML::Node& n, const std::string& what) const {
    std::vector<double> out;
    if (n.IsScalar()) {
      // "0.1, 2" as a single string
      std::stringstream ss(n.Scalar());
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(Expression::parse(item, {}, consts_, n.Mark().line + 1, text_column(n))());
      }
      return out;
    }
    if (!n.IsSequence()) fail_at(n, what + " must be a list");
    for (const auto& x : n) out.push_back(number(x, what));
    return out;
  }

  const std::map<std::string, double>& constants() const { return consts_; }

 private:
  std::map<std::string, double> consts_;
};

inline std::function<double(double)> boundary_function(const SpecReader& rd, const YAML::Node& n, Shift eps,
                                                       double omega, const std::string& what) {
  const std::string s = rd.scalar(n, what);
  if (s == "zero") return [](double) { return 0.0; };
  if (s == "left" || s == "right") {
    const double sv = s == "left" ? 0.0 : 1.0;
    return [eps, omega, sv](double t) { return kernel_eval(eps, omega, t, sv); };
  }
  auto e = std::make_shared<const Expression>(rd.expr(n, {"t"}, what));
  return [e](double t) { return (*e)(t); };
}

inline StieltjesMeasure measure(const SpecReader& rd, const YAML::Node& n, const std::string& what) {
  if (n.IsScalar() && n.Scalar() == "zero") return StieltjesMeasure::trivial();
  allow_keys(n, what, {"atoms", "density", "breaks"});
  std::vector<Atom> atoms;
  if (n["atoms"]) {
    if (!n["atoms"].IsSequence()) fail_at(n["atoms"], what + ".atoms must be a list of [location, weight]");
    for (const auto& a : n["atoms"]) {
      if (!a.IsSequence() || a.size() != 2) fail_at(a, what + " atom must be [location, weight]");
      const double loc = rd.number(a[0], "atom location"), w = rd.number(a[1], "atom weight");
      if (!(loc >= 0.0 && loc <= 1.0)) fail_at(a[0], "atom location must lie in [0,1]");
      atoms.push_back({loc, w});
    }
  }
  std::function<double(double)> density;
  if (n["density"]) {
    auto e = std::make_shared<const Expression>(rd.expr(n["density"], {"t"}, what + ".density"));
    density = [e](double t) { return (*e)(t); };
  }
  std::vector<double> br;
  if (n["breaks"]) br = rd.numbers(n["breaks"], what + ".breaks");
  return StieltjesMeasure(std::move(atoms), std::move(density), std::move(br));
}

}  // namespace detail

// Parses a problem file. `overrides` replace values in the parameters block
// as it is read, so later parameters see the new values.
inline ProblemSpec parse_problem(const std::string& text, const std::map<std::string, double>& overrides = {}) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  if (!root.IsMap()) throw ParseError(1, 1, "problem file must be a mapping");
  detail::allow_keys(root, "problem",
                     {"name", "parameters", "epsilon", "omega", "interval", "weight", "nonlinearity", "boundary",
                      "solver", "check"});

  ProblemSpec ps;
  std::map<std::string, double> params;
  if (root["parameters"]) {
    const auto& pn = root["parameters"];
    if (!pn.IsMap()) detail::fail_at(pn, "parameters must be a mapping");
    for (const auto& kv : pn) {
      const auto key = kv.first.as<std::string>();
      const detail::SpecReader partial(params);
      const double v = partial.number(kv.second, "parameter " + key);
      params[key] = overrides.count(key) ? overrides.at(key) : v;
    }
  }
  for (const auto& kv : overrides)
    if (!params.count(kv.first)) throw ParseError(0, 0, "override of unknown parameter '" + kv.first + "'");
  ps.parameters = params;
  const detail::SpecReader rd(params);

  if (root["name"]) ps.name = rd.scalar(root["name"], "name");
  if (!root["epsilon"]) throw ParseError(1, 1, "missing key 'epsilon'");
  if (!root["omega"]) throw ParseError(1, 1, "missing key 'omega'");
  const long eps = rd.integer(root["epsilon"], "epsilon");
  if (eps != 1 && eps != -1) detail::fail_at(root["epsilon"], "epsilon must be -1 or 1");
  ps.epsilon = shift_from_int(static_cast<int>(eps));
  ps.omega = rd.number(root["omega"], "omega");
  if (!(ps.omega > 0.0) || std::isinf(ps.omega)) detail::fail_at(root["omega"], "omega must be positive and finite");

  if (root["interval"]) {
    const auto iv = rd.numbers(root["interval"], "interval");
    if (iv.size() != 2 || !(iv[0] >= 0.0 && iv[0] < iv[1] && iv[1] <= 1.0))
      detail::fail_at(root["interval"], "interval must be [a, b] with 0 <= a < b <= 1");
    ps.a = iv[0];
    ps.b = iv[1];
  }

  if (root["weight"]) {
    const auto& w = root["weight"];
    const std::string s = rd.scalar(w, "weight");
    if (s == "one") ps.g = Weight::one();
    else if (s == "linear") ps.g = Weight::linear();
    else {
      auto e = std::make_shared<const Expression>(rd.expr(w, {"s"}, "weight"));
      ps.g = Weight([e](double x) { return (*e)(x); }, s);
    }
  }

  if (const auto& nl = root["nonlinearity"]) {
    detail::allow_keys(nl, "nonlinearity", {"f", "depends_on_t", "envelope_sup", "envelope_inf", "asymptotics"});
    if (!nl["f"]) detail::fail_at(nl, "nonlinearity needs 'f'");
    Nonlinearity f;
    auto fe = std::make_shared<const Expression>(rd.expr(nl["f"], {"t", "u"}, "f"));
    f.eval = [fe](double t, double u) { return (*fe)(t, u); };
    f.description = fe->text();
    f.depends_on_t = nl["depends_on_t"] ? rd.boolean(nl["depends_on_t"], "depends_on_t") : fe->uses("t");
    if (nl["envelope_sup"]) {
      auto e = std::make_shared<const Expression>(rd.expr(nl["envelope_sup"], {"rho"}, "envelope_sup"));
      f.envelope_sup = [e](double rho) { return (*e)(rho); };
    }
    if (nl["envelope_inf"]) {
      auto e = std::make_shared<const Expression>(rd.expr(nl["envelope_inf"], {"rho", "c"}, "envelope_inf"));
      f.envelope_inf = [e](double rho, double c) { return (*e)(rho, c); };
    }
    if (const auto& as = nl["asymptotics"]) {
      detail::allow_keys(as, "asymptotics", {"f_sup_zero", "f_inf_zero", "f_sup_inf", "f_inf_inf", "f_tilde_zero"});
      auto opt = [&](const char* key, std::optional<double>& slot) {
        if (as[key]) slot = rd.number(as[key], key);
      };
      opt("f_sup_zero", f.asymptotics.f_sup_zero);
      opt("f_inf_zero", f.asymptotics.f_inf_zero);
      opt("f_sup_inf", f.asymptotics.f_sup_inf);
      opt("f_inf_inf", f.asymptotics.f_inf_inf);
      opt("f_tilde_zero", f.asymptotics.f_tilde_zero);
    }
    ps.f = std::move(f);
  }

  if (const auto& bn = root["boundary"]) {
    detail::allow_keys(bn, "boundary", {"gamma", "delta", "alpha", "beta"});
    if (bn["gamma"]) ps.boundary.gamma = detail::boundary_function(rd, bn["gamma"], ps.epsilon, ps.omega, "gamma");
    if (bn["delta"]) ps.boundary.delta = detail::boundary_function(rd, bn["delta"], ps.epsilon, ps.omega, "delta");
    if (bn["alpha"]) ps.boundary.alpha = detail::measure(rd, bn["alpha"], "alpha");
    if (bn["beta"]) ps.boundary.beta = detail::measure(rd, bn["beta"], "beta");
  }

  if (const auto& sn = root["solver"]) {
    detail::allow_keys(sn, "solver",
                       {"nodes", "tol", "damping", "max_iter", "starts", "initial", "anderson", "anderson_depth"});
    auto& s = ps.solver;
    if (sn["nodes"]) {
      const long n = rd.integer(sn["nodes"], "nodes");
      if (n < 16) detail::fail_at(sn["nodes"], "nodes must be at least 16");
      s.nodes = static_cast<std::size_t>(n);
    }
    if (sn["tol"]) s.tol = rd.number(sn["tol"], "tol");
    if (sn["damping"]) {
      s.damping = rd.number(sn["damping"], "damping");
      if (!(s.damping > 0.0 && s.damping <= 1.0)) detail::fail_at(sn["damping"], "damping must lie in (0,1]");
    }
    if (sn["max_iter"]) s.max_iter = static_cast<int>(rd.integer(sn["max_iter"], "max_iter"));
    if (sn["starts"]) s.starts = static_cast<int>(rd.integer(sn["starts"], "starts"));
    if (sn["initial"]) {
      auto e = std::make_shared<const Expression>(rd.expr(sn["initial"], {"t"}, "initial"));
      s.initial = [e](double t) { return (*e)(t); };
      s.initial_description = e->text();
    }
    if (sn["anderson"]) s.anderson = rd.boolean(sn["anderson"], "anderson");
    if (sn["anderson_depth"]) s.anderson_depth = static_cast<int>(rd.integer(sn["anderson_depth"], "anderson_depth"));
  }

  if (const auto& cn = root["check"]) {
    detail::allow_keys(cn, "check", {"rhos", "menu", "mode"});
    if (cn["rhos"]) ps.check.rhos = rd.numbers(cn["rhos"], "rhos");
    if (cn["menu"]) ps.check.menu = rd.scalar(cn["menu"], "menu");
    if (cn["mode"]) {
      ps.check.mode = rd.scalar(cn["mode"], "mode");
      if (ps.check.mode != "full" && ps.check.mode != "simplified")
        detail::fail_at(cn["mode"], "mode must be 'full' or 'simplified'");
    }
  }
  return ps;
}

inline ProblemSpec load_problem(const std::filesystem::path& path,
                                const std::map<std::string, double>& overrides = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problem(ss.str(), overrides);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.string() + ": " + e.message());
  }
}

// "k=v" override strings.
inline std::pair<std::string, double> parse_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError(0, 0, "override must look like name=value: " + kv);
  const std::string name = kv.substr(0, eq);
  return {name, Expression::parse(kv.substr(eq + 1), {})()};
}

}  // namespace hkit
