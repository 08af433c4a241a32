#pragma once

// Sufficient conditions for existence, multiplicity and nonexistence of
// nontrivial solutions in the cone K. Each check returns a verdict together
// with the numbers of the inequality that decided it.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hkit/errors.hpp"
#include "hkit/problem.hpp"
#include "hkit/quadrature.hpp"

namespace hkit {

enum class Verdict { holds, fails, undecided };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "HOLDS";
    case Verdict::fails: return "FAILS";
    case Verdict::undecided: return "UNDECIDED";
  }
  return "?";
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "HOLDS") return Verdict::holds;
  if (s == "FAILS") return Verdict::fails;
  if (s == "UNDECIDED") return Verdict::undecided;
  throw DomainError("unknown verdict '" + s + "'");
}

struct Clause {
  std::string name;
  double lhs = 0.0;
  std::string relation = "<";
  double rhs = 0.0;
  double budget = 0.0;  // margin below which the comparison is undecided
  bool sampled = false;
  Verdict verdict = Verdict::undecided;
  bool operator==(const Clause&) const = default;
};

struct CriterionReport {
  std::string condition_id;
  Verdict verdict = Verdict::undecided;
  // The decisive inequality: lhs relation rhs.
  double lhs = 0.0;
  std::string relation = "<";
  double rhs = 0.0;
  std::vector<Clause> clauses;
  std::map<std::string, double> inputs;
  std::vector<std::string> notes;
  bool operator==(const CriterionReport&) const = default;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// lhs < rhs (or lhs > rhs) with an undecided band of half-width `budget`
// plus 1e-9 of the magnitudes. Exact ties are always undecided.
inline Clause compare(std::string name, double lhs, const std::string& rel, double rhs, double budget = 0.0,
                      bool sampled = false) {
  Clause c{std::move(name), lhs, rel, rhs, budget, sampled, Verdict::undecided};
  const double d = rel == "<" ? rhs - lhs : lhs - rhs;
  if (std::isnan(d)) {
    // inf - inf: the two sides are both infinite
    c.verdict = Verdict::undecided;
    return c;
  }
  if (std::isinf(d)) {
    c.verdict = d > 0 ? Verdict::holds : Verdict::fails;
    return c;
  }
  const double band = budget + 1e-9 * std::max(std::abs(lhs), std::abs(rhs));
  c.budget = band;
  if (d > band) c.verdict = Verdict::holds;
  else if (d < -band) c.verdict = Verdict::fails;
  return c;
}

namespace detail {

inline double relative_margin(const Clause& c) {
  const double d = c.relation == "<" ? c.rhs - c.lhs : c.lhs - c.rhs;
  const double s = std::max({std::abs(c.lhs), std::abs(c.rhs), 1e-300});
  return std::isfinite(d) ? d / s : (d > 0 ? kInf : -kInf);
}

inline CriterionReport finish(std::string id, std::vector<Clause> clauses) {
  CriterionReport r;
  r.condition_id = std::move(id);
  r.clauses = std::move(clauses);
  if (r.clauses.empty()) {
    r.verdict = Verdict::undecided;
    return r;
  }
  const Clause* decisive = nullptr;
  for (const Clause& c : r.clauses)
    if (c.verdict == Verdict::fails) {
      decisive = &c;
      break;
    }
  if (!decisive)
    for (const Clause& c : r.clauses)
      if (c.verdict == Verdict::undecided) {
        decisive = &c;
        break;
      }
  if (!decisive) {
    decisive = &r.clauses.front();
    for (const Clause& c : r.clauses)
      if (relative_margin(c) < relative_margin(*decisive)) decisive = &c;
  }
  r.verdict = decisive->verdict;
  r.lhs = decisive->lhs;
  r.relation = decisive->relation;
  r.rhs = decisive->rhs;
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------- envelopes

struct EnvelopeValue {
  double value = 0.0;
  bool sampled = false;
  double budget = 0.0;  // sampling error allowance on value
};

namespace detail {

constexpr std::size_t kEnvelopeGrid = 2001;

// Extremum of f(t,u)/scale over a tensor grid, with a budget of ten times the
// largest jump to a grid neighbour of the extremal point.
template <class F>
EnvelopeValue sampled_extremum(const F& f, double t0, double t1, bool depends_on_t, double u0, double u1,
                               double scale, bool want_max) {
  const auto ts = depends_on_t ? linspace(t0, t1, kEnvelopeGrid) : std::vector<double>{0.5 * (t0 + t1)};
  const auto us = linspace(u0, u1, kEnvelopeGrid);
  const std::size_t nt = ts.size(), nu = us.size();
  std::vector<double> v(nt * nu);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nu; ++j) {
      const std::size_t k = i * nu + j;
      v[k] = f(ts[i], us[j]) / scale;
      if (std::isnan(v[k])) throw DomainError("nonlinearity is not a number on the sampling grid");
      if (want_max ? v[k] > v[best] : v[k] < v[best]) best = k;
    }
  const std::size_t bi = best / nu, bj = best % nu;
  double jump = 0.0;
  auto consider = [&](std::size_t i, std::size_t j) {
    const double w = v[i * nu + j];
    if (std::isfinite(w) && std::isfinite(v[best])) jump = std::max(jump, std::abs(w - v[best]));
  };
  if (bi > 0) consider(bi - 1, bj);
  if (bi + 1 < nt) consider(bi + 1, bj);
  if (bj > 0) consider(bi, bj - 1);
  if (bj + 1 < nu) consider(bi, bj + 1);
  return {v[best], true, 10.0 * jump};
}

}  // namespace detail

// f^{-rho,rho} = sup { f(t,u)/rho : t in [0,1], |u| <= rho }.
inline EnvelopeValue envelope_sup(const Analysis& an, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  const Nonlinearity& f = an.spec().f;
  if (f.envelope_sup) return {f.envelope_sup(rho), false, 0.0};
  return detail::sampled_extremum(f.eval, 0.0, 1.0, f.depends_on_t, -rho, rho, rho, true);
}

// f_{rho,rho/c} = inf { f(t,u)/rho : t in [a,b], rho <= u <= rho/c }.
inline EnvelopeValue envelope_inf(const Analysis& an, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  const Nonlinearity& f = an.spec().f;
  const double c = an.cone_c();
  if (f.envelope_inf) return {f.envelope_inf(rho, c), false, 0.0};
  return detail::sampled_extremum(f.eval, an.spec().a, an.spec().b, f.depends_on_t, rho, rho / c, rho, false);
}

// -------------------------------------------------------------- asymptotics

enum class Limit { sup_zero, inf_zero, sup_inf, inf_inf, tilde_zero };

inline std::string to_string(Limit l) {
  switch (l) {
    case Limit::sup_zero: return "f^0";
    case Limit::inf_zero: return "f_0";
    case Limit::sup_inf: return "f^inf";
    case Limit::inf_inf: return "f_inf";
    case Limit::tilde_zero: return "f~_0";
  }
  return "?";
}

struct LimitValue {
  double value = 0.0;
  bool sampled = false;
  std::optional<std::string> warning;
};

// Ratio estimate of a limit quantity at |u| = 1e-6 or 1e6.
inline double sample_limit(const Analysis& an, Limit which) {
  const auto& sp = an.spec();
  const Nonlinearity& f = sp.f;
  const bool at_zero = which == Limit::sup_zero || which == Limit::inf_zero || which == Limit::tilde_zero;
  const double u = at_zero ? 1e-6 : 1e6;
  const bool over_ab = which == Limit::inf_zero || which == Limit::inf_inf;
  const double t0 = over_ab ? sp.a : 0.0, t1 = over_ab ? sp.b : 1.0;
  const auto ts = f.depends_on_t ? linspace(t0, t1, detail::kEnvelopeGrid) : std::vector<double>{0.5 * (t0 + t1)};
  const bool sup = which == Limit::sup_zero || which == Limit::sup_inf;
  double best = sup ? -kInf : kInf;
  for (double t : ts) {
    double v;
    if (sup) v = std::max(f(t, u), f(t, -u)) / u;
    else if (which == Limit::tilde_zero) v = std::min(f(t, u), f(t, -u)) / u;
    else v = f(t, u) / u;
    if (std::isnan(v)) v = kInf;  // overflow of f at large |u|
    best = sup ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

inline LimitValue limit_value(const Analysis& an, Limit which) {
  const Asymptotics& as = an.spec().f.asymptotics;
  const std::optional<double>* declared = nullptr;
  switch (which) {
    case Limit::sup_zero: declared = &as.f_sup_zero; break;
    case Limit::inf_zero: declared = &as.f_inf_zero; break;
    case Limit::sup_inf: declared = &as.f_sup_inf; break;
    case Limit::inf_inf: declared = &as.f_inf_inf; break;
    case Limit::tilde_zero: declared = &as.f_tilde_zero; break;
  }
  const double s = sample_limit(an, which);
  if (!declared->has_value()) return {s, true, std::nullopt};
  const double d = **declared;
  LimitValue lv{d, false, std::nullopt};
  bool mismatch = false;
  if (std::isinf(d) != std::isinf(s)) mismatch = std::isinf(d) ? s < 1e4 : d < 1e4;
  else if (std::isfinite(d)) mismatch = std::abs(d - s) > 0.1 * std::max(std::abs(d), std::abs(s)) + 1e-3;
  if (mismatch)
    lv.warning = "declared " + to_string(which) + " = " + std::to_string(d) + " differs from sampled estimate " +
                 std::to_string(s);
  return lv;
}

namespace detail {

// Clause on a limit quantity: sampled estimates need a 10% relative margin.
inline Clause limit_clause(const std::string& name, const LimitValue& lv, const std::string& rel, double rhs,
                           double extra_budget, bool limit_on_left = true) {
  const double lhs = limit_on_left ? lv.value : rhs;
  const double r = limit_on_left ? rhs : lv.value;
  double budget = extra_budget;
  if (lv.sampled && std::isfinite(lv.value)) budget += 0.1 * std::max(std::abs(lhs), std::abs(r));
  return compare(name, lhs, rel, r, budget, lv.sampled);
}

}  // namespace detail

// ------------------------------------------------------- index conditions

enum class IndexMode { full, simplified };

inline IndexMode index_mode_from_string(const std::string& s) {
  if (s == "full") return IndexMode::full;
  if (s == "simplified") return IndexMode::simplified;
  throw DomainError("mode must be 'full' or 'simplified', got '" + s + "'");
}

// (I^1_rho): f^{-rho,rho} F < 1, giving index 1 on K_rho.
inline CriterionReport index_one(const Analysis& an, double rho, IndexMode mode = IndexMode::full) {
  const double F = an.index_one_factor(mode == IndexMode::simplified);
  const EnvelopeValue env = envelope_sup(an, rho);
  const double P = env.value * F;
  auto r = detail::finish("I1_rho", {compare("f^{-rho,rho} * F < 1", P, "<", 1.0, env.budget * F, env.sampled)});
  r.inputs = {{"rho", rho}, {"envelope", env.value}, {"factor", F}, {"D", an.scalars().D}};
  r.notes.push_back(mode == IndexMode::full ? "mode: full" : "mode: simplified");
  if (env.sampled) r.notes.push_back("envelope sampled on a grid, non-rigorous");
  return r;
}

// (I^0_rho): f_{rho,rho/c} F > 1, giving index 0 on V_rho.
inline CriterionReport index_zero(const Analysis& an, double rho, IndexMode mode = IndexMode::full) {
  const double F = an.index_zero_factor(mode == IndexMode::simplified);
  const EnvelopeValue env = envelope_inf(an, rho);
  const double P = env.value * F;
  auto r = detail::finish("I0_rho", {compare("f_{rho,rho/c} * F > 1", P, ">", 1.0, env.budget * F, env.sampled)});
  r.inputs = {{"rho", rho}, {"envelope", env.value}, {"factor", F}, {"c", an.cone_c()}, {"D", an.scalars().D}};
  r.notes.push_back(mode == IndexMode::full ? "mode: full" : "mode: simplified");
  if (env.sampled) r.notes.push_back("envelope sampled on a grid, non-rigorous");
  return r;
}

// ------------------------------------------------------------------- menus

struct MenuResult {
  std::vector<CriterionReport> reports;
  std::string strongest;  // id of the case with most solutions that HOLDS, or empty
  int solutions = 0;      // solutions guaranteed by `strongest`
  std::vector<std::string> notes;
};

namespace detail {

struct SCase {
  const char* id;
  std::vector<char> kinds;  // '0' for I^0, '1' for I^1, per radius
  int solutions;
};

inline const std::vector<SCase>& s_cases() {
  static const std::vector<SCase> cases = {
      {"S1", {'0', '1'}, 1},           {"S2", {'1', '0'}, 1},
      {"S3", {'0', '1', '0'}, 2},      {"S4", {'1', '0', '1'}, 2},
      {"S5", {'0', '1', '0', '1'}, 3}, {"S6", {'1', '0', '1', '0'}, 3},
  };
  return cases;
}

// Gap i -> i+1 must be rho_i/c < rho_{i+1} when an I^0 radius is followed
// by an I^1 radius (the V_rho set sits inside K_{rho/c}), else rho_i < rho_{i+1}.
inline std::optional<std::string> ordering_gap(const SCase& sc, const std::vector<double>& rhos, double c) {
  for (std::size_t i = 0; i + 1 < sc.kinds.size(); ++i) {
    const bool over_c = sc.kinds[i] == '0' && sc.kinds[i + 1] == '1';
    const double lhs = over_c ? rhos[i] / c : rhos[i];
    if (!(lhs < rhos[i + 1]))
      return "rho" + std::to_string(i + 1) + (over_c ? "/c" : "") + " < rho" + std::to_string(i + 2) + " violated";
  }
  return std::nullopt;
}

}  // namespace detail

// Cases S1-S6 on the radii rhos[0] < rhos[1] < ... (first k radii for a case
// that needs k). Throws OrderingViolation when every requested case that has
// enough radii violates its ordering; otherwise violating cases FAIL.
inline MenuResult multiplicity_menu(const Analysis& an, const std::vector<double>& rhos,
                                    const std::set<std::string>& cases = {}, IndexMode mode = IndexMode::full) {
  MenuResult out;
  const double c = an.cone_c();
  std::map<std::pair<char, double>, CriterionReport> memo;
  auto index = [&](char kind, double rho) -> const CriterionReport& {
    auto key = std::make_pair(kind, rho);
    auto it = memo.find(key);
    if (it == memo.end())
      it = memo.emplace(key, kind == '0' ? index_zero(an, rho, mode) : index_one(an, rho, mode)).first;
    return it->second;
  };

  std::vector<std::string> violations;
  int evaluated = 0;
  for (const auto& sc : detail::s_cases()) {
    if (!cases.empty() && !cases.count(sc.id)) continue;
    if (rhos.size() < sc.kinds.size()) {
      out.notes.push_back(std::string(sc.id) + " needs " + std::to_string(sc.kinds.size()) + " radii");
      continue;
    }
    ++evaluated;
    std::vector<double> r(rhos.begin(), rhos.begin() + static_cast<long>(sc.kinds.size()));
    if (auto gap = detail::ordering_gap(sc, r, c)) {
      CriterionReport rep;
      rep.condition_id = sc.id;
      rep.verdict = Verdict::fails;
      rep.notes.push_back("ordering: " + *gap);
      rep.inputs["c"] = c;
      for (std::size_t i = 0; i < r.size(); ++i) rep.inputs["rho" + std::to_string(i + 1)] = r[i];
      out.reports.push_back(rep);
      violations.push_back(std::string(sc.id) + ": " + *gap);
      continue;
    }
    std::vector<Clause> clauses;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const CriterionReport& ir = index(sc.kinds[i], r[i]);
      Clause cl = ir.clauses.front();
      cl.name = std::string(sc.kinds[i] == '0' ? "I0" : "I1") + "(rho" + std::to_string(i + 1) + ")";
      clauses.push_back(cl);
    }
    CriterionReport rep = detail::finish(sc.id, clauses);
    rep.inputs["c"] = c;
    for (std::size_t i = 0; i < r.size(); ++i) rep.inputs["rho" + std::to_string(i + 1)] = r[i];
    rep.inputs["solutions"] = sc.solutions;
    if (rep.verdict == Verdict::holds && sc.solutions > out.solutions) {
      out.solutions = sc.solutions;
      out.strongest = sc.id;
    }
    out.reports.push_back(std::move(rep));
  }
  if (evaluated > 0 && static_cast<int>(violations.size()) == evaluated)
    throw OrderingViolation(violations.front());
  return out;
}

namespace detail {

inline std::vector<double> heuristic_radii() {
  std::vector<double> r;
  for (int i = 0; i <= 30; ++i) r.push_back(std::pow(10.0, -3.0 + 0.2 * i));
  return r;
}

// Picks the most favourable clause among candidates: any HOLDS, then any
// UNDECIDED, else the least violated.
inline Clause best_of(std::vector<Clause> cs) {
  auto rank = [](const Clause& c) { return c.verdict == Verdict::holds ? 0 : c.verdict == Verdict::undecided ? 1 : 2; };
  return *std::min_element(cs.begin(), cs.end(), [&](const Clause& x, const Clause& y) {
    if (rank(x) != rank(y)) return rank(x) < rank(y);
    return relative_margin(x) > relative_margin(y);
  });
}

}  // namespace detail

// Cases H1, H2, Z1, Z2, T1, T2 comparing limits of f against mu(L), mu(L~)
// and radius envelopes against m_S, M_S.
inline MenuResult eigen_menu(const Analysis& an, const std::vector<double>& rhos_in,
                             const std::set<std::string>& cases = {}) {
  an.require_positive_measures();
  MenuResult out;
  std::vector<double> rhos = rhos_in;
  if (rhos.empty()) {
    rhos = detail::heuristic_radii();
    out.notes.push_back("no radii given: rho taken from a heuristic log-spaced scan");
  }
  const SpectralEstimate& sL = an.mu(OperatorKind::L);
  const SpectralEstimate& sLt = an.mu(OperatorKind::Ltilde);
  const double muL = sL.mu, muLt = sLt.mu;
  const double mS = an.m_S(), MS = an.M_S(), c = an.cone_c();

  std::map<Limit, LimitValue> lim;
  for (Limit l : {Limit::sup_zero, Limit::inf_zero, Limit::sup_inf, Limit::inf_inf}) {
    lim[l] = limit_value(an, l);
    if (lim[l].warning) out.notes.push_back("warning: " + *lim[l].warning);
  }
  auto f0_lt_muL = [&] { return detail::limit_clause("f^0 < mu(L)", lim[Limit::sup_zero], "<", muL, sL.refinement_gap); };
  auto finf_lt_muL = [&] { return detail::limit_clause("f^inf < mu(L)", lim[Limit::sup_inf], "<", muL, sL.refinement_gap); };
  auto muLt_lt_f0 = [&] {
    return detail::limit_clause("mu(L~) < f_0", lim[Limit::inf_zero], "<", muLt, sLt.refinement_gap, false);
  };
  auto muLt_lt_finf = [&] {
    return detail::limit_clause("mu(L~) < f_inf", lim[Limit::inf_inf], "<", muLt, sLt.refinement_gap, false);
  };

  std::map<double, EnvelopeValue> sup_memo, inf_memo;
  auto sup_clause = [&](double rho) {
    if (!sup_memo.count(rho)) sup_memo[rho] = envelope_sup(an, rho);
    const auto& e = sup_memo[rho];
    auto cl = compare("f^{-rho,rho} < m_S (rho=" + std::to_string(rho) + ")", e.value, "<", mS, e.budget, e.sampled);
    return cl;
  };
  auto inf_clause = [&](double rho) {
    if (!inf_memo.count(rho)) inf_memo[rho] = envelope_inf(an, rho);
    const auto& e = inf_memo[rho];
    return compare("f_{rho,rho/c} > M_S (rho=" + std::to_string(rho) + ")", e.value, ">", MS, e.budget, e.sampled);
  };
  auto some_rho = [&](auto make) {
    std::vector<Clause> cs;
    for (double r : rhos) cs.push_back(make(r));
    return detail::best_of(cs);
  };
  // Best admissible pair (first clause at r1, second at r2) under `ok(r1, r2)`.
  auto some_pair = [&](auto first, auto second, auto ok) -> std::vector<Clause> {
    std::vector<Clause> best;
    int best_rank = 3;
    double best_margin = -kInf;
    for (double r1 : rhos)
      for (double r2 : rhos) {
        if (!ok(r1, r2)) continue;
        Clause a = first(r1), b = second(r2);
        auto rk = [](const Clause& x) { return x.verdict == Verdict::holds ? 0 : x.verdict == Verdict::undecided ? 1 : 2; };
        const int rank = std::max(rk(a), rk(b));
        const double margin = std::min(detail::relative_margin(a), detail::relative_margin(b));
        if (rank < best_rank || (rank == best_rank && margin > best_margin)) {
          best = {a, b};
          best_rank = rank;
          best_margin = margin;
        }
      }
    return best;
  };

  auto want = [&](const char* id) { return cases.empty() || cases.count(id); };
  auto add = [&](const char* id, std::vector<Clause> cl, int sols, const std::string& note = "") {
    CriterionReport rep = detail::finish(id, std::move(cl));
    rep.inputs = {{"mu_L", muL}, {"mu_Ltilde", muLt}, {"m_S", mS}, {"M_S", MS}, {"c", c}};
    rep.inputs["solutions"] = sols;
    if (!note.empty()) rep.notes.push_back(note);
    if (rep.clauses.empty()) rep.verdict = Verdict::fails;  // no admissible radii
    for (const Clause& x : rep.clauses)
      if (x.sampled) {
        rep.notes.push_back("contains sampled quantities, non-rigorous");
        break;
      }
    if (rep.verdict == Verdict::holds && sols > out.solutions) {
      out.solutions = sols;
      out.strongest = id;
    }
    out.reports.push_back(std::move(rep));
  };

  if (want("H1")) add("H1", {f0_lt_muL(), muLt_lt_finf()}, 1);
  if (want("H2")) add("H2", {finf_lt_muL(), muLt_lt_f0()}, 1);
  if (want("Z1")) add("Z1", {f0_lt_muL(), some_rho(inf_clause), finf_lt_muL()}, 2);
  if (want("Z2")) add("Z2", {muLt_lt_f0(), some_rho(sup_clause), muLt_lt_finf()}, 2);
  if (want("T1")) {
    auto pair = some_pair(sup_clause, inf_clause, [](double r1, double r2) { return r1 < r2; });
    if (pair.empty()) add("T1", {}, 3, "no radius pair with rho1 < rho2");
    else add("T1", {muLt_lt_f0(), pair[0], pair[1], finf_lt_muL()}, 3);
  }
  if (want("T2")) {
    auto pair = some_pair(inf_clause, sup_clause, [&](double r1, double r2) { return r1 < c * r2; });
    if (pair.empty()) add("T2", {}, 3, "no radius pair with rho1 < c rho2");
    else add("T2", {f0_lt_muL(), pair[0], pair[1], muLt_lt_finf()}, 3);
  }
  return out;
}

// mu(L+) < f~_0 - c~ f^0, which gives index 0 on small K_rho.
inline CriterionReport lplus_condition(const Analysis& an) {
  an.require_positive_measures();
  const Asymptotics& as = an.spec().f.asymptotics;
  if (!as.f_tilde_zero || !as.f_sup_zero)
    throw EnvelopeUnavailable("the L+ condition needs declared f~_0 and f^0");
  if (!std::isfinite(*as.f_tilde_zero) || !std::isfinite(*as.f_sup_zero))
    throw EnvelopeUnavailable("the L+ condition requires finite f~_0 and f^0");
  const SpectralEstimate& sp = an.mu(OperatorKind::Lplus);
  const double ct = an.c_tilde();
  const double rhs = *as.f_tilde_zero - ct * *as.f_sup_zero;
  auto r = detail::finish("LPLUS", {compare("mu(L+) < f~_0 - c~ f^0", sp.mu, "<", rhs, sp.refinement_gap)});
  r.inputs = {{"mu_Lplus", sp.mu}, {"c_tilde", ct}, {"f_tilde_zero", *as.f_tilde_zero}, {"f_sup_zero", *as.f_sup_zero}};
  if (an.spec().a == 0.0 && an.spec().b == 1.0)
    r.notes.push_back("[a,b] = [0,1]: L = L+ = L~ and the condition reads mu(L) < f~_0");
  return r;
}

namespace detail {

// Extremum of f(t,u)/|u| over t and a log-spaced |u| grid on [1e-6, 1e6].
struct RatioScan {
  double value;
  double budget;
};

inline RatioScan ratio_scan(const Analysis& an, double t0, double t1, bool both_signs, bool want_max) {
  const Nonlinearity& f = an.spec().f;
  const auto ts = f.depends_on_t ? linspace(t0, t1, kEnvelopeGrid) : std::vector<double>{0.5 * (t0 + t1)};
  std::vector<double> mags(kEnvelopeGrid);
  for (std::size_t j = 0; j < mags.size(); ++j)
    mags[j] = std::pow(10.0, -6.0 + 12.0 * static_cast<double>(j) / (kEnvelopeGrid - 1));
  std::vector<double> signs = both_signs ? std::vector<double>{1.0, -1.0} : std::vector<double>{1.0};
  double best = want_max ? -kInf : kInf, jump = 0.0;
  for (double sg : signs)
    for (double t : ts) {
      double prev = NAN;
      for (double m : mags) {
        double v = f(t, sg * m) / m;
        if (std::isnan(v)) v = kInf;
        const bool better = want_max ? v > best : v < best;
        if (better) {
          best = v;
          jump = std::isfinite(prev) && std::isfinite(v) ? std::abs(v - prev) : 0.0;
        }
        prev = v;
      }
    }
  return {best, 10.0 * jump};
}

}  // namespace detail

// Nonexistence certificates: (1) f(t,u) < m_S |u| on [0,1] x (R \ {0}),
// (2) f(t,u) > M_S u on [a,b] x (0, inf). Both are sampled on |u| in
// [1e-6, 1e6]; declared limits at 0 and infinity are checked as well.
inline std::vector<CriterionReport> nonexistence(const Analysis& an) {
  const auto& sp = an.spec();
  const double mS = an.m_S(), MS = an.M_S();
  std::vector<CriterionReport> out;
  const Asymptotics& as = sp.f.asymptotics;
  {
    const auto scan = detail::ratio_scan(an, 0.0, 1.0, true, true);
    std::vector<Clause> cl{compare("sup f/|u| < m_S", scan.value, "<", mS, scan.budget, true)};
    if (as.f_sup_zero) cl.push_back(compare("f^0 <= m_S", *as.f_sup_zero, "<", mS * (1 + 1e-12) + 1e-300));
    if (as.f_sup_inf) cl.push_back(compare("f^inf <= m_S", *as.f_sup_inf, "<", mS * (1 + 1e-12) + 1e-300));
    auto r = detail::finish("NOEXT1", cl);
    r.inputs = {{"m_S", mS}};
    r.notes.push_back("sampled over |u| in [1e-6, 1e6], non-rigorous");
    out.push_back(std::move(r));
  }
  {
    const auto scan = detail::ratio_scan(an, sp.a, sp.b, false, false);
    std::vector<Clause> cl{compare("inf f/u > M_S", scan.value, ">", MS, scan.budget, true)};
    if (as.f_inf_zero) cl.push_back(compare("f_0 >= M_S", *as.f_inf_zero, ">", MS * (1 - 1e-12)));
    if (as.f_inf_inf) cl.push_back(compare("f_inf >= M_S", *as.f_inf_inf, ">", MS * (1 - 1e-12)));
    auto r = detail::finish("NOEXT2", cl);
    r.inputs = {{"M_S", MS}};
    r.notes.push_back("sampled over u in [1e-6, 1e6], non-rigorous");
    out.push_back(std::move(r));
  }
  return out;
}

// -------------------------------------------------------- bump thresholds
//
// For f(t,u) = tau1 h(t) u^2 exp(-tau2 |u|) with h >= h_inf on [a,b], the
// envelope f_{rho,rho/c} exceeds M at rho = 2 c ln c / (tau2 (c-1)) exactly
// when tau1/tau2 exceeds the threshold below.

inline double bump_ratio_threshold(double c, double M, double h_inf = 0.5) {
  return M / (2.0 * h_inf) * (c - 1.0) / std::log(c) * std::pow(c, (c + 1.0) / (c - 1.0));
}

// The published closed form for the same threshold. It is off by the factor
// c^(1/(c-1))/2 and is kept only to reproduce the published number.
inline double bump_ratio_threshold_published(double c, double M) {
  return 2.0 * (c - 1.0) / std::log(c) * std::pow(c, c / (c - 1.0)) * M;
}

}  // namespace hkit
