#pragma once

// Commands behind the hammerstein-kit executable. Each returns its exit code,
// the JSON report and the human-readable text; nothing here touches argv.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hkit/criteria.hpp"
#include "hkit/golden.hpp"
#include "hkit/report.hpp"
#include "hkit/scenarios.hpp"
#include "hkit/solver.hpp"
#include "hkit/spec_file.hpp"

namespace hkit::cli {

enum ExitCode { kOk = 0, kUndecided = 1, kConditionError = 2, kGoldenMismatch = 3 };

struct Options {
  std::optional<std::size_t> nodes;
  std::optional<double> tol;
  std::optional<std::vector<double>> rhos;
  std::optional<std::string> menu;
  std::optional<std::string> mode;
  std::optional<int> starts;
  std::map<std::string, double> params;
};

struct CommandResult {
  int exit_code = kOk;
  json report;
  std::string text;
};

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(Expression::parse(item, {})());
  }
  return out;
}

// A problem file path, or the name of a bundled scenario when no such file
// exists.
inline ProblemSpec load(const std::string& target, const Options& o) {
  ProblemSpec ps;
  if (!std::filesystem::exists(target) && scenarios::all().count(target))
    ps = parse_problem(std::string(scenarios::by_name(target)), o.params);
  else
    ps = load_problem(target, o.params);
  if (o.nodes) {
    if (*o.nodes < 16) throw DomainError("--nodes must be at least 16");
    ps.solver.nodes = *o.nodes;
  }
  if (o.tol) ps.solver.tol = *o.tol;
  if (o.rhos) ps.check.rhos = *o.rhos;
  if (o.menu) ps.check.menu = *o.menu;
  if (o.mode) ps.check.mode = *o.mode;
  if (o.starts) ps.solver.starts = *o.starts;
  return ps;
}

// ---------------------------------------------------------------- constants

inline CommandResult cmd_constants(const ProblemSpec& ps) {
  Analysis an(ps);
  CommandResult r;
  r.report = envelope("constants", ps.name);
  std::ostringstream os;
  const auto& g = an.greens();
  const auto& s = an.scalars();
  auto row = [&](const std::string& name, double v) {
    os << "  " << name << std::string(name.size() < 14 ? 14 - name.size() : 1, ' ') << fmt(v) << "\n";
    r.report["constants"][name] = num(v);
  };
  os << ps.name << ": epsilon = " << to_int(ps.epsilon) << ", omega = " << fmt(ps.omega) << ", [a,b] = ["
     << fmt(ps.a) << ", " << fmt(ps.b) << "], g = " << ps.g.name() << "\n";
  const std::string sign =
      ps.epsilon == Shift::minus ? "PositiveEverywhere" : to_string(classify_sign(ps.omega).tag);
  os << "  kernel sign   " << sign << "\n";
  r.report["kernel_sign"] = sign;
  row("c(a,b)", g.c_ab);
  row("m", g.m);
  row("M(a,b)", g.M_ab);
  row("alpha[gamma]", s.alpha_gamma);
  row("alpha[delta]", s.alpha_delta);
  row("beta[gamma]", s.beta_gamma);
  row("beta[delta]", s.beta_delta);
  row("D", s.D);
  row("c2", s.c2);
  row("c3", s.c3);
  row("c", an.cone_c());
  row("m_S", an.m_S());
  row("M_S", an.M_S());
  r.report["notes"] = json::array();
  try {
    row("c~", an.c_tilde());
  } catch (const DivisionByZeroRegion& e) {
    os << "  c~            undefined (" << e.what() << ")\n";
    r.report["notes"].push_back(std::string("c~ undefined: ") + e.what());
  }
  if (ps.boundary.alpha.is_positive() && ps.boundary.beta.is_positive()) {
    for (OperatorKind k : {OperatorKind::L, OperatorKind::Ltilde, OperatorKind::Lplus}) {
      const auto& est = an.mu(k);
      row("mu(" + to_string(k) + ")", est.mu);
      r.report["refinement_gap"][to_string(k)] = num(est.refinement_gap);
    }
  } else {
    os << "  mu(.)         not computed: alpha and beta are not positive measures\n";
    r.report["notes"].push_back("principal characteristic values need positive measures");
  }
  r.text = os.str();
  return r;
}

// -------------------------------------------------------------------- check

namespace detail {

inline void print_report(std::ostream& os, const CriterionReport& rep) {
  os << "  " << rep.condition_id << std::string(rep.condition_id.size() < 8 ? 8 - rep.condition_id.size() : 1, ' ')
     << to_string(rep.verdict);
  if (!rep.clauses.empty()) os << "   " << fmt(rep.lhs) << " " << rep.relation << " " << fmt(rep.rhs);
  os << "\n";
  if (rep.clauses.size() > 1)
    for (const auto& c : rep.clauses)
      os << "      " << to_string(c.verdict) << "  " << c.name << ": " << fmt(c.lhs) << " " << c.relation << " "
         << fmt(c.rhs) << "\n";
  for (const auto& n : rep.notes) os << "      note: " << n << "\n";
}

struct MenuRequest {
  bool all = false;
  std::set<std::string> s_cases, e_cases;
  bool s_any = false, e_any = false, noext = false, lplus = false, index = false;
};

inline MenuRequest parse_menu(const std::string& menu) {
  MenuRequest m;
  std::stringstream ss(menu);
  std::string tok;
  const std::set<std::string> s_ids = {"S1", "S2", "S3", "S4", "S5", "S6"};
  const std::set<std::string> e_ids = {"H1", "H2", "Z1", "Z2", "T1", "T2"};
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok == "all") m.all = true;
    else if (tok == "S") m.s_any = true;
    else if (s_ids.count(tok)) m.s_cases.insert(tok);
    else if (tok == "H" || tok == "Z" || tok == "T") {
      for (const auto& id : e_ids)
        if (id[0] == tok[0]) m.e_cases.insert(id);
    } else if (tok == "eigen") m.e_any = true;
    else if (e_ids.count(tok)) m.e_cases.insert(tok);
    else if (tok == "noext") m.noext = true;
    else if (tok == "lplus") m.lplus = true;
    else if (tok == "index") m.index = true;
    else throw DomainError("unknown menu entry '" + tok + "' (use S, S1..S6, H, Z, T, eigen, noext, lplus, index, all)");
  }
  if (m.all) m.s_any = m.e_any = m.noext = m.lplus = m.index = true;
  return m;
}

}  // namespace detail

inline CommandResult cmd_check(const ProblemSpec& ps) {
  Analysis an(ps);
  const auto req = detail::parse_menu(ps.check.menu);
  const IndexMode mode = index_mode_from_string(ps.check.mode);
  const auto& rhos = ps.check.rhos;
  CommandResult r;
  r.report = envelope("check", ps.name);
  r.report["menu"] = ps.check.menu;
  r.report["mode"] = ps.check.mode;
  r.report["rhos"] = num_array(rhos);
  r.report["reports"] = json::array();
  r.report["notes"] = json::array();
  std::ostringstream os;
  os << ps.name << ": c = " << fmt(an.cone_c()) << ", m_S = " << fmt(an.m_S()) << ", M_S = " << fmt(an.M_S())
     << ", D = " << fmt(an.scalars().D) << "\n";
  std::vector<CriterionReport> all;

  // Under "all" a part that does not apply becomes a note instead of an error.
  auto soft = [&](const char* what, auto&& body) {
    if (!req.all) return body();
    try {
      body();
    } catch (const Error& e) {
      const std::string note = std::string(what) + " skipped: " + e.what();
      os << "  " << note << "\n";
      r.report["notes"].push_back(note);
    }
  };
  auto add_menu = [&](const char* key, const MenuResult& m) {
    r.report[key] = m;
    for (const auto& rep : m.reports) {
      detail::print_report(os, rep);
      all.push_back(rep);
    }
    for (const auto& n : m.notes) os << "  note: " << n << "\n";
    if (!m.strongest.empty())
      os << "  strongest: " << m.strongest << " (at least " << m.solutions << " nontrivial solution"
         << (m.solutions > 1 ? "s" : "") << " in K)\n";
  };

  if (req.index) {
    soft("index conditions", [&] {
      for (double rho : rhos)
        for (const CriterionReport& rep : {index_one(an, rho, mode), index_zero(an, rho, mode)}) {
          detail::print_report(os, rep);
          r.report["reports"].push_back(rep);
          all.push_back(rep);
        }
    });
  }
  if (req.s_any || !req.s_cases.empty()) {
    soft("multiplicity menu", [&] {
      add_menu("multiplicity", multiplicity_menu(an, rhos, req.s_any ? std::set<std::string>{} : req.s_cases, mode));
    });
  }
  if (req.e_any || !req.e_cases.empty()) {
    soft("eigenvalue menu", [&] {
      add_menu("eigen", eigen_menu(an, rhos, req.e_any ? std::set<std::string>{} : req.e_cases));
    });
  }
  if (req.lplus) {
    soft("L+ condition", [&] {
      const auto rep = lplus_condition(an);
      detail::print_report(os, rep);
      r.report["reports"].push_back(rep);
      all.push_back(rep);
    });
  }
  if (req.noext) {
    soft("nonexistence", [&] {
      for (const auto& rep : nonexistence(an)) {
        detail::print_report(os, rep);
        r.report["reports"].push_back(rep);
        all.push_back(rep);
      }
    });
  }
  for (const auto& rep : all)
    if (rep.verdict == Verdict::undecided) r.exit_code = kUndecided;
  r.text = os.str();
  return r;
}

// -------------------------------------------------------------------- solve

inline CommandResult cmd_solve(const ProblemSpec& ps) {
  Analysis an(ps);
  HammersteinSystem sys(an);
  const auto runs = solve(sys);
  const DiscreteSolution& best = best_solution(runs);
  CommandResult r;
  r.report = envelope("solve", ps.name);
  r.report["solution"] = best;
  r.report["runs"] = json::array();
  int found = 0;
  for (const auto& s : runs) {
    found += s.nontrivial_in_cone() ? 1 : 0;
    r.report["runs"].push_back({{"status", to_string(s.status)},
                                {"residual", num(s.residual)},
                                {"iterations", s.iterations},
                                {"band", {num(s.band_lo), num(s.band_hi)}},
                                {"nontrivial_in_cone", s.nontrivial_in_cone()}});
  }
  r.report["nontrivial_in_cone"] = found;
  std::ostringstream os;
  os << ps.name << ": " << sys.size() << " nodes, " << runs.size() << " start" << (runs.size() > 1 ? "s" : "")
     << "\n";
  os << "  status        " << to_string(best.status) << " after " << best.iterations << " iterations\n";
  os << "  residual      " << fmt(best.residual) << "\n";
  if (best.status != SolveStatus::diverged) {
    os << "  band          [" << fmt(best.band_lo) << ", " << fmt(best.band_hi) << "]\n";
    os << "  norm          " << fmt(best.cone_check.norm) << "\n";
    os << "  in cone       " << (best.cone_check.in_cone ? "yes" : "no") << " (c = " << fmt(best.cone_check.c_used)
       << ", min over [a,b] = " << fmt(best.cone_check.min_ab) << ")\n";
    os << "  alpha[u]      " << fmt(best.cone_check.alpha_u) << "\n";
    os << "  beta[u]       " << fmt(best.cone_check.beta_u) << "\n";
  }
  if (runs.size() > 1) {
    if (found == 0) os << "  no nontrivial cone fixed point found from " << runs.size() << " starts\n";
    else os << "  " << found << " of " << runs.size() << " starts reached a nontrivial cone fixed point\n";
  }
  r.text = os.str();
  return r;
}

// ------------------------------------------------------------------ example

inline CommandResult cmd_example(int n) {
  const ExampleRun run = run_example(n);
  CommandResult r;
  r.report = envelope("example", "example" + std::to_string(n));
  r.report["checks"] = json::array();
  std::ostringstream os;
  os << "example " << n << "\n";
  std::vector<std::string> failed;
  for (const auto& c : run.checks) {
    os << "  " << (c.ok ? "ok        " : "MISMATCH  ") << c.quantity << ": " << fmt(c.computed) << " "
       << c.relation << " " << fmt(c.pinned) << "\n";
    r.report["checks"].push_back({{"quantity", c.quantity},
                                  {"computed", num(c.computed)},
                                  {"relation", c.relation},
                                  {"pinned", num(c.pinned)},
                                  {"tol", num(c.tol)},
                                  {"ok", c.ok}});
    if (!c.ok) failed.push_back(c.quantity);
  }
  for (const auto& note : run.notes) os << "  " << note << "\n";
  r.report["notes"] = run.notes;
  if (!failed.empty()) {
    std::string list;
    for (const auto& q : failed) list += (list.empty() ? "" : ", ") + q;
    os << "GoldenMismatch: " << list << "\n";
    r.report["golden_mismatch"] = failed;
    r.exit_code = kGoldenMismatch;
  }
  r.text = os.str();
  return r;
}

// ----------------------------------------------------------------- dispatch

inline std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const ConditionViolation*>(&e)) return "ConditionViolation";
  if (dynamic_cast<const StripViolation*>(&e)) return "StripViolation";
  if (dynamic_cast<const NonpositiveInfimum*>(&e)) return "NonpositiveInfimum";
  if (dynamic_cast<const DivisionByZeroRegion*>(&e)) return "DivisionByZeroRegion";
  if (dynamic_cast<const EnvelopeUnavailable*>(&e)) return "EnvelopeUnavailable";
  if (dynamic_cast<const PositivityRequired*>(&e)) return "PositivityRequired";
  if (dynamic_cast<const OrderingViolation*>(&e)) return "OrderingViolation";
  if (dynamic_cast<const SingularMatrix*>(&e)) return "SingularMatrix";
  if (dynamic_cast<const QuadratureFailure*>(&e)) return "QuadratureFailure";
  if (dynamic_cast<const RootFindFailure*>(&e)) return "RootFindFailure";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  return "Error";
}

// Runs one command; library errors map to exit code 2 with an error report.
inline CommandResult run_command(const std::string& command, const std::string& target, const Options& o) {
  try {
    if (command == "example") {
      const auto n = std::stoi(target);
      return cmd_example(n);
    }
    const ProblemSpec ps = load(target, o);
    if (command == "constants") return cmd_constants(ps);
    if (command == "check") return cmd_check(ps);
    if (command == "solve") return cmd_solve(ps);
    throw DomainError("unknown command '" + command + "'");
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = kConditionError;
    r.report = envelope(command, target);
    r.report["error"] = {{"type", error_kind(e)}, {"message", e.what()}};
    if (const auto* cv = dynamic_cast<const ConditionViolation*>(&e)) r.report["error"]["condition"] = cv->condition();
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
      r.report["error"]["line"] = pe->line();
      r.report["error"]["column"] = pe->column();
    }
    r.text = error_kind(e) + ": " + e.what() + "\n";
    return r;
  } catch (const std::invalid_argument&) {
    CommandResult r;
    r.exit_code = kConditionError;
    r.report = envelope(command, target);
    r.report["error"] = {{"type", "ParseError"}, {"message", "expected an example number, got '" + target + "'"}};
    r.text = "ParseError: expected an example number, got '" + target + "'\n";
    return r;
  }
}

}  // namespace hkit::cli
