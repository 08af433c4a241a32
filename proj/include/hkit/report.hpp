#pragma once

// JSON serialisation of reports. Non-finite numbers are written as the
// strings "inf", "-inf" and "nan" so every document is strict JSON.

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "hkit/criteria.hpp"
#include "hkit/solver.hpp"

namespace hkit {

using json = nlohmann::json;

constexpr int kReportSchema = 1;

inline json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double get_num(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw DomainError("not a number: '" + s + "'");
  }
  return j.get<double>();
}

inline json num_map(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = num(v);
  return j;
}

inline std::map<std::string, double> get_num_map(const json& j) {
  std::map<std::string, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = get_num(it.value());
  return m;
}

inline void to_json(json& j, const Clause& c) {
  j = json{{"name", c.name},     {"lhs", num(c.lhs)},         {"relation", c.relation}, {"rhs", num(c.rhs)},
           {"budget", num(c.budget)}, {"sampled", c.sampled}, {"verdict", to_string(c.verdict)}};
}

inline void from_json(const json& j, Clause& c) {
  c.name = j.at("name").get<std::string>();
  c.lhs = get_num(j.at("lhs"));
  c.relation = j.at("relation").get<std::string>();
  c.rhs = get_num(j.at("rhs"));
  c.budget = get_num(j.at("budget"));
  c.sampled = j.at("sampled").get<bool>();
  c.verdict = verdict_from_string(j.at("verdict").get<std::string>());
}

inline void to_json(json& j, const CriterionReport& r) {
  j = json{{"condition_id", r.condition_id},
           {"verdict", to_string(r.verdict)},
           {"lhs", num(r.lhs)},
           {"relation", r.relation},
           {"rhs", num(r.rhs)},
           {"clauses", r.clauses},
           {"inputs", num_map(r.inputs)},
           {"notes", r.notes}};
}

inline void from_json(const json& j, CriterionReport& r) {
  r.condition_id = j.at("condition_id").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.lhs = get_num(j.at("lhs"));
  r.relation = j.at("relation").get<std::string>();
  r.rhs = get_num(j.at("rhs"));
  r.clauses = j.at("clauses").get<std::vector<Clause>>();
  r.inputs = get_num_map(j.at("inputs"));
  r.notes = j.at("notes").get<std::vector<std::string>>();
}

inline void to_json(json& j, const MenuResult& m) {
  j = json{{"reports", m.reports}, {"strongest", m.strongest}, {"solutions", m.solutions}, {"notes", m.notes}};
}

inline void from_json(const json& j, MenuResult& m) {
  m.reports = j.at("reports").get<std::vector<CriterionReport>>();
  m.strongest = j.at("strongest").get<std::string>();
  m.solutions = j.at("solutions").get<int>();
  m.notes = j.at("notes").get<std::vector<std::string>>();
}

inline void to_json(json& j, const ConeCheck& c) {
  j = json{{"in_cone", c.in_cone},
           {"c_used", num(c.c_used)},
           {"min_ab", num(c.min_ab)},
           {"norm", num(c.norm)},
           {"alpha_u", num(c.alpha_u)},
           {"beta_u", num(c.beta_u)},
           {"functional_signs", {c.alpha_nonneg, c.beta_nonneg}}};
}

inline void from_json(const json& j, ConeCheck& c) {
  c.in_cone = j.at("in_cone").get<bool>();
  c.c_used = get_num(j.at("c_used"));
  c.min_ab = get_num(j.at("min_ab"));
  c.norm = get_num(j.at("norm"));
  c.alpha_u = get_num(j.at("alpha_u"));
  c.beta_u = get_num(j.at("beta_u"));
  c.alpha_nonneg = j.at("functional_signs").at(0).get<bool>();
  c.beta_nonneg = j.at("functional_signs").at(1).get<bool>();
}

inline json num_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline std::vector<double> get_num_array(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(get_num(x));
  return v;
}

inline void to_json(json& j, const DiscreteSolution& s) {
  j = json{{"status", to_string(s.status)},
           {"residual", num(s.residual)},
           {"iterations", s.iterations},
           {"band", {num(s.band_lo), num(s.band_hi)}},
           {"cone_check", s.cone_check},
           {"nodes", num_array(s.nodes)},
           {"values", num_array(s.values)}};
}

inline void from_json(const json& j, DiscreteSolution& s) {
  s.status = solve_status_from_string(j.at("status").get<std::string>());
  s.residual = get_num(j.at("residual"));
  s.iterations = j.at("iterations").get<int>();
  s.band_lo = get_num(j.at("band").at(0));
  s.band_hi = get_num(j.at("band").at(1));
  s.cone_check = j.at("cone_check").get<ConeCheck>();
  s.nodes = get_num_array(j.at("nodes"));
  s.values = get_num_array(j.at("values"));
}

inline json envelope(const std::string& command, const std::string& problem) {
  return json{{"schema", kReportSchema}, {"command", command}, {"problem", problem}};
}

}  // namespace hkit
