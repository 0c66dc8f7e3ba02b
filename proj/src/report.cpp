#include "qmo/report.hpp"

#include <cmath>
#include <sstream>

namespace qmo {

std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::equal:
      return "equal";
    case CheckKind::upper_bound:
      return "upper_bound";
    case CheckKind::lower_bound:
      return "lower_bound";
    case CheckKind::boolean:
      return "boolean";
    case CheckKind::expected_failure:
      return "expected_failure";
  }
  return "?";
}

namespace {

// NaN and infinities have no JSON form; they become null and fail the check.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Check& ScenarioReport::equal(const std::string& name, double expected, double actual, double tol) {
  if (auto it = overrides.find(name); it != overrides.end()) tol = it->second;
  checks.push_back({name, CheckKind::equal, number(expected), number(actual), tol,
                    std::isfinite(actual) && std::abs(expected - actual) <= tol, ""});
  return checks.back();
}

Check& ScenarioReport::upper_bound(const std::string& name, double actual, double bound) {
  if (auto it = overrides.find(name); it != overrides.end()) bound = it->second;
  checks.push_back({name, CheckKind::upper_bound, number(bound), number(actual), 0.0, actual < bound, ""});
  return checks.back();
}

Check& ScenarioReport::lower_bound(const std::string& name, double actual, double bound) {
  if (auto it = overrides.find(name); it != overrides.end()) bound = it->second;
  checks.push_back({name, CheckKind::lower_bound, number(bound), number(actual), 0.0, actual > bound, ""});
  return checks.back();
}

Check& ScenarioReport::boolean(const std::string& name, bool actual, bool expected) {
  checks.push_back({name, CheckKind::boolean, expected, actual, 0.0, actual == expected, ""});
  return checks.back();
}

Check& ScenarioReport::expected_failure(const std::string& name, const std::string& expected_error, bool raised,
                                        const std::string& what) {
  checks.push_back({name, CheckKind::expected_failure, expected_error, raised ? what : "no error", 0.0, raised, ""});
  return checks.back();
}

void ScenarioReport::artifact(const std::string& name, const std::string& kind, json data) {
  artifacts.push_back({name, kind, std::move(data)});
}

bool ScenarioReport::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::vector<const Check*> ScenarioReport::failures() const {
  std::vector<const Check*> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(&c);
  return out;
}

json to_json(const ScenarioReport& r, const std::string& artifact_prefix) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e = {{"name", c.name},     {"kind", to_string(c.kind)}, {"expected", c.expected},
              {"actual", c.actual}, {"tol", c.tol},              {"pass", c.pass}};
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(e);
  }
  json arts = json::array();
  for (const auto& a : r.artifacts)
    arts.push_back({{"name", a.name}, {"kind", a.kind}, {"file", artifact_prefix + a.name + ".json"}});
  return {{"scenario", r.scenario}, {"params", r.params}, {"checks", checks},
          {"artifacts", arts},      {"notes", r.notes},   {"pass", r.passed()}};
}

namespace {

std::string cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v.dump();
}

}  // namespace

std::string to_csv(const ScenarioReport& r) {
  std::ostringstream os;
  os << "scenario,name,kind,expected,actual,tol,pass\n";
  for (const auto& c : r.checks)
    os << r.scenario << "," << cell(c.name) << "," << to_string(c.kind) << "," << cell(c.expected) << ","
       << cell(c.actual) << "," << json(c.tol).dump() << "," << (c.pass ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace qmo
