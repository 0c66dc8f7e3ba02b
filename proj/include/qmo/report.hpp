#pragma once

#include "qmo/io.hpp"

#include <map>
#include <string>
#include <vector>

namespace qmo {

enum class CheckKind { equal, upper_bound, lower_bound, boolean, expected_failure };

std::string to_string(CheckKind k);

// equal:            |expected − actual| ≤ tol
// upper_bound:      actual < expected
// lower_bound:      actual > expected
// boolean:          actual == expected
// expected_failure: the named error was raised (actual holds what happened)
struct Check {
  std::string name;
  CheckKind kind = CheckKind::equal;
  json expected;
  json actual;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

struct Artifact {
  std::string name;
  std::string kind;  // "process_tensor", "table", "instrument_report", ...
  json data;
};

struct ScenarioReport {
  std::string scenario;
  json params = json::object();
  std::vector<Check> checks;
  std::vector<Artifact> artifacts;
  std::vector<std::string> notes;
  // Per-check overrides: tolerance for equal checks, bound for bound checks.
  std::map<std::string, double> overrides;

  Check& equal(const std::string& name, double expected, double actual, double tol);
  Check& upper_bound(const std::string& name, double actual, double bound);
  Check& lower_bound(const std::string& name, double actual, double bound);
  Check& boolean(const std::string& name, bool actual, bool expected = true);
  Check& expected_failure(const std::string& name, const std::string& expected_error, bool raised,
                          const std::string& what);
  void artifact(const std::string& name, const std::string& kind, json data);

  bool passed() const;
  std::vector<const Check*> failures() const;
};

// {scenario, params, checks: [{name, kind, expected, actual, tol, pass, note?}],
//  artifacts: [{name, kind, file}], notes, pass}
json to_json(const ScenarioReport& r, const std::string& artifact_prefix = "");
// name,kind,expected,actual,tol,pass
std::string to_csv(const ScenarioReport& r);

}  // namespace qmo
