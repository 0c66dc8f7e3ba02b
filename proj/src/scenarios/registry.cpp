#include "common.hpp"

#include <cstdlib>

namespace qmo {

namespace detail {
void collision_trash_prepare(const json& p, ScenarioReport& r);
void unitary_blocking(const json& p, ScenarioReport& r);
void ic_causal_break(const json& p, ScenarioReport& r);
void pauli_superposition(const json& p, ScenarioReport& r);
void werner(const json& p, ScenarioReport& r);
void classical_fuzzy(const json& p, ScenarioReport& r);
}  // namespace detail

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> reg{
      {"collision_trash_prepare",
       "nested collision model: trash-and-prepare blocks the history, measure-and-prepare does not",
       {{"ell", 3}, {"n", 0}, {"seed", 7}, {"draws", 5}, {"histories", 5}},
       detail::collision_trash_prepare},
      {"unitary_blocking",
       "history blocked only by the correct unitary sequence",
       {{"ell", 1}, {"seed", 7}, {"tau", "mixed"}, {"identity_v", false}},
       detail::unitary_blocking},
      {"ic_causal_break",
       "finite Markov order for an informationally complete causal-break sequence",
       {{"seed", 11}, {"p", 0.5}},
       detail::ic_causal_break},
      {"pauli_superposition",
       "coherent superposition of Pauli chains; QCMI equals the Shannon entropy of the weights",
       {{"alpha", 0.5}, {"beta", 0.5}, {"gamma", 0.5}, {"delta", 0.5}, {"n", 3}},
       detail::pauli_superposition},
      {"werner",
       "fuzzy projectors block the history while the QCMI stays positive",
       {{"q", 0.5}, {"r", 0.3}, {"seed", 7}},
       detail::werner},
      {"classical_fuzzy",
       "coarse-grained classical processes and their diagonal embeddings",
       {{"p", 0.4}, {"n", 6}, {"coin_p", 0.8}},
       detail::classical_fuzzy},
  };
  return reg;
}

const ScenarioInfo& find_scenario(const std::string& id) {
  for (const auto& s : scenario_registry())
    if (s.id == id) return s;
  throw UnknownScenario("unknown scenario: " + id);
}

namespace {

json coerce(const std::string& key, const json& def, const json& value) {
  if (!value.is_string() || def.is_string()) {
    if (def.is_boolean() != value.is_boolean() || def.is_number() != value.is_number() ||
        def.is_string() != value.is_string())
      throw InvalidArgument("parameter " + key + ": wrong type");
    if (def.is_number_integer() && value.is_number_float()) {
      const double v = value.get<double>();
      if (v != static_cast<double>(static_cast<long long>(v))) throw InvalidArgument("parameter " + key + ": integer expected");
      return static_cast<long long>(v);
    }
    return value;
  }
  const std::string s = value.get<std::string>();
  if (def.is_boolean()) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw InvalidArgument("parameter " + key + ": boolean expected, got " + s);
  }
  char* end = nullptr;
  if (def.is_number_integer()) {
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') throw InvalidArgument("parameter " + key + ": integer expected, got " + s);
    return v;
  }
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw InvalidArgument("parameter " + key + ": number expected, got " + s);
  return v;
}

}  // namespace

json resolve_params(const ScenarioInfo& info, const json& overrides) {
  json out = info.defaults;
  if (overrides.is_null()) return out;
  if (!overrides.is_object()) throw InvalidArgument("parameters must be an object");
  for (const auto& [key, value] : overrides.items()) {
    if (!info.defaults.contains(key)) throw InvalidArgument("scenario " + info.id + " has no parameter " + key);
    out[key] = coerce(key, info.defaults.at(key), value);
  }
  return out;
}

ScenarioReport run_scenario(const std::string& id, const json& overrides,
                            const std::map<std::string, double>& tolerance_overrides) {
  const ScenarioInfo& info = find_scenario(id);
  ScenarioReport r;
  r.scenario = id;
  r.params = resolve_params(info, overrides);
  r.overrides = tolerance_overrides;
  for (const auto& [name, tol] : tolerance_overrides)
    if (!(tol > 0)) throw InvalidArgument("tolerance for " + name + " must be positive");
  info.run(r.params, r);
  return r;
}

ScenarioReport run_collision_trash_prepare(int ell, int n, std::uint64_t seed) {
  return run_scenario("collision_trash_prepare", {{"ell", ell}, {"n", n}, {"seed", seed}});
}

ScenarioReport run_unitary_blocking(int ell, std::uint64_t seed) {
  return run_scenario("unitary_blocking", {{"ell", ell}, {"seed", seed}});
}

ScenarioReport run_ic_causal_break(std::uint64_t seed, double coarse_p) {
  return run_scenario("ic_causal_break", {{"seed", seed}, {"p", coarse_p}});
}

ScenarioReport run_pauli_superposition(double alpha, double beta, double gamma, double delta, int n) {
  return run_scenario("pauli_superposition",
                      {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"delta", delta}, {"n", n}});
}

ScenarioReport run_werner_fuzzy(double q, double r, std::uint64_t seed) {
  return run_scenario("werner", {{"q", q}, {"r", r}, {"seed", seed}});
}

ScenarioReport run_classical_fuzzy(double p) { return run_scenario("classical_fuzzy", {{"p", p}}); }

}  // namespace qmo
