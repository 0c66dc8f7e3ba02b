#include <doctest.h>

#include "oracles.hpp"
#include "qmo/markov.hpp"
#include "qmo/scenarios.hpp"

#include <cmath>
#include <functional>

using namespace qmo;

namespace {

double h2(const std::vector<double>& p) {
  double s = 0;
  for (double x : p)
    if (x > 0) s -= x * std::log2(x);
  return s;
}

const Check* find(const ScenarioReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("Pauli superposition QCMI is the Shannon entropy of the weights") {
  const double s = std::sqrt(0.5);
  struct Case {
    std::array<cplx, 4> amps;
    double bits;
  };
  const Case cases[] = {{{1, 0, 0, 0}, 0.0},
                        {{s, 0, 0, s}, 1.0},
                        {{0.5, 0.5, 0.5, 0.5}, 2.0},
                        {{s, 0.5, std::sqrt(0.125), cplx(0, std::sqrt(0.125))}, 1.75}};
  for (const auto& c : cases) {
    const ProcessTensor u = pauli_superposition_process(c.amps, 3);
    CHECK(check_causality(u).pass);
    CHECK(qcmi(u, pauli_superposition_partition(u)) == doctest::Approx(c.bits).epsilon(1e-9));
    const ProcessTensor t = pauli_superposition_process(c.amps, 3, true);
    CHECK(std::abs(qcmi(t, pauli_superposition_partition(t))) < 1e-9);
  }
  // Longer chains keep the same value.
  const ProcessTensor u4 = pauli_superposition_process({s, s, 0, 0}, 4);
  CHECK(qcmi(u4, pauli_superposition_partition(u4)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Werner mutual information against the spectrum") {
  for (double r : {0.0, 0.1, 0.3, 1.0 / 3.0}) {
    // Marginals are maximally mixed; the spectrum is r + (1−r)/4 once and (1−r)/4 three times.
    const double a = r + (1 - r) / 4, b = (1 - r) / 4;
    const double mi = 2.0 - h2({a, b, b, b});
    for (int x = 0; x < 4; ++x) {
      const CMatrix w = werner_state(x, r);
      CHECK(std::abs(w.trace().real() - 1.0) < 1e-14);
      const auto ev = oracle::eigenvalues(w);
      CHECK(h2(ev) == doctest::Approx(h2({a, b, b, b})).epsilon(1e-10));
      CHECK(mutual_information(w, 2, 2) == doctest::Approx(mi).epsilon(1e-10));
    }
  }
  CHECK_NOTHROW(werner_mu(1.0 / 3.0));
  CHECK_THROWS_AS(werner_mu(0.34), NotPsdError);
}

TEST_CASE("Werner QCMI scales with q") {
  const double mu = qcmi(werner_process(1.0, 0.3), werner_partition());
  CHECK(mu == doctest::Approx(0.713603).epsilon(1e-5));
  for (double q : {0.25, 0.5, 0.75}) {
    const ProcessTensor u = werner_process(q, 0.3);
    CHECK(check_causality(u).pass);
    CHECK(std::abs(qcmi(u, werner_partition()) - q * mu) < 1e-9);
    CHECK(std::abs(qcmi(werner_process(q, 1.0 / 3.0), werner_partition()) - q) < 1e-9);
  }
}

TEST_CASE("coarse-grained chain against brute-force enumeration") {
  const double p = 0.4;
  const int n = 6;
  const ClassicalProcess x = three_state_chain(p, n);
  ClassicalProcess y = x;
  for (int k = 1; k <= n; ++k) y = coarse_grain(y, k, {{0}, {1, 2}});
  // P(y_{j+2} = a | y_{j+1} … y_2 = d, y_1 = a), summing the sharp table.
  for (int j = 1; j + 2 <= n; ++j) {
    double num = 0, den = 0;
    for (long i = 0; i < static_cast<long>(x.p.size()); ++i) {
      const auto s = x.outcome(i);
      bool ok = s[0] == 0;
      for (int k = 1; k <= j; ++k) ok = ok && s[k] != 0;
      if (!ok) continue;
      den += x.p[i];
      if (s[j + 1] == 0) num += x.p[i];
    }
    const double expect = num / den;
    CHECK(expect == doctest::Approx(j % 2 ? 0.0 : p));
    std::vector<int> given(j, 1);
    given.push_back(0);
    CHECK(std::abs(classical_conditional(y, j + 2, 0, given) - expect) < 1e-12);
  }
  CHECK(classical_markov_order(x, 1));
  CHECK_FALSE(classical_markov_order(y, 1));
  CHECK_THROWS_AS(three_state_chain(1.0, 3), InvalidArgument);
}

TEST_CASE("parity and coin tables") {
  const StepPartition sp{{3}, {2}, {1}};
  CHECK(classical_cmi(parity_bits(), sp) == doctest::Approx(1.0));
  CHECK(std::abs(classical_cmi(coarse_grain(parity_bits(), 2, {{0, 1}}), sp)) < 1e-12);
  const ClassicalProcess coin = perturbed_coin(0.8, 4);
  CHECK(classical_markov_order(coin, 1));
  CHECK(classical_conditional(coin, 3, 1, {1}) == doctest::Approx(0.8));
}

TEST_CASE("every scenario passes at its defaults except the q claim at r = 0.3") {
  for (const auto& info : scenario_registry()) {
    const ScenarioReport r = run_scenario(info.id);
    CHECK(r.scenario == info.id);
    CHECK_FALSE(r.checks.empty());
    for (const Check* f : r.failures()) {
      INFO(info.id << "/" << f->name);
      CHECK((info.id == "werner" && f->name == "qcmi_equals_q"));
    }
  }
  const ScenarioReport w = run_werner_fuzzy(0.5, 0.3);
  REQUIRE(find(w, "qcmi_equals_q") != nullptr);
  CHECK_FALSE(find(w, "qcmi_equals_q")->pass);
  CHECK(find(w, "qcmi_equals_q_times_mu_cmi")->pass);
}

TEST_CASE("typed scenario entry points") {
  CHECK(run_pauli_superposition(1, 0, 0, 0).passed());
  const ScenarioReport p = run_pauli_superposition(0.5, 0.5, 0.5, 0.5);
  CHECK(find(p, "qcmi_bits")->actual.get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(run_collision_trash_prepare(2, 0, 3).passed());
  CHECK(run_unitary_blocking(1, 5).passed());
  CHECK(run_ic_causal_break(11).passed());
  CHECK(run_classical_fuzzy(0.25).passed());
  // Past the PSD boundary the process cannot be built; that is the expected outcome.
  const ScenarioReport w = run_werner_fuzzy(0.5, 0.34);
  CHECK(w.passed());
  REQUIRE(w.checks.size() == 1);
  CHECK(w.checks[0].kind == CheckKind::expected_failure);
}

TEST_CASE("parameter resolution") {
  const ScenarioInfo& w = find_scenario("werner");
  const json p = resolve_params(w, {{"q", "0.25"}, {"seed", "9"}});
  CHECK(p.at("q").get<double>() == 0.25);
  CHECK(p.at("seed").is_number_integer());
  CHECK(p.at("r").get<double>() == 0.3);
  CHECK(resolve_params(w, json()).at("q") == 0.5);
  CHECK(resolve_params(w, {{"seed", 4.0}}).at("seed").is_number_integer());
  CHECK_THROWS_AS(resolve_params(w, {{"seed", 4.5}}), InvalidArgument);
  CHECK_THROWS_AS(resolve_params(w, {{"q", "half"}}), InvalidArgument);
  CHECK_THROWS_AS(resolve_params(w, {{"q", ""}}), InvalidArgument);
  CHECK_THROWS_AS(resolve_params(w, {{"ell", 2}}), InvalidArgument);
  CHECK_THROWS_AS(resolve_params(w, {{"q", true}}), InvalidArgument);
  CHECK_THROWS_AS(resolve_params(w, json::array()), InvalidArgument);
  const ScenarioInfo& u = find_scenario("unitary_blocking");
  CHECK(resolve_params(u, {{"identity_v", "true"}}).at("identity_v") == true);
  CHECK_THROWS_AS(resolve_params(u, {{"identity_v", "yes"}}), InvalidArgument);
  CHECK_THROWS_AS(resolve_params(u, {{"tau", 3}}), InvalidArgument);
  CHECK_THROWS_AS(find_scenario("nope"), UnknownScenario);
  CHECK_THROWS_AS(run_scenario("nope"), UnknownScenario);
  CHECK_THROWS_AS(run_scenario("werner", {}, {{"qcmi_equals_q", 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(run_scenario("unitary_blocking", {{"ell", 3}}), InvalidArgument);
  CHECK_THROWS_AS(run_scenario("unitary_blocking", {{"tau", "thermal"}}), InvalidArgument);
}

TEST_CASE("tolerance overrides reach the checks") {
  const ScenarioReport w = run_scenario("werner", {}, {{"qcmi_equals_q", 0.2}});
  CHECK(w.passed());
  CHECK(find(w, "qcmi_equals_q")->tol == 0.2);
}

TEST_CASE("scenario output is deterministic") {
  for (const char* id : {"collision_trash_prepare", "ic_causal_break", "werner"}) {
    const std::string a = to_json(run_scenario(id)).dump();
    CHECK(a == to_json(run_scenario(id)).dump());
  }
  CHECK(to_json(run_scenario("werner", {{"seed", 1}})).dump() != to_json(run_scenario("werner", {{"seed", 2}})).dump());
}
