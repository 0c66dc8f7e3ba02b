#pragma once

// Self-verifying constructions. Each scenario builds its process, checks
// causality first, then records named checks in a ScenarioReport.

#include "qmo/cmi.hpp"
#include "qmo/report.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qmo {

class UnknownScenario : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct ScenarioInfo {
  std::string id;
  std::string summary;
  json defaults;  // every accepted parameter with its default value
  std::function<void(const json& params, ScenarioReport& report)> run;
};

const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo& find_scenario(const std::string& id);

// Defaults overlaid with `overrides`. String values are coerced to the
// default's type; unknown keys throw InvalidArgument.
json resolve_params(const ScenarioInfo& info, const json& overrides);

ScenarioReport run_scenario(const std::string& id, const json& overrides = json::object(),
                            const std::map<std::string, double>& tolerance_overrides = {});

ScenarioReport run_collision_trash_prepare(int ell, int n, std::uint64_t seed);
ScenarioReport run_unitary_blocking(int ell, std::uint64_t seed);
ScenarioReport run_ic_causal_break(std::uint64_t seed, double coarse_p = 0.5);
ScenarioReport run_pauli_superposition(double alpha, double beta, double gamma, double delta, int n = 3);
ScenarioReport run_werner_fuzzy(double q, double r, std::uint64_t seed = 7);
ScenarioReport run_classical_fuzzy(double p);

// ---- builders shared with tests -------------------------------------------

// Pure process Σ_c amp_c |c⟩_A ⊗ B_c^{⊗(n−1)}; B_c pairs ((j+1)^i, j^o) with
// B = {|00⟩+|11⟩, |01⟩+|10⟩, |01⟩−|10⟩, |00⟩−|11⟩}. With discard_ancilla
// the A leg is traced out.
ProcessTensor pauli_superposition_process(const std::array<cplx, 4>& amps, int n, bool discard_ancilla = false);
// F = legs later than M, M = {3^i, 2^o}, H = earlier legs.
Partition pauli_superposition_partition(const ProcessTensor& upsilon);

// r·β_x + (1−r)·1/4 on two qubits.
CMatrix werner_state(int x, double r);
// Σ_x ¼ W_x(r) ⊗ Δ_x on (3i, 1i, 2i) with qubit SIC duals; NotPsdError when r > 1/3.
CMatrix werner_mu(double r);
// ρ(q,r) ⊗ 1 on (3i:2, 2o:3, 2i:3, 1o:2, 1i:2).
ProcessTensor werner_process(double q, double r, std::uint64_t seed = 7);
Partition werner_partition();

struct UnitaryBlockingModel {
  ProcessTensor upsilon;            // legs (ℓ+2)^i, (ℓ+1)^o, …, 1^o, 1^i
  std::vector<CMatrix> correct_vs;  // V_2 … V_{ℓ+1}
  Partition partition;              // F = (ℓ+2)^i, M = steps 2..ℓ+1, H = (1^o, 1^i)
  ProcessTensor fresh_future;       // W_2 applied to |0⟩⟨0| ⊗ τ^E, on (ℓ+2)^i
};
UnitaryBlockingModel unitary_blocking_model(int ell, std::uint64_t seed);

struct IcCausalBreakModel {
  ProcessTensor upsilon;  // legs 3i, 2o, 2i, 1o, 1i
  ProcessTensor linked;   // same process assembled by link product
  double epsilon = 0.0;   // mixing weight of the history states
  double epsilon_out = 0.0;
  std::vector<CMatrix> rho_y, rho_1;
  std::vector<CMatrix> rho_3;  // index 16x + 4y + z
};
IcCausalBreakModel ic_causal_break_model(std::uint64_t seed);
Partition ic_causal_break_partition();

// Example processes of the classical section.
ClassicalProcess three_state_chain(double p, int n);  // a → b → c → {a: p, b: 1−p}
ClassicalProcess parity_bits();                       // x3 = x1 XOR x2, uniform
ClassicalProcess perturbed_coin(double p, int n);

}  // namespace qmo
