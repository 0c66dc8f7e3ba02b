#pragma once

// Collision models with memory. Timesteps follow the usual collision-model
// bookkeeping: ρ_0 enters interval 1, the experimenter acts at steps
// 1..n−1 and ρ_n leaves interval n.

#include "qmo/dilation.hpp"
#include "qmo/random.hpp"

#include <string>
#include <vector>

namespace qmo {

enum class CollisionVariant { repeated_nested, ancilla_ancilla, correlated_env };

std::string to_string(CollisionVariant v);

// Pairwise unitary on factors (a, b), matrix on a ⊗ b.
struct Collision {
  std::string a, b;
  CMatrix u;
};

struct CollisionInterval {
  std::vector<std::string> add;      // fresh ancillas joining in state τ
  std::vector<Collision> collisions; // applied in order
  std::vector<std::string> discard;
};

struct CollisionModel {
  CollisionVariant variant = CollisionVariant::repeated_nested;
  int system_dim = 2;
  int ancilla_dim = 2;
  int ell = 1;
  CMatrix tau;  // fresh ancilla state

  // repeated_nested: gates[x] couples S with the ancilla that has x more
  // collisions ahead of it; x = 0 is the oldest (about to be discarded).
  std::vector<CMatrix> gates;
  // Swap the order of the last two collisions in every interval.
  bool flipped = false;

  // correlated_env: S meets the first ancilla in interval 1 and its partner
  // in interval n; pair_state is their joint initial state.
  CMatrix pair_state;
  CMatrix first_gate, last_gate;

  // Initial ancillas and their joint state.
  std::vector<std::string> initial_ancillas(int n) const;
  CMatrix initial_env(int n) const;
  std::vector<CollisionInterval> schedule(int n) const;
  void validate(int n) const;
};

CMatrix swap_gate(int d);

// Nested repeated collisions with Haar gates, τ = |0⟩⟨0|.
CollisionModel repeated_nested_model(Rng& rng, int ell, bool flipped = false);
// Swap-only nested model.
CollisionModel swap_nested_model(int ell);
// S ↔ A_1, then A_{j+1} ↔ A_j every interval, finally S ↔ A_n.
CollisionModel ancilla_ancilla_model();
// A_1, A_{n−1} start in Φ+; S swaps with A_1 first and with A_{n−1} last.
CollisionModel correlated_env_model();
// Two-interval model with an entangled pair τ^{A_1 A_2} and Haar gates.
CollisionModel entangled_pair_model(Rng& rng);

struct CollisionRun {
  CMatrix final_state;                            // ρ_n, subnormalized for probabilistic ops
  std::vector<CMatrix> trajectory;                // joint state after every interval
  std::vector<std::vector<std::string>> factors;  // factor names per trajectory entry
};

// Sequential evolution; ops[j-1] is the Kraus list applied to S at step j.
CollisionRun simulate(const CollisionModel& m, const CMatrix& rho0, const std::vector<std::vector<CMatrix>>& ops, int n);

// Same model as a Dilation with n + 1 steps: step t of the dilation is step
// t − 1 here, and the dilation's initial system state is `rho_first`.
Dilation to_dilation(const CollisionModel& m, int n, const CMatrix& rho_first);

// Kraus operators of σ tr(·) and of σ tr(E ·).
std::vector<CMatrix> prepare_kraus(const CMatrix& sigma, int in_dim = -1);
std::vector<CMatrix> measure_prepare_kraus(const CMatrix& effect, const CMatrix& sigma);

// ρ_k as a multilinear function of the last ℓ preparations.
struct MemoryMap {
  int ell = 1;
  std::vector<CMatrix> basis;    // SIC states
  std::vector<CMatrix> duals;    // tr(basis[x] duals[y]) = δ_xy
  std::vector<CMatrix> outputs;  // ρ_k for every basis tuple, little-endian in the slot index

  // sigmas[0] = σ_{k−ℓ}, …, sigmas[ℓ−1] = σ_{k−1}.
  CMatrix operator()(const std::vector<CMatrix>& sigmas) const;
};

// Extracted with a maximally mixed history and trash-and-prepare I/d at
// every step before k − ℓ.
MemoryMap reduced_memory_map(const CollisionModel& m, int k, int ell);

// max ‖ρ_n(ρ_0) − ρ_n(ρ_0′)‖_F under trash-and-prepare preps[0..n−2].
double history_dependence(const CollisionModel& m, int n, const std::vector<CMatrix>& preps,
                          const std::vector<std::pair<CMatrix, CMatrix>>& histories);

struct BlockingBreakReport {
  std::vector<double> per_outcome;  // max history dependence of the normalized conditional output
  double max_dependence = 0.0;
};

// Trash-and-prepare on steps 1..k−1, except step k−1 which measures with
// `povm` before re-preparing.
BlockingBreakReport measurement_breaks_blocking(const CollisionModel& m, int k, const std::vector<CMatrix>& preps,
                                                const std::vector<CMatrix>& povm,
                                                const std::vector<std::pair<CMatrix, CMatrix>>& histories);

struct MemoryWitness {
  bool infinite = false;
  double residual = 0.0;  // worst deviation from the witnessed identity
  std::string statement;
};

// ancilla_ancilla / repeated_nested: ρ_n = ρ_0 under random intermediate
// channels. correlated_env: ρ_n conditioned on a computational measurement
// of S at step 1 equals the outcome projector, whatever happens afterwards.
MemoryWitness infinite_memory_witness(const CollisionModel& m, int n, Rng& rng, int trials = 10);

// Process-level split of a nested model: n = ℓ + 2 dilation steps, history
// (1o, 1i), memory steps 2..ℓ+1 plugged with trash-and-prepare, future (ℓ+2)i.
struct ProcessSplit {
  double mi_bits = 0.0;
  double product_distance = 0.0;
  Labeled joint_fh;
};
ProcessSplit trash_prepare_split(const CollisionModel& m, const std::vector<CMatrix>& preps, const CMatrix& rho_first);

}  // namespace qmo
