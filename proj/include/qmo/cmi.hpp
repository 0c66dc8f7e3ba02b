#pragma once

#include "qmo/instruments.hpp"
#include "qmo/process.hpp"

#include <string>
#include <vector>

namespace qmo {

struct QcmiTerms {
  double s_fm = 0, s_mh = 0, s_fmh = 0, s_m = 0;
  double raw = 0;    // S(FM)+S(MH)−S(FMH)−S(M), unclamped
  double value = 0;  // clamped at 0
};

QcmiTerms qcmi_terms(const ProcessTensor& upsilon, const Partition& part, double tol = kPsdTol);
// Throws when the raw value is below −1e-8 (strong subadditivity broken).
double qcmi(const ProcessTensor& upsilon, const Partition& part, double tol = kPsdTol);

// Block structure H_M = ⊕_m H_{M^L}^{(m)} ⊗ H_{M^R}^{(m)}.
struct Block {
  double probability = 0;
  CMatrix left;      // on F ⊗ M^L
  CMatrix right;     // on M^R ⊗ H
  CMatrix isometry;  // dim(M) × (dim_left · dim_right)
  int dim_left = 1;
  int dim_right = 1;
};

struct BlockDecomposition {
  SpaceList F, M, H;
  std::vector<Block> blocks;
};

// Assembles Σ_m P(m) (1 ⊗ V_m ⊗ 1)(L_m ⊗ R_m)(1 ⊗ V_m† ⊗ 1) in canonical
// order, then rejects it with CausalityError when the hierarchy fails.
ProcessTensor build_vanishing_qcmi(const BlockDecomposition& blocks, double causality_tol = 1e-8);

// Elements V_m V_m† on M.
InstrumentSequence projector_blocking_instrument(const BlockDecomposition& blocks);

// Seeded instance used by tests and acceptance: F = {3i, 2o}, M = {2i},
// H = {1o, 1i}; each block factor is itself a random two-step comb.
BlockDecomposition random_block_decomposition(std::uint64_t seed);

// ---- classical side -------------------------------------------------------

// Joint table over (x_n, …, x_1); index = x_1 + a_1·(x_2 + a_2·(x_3 + …)).
struct ClassicalProcess {
  std::vector<int> alphabet;  // a_1 … a_n
  std::vector<double> p;

  int steps() const { return static_cast<int>(alphabet.size()); }
  long index(const std::vector<int>& x) const;        // x[0] = x_1
  std::vector<int> outcome(long index) const;
  void validate() const;
};

struct StepPartition {
  std::vector<int> F, M, H;  // step numbers, 1-based
};

// Marginal over the listed steps; result keeps their relative order as a new
// process with steps renumbered 1..k in ascending original order.
ClassicalProcess classical_marginal(const ClassicalProcess& p, std::vector<int> keep);
// Merges outcome values at one step: groups[g] lists values mapped to g.
ClassicalProcess coarse_grain(const ClassicalProcess& p, int step, const std::vector<std::vector<int>>& groups);

double classical_entropy(const ClassicalProcess& p, const std::vector<int>& steps);
double classical_cmi(const ClassicalProcess& p, const StepPartition& part);
// Conditional-distribution form: P(x_k | all past) = P(x_k | last ℓ) for
// every k > ℓ with positive past probability.
bool classical_markov_order(const ClassicalProcess& p, int ell, double tol = 1e-10);

// P(x_k = value | x_{k−1..k−j} = given[0..j−1] (latest first), x_{k−j−1} = anchor).
double classical_conditional(const ClassicalProcess& p, int k, int value, const std::vector<int>& given_latest_first);

// Σ_x P(x) |x⟩⟨x| on input legs ⊗ identities on the output legs j^o (j < n),
// output dims equal to the alphabet at that step.
ProcessTensor classical_process_tensor(const ClassicalProcess& p);

// Sharp computational-basis statistics of a process tensor with
// identity-free output legs fed the maximally mixed state.
std::vector<double> sharp_statistics(const ProcessTensor& upsilon, const std::vector<int>& alphabet);

ClassicalProcess load_classical_csv(const std::string& path);
ClassicalProcess parse_classical_csv(const std::string& text);
std::string to_csv(const ClassicalProcess& p);

}  // namespace qmo
