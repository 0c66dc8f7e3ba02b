#pragma once

#include "qmo/duals.hpp"
#include "qmo/instruments.hpp"
#include "qmo/process.hpp"

#include <string>
#include <vector>

namespace qmo {

struct ConditionalSplit {
  std::string label;
  double weight = 0.0;   // tr joint / Σ tr joint
  double trace = 0.0;    // tr joint
  ProcessTensor future;  // tr_H joint
  Labeled history;       // tr_F joint / tr joint, so future ⊗ history = joint when product
  Labeled joint_fh;      // legs F then H
};

std::vector<ConditionalSplit> condition(const ProcessTensor& upsilon, const InstrumentSequence& seq,
                                        const Partition& part, double tol = 1e-9);

// S(A)+S(B)−S(AB) in bits on the trace-normalized joint of dims (dim_a, dim_b).
double mutual_information(const CMatrix& joint, int dim_a, int dim_b, double tol = kPsdTol);
// ‖J − J_A ⊗ J_B / tr J‖_F / ‖J‖_F.
double product_distance(const CMatrix& joint, int dim_a, int dim_b);

struct MarkovOrderRow {
  std::string outcome;
  double weight = 0.0;
  double mi_bits = 0.0;
  double product_distance = 0.0;
  bool vacuous = false;  // zero-probability outcome, counted as product
};

struct MarkovOrderReport {
  std::vector<MarkovOrderRow> rows;
  bool verdict = true;
  double tol_mi = 1e-7;
  double tol_dist = 1e-7;
};

MarkovOrderReport has_markov_order(const ProcessTensor& upsilon, const InstrumentSequence& seq, const Partition& part,
                                   double tol_mi = 1e-7, double tol_dist = 1e-7);

// Relative distance to the product of per-step marginals.
double markovian_distance(const ProcessTensor& upsilon);
bool is_markovian(const ProcessTensor& upsilon, double tol = 1e-7);

// Σ_x first_fh[x] ⊗ duals[x] + Σ_y complement_fh[y] ⊗ complement_duals[y],
// with each *_fh on (F, H) and duals on M, returned in `order`.
CMatrix reconstruct_joint(const std::vector<CMatrix>& first_fh, const std::vector<CMatrix>& duals,
                                   const std::vector<CMatrix>& complement_fh,
                                   const std::vector<CMatrix>& complement_duals, const Partition& part,
                                   const SpaceList& order);

// Product form: first_fh[x] = Υ_F^{(x)} ⊗ Υ_H^{(x)}.
CMatrix reconstruct_from_splits(const std::vector<std::pair<CMatrix, CMatrix>>& splits, const std::vector<CMatrix>& duals,
                             const std::vector<CMatrix>& complement_fh, const std::vector<CMatrix>& complement_duals,
                             const Partition& part, const SpaceList& order);

struct ComplementTerms {
  std::vector<CMatrix> coefficients;  // Ῡ^{(y)} on (F, H)
  std::vector<CMatrix> duals;         // Δ̄^{(y)} on M
};

// Pairs Υ with each complement basis element; the expansion operators come
// from a second dual_set over elements ∪ complement.
ComplementTerms extract_complement_coefficients(const ProcessTensor& upsilon, const std::vector<CMatrix>& elements,
                                                const std::vector<CMatrix>& complement_basis, const Partition& part);

}  // namespace qmo
