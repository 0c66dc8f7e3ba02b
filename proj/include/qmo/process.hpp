#pragma once

#include "qmo/spaces.hpp"
#include "qmo/types.hpp"

#include <string>
#include <vector>

namespace qmo {

// Choi operator of a CP map in the tester convention: the stored operator is
// the transpose of (O ⊗ id)[Ψ], legs (output, input), so Born-rule pairing
// with a process tensor needs no further transposes.
struct OperationChoi {
  CMatrix op;
  SpaceList spaces;
};

struct ProcessTensor {
  CMatrix op;
  SpaceList spaces;

  long dim() const { return op.rows(); }
  double trace() const { return op.trace().real(); }
};

// Raw Choi (out ⊗ in) for Kraus operators mapping in_dim -> out_dim.
CMatrix choi_matrix(const std::vector<CMatrix>& kraus, int in_dim, int out_dim);
// Labeled on (step^o, step^i).
OperationChoi choi_of_map(const std::vector<CMatrix>& kraus, int in_dim, int out_dim, int step = 1);
// ‖tr_out C − 1_in‖_max for a Choi on (out, in).
double trace_preservation_defect(const CMatrix& choi, int in_dim, int out_dim);

struct Partition {
  SpaceList F, M, H;

  // F = every leg later than M, H = every leg earlier.
  static Partition around(const SpaceList& spaces, const SpaceList& memory);
  // Disjoint, covering `spaces`, temporally ordered F > M > H.
  void validate_against(const SpaceList& spaces) const;
};

struct CausalityLevel {
  int timestep = 0;
  double residual = 0.0;
  bool pass = true;
};

struct CausalityReport {
  bool pass = true;
  std::vector<CausalityLevel> levels;   // from the latest step down to step 1
  std::vector<ProcessTensor> marginals; // Υ_{j:1}, latest first
  std::string diagnostics;
};

// Causal hierarchy with a relative Frobenius residual per level; the final
// level checks tr Υ_{1:1} = 1.
CausalityReport check_causality(const ProcessTensor& upsilon, double tol = 1e-8);

// tr_targets[(O ⊗ 1) A]; the operator's spaces name the target legs.
Labeled contract(const CMatrix& a, const SpaceList& spaces, const CMatrix& o, const SpaceList& targets);

// Sequential contraction of disjoint operations. The result must stay PSD
// within tol, otherwise NotPsdError (the operations were not valid).
ProcessTensor apply_ops(const ProcessTensor& upsilon, const std::vector<OperationChoi>& ops, double tol = 1e-9);

// Υ = Λ_{n,n−1} ⊗ … ⊗ Λ_{2,1} ⊗ ρ_1. maps[k] is the tester-convention Choi of
// the process map from (k+1)^o to (k+2)^i; its transpose is the process factor.
ProcessTensor markovian_product(const std::vector<OperationChoi>& maps, const CMatrix& rho1, double tol = 1e-10);

// Link product A ⋆ B = tr_shared[(A ⊗ 1)(1 ⊗ B^{T_shared})] over legs in both lists.
Labeled link_product(const Labeled& a, const Labeled& b);

// Legs grouped per map: {inputs and ancillary legs at k} ∪ {(k−1)^o}, latest first.
std::vector<SpaceList> step_groups(const SpaceList& spaces);

}  // namespace qmo
