#pragma once

#include "qmo/process.hpp"

#include <string>
#include <vector>

namespace qmo {

// Multi-leg instrument (tester). All elements share `spaces`; a single-step
// instrument is the one-step special case.
struct InstrumentSequence {
  SpaceList spaces;
  std::vector<CMatrix> elements;
  std::vector<std::string> labels;

  CMatrix deterministic() const;
  OperationChoi element(std::size_t k) const { return {elements.at(k), spaces}; }
  std::size_t size() const { return elements.size(); }
};
using Instrument = InstrumentSequence;

// Canonical qubit SIC: tetrahedron states (trace 1) and POVM (states / 2).
std::vector<CMatrix> sic_states();
std::vector<CMatrix> sic_povm();
CMatrix pauli(int k);  // 0 = I, 1 = X, 2 = Y, 3 = Z

// Discard the incoming state and prepare σ_j. Legs (j^o, j^i) per step,
// latest step first.
InstrumentSequence trash_and_prepare(const std::vector<CMatrix>& sigmas, const std::vector<int>& steps,
                                     const std::vector<int>& input_dims = {});

struct BreakStep {
  int timestep = 1;
  std::vector<CMatrix> preps;  // states prepared on the output leg; empty = leg absent
  std::vector<CMatrix> povm;   // POVM on the input leg; empty = leg absent
};

// Products of measure-then-reprepare operations. The preparation index is a
// uniformly random choice, so each element carries weight 1/|preps| and the
// elements sum to a deterministic tester.
InstrumentSequence causal_break(const std::vector<BreakStep>& steps);

// One deterministic element ⊗_j Choi(v_j) on (j^o, j^i).
InstrumentSequence unitary_sequence(const std::vector<CMatrix>& vs, const std::vector<int>& steps);

// ¼{Ψ+, Φ+, Φ−, Ψ−} (unnormalized Bell projectors) on (k^i, (k−1)^o).
InstrumentSequence bell_instrument(int k, int dim = 2);

// Measurement-only instrument on one input leg.
InstrumentSequence povm_instrument(const std::vector<CMatrix>& povm, const SpaceLabel& leg);
InstrumentSequence fuzzy_projector_instrument(const std::vector<CMatrix>& projectors, const SpaceLabel& leg);

struct ValidityReport {
  bool valid = true;
  std::string diagnostics;
  std::string violated_leg;  // empty when valid
};

// Element PSD check plus the tester hierarchy on Σ elements, peeled from the
// latest leg backwards:
//   latest is an output j^o: tr_{j^o} X = 1_{j^i} ⊗ X' when j^i is in the tester, else X' = tr X
//   latest is an input j^i (no later output): X = 1_{j^i} ⊗ X'
// and the final scalar must be 1.
ValidityReport is_valid_sequence(const InstrumentSequence& seq, double tol = 1e-9);

struct IcReport {
  bool complete = false;
  int rank = 0;
  long full_dim = 0;
};
IcReport is_informationally_complete(const InstrumentSequence& seq, double tol = 1e-9);

}  // namespace qmo
