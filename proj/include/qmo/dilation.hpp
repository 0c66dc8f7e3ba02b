#pragma once

// System–environment models and their process tensors.

#include "qmo/process.hpp"
#include "qmo/random.hpp"

#include <map>
#include <string>
#include <vector>

namespace qmo {

// One process-owned action inside an interval. Factors are named; "S" is the
// system that gets fed out at the next step.
struct DilationAction {
  enum class Kind { unitary, kraus, add, discard };

  Kind kind = Kind::unitary;
  std::vector<std::string> factors;
  std::vector<CMatrix> ops;  // unitary: one matrix; kraus: complete set
  CMatrix state;             // add: joint state of the new factors
  Dims dims;                 // add: their dims
  std::string control_tag;   // classical register driving a branch sum, if any

  static DilationAction unitary(std::vector<std::string> factors, CMatrix u);
  static DilationAction kraus(std::vector<std::string> factors, std::vector<CMatrix> ops, std::string tag = "");
  static DilationAction add(std::vector<std::string> factors, Dims dims, CMatrix state);
  static DilationAction discard(std::vector<std::string> factors);
};

struct Dilation {
  int system_dim = 2;
  std::vector<std::string> env_names;
  Dims env_dims;
  CMatrix initial;  // on S ⊗ env factors in env_names order
  // intervals[j-1] acts after the operation at step j and before (j+1)^i.
  std::vector<std::vector<DilationAction>> intervals;
  // Environment factors delivered together with the final system state.
  std::vector<std::string> fed_out;

  void validate(int n) const;
};

// Swap-in construction: at every open step the system is moved into a
// register (j^i) and replaced by half of an unnormalized Ψ whose other half
// is the j^o register. Steps listed in `plugged` instead apply the given
// Kraus map to the system, which contracts that step away.
ProcessTensor from_dilation(const Dilation& d, int n, const std::map<int, std::vector<CMatrix>>& plugged = {});

// Direct sequential evolution; ops[j-1] is the Kraus list applied at step j.
// Returns the (subnormalized) final state on the fed-out legs and n^i.
Labeled simulate_dilation(const Dilation& d, int n, const std::vector<std::vector<CMatrix>>& ops);

// Max deviation between Born-rule contraction and sequential simulation over
// `trials` random single-Kraus operation sequences.
double born_rule_self_test(const Dilation& d, int n, Rng& rng, int trials);

// Generic random dilation: qubit system, environment of dimension d_env,
// random initial state and a Haar unitary per interval.
Dilation random_dilation(Rng& rng, int d_sys, int d_env, int n);

}  // namespace qmo
