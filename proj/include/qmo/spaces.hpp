#pragma once

// Labeled tensor factors. A SpaceList is attached to every multi-leg operator;
// legs are identified by (timestep, leg, tag), dims travel along.

#include "qmo/types.hpp"

#include <string>
#include <vector>

namespace qmo {

enum class Leg { input, output, ancillary };

struct SpaceLabel {
  int timestep = 1;
  Leg leg = Leg::input;
  int dim = 2;
  std::string tag;

  // Same slot: equal (timestep, leg, tag), regardless of dim.
  bool same_slot(const SpaceLabel& other) const {
    return timestep == other.timestep && leg == other.leg && tag == other.tag;
  }
  bool operator==(const SpaceLabel& other) const { return same_slot(other) && dim == other.dim; }
  // "3i", "2o", or "A@3" for ancillary legs.
  std::string name() const;
  // Causal position: larger is later. Inputs and ancillary legs of step t
  // come before the output of step t.
  int time_key() const { return 2 * timestep + (leg == Leg::output ? 1 : 0); }
};

using SpaceList = std::vector<SpaceLabel>;

inline SpaceLabel in_leg(int t, int d) { return {t, Leg::input, d, ""}; }
inline SpaceLabel out_leg(int t, int d) { return {t, Leg::output, d, ""}; }
inline SpaceLabel anc_leg(const std::string& tag, int t, int d) { return {t, Leg::ancillary, d, tag}; }

// Parses "3i", "2o" or "A@3"; dim is attached separately.
SpaceLabel parse_label(const std::string& text, int dim = 2);
std::string describe(const SpaceList& spaces);

Dims dims_of(const SpaceList& spaces);
long total_dim(const SpaceList& spaces);
// Throws unless dims are valid, slots unique and the product matches `matrix_dim`.
void validate(const SpaceList& spaces, long matrix_dim);

// Index of the leg occupying `label`'s slot; throws UnknownLabelError.
int index_of(const SpaceList& spaces, const SpaceLabel& label);
bool contains(const SpaceList& spaces, const SpaceLabel& label);
std::vector<int> indices_of(const SpaceList& spaces, const SpaceList& subset);
SpaceList without(const SpaceList& spaces, const SpaceList& remove);

// Canonical order: latest leg first; at equal time ancillary legs precede inputs.
SpaceList canonical_order(SpaceList spaces);

struct Labeled {
  CMatrix op;
  SpaceList spaces;
};

Labeled partial_trace(const CMatrix& a, const SpaceList& spaces, const SpaceList& remove);
Labeled permute_subsystems(const CMatrix& a, const SpaceList& spaces, const std::vector<int>& new_order);
// Brings `a` from the `from` order to the `to` order (same slots, any order).
CMatrix reorder(const CMatrix& a, const SpaceList& from, const SpaceList& to);
// Marginal on `keep`, returned in `keep` order.
CMatrix marginal(const CMatrix& a, const SpaceList& spaces, const SpaceList& keep);

}  // namespace qmo
