#include "qmo/spaces.hpp"

#include "qmo/tensor.hpp"

#include <algorithm>
#include <sstream>

namespace qmo {

std::string SpaceLabel::name() const {
  switch (leg) {
    case Leg::input:
      return std::to_string(timestep) + "i";
    case Leg::output:
      return std::to_string(timestep) + "o";
    case Leg::ancillary:
      return tag + "@" + std::to_string(timestep);
  }
  return "?";
}

SpaceLabel parse_label(const std::string& text, int dim) {
  const auto at = text.find('@');
  try {
    if (at != std::string::npos) {
      if (at == 0) throw InvalidArgument("ancillary leg needs a tag: " + text);
      return anc_leg(text.substr(0, at), std::stoi(text.substr(at + 1)), dim);
    }
    if (text.size() < 2) throw InvalidArgument("bad leg label: " + text);
    const char role = text.back();
    std::size_t used = 0;
    const int t = std::stoi(text.substr(0, text.size() - 1), &used);
    if (used != text.size() - 1 || t < 1) throw InvalidArgument("bad leg label: " + text);
    if (role == 'i') return in_leg(t, dim);
    if (role == 'o') return out_leg(t, dim);
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad leg label: " + text);
  }
  throw InvalidArgument("bad leg label: " + text);
}

std::string describe(const SpaceList& spaces) {
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    if (k) os << ",";
    os << spaces[k].name() << ":" << spaces[k].dim;
  }
  os << "]";
  return os.str();
}

Dims dims_of(const SpaceList& spaces) {
  Dims d;
  d.reserve(spaces.size());
  for (const auto& s : spaces) d.push_back(s.dim);
  return d;
}

long total_dim(const SpaceList& spaces) { return product(dims_of(spaces)); }

void validate(const SpaceList& spaces, long matrix_dim) {
  for (std::size_t a = 0; a < spaces.size(); ++a) {
    if (spaces[a].dim < 1) throw DimensionError("leg " + spaces[a].name() + " has non-positive dim");
    if (spaces[a].leg == Leg::ancillary && spaces[a].tag.empty())
      throw InvalidArgument("ancillary leg without tag");
    for (std::size_t b = a + 1; b < spaces.size(); ++b)
      if (spaces[a].same_slot(spaces[b])) throw InvalidArgument("duplicate leg " + spaces[a].name());
  }
  if (total_dim(spaces) != matrix_dim)
    throw DimensionError("spaces " + describe(spaces) + " do not match matrix dimension " +
                         std::to_string(matrix_dim));
}

int index_of(const SpaceList& spaces, const SpaceLabel& label) {
  for (std::size_t k = 0; k < spaces.size(); ++k)
    if (spaces[k].same_slot(label)) {
      if (spaces[k].dim != label.dim)
        throw DimensionError("leg " + label.name() + " has dim " + std::to_string(spaces[k].dim) + ", expected " +
                             std::to_string(label.dim));
      return static_cast<int>(k);
    }
  throw UnknownLabelError("unknown leg " + label.name() + " in " + describe(spaces));
}

bool contains(const SpaceList& spaces, const SpaceLabel& label) {
  return std::any_of(spaces.begin(), spaces.end(), [&](const SpaceLabel& s) { return s.same_slot(label); });
}

std::vector<int> indices_of(const SpaceList& spaces, const SpaceList& subset) {
  std::vector<int> idx;
  idx.reserve(subset.size());
  for (const auto& s : subset) idx.push_back(index_of(spaces, s));
  return idx;
}

SpaceList without(const SpaceList& spaces, const SpaceList& remove) {
  SpaceList out;
  for (const auto& s : spaces)
    if (!contains(remove, s)) out.push_back(s);
  return out;
}

SpaceList canonical_order(SpaceList spaces) {
  std::stable_sort(spaces.begin(), spaces.end(), [](const SpaceLabel& a, const SpaceLabel& b) {
    if (a.time_key() != b.time_key()) return a.time_key() > b.time_key();
    const bool aa = a.leg == Leg::ancillary, ba = b.leg == Leg::ancillary;
    if (aa != ba) return aa;
    return a.tag < b.tag;
  });
  return spaces;
}

Labeled partial_trace(const CMatrix& a, const SpaceList& spaces, const SpaceList& remove) {
  validate(spaces, a.rows());
  const auto idx = indices_of(spaces, remove);
  return {qmo::partial_trace(a, dims_of(spaces), idx), without(spaces, remove)};
}

Labeled permute_subsystems(const CMatrix& a, const SpaceList& spaces, const std::vector<int>& new_order) {
  validate(spaces, a.rows());
  SpaceList out;
  for (int k : new_order) out.push_back(spaces.at(k));
  return {qmo::permute_subsystems(a, dims_of(spaces), new_order), out};
}

CMatrix reorder(const CMatrix& a, const SpaceList& from, const SpaceList& to) {
  if (from.size() != to.size()) throw InvalidArgument("reorder: leg sets differ");
  return permute_subsystems(a, from, indices_of(from, to)).op;
}

CMatrix marginal(const CMatrix& a, const SpaceList& spaces, const SpaceList& keep) {
  validate(spaces, a.rows());
  return partial_trace_keep(a, dims_of(spaces), indices_of(spaces, keep));
}

}  // namespace qmo
