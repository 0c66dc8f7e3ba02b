#pragma once

// JSON documents for tensors, instruments, collision models and Markov-order
// reports. Tensor entries are base64 of little-endian f64 pairs (re, im) in
// row-major order, so a round trip is bit-exact.

#include "qmo/collision.hpp"
#include "qmo/instruments.hpp"
#include "qmo/markov.hpp"
#include "qmo/process.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qmo {

using json = nlohmann::json;

class ParseError : public Error {
 public:
  using Error::Error;
};

std::string base64_encode(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> base64_decode(const std::string& text);

std::string encode_entries(const CMatrix& m);
CMatrix decode_entries(const std::string& text, long rows, long cols);

json spaces_to_json(const SpaceList& spaces);
SpaceList spaces_from_json(const json& j);

// {"spaces": [{"label": "3i", "dim": 2}, ...], "rows": d, "entries": "..."}
json to_json(const ProcessTensor& t);
ProcessTensor process_tensor_from_json(const json& j);

// Readable form for small matrices: rows of numbers or [re, im] pairs.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

// {"kind": "bell" | "trash_and_prepare" | "causal_break_sic" | "unitary_sequence"
//          | "povm" | "fuzzy" | "explicit", ...}
InstrumentSequence instrument_from_json(const json& j);

// {"variant": "repeated_nested" | "swap_nested" | "ancilla_ancilla"
//             | "correlated_env" | "entangled_pair", "ell", "seed", "gates", ...}
CollisionModel collision_model_from_json(const json& j);

json to_json(const MarkovOrderReport& r);
json to_json(const CausalityReport& r);

// Whole-file helpers. Writes go to a temp file that is renamed into place.
std::string read_text(const std::string& path);
json load_json(const std::string& path);
void write_atomic(const std::string& path, const std::string& content);

}  // namespace qmo
