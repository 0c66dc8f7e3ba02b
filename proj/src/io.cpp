#include "qmo/io.hpp"

#include "qmo/random.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace qmo {

static_assert(std::endian::native == std::endian::little, "tensor payloads assume a little-endian host");

std::string base64_encode(const std::vector<unsigned char>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw ParseError("base64: length is not a multiple of 4");
  std::vector<unsigned char> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0) throw ParseError("base64: invalid characters");
  // EVP_DecodeBlock keeps the zero bytes produced by '=' padding.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string encode_entries(const CMatrix& m) {
  std::vector<unsigned char> bytes(static_cast<std::size_t>(m.size()) * 16);
  std::size_t off = 0;
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      std::memcpy(bytes.data() + off, &re, 8);
      std::memcpy(bytes.data() + off + 8, &im, 8);
      off += 16;
    }
  return base64_encode(bytes);
}

CMatrix decode_entries(const std::string& text, long rows, long cols) {
  const auto bytes = base64_decode(text);
  if (bytes.size() != static_cast<std::size_t>(rows * cols * 16))
    throw ParseError("tensor entries: expected " + std::to_string(rows * cols) + " complex values");
  CMatrix m(rows, cols);
  std::size_t off = 0;
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      double re, im;
      std::memcpy(&re, bytes.data() + off, 8);
      std::memcpy(&im, bytes.data() + off + 8, 8);
      m(i, j) = {re, im};
      off += 16;
    }
  return m;
}

json spaces_to_json(const SpaceList& spaces) {
  json out = json::array();
  for (const auto& s : spaces) out.push_back({{"label", s.name()}, {"dim", s.dim}});
  return out;
}

SpaceList spaces_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("spaces: expected an array");
  SpaceList out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("label") || !e.contains("dim")) throw ParseError("spaces: entry needs label and dim");
    try {
      out.push_back(parse_label(e.at("label").get<std::string>(), e.at("dim").get<int>()));
    } catch (const json::exception& ex) {
      throw ParseError(std::string("spaces: ") + ex.what());
    } catch (const InvalidArgument& ex) {
      throw ParseError(ex.what());
    }
  }
  return out;
}

json to_json(const ProcessTensor& t) {
  return {{"spaces", spaces_to_json(t.spaces)}, {"rows", t.op.rows()}, {"entries", encode_entries(t.op)}};
}

ProcessTensor process_tensor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("spaces") || !j.contains("entries"))
    throw ParseError("process tensor: need spaces and entries");
  ProcessTensor t;
  t.spaces = spaces_from_json(j.at("spaces"));
  const long d = total_dim(t.spaces);
  if (j.contains("rows") && j.at("rows").get<long>() != d) throw ParseError("process tensor: rows do not match spaces");
  if (!j.at("entries").is_string()) throw ParseError("process tensor: entries must be a base64 string");
  t.op = decode_entries(j.at("entries").get<std::string>(), d, d);
  return t;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) {
      if (m(i, j).imag() == 0.0)
        row.push_back(m(i, j).real());
      else
        row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("matrix: expected an array of rows");
  const long r = static_cast<long>(j.size()), c = static_cast<long>(j[0].size());
  CMatrix m(r, c);
  for (long i = 0; i < r; ++i) {
    if (!j[i].is_array() || static_cast<long>(j[i].size()) != c) throw ParseError("matrix: ragged rows");
    for (long k = 0; k < c; ++k) {
      const json& e = j[i][k];
      if (e.is_number())
        m(i, k) = e.get<double>();
      else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        m(i, k) = {e[0].get<double>(), e[1].get<double>()};
      else
        throw ParseError("matrix: entries must be numbers or [re, im]");
    }
  }
  return m;
}

namespace {

std::vector<CMatrix> matrices(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ParseError(std::string("instrument: missing ") + key);
  std::vector<CMatrix> out;
  for (const auto& e : j.at(key)) out.push_back(matrix_from_json(e));
  return out;
}

SpaceLabel leg_of(const json& j) {
  try {
    return parse_label(j.at("leg").get<std::string>(), j.value("dim", 2));
  } catch (const json::exception& ex) {
    throw ParseError(std::string("instrument: bad leg: ") + ex.what());
  } catch (const InvalidArgument& ex) {
    throw ParseError(ex.what());
  }
}

}  // namespace

InstrumentSequence instrument_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "bell") return bell_instrument(j.at("k").get<int>(), j.value("dim", 2));
    if (kind == "trash_and_prepare") {
      std::vector<CMatrix> states;
      if (j.contains("sic")) {
        const auto sic = sic_states();
        for (int x : j.at("sic").get<std::vector<int>>()) states.push_back(sic.at(x));
      } else {
        states = matrices(j, "states");
      }
      return trash_and_prepare(states, j.at("steps").get<std::vector<int>>(),
                               j.value("input_dims", std::vector<int>{}));
    }
    if (kind == "causal_break_sic") {
      std::vector<BreakStep> steps;
      for (const auto& s : j.at("steps")) {
        BreakStep b;
        b.timestep = s.at("timestep").get<int>();
        if (s.value("prepare", true)) b.preps = sic_states();
        if (s.value("measure", true)) b.povm = sic_povm();
        steps.push_back(b);
      }
      return causal_break(steps);
    }
    if (kind == "unitary_sequence") return unitary_sequence(matrices(j, "unitaries"), j.at("steps").get<std::vector<int>>());
    if (kind == "povm") return povm_instrument(matrices(j, "elements"), leg_of(j));
    if (kind == "fuzzy") return fuzzy_projector_instrument(matrices(j, "projectors"), leg_of(j));
    if (kind == "explicit") {
      InstrumentSequence seq;
      seq.spaces = spaces_from_json(j.at("spaces"));
      seq.elements = matrices(j, "elements");
      for (std::size_t k = 0; k < seq.elements.size(); ++k) seq.labels.push_back(std::to_string(k));
      if (j.contains("labels")) seq.labels = j.at("labels").get<std::vector<std::string>>();
      if (seq.labels.size() != seq.elements.size()) throw ParseError("instrument: one label per element");
      for (const auto& e : seq.elements) validate(seq.spaces, e.rows());
      return seq;
    }
    throw ParseError("instrument: unknown kind " + kind);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("instrument descriptor: ") + ex.what());
  }
}

CollisionModel collision_model_from_json(const json& j) {
  try {
    const std::string variant = j.at("variant").get<std::string>();
    Rng rng(j.value("seed", std::uint64_t{7}));
    CollisionModel m;
    if (variant == "repeated_nested") {
      const int ell = j.value("ell", 1);
      if (j.contains("gates")) {
        m.variant = CollisionVariant::repeated_nested;
        m.ell = ell;
        m.system_dim = j.value("system_dim", 2);
        m.ancilla_dim = j.value("ancilla_dim", 2);
        m.tau = CMatrix::Zero(m.ancilla_dim, m.ancilla_dim);
        m.tau(0, 0) = 1.0;
        m.gates = matrices(j, "gates");
        m.flipped = j.value("flipped", false);
      } else {
        m = repeated_nested_model(rng, ell, j.value("flipped", false));
      }
    } else if (variant == "swap_nested") {
      m = swap_nested_model(j.value("ell", 1));
    } else if (variant == "ancilla_ancilla") {
      m = ancilla_ancilla_model();
    } else if (variant == "correlated_env") {
      m = correlated_env_model();
    } else if (variant == "entangled_pair") {
      m = entangled_pair_model(rng);
    } else {
      throw ParseError("collision model: unknown variant " + variant);
    }
    if (j.contains("tau")) m.tau = matrix_from_json(j.at("tau"));
    return m;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("collision model descriptor: ") + ex.what());
  }
}

json to_json(const MarkovOrderReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"outcome", row.outcome},
                    {"weight", row.weight},
                    {"mi_bits", row.mi_bits},
                    {"product_distance", row.product_distance},
                    {"vacuous", row.vacuous}});
  return {{"rows", rows}, {"verdict", r.verdict}, {"tol_mi", r.tol_mi}, {"tol_dist", r.tol_dist}};
}

json to_json(const CausalityReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels) levels.push_back({{"timestep", l.timestep}, {"residual", l.residual}, {"pass", l.pass}});
  return {{"pass", r.pass}, {"levels", levels}, {"diagnostics", r.diagnostics}};
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp =
      path + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 1000000);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp);
    f << content;
    f.flush();
    if (!f) throw Error("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move " + tmp + " to " + path + ": " + ec.message());
  }
}

}  // namespace qmo
