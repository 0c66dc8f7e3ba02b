#include "common.hpp"

#include "qmo/tensor.hpp"

#include <cmath>

namespace qmo {

ClassicalProcess three_state_chain(double p, int n) {
  if (p <= 0 || p >= 1) throw InvalidArgument("three_state_chain: p must lie in (0, 1)");
  // T[from][to] over a = 0, b = 1, c = 2.
  const double t[3][3] = {{0, 1, 0}, {0, 0, 1}, {p, 1 - p, 0}};
  ClassicalProcess out;
  out.alphabet.assign(n, 3);
  out.p.assign(static_cast<std::size_t>(std::pow(3, n)), 0.0);
  for (long i = 0; i < static_cast<long>(out.p.size()); ++i) {
    const auto x = out.outcome(i);
    double v = 1.0 / 3.0;
    for (int k = 1; k < n && v > 0; ++k) v *= t[x[k - 1]][x[k]];
    out.p[i] = v;
  }
  return out;
}

ClassicalProcess parity_bits() {
  ClassicalProcess out;
  out.alphabet = {2, 2, 2};
  out.p.assign(8, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) out.p[out.index({x1, x2, x1 ^ x2})] = 0.25;
  return out;
}

ClassicalProcess perturbed_coin(double p, int n) {
  ClassicalProcess out;
  out.alphabet.assign(n, 2);
  out.p.assign(static_cast<std::size_t>(1) << n, 0.0);
  for (long i = 0; i < static_cast<long>(out.p.size()); ++i) {
    const auto x = out.outcome(i);
    double v = 0.5;
    for (int k = 1; k < n; ++k) v *= x[k] == x[k - 1] ? p : 1 - p;
    out.p[i] = v;
  }
  return out;
}

namespace detail {

namespace {

CMatrix diag_projector(int d, const std::vector<int>& values) {
  CMatrix m = CMatrix::Zero(d, d);
  for (int v : values) m(v, v) = 1.0;
  return m;
}

// Outcome statistics of projective measurements at every input leg (outputs
// fed with 1/d), step k measured with projectors[k-1]; table in the
// ClassicalProcess index convention.
std::vector<double> quantum_statistics(const ProcessTensor& ups, const std::vector<std::vector<CMatrix>>& projectors) {
  const int n = static_cast<int>(projectors.size());
  std::vector<OperationChoi> feeds;
  for (const auto& s : ups.spaces)
    if (s.leg == Leg::output) feeds.push_back({CMatrix::Identity(s.dim, s.dim) / static_cast<double>(s.dim), {s}});
  const ProcessTensor rest = apply_ops(ups, feeds);
  ClassicalProcess shape;
  for (const auto& p : projectors) shape.alphabet.push_back(static_cast<int>(p.size()));
  long size = 1;
  for (int a : shape.alphabet) size *= a;
  std::vector<double> out(size);
  SpaceList legs;
  for (int k = n; k >= 1; --k) legs.push_back(in_leg(k, static_cast<int>(projectors[k - 1][0].rows())));
  for (long i = 0; i < size; ++i) {
    const auto y = shape.outcome(i);
    CMatrix e = CMatrix::Ones(1, 1);
    for (int k = n; k >= 1; --k) e = kron(e, projectors[k - 1][y[k - 1]]);
    out[i] = contract(rest.op, rest.spaces, e, legs).op(0, 0).real();
  }
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? m : INFINITY;
}

}  // namespace

void classical_fuzzy(const json& params, ScenarioReport& r) {
  const double p = params.at("p").get<double>();
  const int n_table = params.at("n").get<int>();
  if (p <= 0 || p >= 1) throw InvalidArgument("classical_fuzzy: p must lie in (0, 1)");
  if (n_table < 4 || n_table > 8) throw InvalidArgument("classical_fuzzy: n must lie in [4, 8]");

  // D1: sharp X is Markovian, the coarse-grained Y = {a, b ∪ c} is not.
  const ClassicalProcess x = three_state_chain(p, n_table);
  ClassicalProcess y = x;
  for (int k = 1; k <= n_table; ++k) y = coarse_grain(y, k, {{0}, {1, 2}});
  r.artifact("chain_table", "classical_table", to_csv(x));
  r.boolean("chain_sharp_order_1", classical_markov_order(x, 1));
  r.boolean("chain_coarse_order_1", classical_markov_order(y, 1), false);
  const int a = 0, d = 1;
  for (int j = 1; j + 2 <= n_table; ++j) {
    std::vector<int> given(j, d);
    given.push_back(a);
    r.equal("chain_p_a_after_" + std::to_string(j) + "_d", j % 2 ? 0.0 : p,
            classical_conditional(y, j + 2, a, given), 1e-12);
  }

  // D2: x3 = x1 XOR x2.
  const ClassicalProcess bits = parity_bits();
  const StepPartition sp{{3}, {2}, {1}};
  r.equal("parity_sharp_cmi", 1.0, classical_cmi(bits, sp), 1e-12);
  const ClassicalProcess bits_coarse = coarse_grain(bits, 2, {{0, 1}});
  r.equal("parity_coarse_mi", 0.0, classical_cmi(bits_coarse, sp), 1e-12);

  // Perturbed coin.
  const double coin_p = params.at("coin_p").get<double>();
  const ClassicalProcess coin = perturbed_coin(coin_p, 3);
  r.boolean("coin_order_1", classical_markov_order(coin, 1));
  r.equal("coin_cmi", 0.0, classical_cmi(coin, sp), 1e-12);
  r.equal("coin_stay_probability", coin_p, classical_conditional(coin, 2, 0, {0}), 1e-12);

  // Diagonal embeddings.
  const ClassicalProcess x3 = three_state_chain(p, 3);
  const ProcessTensor ux = classical_process_tensor(x3);
  if (!require_causal(r, ux, "chain_embedding_causality")) return;
  r.equal("chain_embedding_sharp_stats", 0.0, max_abs_diff(sharp_statistics(ux, x3.alphabet), x3.p), 1e-9);
  ClassicalProcess y3 = x3;
  for (int k = 1; k <= 3; ++k) y3 = coarse_grain(y3, k, {{0}, {1, 2}});
  const std::vector<CMatrix> fuzzy3{diag_projector(3, {0}), diag_projector(3, {1, 2})};
  r.equal("chain_embedding_fuzzy_stats", 0.0, max_abs_diff(quantum_statistics(ux, {fuzzy3, fuzzy3, fuzzy3}), y3.p),
          1e-9);
  const Partition qp{{in_leg(3, 3), out_leg(2, 3)}, {in_leg(2, 3)}, {out_leg(1, 3), in_leg(1, 3)}};
  r.equal("chain_embedding_cmi", classical_cmi(x3, sp), qcmi(ux, qp), 1e-9);

  const ProcessTensor ub = classical_process_tensor(bits);
  if (!require_causal(r, ub, "parity_embedding_causality")) return;
  r.artifact("parity_process_tensor", "process_tensor", to_json(ub));
  const Partition bp{{in_leg(3, 2), out_leg(2, 2)}, {in_leg(2, 2)}, {out_leg(1, 2), in_leg(1, 2)}};
  r.equal("parity_embedding_qcmi", 1.0, qcmi(ub, bp), 1e-9);
  r.equal("parity_embedding_sharp_stats", 0.0, max_abs_diff(sharp_statistics(ub, bits.alphabet), bits.p), 1e-9);
  const SpaceLabel leg2 = in_leg(2, 2);
  const MarkovOrderReport sharp =
      has_markov_order(ub, fuzzy_projector_instrument({diag_projector(2, {0}), diag_projector(2, {1})}, leg2), bp);
  const MarkovOrderReport coarse =
      has_markov_order(ub, fuzzy_projector_instrument({CMatrix::Identity(2, 2)}, leg2), bp);
  r.boolean("parity_embedding_sharp_verdict", sharp.verdict, false);
  r.equal("parity_embedding_sharp_mi", 1.0, max_mi(sharp), 1e-9);
  r.boolean("parity_embedding_coarse_verdict", coarse.verdict);
  r.equal("parity_embedding_coarse_mi", 0.0, max_mi(coarse), 1e-9);

  const ProcessTensor uc = classical_process_tensor(coin);
  if (!require_causal(r, uc, "coin_embedding_causality")) return;
  r.equal("coin_embedding_sharp_stats", 0.0, max_abs_diff(sharp_statistics(uc, coin.alphabet), coin.p), 1e-9);
  r.equal("coin_embedding_qcmi", 0.0, qcmi(uc, bp), 1e-9);
}

}  // namespace detail

}  // namespace qmo
