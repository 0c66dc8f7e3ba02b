#include "common.hpp"

#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <cmath>

namespace qmo {

namespace {

CVector bell_vector(int c) {
  static const double v[4][4] = {{1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, -1, 0}, {1, 0, 0, -1}};
  CVector b(4);
  for (int i = 0; i < 4; ++i) b(i) = v[c][i];
  return b;
}

}  // namespace

ProcessTensor pauli_superposition_process(const std::array<cplx, 4>& amps, int n, bool discard_ancilla) {
  if (n < 3 || n > 4) throw InvalidArgument("pauli_superposition: n must be 3 or 4");
  double norm = 0.0;
  for (const auto& a : amps) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-9) throw InvalidArgument("pauli_superposition: amplitudes are not normalized");

  // Pair order (n^i, (n−1)^o), …, (2^i, 1^o) is already canonical.
  SpaceList spaces{anc_leg("A", n, 4)};
  for (int j = n - 1; j >= 1; --j) {
    spaces.push_back(in_leg(j + 1, 2));
    spaces.push_back(out_leg(j, 2));
  }
  CVector psi = CVector::Zero(total_dim(spaces));
  for (int c = 0; c < 4; ++c) {
    if (amps[c] == cplx(0.0)) continue;
    CVector chain = CVector::Ones(1);
    for (int j = 1; j < n; ++j) chain = kron(chain, bell_vector(c));
    CVector anc = CVector::Zero(4);
    anc(c) = 1.0;
    psi += amps[c] * kron(anc, chain);
  }
  ProcessTensor ups{psi * psi.adjoint(), spaces};
  if (discard_ancilla) {
    const Labeled t = partial_trace(ups.op, ups.spaces, {spaces[0]});
    ups = {t.op, t.spaces};
  }
  return ups;
}

Partition pauli_superposition_partition(const ProcessTensor& upsilon) {
  return Partition::around(upsilon.spaces, {in_leg(3, 2), out_leg(2, 2)});
}

namespace detail {

void pauli_superposition(const json& p, ScenarioReport& r) {
  const std::array<double, 4> a{p.at("alpha").get<double>(), p.at("beta").get<double>(), p.at("gamma").get<double>(),
                                p.at("delta").get<double>()};
  const int n = p.at("n").get<int>();
  const std::array<cplx, 4> amps{a[0], a[1], a[2], a[3]};
  const ProcessTensor ups = pauli_superposition_process(amps, n);
  if (!require_causal(r, ups)) return;
  r.artifact("process_tensor", "process_tensor", to_json(ups));

  const Partition part = pauli_superposition_partition(ups);
  RVector probs(4);
  for (int c = 0; c < 4; ++c) probs(c) = a[c] * a[c];

  // Bell instrument on (3^i, 2^o): outcome c leaves A in |c⟩ and H in B_c.
  const MarkovOrderReport bell = has_markov_order(ups, bell_instrument(3), part);
  r.artifact("bell_splits", "markov_order_report", to_json(bell));
  for (int c = 0; c < 4; ++c) {
    const auto& row = bell.rows[c];
    r.equal("bell_weight_" + row.outcome, probs(c), row.weight, 1e-9);
    if (!row.vacuous) r.upper_bound("bell_mi_" + row.outcome, row.mi_bits, 1e-8);
  }
  r.boolean("bell_verdict", bell.verdict);

  r.equal("qcmi_bits", shannon_entropy(probs), qcmi(ups, part), 1e-9);

  // Measure 3^i in the computational basis after preparing |0⟩ on 2^o.
  InstrumentSequence incoherent;
  incoherent.spaces = {in_leg(3, 2), out_leg(2, 2)};
  for (int z = 0; z < 2; ++z) {
    CMatrix e = CMatrix::Zero(4, 4);
    e(2 * z, 2 * z) = 1.0;
    incoherent.elements.push_back(e);
    incoherent.labels.push_back("3i=" + std::to_string(z));
  }
  const MarkovOrderReport inc = has_markov_order(ups, incoherent, part);
  r.artifact("incoherent_splits", "markov_order_report", to_json(inc));
  int branches = 0;
  for (double q : probs) branches += q > 0 ? 1 : 0;
  if (branches > 1) {
    r.boolean("incoherent_verdict", inc.verdict, !(a[0] != 0 && a[3] != 0) && !(a[1] != 0 && a[2] != 0));
    if (std::abs(a[0] - 0.5) < 1e-12 && std::abs(a[1] - 0.5) < 1e-12 && std::abs(a[2] - 0.5) < 1e-12)
      r.lower_bound("incoherent_max_mi", max_mi(inc), 0.1);
  }

  const ProcessTensor mixed = pauli_superposition_process(amps, n, true);
  r.equal("ancilla_discarded_qcmi", 0.0, qcmi(mixed, pauli_superposition_partition(mixed)), 1e-9);

  r.boolean("is_markovian", is_markovian(ups), branches == 1);
}

}  // namespace detail

}  // namespace qmo
