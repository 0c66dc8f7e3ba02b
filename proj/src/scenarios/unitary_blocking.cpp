#include "common.hpp"

#include "qmo/dilation.hpp"
#include "qmo/random.hpp"
#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <cmath>

namespace qmo {

namespace {

constexpr int kD = 2;  // S, E and A are qubits

CMatrix bell_projector(int b) {
  static const double v[4][4] = {{1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, -1, 0}, {1, 0, 0, -1}};
  CVector x(4);
  for (int i = 0; i < 4; ++i) x(i) = v[b][i] / std::sqrt(2.0);
  return x * x.adjoint();
}

CMatrix ket_bra(int d, int r, int c) {
  CMatrix m = CMatrix::Zero(d, d);
  m(r, c) = 1.0;
  return m;
}

// Kraus set on (A, S, C, E). Outcome ψ (b = 0) advances the counter; the
// ℓ-th consecutive ψ resets E to τ and the counter to 0. Any other outcome
// resets the counter only.
std::vector<CMatrix> cutting_kraus(int ell, const CMatrix& tau) {
  const auto e = herm_eig(tau);
  std::vector<CMatrix> reset;
  for (long i = 0; i < e.values.size(); ++i) {
    if (e.values(i) <= 1e-15) continue;
    for (int m = 0; m < kD; ++m) {
      CMatrix k = CMatrix::Zero(kD, kD);
      k.col(m) = std::sqrt(e.values(i)) * e.vectors.col(i);
      reset.push_back(k);
    }
  }
  const CMatrix id = CMatrix::Identity(kD, kD);
  std::vector<CMatrix> out;
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < ell; ++c) {
      const CMatrix pb = bell_projector(b);
      if (b == 0 && c + 1 == ell) {
        for (const auto& r : reset) out.push_back(kron(kron(pb, ket_bra(ell, 0, c)), r));
      } else {
        const int next = b == 0 ? c + 1 : 0;
        out.push_back(kron(kron(pb, ket_bra(ell, next, c)), id));
      }
    }
  return out;
}

struct Example1 {
  Dilation dilation;
  std::vector<CMatrix> vs;
  CMatrix fresh;  // future system state after a cut
};

Example1 build_example1(int ell, std::uint64_t seed, bool identity_vs, const CMatrix& tau) {
  if (ell < 1 || ell > 2) throw InvalidArgument("unitary_blocking: ell must be 1 or 2");
  Rng rng(seed);
  Example1 ex;
  const CMatrix w1 = rng.unitary(kD * kD), w2 = rng.unitary(kD * kD);
  std::vector<CMatrix> us;  // U_2 … U_{ℓ+1} on (E, A, S)
  for (int j = 0; j < ell; ++j) {
    us.push_back(rng.unitary(kD * kD * kD));
    ex.vs.push_back(identity_vs ? CMatrix(CMatrix::Identity(kD, kD)) : rng.unitary(kD));
  }
  CVector psi = CVector::Zero(kD * kD);
  for (int x = 0; x < kD; ++x) psi(x * kD + x) = 1.0 / std::sqrt(static_cast<double>(kD));
  const CMatrix psi_as = psi * psi.adjoint();

  Dilation& d = ex.dilation;
  d.system_dim = kD;
  d.env_names = {"E", "C"};
  d.env_dims = {kD, ell};
  d.initial = kron(rng.density_matrix(kD * kD), ket_bra(ell, 0, 0));
  const auto cut = cutting_kraus(ell, tau);
  const std::vector<std::string> eas{"E", "A", "S"};

  d.intervals.push_back({DilationAction::unitary({"S", "E"}, w1), DilationAction::discard({"S"}),
                         DilationAction::add({"A", "S"}, {kD, kD}, psi_as), DilationAction::unitary(eas, us[0])});
  for (int j = 0; j < ell; ++j) {
    std::vector<DilationAction> iv{DilationAction::unitary({"S"}, ex.vs[j].adjoint()),
                                   DilationAction::unitary(eas, us[j].adjoint()),
                                   DilationAction::kraus({"A", "S", "C", "E"}, cut, "cut"),
                                   DilationAction::discard({"A", "S"})};
    if (j + 1 < ell) {
      iv.push_back(DilationAction::add({"A", "S"}, {kD, kD}, psi_as));
      iv.push_back(DilationAction::unitary(eas, us[j + 1]));
    } else {
      iv.push_back(DilationAction::add({"S"}, {kD}, ket_bra(kD, 0, 0)));
      iv.push_back(DilationAction::unitary({"S", "E"}, w2));
    }
    d.intervals.push_back(iv);
  }
  const CMatrix joint = w2 * kron(ket_bra(kD, 0, 0), tau) * w2.adjoint();
  ex.fresh = partial_trace(joint, Dims{kD, kD}, {1});
  return ex;
}

CMatrix parse_tau(const std::string& kind) {
  if (kind == "mixed") return CMatrix::Identity(kD, kD) / static_cast<double>(kD);
  if (kind == "pure") return ket_bra(kD, 0, 0);
  throw InvalidArgument("unitary_blocking: tau must be 'mixed' or 'pure'");
}

Partition example1_partition(int ell) {
  Partition p;
  p.F = {in_leg(ell + 2, kD)};
  for (int j = ell + 1; j >= 2; --j) {
    p.M.push_back(out_leg(j, kD));
    p.M.push_back(in_leg(j, kD));
  }
  p.H = {out_leg(1, kD), in_leg(1, kD)};
  return p;
}

std::vector<int> memory_steps(int ell) {
  std::vector<int> s;
  for (int j = ell + 1; j >= 2; --j) s.push_back(j);
  return s;
}

// vs[j] belongs to step j + 2; unitary_sequence lists steps latest first.
InstrumentSequence sequence_of(const std::vector<CMatrix>& vs) {
  return unitary_sequence(std::vector<CMatrix>(vs.rbegin(), vs.rend()), memory_steps(static_cast<int>(vs.size())));
}

}  // namespace

UnitaryBlockingModel unitary_blocking_model(int ell, std::uint64_t seed) {
  const CMatrix tau = parse_tau("mixed");
  const Example1 ex = build_example1(ell, seed, false, tau);
  UnitaryBlockingModel m;
  m.upsilon = from_dilation(ex.dilation, ell + 2);
  m.correct_vs = ex.vs;
  m.partition = example1_partition(ell);
  m.fresh_future = {ex.fresh, {in_leg(ell + 2, kD)}};
  return m;
}

namespace detail {

void unitary_blocking(const json& p, ScenarioReport& r) {
  const int ell = p.at("ell").get<int>();
  const std::uint64_t seed = p.at("seed").get<std::uint64_t>();
  const CMatrix tau = parse_tau(p.at("tau").get<std::string>());
  const Example1 ex = build_example1(ell, seed, p.at("identity_v").get<bool>(), tau);
  const int n = ell + 2;
  const ProcessTensor ups = from_dilation(ex.dilation, n);
  if (!require_causal(r, ups)) return;
  r.artifact("process_tensor", "process_tensor", to_json(ups));
  const Partition part = example1_partition(ell);
  const int df = kD, dh = kD * kD;

  // (a) correct sequence.
  const InstrumentSequence good = sequence_of(ex.vs);
  const MarkovOrderReport rep = has_markov_order(ups, good, part);
  r.artifact("correct_sequence_split", "markov_order_report", to_json(rep));
  r.upper_bound("correct_sequence_mi", rep.rows.at(0).mi_bits, 1e-8);
  r.boolean("correct_sequence_verdict", rep.verdict);

  // Plugging the unitaries into the dilation gives the same (F, H) operator.
  std::map<int, std::vector<CMatrix>> plugged;
  for (int j = 0; j < ell; ++j) plugged[j + 2] = {ex.vs[j]};
  const ProcessTensor direct = from_dilation(ex.dilation, n, plugged);
  const auto split = condition(ups, good, part).at(0);
  SpaceList fh = part.F;
  fh.insert(fh.end(), part.H.begin(), part.H.end());
  r.upper_bound("dilation_vs_contraction",
                (reorder(direct.op, direct.spaces, fh) - split.joint_fh.op).norm() / split.joint_fh.op.norm(), 1e-9);
  r.upper_bound("future_is_fresh", (split.future.op / split.trace - ex.fresh).norm(), 1e-9);

  // (b) wrong sequence σx·V.
  std::vector<CMatrix> wrong;
  for (const auto& v : ex.vs) wrong.push_back(pauli(1) * v);
  const MarkovOrderReport bad = has_markov_order(ups, sequence_of(wrong), part);
  r.lower_bound("wrong_sequence_mi", bad.rows.at(0).mi_bits, 1e-4);
  r.boolean("wrong_sequence_verdict", bad.verdict, false);

  // (c) leading term J ⊗ Δ with Δ = O / tr(O²) projected on Υ'_F ⊗ V' ⊗ Υ_H, V' = O / d^ℓ.
  const CMatrix o = reorder(good.elements[0], good.spaces, part.M);
  const double d_ell = std::pow(static_cast<double>(kD), ell);
  const CMatrix delta = o / (o * o).trace().real();
  const CMatrix hist = marginal(ups.op, ups.spaces, part.H) / d_ell;
  // J on (F, H) → J ⊗ Δ on (F, M, H).
  const CMatrix first = permute_subsystems(kron(split.joint_fh.op, delta), Dims{df, dh, static_cast<int>(o.rows())},
                                           {0, 2, 1});
  const CMatrix model = kron(kron(ex.fresh, CMatrix(o / d_ell)), hist);
  const double coeff = (model.adjoint() * first).trace().real() / model.squaredNorm();
  r.equal("leading_coefficient", 1.0 / d_ell, coeff, 1e-9);
  r.upper_bound("leading_term_residual", (first - coeff * model).norm() / first.norm(), 1e-9);

  r.boolean("is_markovian", is_markovian(ups), false);
}

}  // namespace detail

}  // namespace qmo
