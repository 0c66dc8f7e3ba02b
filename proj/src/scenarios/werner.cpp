#include "common.hpp"

#include "qmo/duals.hpp"
#include "qmo/random.hpp"
#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <cmath>

namespace qmo {

namespace {

// Qubit operator placed on the {|0⟩, |1⟩} block of a qutrit.
CMatrix embed3(const CMatrix& a) {
  CMatrix out = CMatrix::Zero(3, 3);
  out.topLeftCorner(2, 2) = a;
  return out;
}

CMatrix level2() {
  CMatrix p = CMatrix::Zero(3, 3);
  p(2, 2) = 1.0;
  return p;
}

// Legs of ρ before the output identities: 3i, 1i, 2i.
const SpaceList& state_legs() {
  static const SpaceList s{in_leg(3, 2), in_leg(1, 2), in_leg(2, 3)};
  return s;
}

}  // namespace

CMatrix werner_state(int x, double r) {
  static const double v[4][4] = {{1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, 1, 0}, {0, 1, -1, 0}};
  CVector b(4);
  for (int i = 0; i < 4; ++i) b(i) = v[x][i] / std::sqrt(2.0);
  return r * CMatrix(b * b.adjoint()) + (1.0 - r) * CMatrix::Identity(4, 4) / 4.0;
}

CMatrix werner_mu(double r) {
  const auto duals = dual_set(sic_povm()).duals;
  CMatrix mu = CMatrix::Zero(12, 12);
  for (int x = 0; x < 4; ++x) mu += 0.25 * kron(werner_state(x, r), embed3(duals[x]));
  const double lo = min_eigenvalue(mu);
  if (lo < -1e-12) throw NotPsdError("werner: mixture is not positive for r = " + json(r).dump(), lo);
  return mu;
}

ProcessTensor werner_process(double q, double r, std::uint64_t seed) {
  if (q < 0 || q > 1) throw InvalidArgument("werner: q must lie in [0, 1]");
  if (r <= 0 || r >= 1) throw InvalidArgument("werner: r must lie in (0, 1)");
  Rng rng(seed);
  const CMatrix rho3 = rng.density_matrix(2), rho1 = rng.density_matrix(2);
  const CMatrix rho = q * werner_mu(r) + (1.0 - q) * kron(kron(rho3, rho1), level2());
  SpaceList spaces = state_legs();
  spaces.push_back(out_leg(2, 3));
  spaces.push_back(out_leg(1, 2));
  const SpaceList canon = canonical_order(spaces);
  return {reorder(kron(rho, CMatrix::Identity(6, 6)), spaces, canon), canon};
}

Partition werner_partition() {
  return {{in_leg(3, 2), out_leg(2, 3)}, {in_leg(2, 3)}, {out_leg(1, 2), in_leg(1, 2)}};
}

namespace detail {

namespace {

// I(3i:1i|2i) of μ computed on the state itself.
double mu_cmi(double r) {
  const CMatrix mu = werner_mu(r);
  const SpaceList& s = state_legs();
  auto ent = [&](const SpaceList& keep) { return von_neumann_entropy(marginal(mu, s, keep)); };
  return ent({s[0], s[2]}) + ent({s[1], s[2]}) - von_neumann_entropy(mu) - ent({s[2]});
}

// 2 − S(W) from the closed-form spectrum {(1+3r)/4, (1−r)/4 ×3}.
double werner_mi_closed_form(double r) {
  const double a = (1 + 3 * r) / 4, b = (1 - r) / 4;
  double s = 0.0;
  if (a > 0) s -= a * std::log2(a);
  if (b > 0) s -= 3 * b * std::log2(b);
  return 2.0 - s;
}

}  // namespace

void werner(const json& p, ScenarioReport& r) {
  const double q = p.at("q").get<double>();
  const double rr = p.at("r").get<double>();
  const std::uint64_t seed = p.at("seed").get<std::uint64_t>();
  if (q <= 0 || q >= 1) throw InvalidArgument("werner: q must lie in (0, 1)");
  if (rr <= 0 || rr >= 1) throw InvalidArgument("werner: r must lie in (0, 1)");

  auto psd_failure = [&](const std::string& name, double r_bad) {
    bool raised = false;
    std::string what;
    try {
      werner_process(q, r_bad, seed);
    } catch (const NotPsdError& e) {
      raised = true;
      what = "NotPsdError: min eigenvalue " + json(e.min_eigenvalue).dump();
    }
    r.expected_failure(name, "NotPsdError", raised, what);
  };

  if (rr > 1.0 / 3.0) {
    psd_failure("psd_violation", rr);
    r.notes.push_back("the mixture is positive only for r <= 1/3; no process was built");
    return;
  }

  const ProcessTensor ups = werner_process(q, rr, seed);
  if (!require_causal(r, ups)) return;
  r.artifact("process_tensor", "process_tensor", to_json(ups));
  const Partition part = werner_partition();

  const double value = qcmi(ups, part);
  r.equal("qcmi_equals_q", q, value, 1e-9);
  const double i_mu = mu_cmi(rr);
  r.equal("qcmi_equals_q_times_mu_cmi", q * i_mu, value, 1e-9);
  r.equal("qcmi_equals_q_at_r_one_third", q, qcmi(werner_process(q, 1.0 / 3.0, seed), part), 1e-9);

  const SpaceLabel leg = in_leg(2, 3);
  const MarkovOrderReport fuzzy =
      has_markov_order(ups, fuzzy_projector_instrument({CMatrix::Identity(3, 3) - level2(), level2()}, leg), part);
  r.artifact("fuzzy_splits", "markov_order_report", to_json(fuzzy));
  r.boolean("fuzzy_verdict", fuzzy.verdict);
  r.upper_bound("fuzzy_max_mi", max_mi(fuzzy), 1e-8);

  std::vector<CMatrix> sharp_povm;
  for (const auto& e : sic_povm()) sharp_povm.push_back(embed3(e));
  sharp_povm.push_back(level2());
  const MarkovOrderReport sharp = has_markov_order(ups, povm_instrument(sharp_povm, leg), part);
  r.artifact("sharp_splits", "markov_order_report", to_json(sharp));
  int correlated = 0;
  for (const auto& row : sharp.rows) correlated += row.mi_bits > 1e-10 ? 1 : 0;
  r.lower_bound("sharp_correlated_splits", correlated, 3.5);
  r.boolean("sharp_verdict", sharp.verdict, false);
  // Outcome x leaves W_x(r) ⊗ 1 on (F, H).
  const double closed = werner_mi_closed_form(rr);
  for (int x = 0; x < 4; ++x) {
    r.equal("sharp_split_mi_" + std::to_string(x), closed, sharp.rows[x].mi_bits, 1e-9);
    r.equal("werner_mi_entropy_module_" + std::to_string(x), closed, mutual_information(werner_state(x, rr), 2, 2),
            1e-9);
  }

  r.boolean("is_markovian", is_markovian(ups), false);
  psd_failure("psd_violation_r_0.34", 0.34);
}

}  // namespace detail

}  // namespace qmo
