#include "common.hpp"

#include "qmo/duals.hpp"
#include "qmo/random.hpp"
#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <cmath>

namespace qmo {

namespace {

CMatrix mix(const CMatrix& pure, double t) {
  const long d = pure.rows();
  return (1.0 - t) * CMatrix::Identity(d, d) / static_cast<double>(d) + t * pure;
}

std::vector<CMatrix> transposed(const std::vector<CMatrix>& v) {
  std::vector<CMatrix> out;
  for (const auto& m : v) out.push_back(m.transpose());
  return out;
}

// Largest t in [0, 1] with build(t) PSD, by bisection; build(0) must be PSD.
template <typename F>
double bisect_psd(F build) {
  if (min_eigenvalue(build(1.0)) >= 0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (min_eigenvalue(build(mid)) >= 0 ? lo : hi) = mid;
  }
  return lo;
}

const SpaceLabel kY = anc_leg("Y", 1, 2);
// Stay strictly inside the PSD region found by bisection.
constexpr double kBackoff = 0.99;

}  // namespace

IcCausalBreakModel ic_causal_break_model(std::uint64_t seed) {
  Rng rng(seed);
  IcCausalBreakModel m;
  // Y and 1i families are seeded rotations of the transposed SIC states; the
  // frame identity keeps the state positive for a much larger ε than
  // independent random states would, which keeps the QCMI visible.
  const CMatrix u = rng.unitary(2), v = rng.unitary(2);
  std::vector<CMatrix> pure_y, pure_1, pure_3;
  for (const auto& s : sic_states()) {
    pure_y.push_back(u * s.transpose() * u.adjoint());
    pure_1.push_back(v * s.transpose() * v.adjoint());
  }
  for (int k = 0; k < 64; ++k) {
    const CVector c = rng.pure_state(2);
    pure_3.push_back(c * c.adjoint());
  }
  const auto delta = dual_set(sic_povm()).duals;  // tr(Π_y Δ_y') = δ

  // State on (Y, 2i, 1i).
  auto state = [&](double t) {
    CMatrix rho = CMatrix::Zero(8, 8);
    for (int y = 0; y < 4; ++y) rho += 0.25 * kron(kron(mix(pure_y[y], t), delta[y]), mix(pure_1[y], t));
    return rho;
  };
  const double t_max = bisect_psd(state);
  if (t_max < 1e-6) throw NotPsdError("ic_causal_break: no mixing weight makes the initial state positive", t_max);
  m.epsilon = kBackoff * t_max;
  for (int y = 0; y < 4; ++y) {
    m.rho_y.push_back(mix(pure_y[y], m.epsilon));
    m.rho_1.push_back(mix(pure_1[y], m.epsilon));
  }
  const CMatrix rho = state(m.epsilon);

  // Map (Y, 2o, 1o) → 3i; preparations enter transposed in this convention.
  const auto d_y = dual_set(transposed(m.rho_y)).duals;
  const auto d_o = dual_set(transposed(sic_states())).duals;
  auto lambda = [&](double t) {
    CMatrix l = CMatrix::Zero(16, 16);
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        for (int z = 0; z < 4; ++z)
          l += kron(kron(kron(mix(pure_3[16 * x + 4 * y + z], t), d_y[y]), d_o[z]), d_o[x]);
    return l;
  };
  const double t3_max = bisect_psd(lambda);
  if (t3_max < 1e-6) throw NotPsdError("ic_causal_break: no mixing weight makes the map positive", t3_max);
  m.epsilon_out = kBackoff * t3_max;
  for (const auto& p : pure_3) m.rho_3.push_back(mix(p, m.epsilon_out));

  // Direct form on (3i, 2o, 2i, 1o, 1i).
  CMatrix ups = CMatrix::Zero(32, 32);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z)
        ups += 0.25 * kron(kron(kron(kron(m.rho_3[16 * x + 4 * y + z], d_o[z]), delta[y]), d_o[x]), m.rho_1[y]);
  const SpaceList legs{in_leg(3, 2), out_leg(2, 2), in_leg(2, 2), out_leg(1, 2), in_leg(1, 2)};
  m.upsilon = {ups, legs};

  const Labeled st{rho, {kY, in_leg(2, 2), in_leg(1, 2)}};
  const Labeled map{lambda(m.epsilon_out), {in_leg(3, 2), kY, out_leg(2, 2), out_leg(1, 2)}};
  const Labeled linked = link_product(st, map);
  m.linked = {reorder(linked.op, linked.spaces, legs), legs};
  return m;
}

Partition ic_causal_break_partition() {
  return {{in_leg(3, 2)}, {out_leg(2, 2), in_leg(2, 2), out_leg(1, 2)}, {in_leg(1, 2)}};
}

namespace detail {

void ic_causal_break(const json& p, ScenarioReport& r) {
  const std::uint64_t seed = p.at("seed").get<std::uint64_t>();
  const double cp = p.at("p").get<double>();
  if (cp < 0 || cp > 1) throw InvalidArgument("ic_causal_break: p must lie in [0, 1]");

  IcCausalBreakModel m;
  try {
    m = ic_causal_break_model(seed);
  } catch (const NotPsdError& e) {
    r.boolean("psd_search", false).note = e.what();
    return;
  }
  r.params["epsilon"] = m.epsilon;
  r.params["epsilon_out"] = m.epsilon_out;
  if (!require_causal(r, m.upsilon)) return;
  r.artifact("process_tensor", "process_tensor", to_json(m.upsilon));
  r.upper_bound("direct_vs_link_product", (m.upsilon.op - m.linked.op).norm() / m.upsilon.op.norm(), 1e-9);

  const Partition part = ic_causal_break_partition();
  const InstrumentSequence cb = causal_break({{2, sic_states(), sic_povm()}, {1, sic_states(), {}}});
  r.boolean("causal_break_is_ic", is_informationally_complete(cb).complete);
  r.equal("causal_break_outcomes", 64, static_cast<double>(cb.size()), 0);
  const MarkovOrderReport rep = has_markov_order(m.upsilon, cb, part, 1e-9, 1e-9);
  r.artifact("causal_break_splits", "markov_order_report", to_json(rep));
  r.boolean("causal_break_verdict", rep.verdict);
  r.upper_bound("causal_break_max_distance", max_distance(rep), 1e-9);

  // Each outcome (z at 2o, y at 2i, x at 1o) gives P(y) ρ3^(xyz) ⊗ ρ1^(y).
  const auto splits = condition(m.upsilon, cb, part);
  double dev = 0.0, wdev = 0.0;
  for (int z = 0; z < 4; ++z)
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) {
        const auto& s = splits[16 * z + 4 * y + x];
        wdev = std::max(wdev, std::abs(s.weight - 1.0 / 64.0));
        dev = std::max(dev, (s.future.op / s.trace - m.rho_3[16 * x + 4 * y + z]).norm());
        dev = std::max(dev, (s.history.op - m.rho_1[y]).norm());
      }
  r.upper_bound("causal_break_conditional_states", dev, 1e-9);
  r.upper_bound("causal_break_weights", wdev, 1e-9);

  // Coarse-grained preparation at 1o: p σ0 + (1−p) σ1, σ2, σ3.
  const auto sic = sic_states();
  const std::vector<CMatrix> coarse_preps{cp * sic[0] + (1 - cp) * sic[1], sic[2], sic[3]};
  InstrumentSequence coarse;
  coarse.spaces = cb.spaces;
  for (int z = 0; z < 4; ++z)
    for (int y = 0; y < 4; ++y)
      for (std::size_t w = 0; w < coarse_preps.size(); ++w) {
        coarse.elements.push_back(kron(kron(CMatrix(sic[z].transpose()) / 4.0, sic_povm()[y]),
                                       CMatrix(coarse_preps[w].transpose()) / 3.0));
        coarse.labels.push_back("2o=" + std::to_string(z) + ",2i=" + std::to_string(y) + ",1o=mix" + std::to_string(w));
      }
  r.boolean("coarse_instrument_valid", is_valid_sequence(coarse).valid);
  const MarkovOrderReport crep = has_markov_order(m.upsilon, coarse, part, 1e-9, 1e-9);
  r.boolean("coarse_preparation_verdict", crep.verdict);
  const auto csplits = condition(m.upsilon, coarse, part);
  double cdev = 0.0;
  for (int z = 0; z < 4; ++z)
    for (int y = 0; y < 4; ++y) {
      const auto& s = csplits[12 * z + 3 * y];
      const CMatrix expect = cp * m.rho_3[4 * y + z] + (1 - cp) * m.rho_3[16 + 4 * y + z];
      cdev = std::max(cdev, (s.future.op / s.trace - expect).norm());
    }
  r.upper_bound("coarse_preparation_future_mixture", cdev, 1e-9);

  // Measuring with a rotated SIC that is not dual to Δ correlates F and H.
  Rng rng(seed + 1);
  const CMatrix u = rng.unitary(2);
  std::vector<CMatrix> rotated;
  for (const auto& e : sic_povm()) rotated.push_back(u * e * u.adjoint());
  const MarkovOrderReport arep =
      has_markov_order(m.upsilon, causal_break({{2, sic_states(), rotated}, {1, sic_states(), {}}}), part);
  r.boolean("alternative_instrument_verdict", arep.verdict, false);
  r.lower_bound("alternative_instrument_max_mi", max_mi(arep), 1e-6);

  r.lower_bound("qcmi_bits", qcmi(m.upsilon, part), 1e-3);
  r.boolean("is_markovian", is_markovian(m.upsilon), false);
}

}  // namespace detail

}  // namespace qmo
