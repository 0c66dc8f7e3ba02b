#include <doctest.h>

#include "oracles.hpp"
#include "qmo/collision.hpp"
#include "qmo/instruments.hpp"
#include "qmo/tensor.hpp"

using namespace qmo;

namespace {

double maxdiff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

CMatrix ket0() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

CMatrix run_channel(const std::vector<CMatrix>& ks, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(ks[0].rows(), ks[0].rows());
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

std::vector<std::pair<CMatrix, CMatrix>> pairs(Rng& rng, int n) {
  std::vector<std::pair<CMatrix, CMatrix>> out;
  for (int k = 0; k < n; ++k) {
    CMatrix a = rng.density_matrix(2);
    out.emplace_back(a, rng.density_matrix(2));
  }
  return out;
}

std::vector<CMatrix> states(Rng& rng, int n) {
  std::vector<CMatrix> out;
  for (int k = 0; k < n; ++k) out.push_back(rng.density_matrix(2));
  return out;
}

}  // namespace

TEST_CASE("swap gate and preparation Kraus sets") {
  Rng rng(1);
  const CMatrix a = rng.density_matrix(3), b = rng.density_matrix(3);
  const CMatrix sw = swap_gate(3);
  CHECK(maxdiff(sw * oracle::kron(a, b) * sw.adjoint(), oracle::kron(b, a)) < 1e-14);
  const CMatrix sigma = rng.density_matrix(2), rho = rng.density_matrix(2);
  CHECK(maxdiff(run_channel(prepare_kraus(sigma), rho), sigma) < 1e-13);
  const CMatrix e = sic_povm()[1];
  const double p = (e * rho).trace().real();
  CHECK(maxdiff(run_channel(measure_prepare_kraus(e, sigma), rho), p * sigma) < 1e-13);
}

TEST_CASE("trash-and-prepare blocks the nested history for every ell") {
  Rng rng(2);
  for (int ell = 1; ell <= 3; ++ell) {
    const CollisionModel m = repeated_nested_model(rng, ell);
    CHECK(history_dependence(m, ell + 1, states(rng, ell), pairs(rng, 4)) < 1e-10);
    // One step short of the window the history still leaks, except when
    // each ancilla meets the system only once.
    if (ell >= 2) CHECK(history_dependence(m, ell, states(rng, ell - 1), pairs(rng, 4)) > 1e-6);
  }
}

TEST_CASE("measuring inside the window breaks blocking at ell >= 2") {
  Rng rng(3);
  const CollisionModel m = repeated_nested_model(rng, 2);
  const auto rep = measurement_breaks_blocking(m, 3, states(rng, 2), sic_povm(), pairs(rng, 4));
  CHECK(rep.per_outcome.size() == 4);
  CHECK(rep.max_dependence > 1e-6);
}

TEST_CASE("collision simulation matches its dilation") {
  Rng rng(4);
  const CollisionModel m = repeated_nested_model(rng, 2);
  const int n = 3;
  const CMatrix rho0 = rng.density_matrix(2);
  std::vector<std::vector<CMatrix>> ops;
  for (int k = 0; k < n - 1; ++k) ops.push_back(rng.channel(2, 2, 2));
  const CollisionRun run = simulate(m, rho0, ops, n);
  // The dilation starts one step earlier: its first operation prepares ρ_0.
  std::vector<std::vector<CMatrix>> dops{prepare_kraus(rho0)};
  dops.insert(dops.end(), ops.begin(), ops.end());
  const Labeled sim = simulate_dilation(to_dilation(m, n, rng.density_matrix(2)), n + 1, dops);
  CHECK(maxdiff(sim.op, run.final_state) < 1e-12);
  CHECK(born_rule_self_test(to_dilation(m, n, rng.density_matrix(2)), n, rng, 2) < 1e-10);
}

TEST_CASE("swap-only memory map follows the swaps") {
  Rng rng(5);
  // Tracked by hand: ell = 1 and 3 hand the fresh ancilla to the system,
  // ell = 2 hands back the first preparation of the window.
  for (int ell = 1; ell <= 3; ++ell) {
    const MemoryMap mm = reduced_memory_map(swap_nested_model(ell), ell + 1, ell);
    const auto s = states(rng, ell);
    CHECK(maxdiff(mm(s), ell == 2 ? s[0] : ket0()) < 1e-10);
  }
}

TEST_CASE("memory maps are multilinear in the preparations") {
  Rng rng(6);
  const CollisionModel m = repeated_nested_model(rng, 2);
  const MemoryMap mm = reduced_memory_map(m, 3, 2);
  const auto s = states(rng, 2);
  std::vector<std::vector<CMatrix>> ops{prepare_kraus(s[0]), prepare_kraus(s[1])};
  const CMatrix direct = simulate(m, CMatrix::Identity(2, 2) / 2.0, ops, 3).final_state;
  CHECK(maxdiff(mm(s), direct) < 1e-10);
  CHECK_THROWS(mm({s[0]}));
}

TEST_CASE("swap chains keep infinite memory") {
  Rng rng(7);
  const MemoryWitness aa = infinite_memory_witness(ancilla_ancilla_model(), 4, rng, 3);
  CHECK(aa.infinite);
  CHECK(aa.residual < 1e-10);
  // Independent run: ρ_4 = ρ_0 whatever the intermediate channels do.
  const CMatrix rho0 = rng.density_matrix(2);
  std::vector<std::vector<CMatrix>> ops;
  for (int k = 0; k < 3; ++k) ops.push_back(rng.channel(2, 2, 2));
  CHECK(maxdiff(simulate(ancilla_ancilla_model(), rho0, ops, 4).final_state, rho0) < 1e-12);
  CHECK(infinite_memory_witness(correlated_env_model(), 4, rng, 3).infinite);
}

TEST_CASE("process-level split of the nested model is a product") {
  Rng rng(8);
  for (int ell = 1; ell <= 2; ++ell) {
    const CollisionModel m = repeated_nested_model(rng, ell);
    const ProcessSplit s = trash_prepare_split(m, states(rng, ell), rng.density_matrix(2));
    CHECK(s.mi_bits < 1e-10);
    CHECK(s.product_distance < 1e-8);
  }
}

TEST_CASE("collision model validation") {
  Rng rng(9);
  CollisionModel m = repeated_nested_model(rng, 2);
  m.tau = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(simulate(m, CMatrix::Identity(2, 2) / 2.0, {}, 1), InvalidArgument);
  const CollisionModel ok = repeated_nested_model(rng, 2);
  CHECK_THROWS_AS(simulate(ok, CMatrix::Identity(3, 3) / 3.0, {}, 1), DimensionError);
  CHECK_THROWS_AS(simulate(ok, CMatrix::Identity(2, 2) / 2.0, {}, 3), InvalidArgument);
  CHECK_THROWS_AS(reduced_memory_map(ancilla_ancilla_model(), 3, 2), InvalidArgument);
}
