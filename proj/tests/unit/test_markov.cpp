#include <doctest.h>

#include "oracles.hpp"
#include "qmo/dilation.hpp"
#include "qmo/markov.hpp"
#include "qmo/random.hpp"
#include "qmo/tensor.hpp"

using namespace qmo;

namespace {

const SpaceList kLegs{in_leg(3, 2), out_leg(2, 2), in_leg(2, 2), out_leg(1, 2), in_leg(1, 2)};

Partition standard_partition() { return {{in_leg(3, 2)}, {out_leg(2, 2), in_leg(2, 2)}, {out_leg(1, 2), in_leg(1, 2)}}; }

ProcessTensor markov_chain(Rng& rng) {
  return markovian_product({choi_of_map(rng.channel(2, 2, 2), 2, 2, 1), choi_of_map(rng.channel(2, 2, 3), 2, 2, 2)},
                           rng.density_matrix(2));
}

double mi_oracle(const CMatrix& j, int da, int db) {
  return oracle::entropy_bits(oracle::ptrace_keep(j, {da, db}, {0})) +
         oracle::entropy_bits(oracle::ptrace_keep(j, {da, db}, {1})) - oracle::entropy_bits(j);
}

}  // namespace

TEST_CASE("mutual information and product distance") {
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0;
  CHECK(mutual_information(bell * bell.adjoint(), 2, 2) == doctest::Approx(2.0).epsilon(1e-12));
  CMatrix cl = CMatrix::Zero(4, 4);
  cl(0, 0) = cl(3, 3) = 0.5;
  CHECK(mutual_information(cl, 2, 2) == doctest::Approx(1.0).epsilon(1e-12));
  Rng rng(1);
  const CMatrix prod = oracle::kron(rng.density_matrix(2), rng.density_matrix(3));
  CHECK(std::abs(mutual_information(prod, 2, 3)) < 1e-12);
  CHECK(product_distance(prod, 2, 3) < 1e-13);
  CHECK(product_distance(cl, 2, 2) > 0.1);
  const CMatrix j = rng.density_matrix(6);
  CHECK(mutual_information(j, 3, 2) == doctest::Approx(mi_oracle(j, 3, 2)).epsilon(1e-9));
  // Scale does not matter.
  CHECK(mutual_information(5.0 * j, 3, 2) == doctest::Approx(mi_oracle(j, 3, 2)).epsilon(1e-9));
}

TEST_CASE("Markovian processes split for any instrument on the memory") {
  Rng rng(2);
  const ProcessTensor ups = markov_chain(rng);
  const Partition part = standard_partition();
  const auto cb = causal_break({{2, sic_states(), sic_povm()}});
  const MarkovOrderReport rep = has_markov_order(ups, cb, part);
  CHECK(rep.verdict);
  CHECK(rep.rows.size() == 16);
  double total = 0;
  for (const auto& row : rep.rows) {
    CHECK(row.mi_bits < 1e-9);
    total += row.weight;
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(is_markovian(ups));
}

TEST_CASE("conditional splits carry the Born weights") {
  Rng rng(3);
  const ProcessTensor ups = from_dilation(random_dilation(rng, 2, 2, 3), 3);
  const Partition part = standard_partition();
  const auto cb = causal_break({{2, sic_states(), sic_povm()}});
  const auto splits = condition(ups, cb, part);
  double total = 0;
  for (std::size_t x = 0; x < splits.size(); ++x) {
    const auto& s = splits[x];
    // Oracle: tr[(O_x ⊗ 1) Υ] with O_x padded by identities; the open 1o leg
    // still carries an identity, hence the division by its dimension.
    const CMatrix reordered = reorder(ups.op, ups.spaces, {out_leg(2, 2), in_leg(2, 2), in_leg(3, 2), out_leg(1, 2), in_leg(1, 2)});
    const CMatrix big = oracle::kron(cb.elements[x], CMatrix::Identity(8, 8));
    const double p = (big * reordered).trace().real() / 2.0;
    CHECK(s.weight == doctest::Approx(p).epsilon(1e-10));
    CHECK(std::abs(s.joint_fh.op.trace().real() - s.trace) < 1e-12);
    total += s.weight;
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK_FALSE(is_markovian(ups));
}

TEST_CASE("zero-probability outcomes are vacuous") {
  Rng rng(4);
  // The process map into 2i always prepares |1⟩.
  const CMatrix k0 = CVector::Unit(2, 1) * CVector::Unit(2, 0).adjoint();
  const CMatrix k1 = CVector::Unit(2, 1) * CVector::Unit(2, 1).adjoint();
  const ProcessTensor ups = markovian_product(
      {choi_of_map({k0, k1}, 2, 2, 1), choi_of_map(rng.channel(2, 2, 2), 2, 2, 2)}, rng.density_matrix(2));
  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = p1(1, 1) = 1.0;
  const auto seq = povm_instrument({p0, p1}, in_leg(2, 2));
  const Partition part{{in_leg(3, 2), out_leg(2, 2)}, {in_leg(2, 2)}, {out_leg(1, 2), in_leg(1, 2)}};
  const MarkovOrderReport rep = has_markov_order(ups, seq, part);
  CHECK(rep.rows[0].vacuous);
  CHECK_FALSE(rep.rows[1].vacuous);
  CHECK(rep.verdict);
}

TEST_CASE("reconstruction from IC splits and from complement terms") {
  Rng rng(5);
  const Partition part = standard_partition();
  for (int trial = 0; trial < 3; ++trial) {
    const ProcessTensor ups = from_dilation(random_dilation(rng, 2, 2, 3), 3);
    // IC causal break on M.
    const auto cb = causal_break({{2, sic_states(), sic_povm()}});
    const auto splits = condition(ups, cb, part);
    std::vector<CMatrix> first;
    for (const auto& s : splits) first.push_back(s.joint_fh.op);
    const auto duals = dual_set(cb.elements).duals;
    const CMatrix rec = reconstruct_joint(first, duals, {}, {}, part, ups.spaces);
    CHECK((rec - ups.op).norm() / ups.op.norm() < 1e-10);

    // Trash-and-prepare plus the complement of its span.
    const auto tp = trash_and_prepare({rng.density_matrix(2)}, {2});
    const DualSet ds = dual_set(tp.elements);
    const ComplementTerms ct = extract_complement_coefficients(ups, tp.elements, ds.complement_basis, part);
    CHECK(ct.coefficients.size() == 15);
    const auto tsplit = condition(ups, tp, part);
    const CMatrix rec2 = reconstruct_joint({tsplit[0].joint_fh.op}, ds.duals, ct.coefficients, ct.duals, part, ups.spaces);
    CHECK((rec2 - ups.op).norm() / ups.op.norm() < 1e-10);
  }
}

TEST_CASE("product splits reconstruct a Markovian process") {
  Rng rng(6);
  const ProcessTensor ups = markov_chain(rng);
  const Partition part = standard_partition();
  const auto cb = causal_break({{2, sic_states(), sic_povm()}});
  std::vector<std::pair<CMatrix, CMatrix>> prods;
  for (const auto& s : condition(ups, cb, part)) prods.emplace_back(s.future.op, s.history.op);
  const CMatrix rec = reconstruct_from_splits(prods, dual_set(cb.elements).duals, {}, {}, part, ups.spaces);
  CHECK((rec - ups.op).norm() / ups.op.norm() < 1e-10);
}
