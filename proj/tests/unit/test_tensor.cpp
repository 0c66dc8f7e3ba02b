#include <doctest.h>

#include "oracles.hpp"
#include "qmo/duals.hpp"
#include "qmo/instruments.hpp"
#include "qmo/random.hpp"
#include "qmo/spaces.hpp"
#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

using namespace qmo;

namespace {

CMatrix random_op(Rng& rng, long d) { return rng.ginibre(static_cast<int>(d), static_cast<int>(d)); }

double maxdiff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("kron matches the index formula") {
  Rng rng(1);
  const CMatrix a = rng.ginibre(2, 3), b = rng.ginibre(3, 2);
  CHECK(maxdiff(kron(a, b), oracle::kron(a, b)) < 1e-14);
}

TEST_CASE("swap of two factors exchanges rho and sigma") {
  Rng rng(2);
  const CMatrix rho = rng.density_matrix(2), sigma = rng.density_matrix(3);
  const CMatrix swapped = permute_subsystems(kron(rho, sigma), Dims{2, 3}, {1, 0});
  CHECK(maxdiff(swapped, kron(sigma, rho)) < 1e-14);
}

TEST_CASE("permutation, partial trace and partial transpose against loops") {
  Rng rng(3);
  const Dims dims{2, 3, 2};
  const CMatrix a = random_op(rng, 12);
  for (const std::vector<int>& p : {std::vector<int>{2, 0, 1}, {1, 2, 0}, {0, 2, 1}})
    CHECK(maxdiff(permute_subsystems(a, dims, p), oracle::permute(a, dims, p)) < 1e-14);
  CHECK(maxdiff(partial_trace(a, dims, {1}), oracle::ptrace_keep(a, dims, {0, 2})) < 1e-13);
  CHECK(maxdiff(partial_trace(a, dims, {0, 2}), oracle::ptrace_keep(a, dims, {1})) < 1e-13);
  CHECK(maxdiff(partial_trace_keep(a, dims, {2, 0}),
                oracle::permute(oracle::ptrace_keep(a, dims, {0, 2}), {2, 2}, {1, 0})) < 1e-13);
  CHECK(maxdiff(partial_transpose(a, dims, {1}), oracle::ptranspose(a, dims, {1})) < 1e-14);
  CHECK(maxdiff(partial_transpose(a, dims, {0, 2}), oracle::ptranspose(a, dims, {0, 2})) < 1e-14);
}

TEST_CASE("apply_kraus on a middle factor equals the padded product") {
  Rng rng(4);
  const Dims dims{2, 3, 2};
  const CMatrix a = rng.density_matrix(12);
  const auto ks = rng.channel(3, 3, 2);
  CMatrix expect = CMatrix::Zero(12, 12);
  const CMatrix i2 = CMatrix::Identity(2, 2);
  for (const auto& k : ks) {
    const CMatrix big = oracle::kron(oracle::kron(i2, k), i2);
    expect += big * a * big.adjoint();
  }
  CHECK(maxdiff(apply_kraus(a, dims, {1}, ks), expect) < 1e-13);
}

TEST_CASE("contract is tr_T[(O x 1) A]") {
  Rng rng(5);
  const Dims dims{2, 3};
  const CMatrix a = random_op(rng, 6), o = random_op(rng, 2);
  const CMatrix full = oracle::kron(o, CMatrix::Identity(3, 3)) * a;
  CHECK(maxdiff(contract(a, dims, {0}, o), oracle::ptrace_keep(full, {2, 3}, {1})) < 1e-13);
}

TEST_CASE("labels parse, print and order") {
  CHECK(parse_label("3i").name() == "3i");
  CHECK(parse_label("12o").leg == Leg::output);
  CHECK(parse_label("A@3").leg == Leg::ancillary);
  CHECK(parse_label("A@3").tag == "A");
  CHECK_THROWS(parse_label("x"));
  const SpaceList s{in_leg(1, 2), out_leg(1, 2), in_leg(2, 3), anc_leg("A", 2, 4)};
  const SpaceList c = canonical_order(s);
  CHECK(c[0].leg == Leg::ancillary);
  CHECK(c[1] == in_leg(2, 3));
  CHECK(c[2] == out_leg(1, 2));
  CHECK(c[3] == in_leg(1, 2));
  CHECK(total_dim(s) == 48);
  CHECK_THROWS_AS(index_of(s, in_leg(5, 2)), UnknownLabelError);
  CHECK_THROWS(validate({in_leg(1, 2), in_leg(1, 2)}, 4));
  CHECK_THROWS(validate({in_leg(1, 2)}, 3));
}

TEST_CASE("reorder round trips and marginals keep the requested order") {
  Rng rng(6);
  const SpaceList s{in_leg(2, 2), out_leg(1, 3), in_leg(1, 2)};
  const CMatrix a = rng.density_matrix(12);
  const SpaceList t{in_leg(1, 2), in_leg(2, 2), out_leg(1, 3)};
  CHECK(maxdiff(reorder(reorder(a, s, t), t, s), a) < 1e-15);
  CHECK(maxdiff(reorder(a, s, t), oracle::permute(a, {2, 3, 2}, {2, 0, 1})) < 1e-15);
  const CMatrix m = marginal(a, s, {in_leg(1, 2), in_leg(2, 2)});
  CHECK(maxdiff(m, oracle::permute(oracle::ptrace_keep(a, {2, 3, 2}, {0, 2}), {2, 2}, {1, 0})) < 1e-13);
}

TEST_CASE("entropies") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 0.5;
  d(1, 1) = 0.25;
  d(2, 2) = 0.25;
  CHECK(von_neumann_entropy(d) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(von_neumann_entropy(CMatrix::Identity(4, 4)) == doctest::Approx(2.0).epsilon(1e-12));
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  CHECK(std::abs(von_neumann_entropy(bell * bell.adjoint())) < 1e-12);
  RVector p(4);
  p << 0.5, 0.25, 0.125, 0.125;
  CHECK(shannon_entropy(p) == doctest::Approx(1.75).epsilon(1e-12));
  Rng rng(7);
  const CMatrix r = rng.density_matrix(4);
  CHECK(von_neumann_entropy(r) == doctest::Approx(oracle::entropy_bits(r)).epsilon(1e-10));
  CMatrix neg = CMatrix::Identity(2, 2);
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(von_neumann_entropy(neg), NotPsdError);
  CMatrix nh = CMatrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(herm_eig(nh), NotHermitianError);
}

TEST_CASE("hermitian basis and dual sets") {
  const auto basis = hermitian_basis(3);
  REQUIRE(basis.size() == 9);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      CHECK(std::abs((basis[i] * basis[j]).trace() - (i == j ? 1.0 : 0.0)) < 1e-14);
  Rng rng(8);
  const CMatrix h = rng.density_matrix(3);
  CHECK(maxdiff(from_hermitian_coordinates(hermitian_coordinates(h), 3), h) < 1e-14);

  const auto sic = sic_states();
  const DualSet ds = dual_set(sic);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) CHECK(std::abs((sic[x] * ds.duals[y]).trace() - (x == y ? 1.0 : 0.0)) < 1e-12);
  CHECK(ds.complement_basis.empty());
  // Tetrahedron states have tr(s_x s_y) = 1/3 off the diagonal, so the
  // duals are (3 s_y − 1) / 2.
  for (int y = 0; y < 4; ++y)
    CHECK(maxdiff(ds.duals[y], (3.0 * sic[y] - CMatrix::Identity(2, 2)) / 2.0) < 1e-12);

  const std::vector<CMatrix> two{sic[0], sic[1]};
  const DualSet part = dual_set(two);
  CHECK(part.complement_basis.size() == 2);
  for (const auto& c : part.complement_basis)
    for (const auto& o : two) CHECK(std::abs((c * o).trace()) < 1e-12);
  CHECK(span_rank(two) == 2);
  CHECK_THROWS_AS(dual_set({sic[0], sic[0]}), LinearDependenceError);
}

TEST_CASE("random objects are valid and reproducible") {
  Rng a(9), b(9);
  const CMatrix u = a.unitary(3);
  CHECK(maxdiff(u * u.adjoint(), CMatrix::Identity(3, 3)) < 1e-13);
  CHECK(maxdiff(u, b.unitary(3)) == 0.0);
  const CMatrix rho = a.density_matrix(4, 2);
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-13);
  CHECK(min_eigenvalue(rho) > -1e-13);
  CHECK(eigenvalues(rho)(1) < 1e-12);  // rank 2: two zero eigenvalues
  CMatrix s = CMatrix::Zero(2, 2);
  for (const auto& k : a.channel(2, 2, 3)) s += k.adjoint() * k;
  CHECK(maxdiff(s, CMatrix::Identity(2, 2)) < 1e-13);
}

TEST_CASE("dimension guard") { CHECK_THROWS_AS(guard_dim(kMaxDim + 1, "test"), DimensionError); }
