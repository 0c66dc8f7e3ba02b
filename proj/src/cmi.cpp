#include "qmo/cmi.hpp"

#include "qmo/random.hpp"
#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <cmath>
#include <numeric>

namespace qmo {

QcmiTerms qcmi_terms(const ProcessTensor& upsilon, const Partition& part, double tol) {
  part.validate_against(upsilon.spaces);
  auto entropy_of = [&](const SpaceList& keep) {
    if (keep.empty()) return 0.0;
    return von_neumann_entropy(marginal(upsilon.op, upsilon.spaces, keep), tol);
  };
  SpaceList fm = part.F, mh = part.M;
  fm.insert(fm.end(), part.M.begin(), part.M.end());
  mh.insert(mh.end(), part.H.begin(), part.H.end());
  QcmiTerms t;
  t.s_fm = entropy_of(fm);
  t.s_mh = entropy_of(mh);
  t.s_fmh = von_neumann_entropy(upsilon.op, tol);
  t.s_m = entropy_of(part.M);
  t.raw = t.s_fm + t.s_mh - t.s_fmh - t.s_m;
  t.value = std::max(0.0, t.raw);
  return t;
}

double qcmi(const ProcessTensor& upsilon, const Partition& part, double tol) {
  const QcmiTerms t = qcmi_terms(upsilon, part, tol);
  if (t.raw < -1e-8) throw Error("qcmi: negative conditional mutual information " + std::to_string(t.raw));
  return t.value;
}

ProcessTensor build_vanishing_qcmi(const BlockDecomposition& bd, double causality_tol) {
  if (bd.blocks.empty()) throw InvalidArgument("build_vanishing_qcmi: no blocks");
  const long df = total_dim(bd.F), dm = total_dim(bd.M), dh = total_dim(bd.H);
  const long d = df * dm * dh;
  guard_dim(d, "build_vanishing_qcmi");
  double psum = 0.0;
  for (std::size_t a = 0; a < bd.blocks.size(); ++a) {
    const Block& b = bd.blocks[a];
    psum += b.probability;
    if (b.probability < 0) throw InvalidArgument("build_vanishing_qcmi: negative block probability");
    if (b.isometry.rows() != dm || b.isometry.cols() != static_cast<long>(b.dim_left) * b.dim_right)
      throw DimensionError("build_vanishing_qcmi: isometry shape");
    if (b.left.rows() != df * b.dim_left || b.right.rows() != static_cast<long>(b.dim_right) * dh)
      throw DimensionError("build_vanishing_qcmi: factor shape");
    const long k = b.isometry.cols();
    if ((b.isometry.adjoint() * b.isometry - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10)
      throw InvalidArgument("build_vanishing_qcmi: embedding is not an isometry");
    if (!is_psd(b.left) || !is_psd(b.right)) throw InvalidArgument("build_vanishing_qcmi: block factor not PSD");
    for (std::size_t c = a + 1; c < bd.blocks.size(); ++c)
      if ((b.isometry.adjoint() * bd.blocks[c].isometry).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidArgument("build_vanishing_qcmi: block subspaces are not orthogonal");
  }
  if (std::abs(psum - 1.0) > 1e-10) throw InvalidArgument("build_vanishing_qcmi: probabilities do not sum to 1");

  CMatrix acc = CMatrix::Zero(d, d);
  for (const Block& b : bd.blocks) {
    const CMatrix w = kron(CMatrix::Identity(df, df), kron(b.isometry, CMatrix::Identity(dh, dh)));
    acc += b.probability * (w * kron(b.left, b.right) * w.adjoint());
  }
  SpaceList spaces = bd.F;
  spaces.insert(spaces.end(), bd.M.begin(), bd.M.end());
  spaces.insert(spaces.end(), bd.H.begin(), bd.H.end());
  const SpaceList canon = canonical_order(spaces);
  ProcessTensor ups{reorder(acc, spaces, canon), canon};
  const CausalityReport rep = check_causality(ups, causality_tol);
  if (!rep.pass) throw CausalityError("build_vanishing_qcmi: assembled operator is not causal: " + rep.diagnostics);
  return ups;
}

InstrumentSequence projector_blocking_instrument(const BlockDecomposition& bd) {
  InstrumentSequence seq;
  seq.spaces = bd.M;
  for (std::size_t m = 0; m < bd.blocks.size(); ++m) {
    const CMatrix& v = bd.blocks[m].isometry;
    seq.elements.push_back(v * v.adjoint());
    seq.labels.push_back("block=" + std::to_string(m));
  }
  return seq;
}

namespace {

// Random comb on (late_in, mid_out, early_in): an early state correlated with
// a hidden register, then a channel from (mid_out, hidden) into late_in.
CMatrix random_comb(Rng& rng, int late, int mid, int early) {
  const int hidden = 2;
  const CMatrix omega = rng.density_matrix(hidden * early);
  CVector psi = CVector::Zero(mid * mid);
  for (int k = 0; k < mid; ++k) psi(k * mid + k) = 1.0;
  const CMatrix x = kron(CMatrix(psi * psi.adjoint()), omega);  // [R, S, E', early]
  const int count = (mid * hidden + late - 1) / late + 1;
  const auto kraus = rng.channel(mid * hidden, late, count);
  CMatrix out = CMatrix::Zero(static_cast<long>(mid) * late * early, static_cast<long>(mid) * late * early);
  for (const auto& k : kraus) {
    const CMatrix w = kron(CMatrix::Identity(mid, mid), kron(k, CMatrix::Identity(early, early)));
    out += w * x * w.adjoint();
  }
  // [R=mid, late, early] -> [late, mid, early]
  return permute_subsystems(out, Dims{mid, late, early}, {1, 0, 2});
}

}  // namespace

BlockDecomposition random_block_decomposition(std::uint64_t seed) {
  Rng rng(seed);
  struct Shape {
    int dim_m;
    std::vector<std::pair<int, int>> blocks;
  };
  const Shape shapes[] = {{2, {{1, 1}, {1, 1}}},         {3, {{2, 1}, {1, 1}}}, {3, {{1, 2}, {1, 1}}},
                          {4, {{2, 2}}},                 {4, {{1, 2}, {2, 1}}}, {4, {{1, 1}, {1, 1}, {2, 1}}}};
  const Shape& shape = shapes[seed % 6];
  BlockDecomposition bd;
  bd.F = {in_leg(3, 2), out_leg(2, 2)};
  bd.M = {in_leg(2, shape.dim_m)};
  bd.H = {out_leg(1, 2), in_leg(1, 2)};
  const CMatrix u = rng.unitary(shape.dim_m);
  std::vector<double> w;
  for (std::size_t k = 0; k < shape.blocks.size(); ++k) w.push_back(0.2 + rng.uniform());
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  int col = 0;
  for (std::size_t k = 0; k < shape.blocks.size(); ++k) {
    const auto [dl, dr] = shape.blocks[k];
    Block b;
    b.probability = w[k] / wsum;
    b.dim_left = dl;
    b.dim_right = dr;
    b.isometry = u.middleCols(col, dl * dr);
    col += dl * dr;
    b.left = random_comb(rng, 2, 2, dl);
    b.right = random_comb(rng, dr, 2, 2);
    bd.blocks.push_back(b);
  }
  return bd;
}

}  // namespace qmo
