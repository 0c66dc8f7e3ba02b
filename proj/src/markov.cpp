#include "qmo/markov.hpp"

#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace qmo {

namespace {

SpaceList concat(const SpaceList& a, const SpaceList& b) {
  SpaceList out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Contraction with one M operator, returned on (F, H).
CMatrix pair_with(const ProcessTensor& ups, const CMatrix& o, const Partition& part) {
  const Labeled j = contract(ups.op, ups.spaces, o, part.M);
  return reorder(j.op, j.spaces, concat(part.F, part.H));
}

}  // namespace

std::vector<ConditionalSplit> condition(const ProcessTensor& upsilon, const InstrumentSequence& seq,
                                        const Partition& part, double tol) {
  part.validate_against(upsilon.spaces);
  if (seq.spaces.size() != part.M.size()) throw InvalidArgument("condition: instrument legs differ from M");
  for (const auto& s : part.M) index_of(seq.spaces, s);
  const SpaceList fh = concat(part.F, part.H);
  const Dims dims{static_cast<int>(total_dim(part.F)), static_cast<int>(total_dim(part.H))};
  std::vector<ConditionalSplit> out;
  double total = 0.0;
  const double scale = std::max(1.0, upsilon.trace());
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const CMatrix o = reorder(seq.elements[k], seq.spaces, part.M);
    ConditionalSplit s;
    s.label = k < seq.labels.size() ? seq.labels[k] : std::to_string(k);
    s.joint_fh = {pair_with(upsilon, o, part), fh};
    const double lo = min_eigenvalue(s.joint_fh.op);
    if (lo < -tol * scale) throw NotPsdError("condition: negative joint for outcome " + s.label, lo);
    s.trace = s.joint_fh.op.trace().real();
    s.future = {partial_trace(s.joint_fh.op, dims, {1}), part.F};
    const CMatrix hist = partial_trace(s.joint_fh.op, dims, {0});
    s.history = {s.trace > 0 ? CMatrix(hist / s.trace) : CMatrix(CMatrix::Zero(hist.rows(), hist.cols())), part.H};
    total += s.trace;
    out.push_back(std::move(s));
  }
  for (auto& s : out) s.weight = total > 0 ? s.trace / total : 0.0;
  return out;
}

double mutual_information(const CMatrix& joint, int dim_a, int dim_b, double tol) {
  if (static_cast<long>(dim_a) * dim_b != joint.rows()) throw DimensionError("mutual_information: split mismatch");
  const Dims d{dim_a, dim_b};
  const double sa = von_neumann_entropy(partial_trace(joint, d, {1}), tol);
  const double sb = von_neumann_entropy(partial_trace(joint, d, {0}), tol);
  const double sab = von_neumann_entropy(joint, tol);
  return std::max(0.0, sa + sb - sab);
}

double product_distance(const CMatrix& joint, int dim_a, int dim_b) {
  const Dims d{dim_a, dim_b};
  const double tr = joint.trace().real();
  const double nrm = joint.norm();
  if (nrm == 0.0) return 0.0;
  const CMatrix prod = kron(partial_trace(joint, d, {1}), partial_trace(joint, d, {0})) / tr;
  return (joint - prod).norm() / nrm;
}

MarkovOrderReport has_markov_order(const ProcessTensor& upsilon, const InstrumentSequence& seq, const Partition& part,
                                   double tol_mi, double tol_dist) {
  MarkovOrderReport rep;
  rep.tol_mi = tol_mi;
  rep.tol_dist = tol_dist;
  const auto splits = condition(upsilon, seq, part);
  const int df = static_cast<int>(total_dim(part.F)), dh = static_cast<int>(total_dim(part.H));
  for (const auto& s : splits) {
    MarkovOrderRow row;
    row.outcome = s.label;
    row.weight = s.weight;
    if (s.weight < 1e-12 || s.trace < 1e-12) {
      row.vacuous = true;
    } else {
      row.mi_bits = mutual_information(s.joint_fh.op, df, dh);
      row.product_distance = product_distance(s.joint_fh.op, df, dh);
    }
    rep.verdict = rep.verdict && row.mi_bits <= tol_mi && row.product_distance <= tol_dist;
    rep.rows.push_back(row);
  }
  return rep;
}

double markovian_distance(const ProcessTensor& upsilon) {
  validate(upsilon.spaces, upsilon.op.rows());
  const auto groups = step_groups(upsilon.spaces);
  CMatrix prod = CMatrix::Ones(1, 1);
  SpaceList order;
  for (const auto& g : groups) {
    CMatrix m = marginal(upsilon.op, upsilon.spaces, g);
    const double tr = m.trace().real();
    if (tr <= 0) throw InvalidArgument("is_markovian: marginal with non-positive trace");
    prod = kron(prod, CMatrix(m / tr));
    order.insert(order.end(), g.begin(), g.end());
  }
  prod *= upsilon.trace();
  const CMatrix target = reorder(upsilon.op, upsilon.spaces, order);
  return (target - prod).norm() / target.norm();
}

bool is_markovian(const ProcessTensor& upsilon, double tol) { return markovian_distance(upsilon) <= tol; }

CMatrix reconstruct_joint(const std::vector<CMatrix>& first_fh, const std::vector<CMatrix>& duals,
                                   const std::vector<CMatrix>& complement_fh,
                                   const std::vector<CMatrix>& complement_duals, const Partition& part,
                                   const SpaceList& order) {
  if (first_fh.size() != duals.size() || complement_fh.size() != complement_duals.size())
    throw DimensionError("reconstruct_from_splits: term and dual counts differ");
  const long df = total_dim(part.F), dm = total_dim(part.M), dh = total_dim(part.H);
  const Dims fhm{static_cast<int>(df), static_cast<int>(dh), static_cast<int>(dm)};
  CMatrix acc = CMatrix::Zero(df * dh * dm, df * dh * dm);
  auto add = [&](const CMatrix& fh, const CMatrix& dual) {
    if (fh.rows() != df * dh || dual.rows() != dm) throw DimensionError("reconstruct_from_splits: dimension mismatch");
    acc += kron(fh, dual);
  };
  for (std::size_t k = 0; k < first_fh.size(); ++k) add(first_fh[k], duals[k]);
  for (std::size_t k = 0; k < complement_fh.size(); ++k) add(complement_fh[k], complement_duals[k]);
  // (F, H, M) -> (F, M, H) -> requested order.
  const CMatrix fmh = permute_subsystems(acc, fhm, {0, 2, 1});
  SpaceList labels = part.F;
  labels.insert(labels.end(), part.M.begin(), part.M.end());
  labels.insert(labels.end(), part.H.begin(), part.H.end());
  // The three blocks are single composite factors above; relabel by legs now.
  return reorder(fmh, labels, order);
}

CMatrix reconstruct_from_splits(const std::vector<std::pair<CMatrix, CMatrix>>& splits, const std::vector<CMatrix>& duals,
                             const std::vector<CMatrix>& complement_fh, const std::vector<CMatrix>& complement_duals,
                             const Partition& part, const SpaceList& order) {
  std::vector<CMatrix> first;
  first.reserve(splits.size());
  for (const auto& [f, h] : splits) first.push_back(kron(f, h));
  return reconstruct_joint(first, duals, complement_fh, complement_duals, part, order);
}

ComplementTerms extract_complement_coefficients(const ProcessTensor& upsilon, const std::vector<CMatrix>& elements,
                                                const std::vector<CMatrix>& complement_basis, const Partition& part) {
  ComplementTerms out;
  if (complement_basis.empty()) return out;
  std::vector<CMatrix> full = elements;
  full.insert(full.end(), complement_basis.begin(), complement_basis.end());
  const DualSet ds = dual_set(full);
  for (std::size_t y = 0; y < complement_basis.size(); ++y) {
    out.coefficients.push_back(pair_with(upsilon, complement_basis[y], part));
    out.duals.push_back(ds.duals[elements.size() + y]);
  }
  return out;
}

}  // namespace qmo
