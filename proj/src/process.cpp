#include "qmo/process.hpp"

#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmo {

CMatrix choi_matrix(const std::vector<CMatrix>& kraus, int in_dim, int out_dim) {
  if (kraus.empty()) throw InvalidArgument("choi_of_map: no Kraus operators");
  const long d = static_cast<long>(in_dim) * out_dim;
  guard_dim(d, "choi_of_map");
  CMatrix c = CMatrix::Zero(d, d);
  CVector v(d);
  for (const auto& k : kraus) {
    if (k.rows() != out_dim || k.cols() != in_dim) throw DimensionError("choi_of_map: inconsistent Kraus shape");
    for (int o = 0; o < out_dim; ++o)
      for (int x = 0; x < in_dim; ++x) v(o * in_dim + x) = k(o, x);
    c += v * v.adjoint();
  }
  return c.transpose();
}

OperationChoi choi_of_map(const std::vector<CMatrix>& kraus, int in_dim, int out_dim, int step) {
  return {choi_matrix(kraus, in_dim, out_dim), {out_leg(step, out_dim), in_leg(step, in_dim)}};
}

double trace_preservation_defect(const CMatrix& choi, int in_dim, int out_dim) {
  const CMatrix t = partial_trace(choi, Dims{out_dim, in_dim}, {0});
  return (t - CMatrix::Identity(in_dim, in_dim)).cwiseAbs().maxCoeff();
}

namespace {

// Ancillary legs are fed out with the system, after the input at their step.
int causal_rank(const SpaceLabel& s) { return 2 * s.time_key() + (s.leg == Leg::ancillary ? 1 : 0); }

}  // namespace

Partition Partition::around(const SpaceList& spaces, const SpaceList& memory) {
  if (memory.empty()) throw InvalidArgument("partition: empty memory block");
  int lo = causal_rank(memory[0]), hi = lo;
  for (const auto& m : memory) {
    index_of(spaces, m);
    lo = std::min(lo, causal_rank(m));
    hi = std::max(hi, causal_rank(m));
  }
  Partition p;
  p.M = memory;
  for (const auto& s : spaces) {
    if (contains(memory, s)) continue;
    if (causal_rank(s) > hi)
      p.F.push_back(s);
    else if (causal_rank(s) < lo)
      p.H.push_back(s);
    else
      throw InvalidArgument("partition: memory block is not contiguous around leg " + s.name());
  }
  return p;
}

void Partition::validate_against(const SpaceList& spaces) const {
  std::size_t count = 0;
  for (const auto* part : {&F, &M, &H})
    for (const auto& s : *part) {
      index_of(spaces, s);
      ++count;
    }
  if (count != spaces.size()) throw InvalidArgument("partition does not cover the process legs exactly");
  for (const auto& a : F)
    for (const auto& b : M)
      if (causal_rank(a) <= causal_rank(b)) throw InvalidArgument("partition: F must be later than M");
  for (const auto& a : M)
    for (const auto& b : H)
      if (causal_rank(a) <= causal_rank(b)) throw InvalidArgument("partition: H must be earlier than M");
  for (const auto& a : F)
    for (const auto& b : H)
      if (causal_rank(a) <= causal_rank(b)) throw InvalidArgument("partition: F must be later than H");
}

namespace {

int max_timestep(const SpaceList& spaces) {
  int n = 0;
  for (const auto& s : spaces) n = std::max(n, s.timestep);
  return n;
}

SpaceList select(const SpaceList& spaces, int t, bool outputs) {
  SpaceList out;
  for (const auto& s : spaces)
    if (s.timestep == t && ((s.leg == Leg::output) == outputs)) out.push_back(s);
  return out;
}

}  // namespace

CausalityReport check_causality(const ProcessTensor& upsilon, double tol) {
  validate(upsilon.spaces, upsilon.op.rows());
  CausalityReport rep;
  Labeled cur{upsilon.op, upsilon.spaces};
  const int n = max_timestep(upsilon.spaces);
  std::ostringstream diag;
  if (!select(cur.spaces, n, true).empty()) {
    rep.pass = false;
    diag << "output leg at the final step " << n << " is not allowed; ";
  }
  for (int j = n; j >= 2; --j) {
    rep.marginals.push_back({cur.op, cur.spaces});
    const Labeled r = partial_trace(cur.op, cur.spaces, select(cur.spaces, j, false));
    const SpaceList prev_out = select(r.spaces, j - 1, true);
    CausalityLevel level{j, 0.0, true};
    Labeled next = r;
    if (!prev_out.empty()) {
      next = partial_trace(r.op, r.spaces, prev_out);
      const double d = static_cast<double>(total_dim(prev_out));
      next.op /= d;
      SpaceList ext = prev_out;
      ext.insert(ext.end(), next.spaces.begin(), next.spaces.end());
      const CMatrix model = reorder(kron(CMatrix::Identity(total_dim(prev_out), total_dim(prev_out)), next.op), ext, r.spaces);
      const double norm = std::max(r.op.norm(), 1e-300);
      level.residual = (r.op - model).norm() / norm;
    }
    level.pass = level.residual <= tol;
    if (!level.pass) diag << "level " << j << " residual " << level.residual << "; ";
    rep.pass = rep.pass && level.pass;
    rep.levels.push_back(level);
    cur = next;
  }
  rep.marginals.push_back({cur.op, cur.spaces});
  const Labeled last = partial_trace(cur.op, cur.spaces, select(cur.spaces, 1, false));
  if (!last.spaces.empty()) {
    rep.pass = false;
    diag << "unexpected legs left at step 1: " << describe(last.spaces) << "; ";
  } else {
    CausalityLevel level{1, std::abs(last.op(0, 0) - cplx(1.0)), true};
    level.pass = level.residual <= tol;
    if (!level.pass) diag << "level 1 trace mismatch " << level.residual << "; ";
    rep.pass = rep.pass && level.pass;
    rep.levels.push_back(level);
  }
  rep.diagnostics = diag.str();
  return rep;
}

Labeled contract(const CMatrix& a, const SpaceList& spaces, const CMatrix& o, const SpaceList& targets) {
  validate(spaces, a.rows());
  validate(targets, o.rows());
  const auto idx = indices_of(spaces, targets);
  return {qmo::contract(a, dims_of(spaces), idx, o), without(spaces, targets)};
}

ProcessTensor apply_ops(const ProcessTensor& upsilon, const std::vector<OperationChoi>& ops, double tol) {
  Labeled cur{upsilon.op, upsilon.spaces};
  for (const auto& o : ops) cur = contract(cur.op, cur.spaces, o.op, o.spaces);
  const double scale = std::max(1.0, upsilon.trace());
  const double lo = min_eigenvalue(cur.op);
  if (lo < -tol * scale) throw NotPsdError("apply_ops: result is not PSD (invalid operation)", lo);
  return {cur.op, cur.spaces};
}

ProcessTensor markovian_product(const std::vector<OperationChoi>& maps, const CMatrix& rho1, double tol) {
  if (rho1.rows() != rho1.cols() || !is_psd(rho1) || std::abs(rho1.trace().real() - 1.0) > tol)
    throw InvalidArgument("markovian_product: rho1 is not a density matrix");
  CMatrix op = rho1;
  SpaceList spaces{in_leg(1, static_cast<int>(rho1.rows()))};
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const auto& m = maps[k];
    if (m.spaces.size() != 2) throw InvalidArgument("markovian_product: map must have (out, in) legs");
    const int d_out = m.spaces[0].dim, d_in = m.spaces[1].dim;
    if (trace_preservation_defect(m.op, d_in, d_out) > tol || !is_psd(m.op))
      throw InvalidArgument("markovian_product: map " + std::to_string(k) + " is not CPTP");
    const int step = static_cast<int>(k) + 1;
    op = kron(CMatrix(m.op.transpose()), op);
    SpaceList head{in_leg(step + 1, d_out), out_leg(step, d_in)};
    head.insert(head.end(), spaces.begin(), spaces.end());
    spaces = head;
  }
  guard_dim(op.rows(), "markovian_product");
  return {op, spaces};
}

Labeled link_product(const Labeled& a, const Labeled& b) {
  validate(a.spaces, a.op.rows());
  validate(b.spaces, b.op.rows());
  SpaceList shared;
  for (const auto& s : a.spaces)
    if (contains(b.spaces, s)) shared.push_back(s);
  const SpaceList a_rest = without(a.spaces, shared), b_rest = without(b.spaces, shared);
  const long da = total_dim(a_rest), ds = total_dim(shared), db = total_dim(b_rest);
  guard_dim(da * ds * db, "link_product");

  SpaceList a_order = a_rest;
  a_order.insert(a_order.end(), shared.begin(), shared.end());
  const CMatrix ea = kron(reorder(a.op, a.spaces, a_order), CMatrix::Identity(db, db));

  SpaceList b_order = shared;
  b_order.insert(b_order.end(), b_rest.begin(), b_rest.end());
  std::vector<int> tidx(shared.size());
  for (std::size_t k = 0; k < shared.size(); ++k) tidx[k] = static_cast<int>(k);
  const CMatrix bt = partial_transpose(reorder(b.op, b.spaces, b_order), dims_of(b_order), tidx);
  const CMatrix eb = kron(CMatrix::Identity(da, da), bt);

  SpaceList full = a_order;
  full.insert(full.end(), b_rest.begin(), b_rest.end());
  return partial_trace(CMatrix(ea * eb), full, shared);
}

std::vector<SpaceList> step_groups(const SpaceList& spaces) {
  const int n = max_timestep(spaces);
  std::vector<SpaceList> groups;
  for (int k = n; k >= 1; --k) {
    SpaceList g = select(spaces, k, false);
    if (k == n) {
      const SpaceList dangling = select(spaces, k, true);
      g.insert(g.begin(), dangling.begin(), dangling.end());
    }
    const SpaceList prev = select(spaces, k - 1, true);
    g.insert(g.end(), prev.begin(), prev.end());
    if (!g.empty()) groups.push_back(canonical_order(g));
  }
  return groups;
}

}  // namespace qmo
