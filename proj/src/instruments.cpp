#include "qmo/instruments.hpp"

#include "qmo/duals.hpp"
#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmo {

CMatrix InstrumentSequence::deterministic() const {
  if (elements.empty()) throw InvalidArgument("instrument has no elements");
  CMatrix s = CMatrix::Zero(elements[0].rows(), elements[0].cols());
  for (const auto& e : elements) s += e;
  return s;
}

CMatrix pauli(int k) {
  CMatrix p(2, 2);
  switch (k) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw InvalidArgument("pauli index out of range");
  }
  return p;
}

std::vector<CMatrix> sic_states() {
  const double s2 = std::sqrt(2.0);
  const double bloch[4][3] = {{0, 0, 1},
                              {2 * s2 / 3, 0, -1.0 / 3},
                              {-s2 / 3, std::sqrt(2.0 / 3), -1.0 / 3},
                              {-s2 / 3, -std::sqrt(2.0 / 3), -1.0 / 3}};
  std::vector<CMatrix> out;
  for (const auto& b : bloch) out.push_back((pauli(0) + b[0] * pauli(1) + b[1] * pauli(2) + b[2] * pauli(3)) / 2.0);
  return out;
}

std::vector<CMatrix> sic_povm() {
  auto s = sic_states();
  for (auto& m : s) m /= 2.0;
  return s;
}

namespace {

bool is_density(const CMatrix& rho) {
  return rho.rows() == rho.cols() && is_psd(rho) && std::abs(rho.trace().real() - 1.0) < 1e-10;
}

void check_povm(const std::vector<CMatrix>& povm) {
  if (povm.empty()) throw InvalidArgument("empty POVM");
  CMatrix s = CMatrix::Zero(povm[0].rows(), povm[0].cols());
  for (const auto& e : povm) {
    if (!is_psd(e)) throw InvalidArgument("POVM element not PSD");
    s += e;
  }
  if ((s - CMatrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidArgument("POVM elements do not sum to the identity");
}

std::vector<int> sorted_desc(std::vector<int> steps) {
  std::sort(steps.begin(), steps.end(), std::greater<>());
  if (std::adjacent_find(steps.begin(), steps.end()) != steps.end()) throw InvalidArgument("repeated timestep");
  return steps;
}

}  // namespace

InstrumentSequence trash_and_prepare(const std::vector<CMatrix>& sigmas, const std::vector<int>& steps,
                                     const std::vector<int>& input_dims) {
  if (sigmas.size() != steps.size() || (!input_dims.empty() && input_dims.size() != steps.size()))
    throw InvalidArgument("trash_and_prepare: one state per step required");
  std::vector<std::size_t> order(steps.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return steps[a] > steps[b]; });
  sorted_desc(steps);
  InstrumentSequence seq;
  CMatrix el = CMatrix::Ones(1, 1);
  for (std::size_t k : order) {
    const CMatrix& s = sigmas[k];
    if (!is_density(s)) throw InvalidArgument("trash_and_prepare: not a density matrix");
    const int dout = static_cast<int>(s.rows());
    const int din = input_dims.empty() ? dout : input_dims[k];
    seq.spaces.push_back(out_leg(steps[k], dout));
    seq.spaces.push_back(in_leg(steps[k], din));
    el = kron(el, kron(CMatrix(s.transpose()), CMatrix::Identity(din, din)));
  }
  seq.elements = {el};
  seq.labels = {"trash"};
  return seq;
}

InstrumentSequence causal_break(const std::vector<BreakStep>& steps_in) {
  std::vector<BreakStep> steps = steps_in;
  std::sort(steps.begin(), steps.end(), [](const BreakStep& a, const BreakStep& b) { return a.timestep > b.timestep; });
  for (std::size_t k = 1; k < steps.size(); ++k)
    if (steps[k].timestep == steps[k - 1].timestep) throw InvalidArgument("causal_break: repeated timestep");

  // Per-leg options, latest leg first.
  struct Option {
    CMatrix m;
    std::string label;
  };
  std::vector<std::vector<Option>> legs;
  InstrumentSequence seq;
  for (const auto& st : steps) {
    if (!st.preps.empty()) {
      const int d = static_cast<int>(st.preps[0].rows());
      if (span_rank(st.preps) != d * d) throw InvalidArgument("causal_break: preparations are not IC");
      std::vector<Option> opts;
      for (std::size_t x = 0; x < st.preps.size(); ++x) {
        if (!is_density(st.preps[x])) throw InvalidArgument("causal_break: preparation is not a state");
        opts.push_back({CMatrix(st.preps[x].transpose()) / static_cast<double>(st.preps.size()),
                        std::to_string(st.timestep) + "o=" + std::to_string(x)});
      }
      legs.push_back(opts);
      seq.spaces.push_back(out_leg(st.timestep, d));
    }
    if (!st.povm.empty()) {
      check_povm(st.povm);
      const int d = static_cast<int>(st.povm[0].rows());
      if (span_rank(st.povm) != d * d) throw InvalidArgument("causal_break: POVM is not IC");
      std::vector<Option> opts;
      for (std::size_t y = 0; y < st.povm.size(); ++y)
        opts.push_back({st.povm[y], std::to_string(st.timestep) + "i=" + std::to_string(y)});
      legs.push_back(opts);
      seq.spaces.push_back(in_leg(st.timestep, d));
    }
  }
  if (legs.empty()) throw InvalidArgument("causal_break: no legs");
  std::vector<std::size_t> digit(legs.size(), 0);
  while (true) {
    CMatrix el = CMatrix::Ones(1, 1);
    std::string label;
    for (std::size_t l = 0; l < legs.size(); ++l) {
      el = kron(el, legs[l][digit[l]].m);
      label += (l ? "," : "") + legs[l][digit[l]].label;
    }
    seq.elements.push_back(el);
    seq.labels.push_back(label);
    int l = static_cast<int>(legs.size()) - 1;
    for (; l >= 0; --l) {
      if (++digit[l] < legs[l].size()) break;
      digit[l] = 0;
    }
    if (l < 0) break;
  }
  guard_dim(seq.elements[0].rows(), "causal_break");
  return seq;
}

InstrumentSequence unitary_sequence(const std::vector<CMatrix>& vs, const std::vector<int>& steps) {
  if (vs.size() != steps.size()) throw InvalidArgument("unitary_sequence: one unitary per step required");
  std::vector<std::size_t> order(steps.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return steps[a] > steps[b]; });
  sorted_desc(steps);
  InstrumentSequence seq;
  CMatrix el = CMatrix::Ones(1, 1);
  for (std::size_t k : order) {
    const CMatrix& v = vs[k];
    const int d = static_cast<int>(v.rows());
    if (v.cols() != d || (v * v.adjoint() - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
      throw InvalidArgument("unitary_sequence: input is not unitary");
    seq.spaces.push_back(out_leg(steps[k], d));
    seq.spaces.push_back(in_leg(steps[k], d));
    el = kron(el, choi_matrix({v}, d, d));
  }
  seq.elements = {el};
  seq.labels = {"unitaries"};
  return seq;
}

InstrumentSequence bell_instrument(int k, int dim) {
  if (dim != 2) throw InvalidArgument("bell_instrument: qubit legs only");
  if (k < 2) throw InvalidArgument("bell_instrument: needs k >= 2");
  InstrumentSequence seq;
  seq.spaces = {in_leg(k, 2), out_leg(k - 1, 2)};
  const double v[4][4] = {{1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, -1, 0}, {1, 0, 0, -1}};
  const char* names[4] = {"Psi+", "Phi+", "Phi-", "Psi-"};
  for (int x = 0; x < 4; ++x) {
    CVector b(4);
    for (int i = 0; i < 4; ++i) b(i) = v[x][i];
    seq.elements.push_back(b * b.adjoint() / 4.0);
    seq.labels.push_back(names[x]);
  }
  return seq;
}

InstrumentSequence povm_instrument(const std::vector<CMatrix>& povm, const SpaceLabel& leg) {
  if (leg.leg == Leg::output) throw InvalidArgument("measurement instrument needs an input leg");
  check_povm(povm);
  if (povm[0].rows() != leg.dim) throw DimensionError("POVM dimension does not match leg");
  InstrumentSequence seq;
  seq.spaces = {leg};
  for (std::size_t k = 0; k < povm.size(); ++k) {
    seq.elements.push_back(povm[k]);
    seq.labels.push_back(leg.name() + "=" + std::to_string(k));
  }
  return seq;
}

InstrumentSequence fuzzy_projector_instrument(const std::vector<CMatrix>& projectors, const SpaceLabel& leg) {
  for (std::size_t a = 0; a < projectors.size(); ++a) {
    const CMatrix& p = projectors[a];
    if ((p * p - p).cwiseAbs().maxCoeff() > 1e-10 || hermiticity_defect(p) > 1e-10)
      throw InvalidArgument("fuzzy_projector_instrument: element is not a projector");
    for (std::size_t b = a + 1; b < projectors.size(); ++b)
      if ((p * projectors[b]).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidArgument("fuzzy_projector_instrument: projectors are not orthogonal");
  }
  return povm_instrument(projectors, leg);
}

ValidityReport is_valid_sequence(const InstrumentSequence& seq, double tol) {
  ValidityReport rep;
  std::ostringstream diag;
  validate(seq.spaces, seq.elements.at(0).rows());
  for (std::size_t k = 0; k < seq.elements.size(); ++k) {
    const CMatrix& e = seq.elements[k];
    if (hermiticity_defect(e) > tol || min_eigenvalue(e) < -tol * std::max(1.0, e.trace().real())) {
      rep.valid = false;
      diag << "element " << k << " is not PSD; ";
    }
  }
  Labeled x{seq.deterministic(), seq.spaces};
  while (!x.spaces.empty()) {
    int latest = x.spaces[0].time_key();
    for (const auto& s : x.spaces) latest = std::max(latest, s.time_key());
    SpaceList top;
    for (const auto& s : x.spaces)
      if (s.time_key() == latest) top.push_back(s);
    const bool is_output = top[0].leg == Leg::output;
    const int t = top[0].timestep;
    Labeled r = x;
    if (is_output) r = partial_trace(x.op, x.spaces, top);
    SpaceList ins;
    if (is_output) {
      for (const auto& s : r.spaces)
        if (s.timestep == t && s.leg != Leg::output) ins.push_back(s);
    } else {
      ins = top;
    }
    Labeled next = r;
    if (!ins.empty()) {
      next = partial_trace(r.op, r.spaces, ins);
      const long d = total_dim(ins);
      next.op /= static_cast<double>(d);
      SpaceList ext = ins;
      ext.insert(ext.end(), next.spaces.begin(), next.spaces.end());
      const CMatrix model = reorder(kron(CMatrix::Identity(d, d), next.op), ext, r.spaces);
      const double dev = (r.op - model).cwiseAbs().maxCoeff();
      if (dev > tol * std::max(1.0, r.op.cwiseAbs().maxCoeff())) {
        rep.valid = false;
        rep.violated_leg = (is_output ? top[0] : ins[0]).name();
        diag << "hierarchy violated at leg " << rep.violated_leg << " (deviation " << dev << "); ";
        break;
      }
    }
    x = next;
  }
  if (rep.violated_leg.empty() && x.spaces.empty()) {
    const double dev = std::abs(x.op(0, 0) - cplx(1.0));
    if (dev > tol) {
      rep.valid = false;
      rep.violated_leg = "normalization";
      diag << "deterministic element not normalized (deviation " << dev << "); ";
    }
  }
  rep.diagnostics = diag.str();
  return rep;
}

IcReport is_informationally_complete(const InstrumentSequence& seq, double tol) {
  IcReport rep;
  const long d = total_dim(seq.spaces);
  rep.full_dim = d * d;
  rep.rank = span_rank(seq.elements, tol);
  rep.complete = rep.rank == rep.full_dim;
  return rep;
}

}  // namespace qmo
