#include "qmo/collision.hpp"

#include "qmo/duals.hpp"
#include "qmo/instruments.hpp"
#include "qmo/markov.hpp"
#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace qmo {

std::string to_string(CollisionVariant v) {
  switch (v) {
    case CollisionVariant::repeated_nested:
      return "repeated_nested";
    case CollisionVariant::ancilla_ancilla:
      return "ancilla_ancilla";
    case CollisionVariant::correlated_env:
      return "correlated_env";
  }
  return "?";
}

namespace {

std::string anc(int x) { return "A" + std::to_string(x); }

CMatrix ket0(int d) {
  CMatrix t = CMatrix::Zero(d, d);
  t(0, 0) = 1.0;
  return t;
}

CMatrix bell_state(int d) {
  CVector v = CVector::Zero(static_cast<long>(d) * d);
  for (int k = 0; k < d; ++k) v(k * d + k) = 1.0 / std::sqrt(static_cast<double>(d));
  return v * v.adjoint();
}

std::string partner(int n) { return anc(n >= 3 ? n - 1 : 2); }

bool is_unitary(const CMatrix& u) {
  return u.rows() == u.cols() && (u * u.adjoint() - CMatrix::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff() <= 1e-10;
}

// Named-factor joint state for the sequential simulation.
struct Register {
  CMatrix x;
  std::vector<std::string> names;
  Dims dims;

  int find(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UnknownLabelError("collision: unknown factor " + name);
    return static_cast<int>(it - names.begin());
  }
  void add(const std::string& name, const CMatrix& state) {
    guard_dim(x.rows() * state.rows(), "collision simulate");
    x = kron(x, state);
    names.push_back(name);
    dims.push_back(static_cast<int>(state.rows()));
  }
  void apply(const std::vector<int>& targets, const std::vector<CMatrix>& kraus) {
    x = apply_kraus(x, dims, targets, kraus);
  }
  void discard(const std::string& name) {
    const int k = find(name);
    x = partial_trace(x, dims, {k});
    names.erase(names.begin() + k);
    dims.erase(dims.begin() + k);
  }
};

}  // namespace

CMatrix swap_gate(int d) {
  const long dd = static_cast<long>(d) * d;
  CMatrix s = CMatrix::Zero(dd, dd);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  return s;
}

std::vector<std::string> CollisionModel::initial_ancillas(int n) const {
  std::vector<std::string> out;
  switch (variant) {
    case CollisionVariant::repeated_nested:
      for (int x = 1; x < ell; ++x) out.push_back(anc(x));
      break;
    case CollisionVariant::ancilla_ancilla:
      out.push_back(anc(1));
      break;
    case CollisionVariant::correlated_env:
      out = {anc(1), partner(n)};
      break;
  }
  return out;
}

CMatrix CollisionModel::initial_env(int n) const {
  if (variant == CollisionVariant::correlated_env) return pair_state;
  CMatrix env = CMatrix::Ones(1, 1);
  for (std::size_t k = 0; k < initial_ancillas(n).size(); ++k) env = kron(env, tau);
  return env;
}

std::vector<CollisionInterval> CollisionModel::schedule(int n) const {
  std::vector<CollisionInterval> out(n);
  const CMatrix sw = swap_gate(ancilla_dim);
  for (int j = 1; j <= n; ++j) {
    CollisionInterval& iv = out[j - 1];
    switch (variant) {
      case CollisionVariant::repeated_nested:
        iv.add = {anc(j + ell - 1)};
        for (int x = ell - 1; x >= 0; --x) iv.collisions.push_back({"S", anc(j + x), gates[x]});
        if (flipped && ell >= 2) std::swap(iv.collisions[ell - 1], iv.collisions[ell - 2]);
        iv.discard = {anc(j)};
        break;
      case CollisionVariant::ancilla_ancilla:
        if (j == 1) iv.collisions.push_back({"S", anc(1), sw});
        if (j < n) {
          iv.add = {anc(j + 1)};
          iv.collisions.push_back({anc(j + 1), anc(j), sw});
        } else {
          iv.collisions.push_back({"S", anc(n), sw});
        }
        iv.discard = {anc(j)};
        break;
      case CollisionVariant::correlated_env:
        if (j == 1) {
          iv.collisions.push_back({"S", anc(1), first_gate});
          iv.discard = {anc(1)};
        }
        if (j == n) {
          iv.collisions.push_back({"S", partner(n), last_gate});
          iv.discard = {partner(n)};
        }
        break;
    }
  }
  return out;
}

void CollisionModel::validate(int n) const {
  if (n < 1) throw InvalidArgument("collision: n must be at least 1");
  if (system_dim != ancilla_dim && variant != CollisionVariant::repeated_nested)
    throw InvalidArgument("collision: swap variants need equal system and ancilla dims");
  if (tau.rows() != ancilla_dim || !is_psd(tau) || std::abs(tau.trace().real() - 1.0) > 1e-10)
    throw InvalidArgument("collision: ancilla state is not a density matrix");
  const int dj = system_dim * ancilla_dim;
  switch (variant) {
    case CollisionVariant::repeated_nested:
      if (ell < 1 || static_cast<int>(gates.size()) != ell) throw InvalidArgument("collision: need one gate per depth");
      for (const auto& g : gates)
        if (g.rows() != dj || !is_unitary(g)) throw InvalidArgument("collision: gate is not a unitary on S ⊗ A");
      break;
    case CollisionVariant::ancilla_ancilla:
      if (n < 2) throw InvalidArgument("collision: ancilla_ancilla needs n >= 2");
      break;
    case CollisionVariant::correlated_env:
      if (n < 2) throw InvalidArgument("collision: correlated_env needs n >= 2");
      if (pair_state.rows() != ancilla_dim * ancilla_dim) throw DimensionError("collision: pair state shape");
      if (!is_unitary(first_gate) || !is_unitary(last_gate) || first_gate.rows() != dj || last_gate.rows() != dj)
        throw InvalidArgument("collision: gate is not a unitary on S ⊗ A");
      break;
  }
}

CollisionModel repeated_nested_model(Rng& rng, int ell, bool flipped) {
  CollisionModel m;
  m.variant = CollisionVariant::repeated_nested;
  m.ell = ell;
  m.tau = ket0(2);
  for (int x = 0; x < ell; ++x) m.gates.push_back(rng.unitary(4));
  m.flipped = flipped;
  return m;
}

CollisionModel swap_nested_model(int ell) {
  CollisionModel m;
  m.variant = CollisionVariant::repeated_nested;
  m.ell = ell;
  m.tau = ket0(2);
  m.gates.assign(ell, swap_gate(2));
  return m;
}

CollisionModel ancilla_ancilla_model() {
  CollisionModel m;
  m.variant = CollisionVariant::ancilla_ancilla;
  m.tau = ket0(2);
  return m;
}

CollisionModel correlated_env_model() {
  CollisionModel m;
  m.variant = CollisionVariant::correlated_env;
  m.tau = ket0(2);
  m.pair_state = bell_state(2);
  m.first_gate = swap_gate(2);
  m.last_gate = swap_gate(2);
  return m;
}

CollisionModel entangled_pair_model(Rng& rng) {
  CollisionModel m = correlated_env_model();
  const CVector psi = rng.pure_state(4);
  m.pair_state = psi * psi.adjoint();
  m.first_gate = rng.unitary(4);
  m.last_gate = rng.unitary(4);
  return m;
}

CollisionRun simulate(const CollisionModel& m, const CMatrix& rho0, const std::vector<std::vector<CMatrix>>& ops,
                      int n) {
  m.validate(n);
  if (static_cast<int>(ops.size()) < n - 1) throw InvalidArgument("collision simulate: missing operations");
  if (rho0.rows() != m.system_dim) throw DimensionError("collision simulate: initial state shape");
  Register r;
  r.x = rho0;
  r.names = {"S"};
  r.dims = {m.system_dim};
  const auto init = m.initial_ancillas(n);
  r.x = kron(r.x, m.initial_env(n));
  for (const auto& a : init) {
    r.names.push_back(a);
    r.dims.push_back(m.ancilla_dim);
  }
  CollisionRun run;
  const auto sched = m.schedule(n);
  for (int j = 1; j <= n; ++j) {
    if (j > 1) r.apply({r.find("S")}, ops[j - 2]);
    const CollisionInterval& iv = sched[j - 1];
    for (const auto& a : iv.add) r.add(a, m.tau);
    for (const auto& c : iv.collisions) r.apply({r.find(c.a), r.find(c.b)}, {c.u});
    for (const auto& a : iv.discard) r.discard(a);
    run.trajectory.push_back(r.x);
    run.factors.push_back(r.names);
  }
  std::vector<int> env;
  for (std::size_t k = 1; k < r.names.size(); ++k) env.push_back(static_cast<int>(k));
  run.final_state = partial_trace(r.x, r.dims, env);
  return run;
}

Dilation to_dilation(const CollisionModel& m, int n, const CMatrix& rho_first) {
  m.validate(n);
  Dilation d;
  d.system_dim = m.system_dim;
  d.env_names = m.initial_ancillas(n);
  d.env_dims.assign(d.env_names.size(), m.ancilla_dim);
  d.initial = kron(rho_first, m.initial_env(n));
  for (const auto& iv : m.schedule(n)) {
    std::vector<DilationAction> acts;
    for (const auto& a : iv.add) acts.push_back(DilationAction::add({a}, {m.ancilla_dim}, m.tau));
    for (const auto& c : iv.collisions) acts.push_back(DilationAction::unitary({c.a, c.b}, c.u));
    if (!iv.discard.empty()) acts.push_back(DilationAction::discard(iv.discard));
    d.intervals.push_back(acts);
  }
  return d;
}

std::vector<CMatrix> prepare_kraus(const CMatrix& sigma, int in_dim) {
  const int din = in_dim < 0 ? static_cast<int>(sigma.rows()) : in_dim;
  const auto e = herm_eig(sigma);
  std::vector<CMatrix> out;
  for (long a = 0; a < e.values.size(); ++a) {
    if (e.values(a) <= 1e-15) continue;
    for (int b = 0; b < din; ++b) {
      CMatrix k = CMatrix::Zero(sigma.rows(), din);
      k.col(b) = std::sqrt(e.values(a)) * e.vectors.col(a);
      out.push_back(k);
    }
  }
  return out;
}

std::vector<CMatrix> measure_prepare_kraus(const CMatrix& effect, const CMatrix& sigma) {
  const auto es = herm_eig(sigma);
  const auto ee = herm_eig(effect);
  std::vector<CMatrix> out;
  for (long a = 0; a < es.values.size(); ++a) {
    if (es.values(a) <= 1e-15) continue;
    for (long i = 0; i < ee.values.size(); ++i) {
      if (ee.values(i) <= 1e-15) continue;
      out.push_back(std::sqrt(es.values(a) * ee.values(i)) * es.vectors.col(a) * ee.vectors.col(i).adjoint());
    }
  }
  return out;
}

CMatrix MemoryMap::operator()(const std::vector<CMatrix>& sigmas) const {
  if (static_cast<int>(sigmas.size()) != ell) throw InvalidArgument("memory map: one state per slot required");
  const std::size_t b = basis.size();
  std::vector<std::vector<cplx>> coeff(ell);
  for (int s = 0; s < ell; ++s)
    for (std::size_t x = 0; x < b; ++x) coeff[s].push_back((duals[x] * sigmas[s]).trace());
  CMatrix out = CMatrix::Zero(outputs[0].rows(), outputs[0].cols());
  for (std::size_t t = 0; t < outputs.size(); ++t) {
    cplx c = 1.0;
    std::size_t rest = t;
    for (int s = 0; s < ell; ++s) {
      c *= coeff[s][rest % b];
      rest /= b;
    }
    out += c * outputs[t];
  }
  return out;
}

MemoryMap reduced_memory_map(const CollisionModel& m, int k, int ell) {
  if (m.variant != CollisionVariant::repeated_nested) throw InvalidArgument("reduced_memory_map: needs a nested model");
  if (m.system_dim != 2) throw InvalidArgument("reduced_memory_map: qubit systems only");
  if (ell < 1 || k <= ell) throw InvalidArgument("reduced_memory_map: need k > ell >= 1");
  MemoryMap mm;
  mm.ell = ell;
  mm.basis = sic_states();
  mm.duals = dual_set(mm.basis).duals;
  const CMatrix mixed = CMatrix::Identity(2, 2) / 2.0;
  std::vector<std::vector<CMatrix>> ops(k - 1, prepare_kraus(mixed));
  std::size_t tuples = 1;
  for (int s = 0; s < ell; ++s) tuples *= mm.basis.size();
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rest = t;
    for (int s = 0; s < ell; ++s) {
      ops[k - ell - 1 + s] = prepare_kraus(mm.basis[rest % mm.basis.size()]);
      rest /= mm.basis.size();
    }
    mm.outputs.push_back(simulate(m, mixed, ops, k).final_state);
  }
  return mm;
}

double history_dependence(const CollisionModel& m, int n, const std::vector<CMatrix>& preps,
                          const std::vector<std::pair<CMatrix, CMatrix>>& histories) {
  if (static_cast<int>(preps.size()) != n - 1) throw InvalidArgument("history_dependence: need n-1 preparations");
  std::vector<std::vector<CMatrix>> ops;
  for (const auto& s : preps) ops.push_back(prepare_kraus(s));
  double worst = 0.0;
  for (const auto& [a, b] : histories)
    worst = std::max(worst, (simulate(m, a, ops, n).final_state - simulate(m, b, ops, n).final_state).norm());
  return worst;
}

BlockingBreakReport measurement_breaks_blocking(const CollisionModel& m, int k, const std::vector<CMatrix>& preps,
                                                const std::vector<CMatrix>& povm,
                                                const std::vector<std::pair<CMatrix, CMatrix>>& histories) {
  if (k < 2 || static_cast<int>(preps.size()) != k - 1)
    throw InvalidArgument("measurement_breaks_blocking: need k-1 preparations");
  std::vector<std::vector<CMatrix>> ops;
  for (const auto& s : preps) ops.push_back(prepare_kraus(s));
  BlockingBreakReport rep;
  for (const auto& e : povm) {
    ops[k - 2] = measure_prepare_kraus(e, preps[k - 2]);
    double worst = 0.0;
    for (const auto& [a, b] : histories) {
      const CMatrix ra = simulate(m, a, ops, k).final_state;
      const CMatrix rb = simulate(m, b, ops, k).final_state;
      const double pa = ra.trace().real(), pb = rb.trace().real();
      if (pa < 1e-12 || pb < 1e-12) continue;
      worst = std::max(worst, (ra / pa - rb / pb).norm());
    }
    rep.per_outcome.push_back(worst);
    rep.max_dependence = std::max(rep.max_dependence, worst);
  }
  return rep;
}

MemoryWitness infinite_memory_witness(const CollisionModel& m, int n, Rng& rng, int trials) {
  const int d = m.system_dim;
  MemoryWitness w;
  for (int trial = 0; trial < trials; ++trial) {
    const CMatrix rho0 = rng.density_matrix(d);
    std::vector<std::vector<CMatrix>> ops;
    for (int t = 1; t < n; ++t) ops.push_back(rng.channel(d, d, 2));
    if (m.variant == CollisionVariant::correlated_env) {
      w.statement = "rho_n conditioned on the step-1 outcome m equals |m><m|";
      for (int o = 0; o < d; ++o) {
        CMatrix proj = CMatrix::Zero(d, d);
        proj(o, o) = 1.0;
        ops[0] = measure_prepare_kraus(proj, rng.density_matrix(d));
        const CMatrix out = simulate(m, rho0, ops, n).final_state;
        const double p = out.trace().real();
        if (p < 1e-12) continue;
        w.residual = std::max(w.residual, (out / p - proj).norm());
      }
    } else {
      w.statement = "rho_n equals rho_0";
      w.residual = std::max(w.residual, (simulate(m, rho0, ops, n).final_state - rho0).norm());
    }
  }
  w.infinite = w.residual < 1e-10;
  return w;
}

ProcessSplit trash_prepare_split(const CollisionModel& m, const std::vector<CMatrix>& preps, const CMatrix& rho_first) {
  const int ell = static_cast<int>(preps.size());
  const int steps = ell + 2;
  const Dilation d = to_dilation(m, ell + 1, rho_first);
  std::map<int, std::vector<CMatrix>> plugged;
  for (int t = 2; t <= ell + 1; ++t) plugged[t] = prepare_kraus(preps[t - 2]);
  const ProcessTensor ups = from_dilation(d, steps, plugged);
  const SpaceList f{in_leg(steps, m.system_dim)};
  const SpaceList h{out_leg(1, m.system_dim), in_leg(1, m.system_dim)};
  SpaceList fh = f;
  fh.insert(fh.end(), h.begin(), h.end());
  ProcessSplit s;
  s.joint_fh = {reorder(ups.op, ups.spaces, fh), fh};
  const int df = static_cast<int>(total_dim(f)), dh = static_cast<int>(total_dim(h));
  s.mi_bits = mutual_information(s.joint_fh.op, df, dh);
  s.product_distance = product_distance(s.joint_fh.op, df, dh);
  return s;
}

}  // namespace qmo
