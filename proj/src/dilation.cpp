#include "qmo/dilation.hpp"

#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace qmo {

DilationAction DilationAction::unitary(std::vector<std::string> factors, CMatrix u) {
  DilationAction a;
  a.kind = Kind::unitary;
  a.factors = std::move(factors);
  a.ops = {std::move(u)};
  return a;
}

DilationAction DilationAction::kraus(std::vector<std::string> factors, std::vector<CMatrix> ops, std::string tag) {
  DilationAction a;
  a.kind = Kind::kraus;
  a.factors = std::move(factors);
  a.ops = std::move(ops);
  a.control_tag = std::move(tag);
  return a;
}

DilationAction DilationAction::add(std::vector<std::string> factors, Dims dims, CMatrix state) {
  DilationAction a;
  a.kind = Kind::add;
  a.factors = std::move(factors);
  a.dims = std::move(dims);
  a.state = std::move(state);
  return a;
}

DilationAction DilationAction::discard(std::vector<std::string> factors) {
  DilationAction a;
  a.kind = Kind::discard;
  a.factors = std::move(factors);
  return a;
}

namespace {

// Named-factor joint operator used by both the construction and the oracle.
struct Joint {
  CMatrix x;
  std::vector<std::string> names;
  Dims dims;

  int find(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UnknownLabelError("dilation: unknown factor " + name);
    return static_cast<int>(it - names.begin());
  }
  std::vector<int> find_all(const std::vector<std::string>& f) const {
    std::vector<int> idx;
    for (const auto& s : f) idx.push_back(find(s));
    return idx;
  }
  void apply(const std::vector<std::string>& f, const std::vector<CMatrix>& kraus) {
    x = apply_kraus(x, dims, find_all(f), kraus);
  }
  void add(const std::vector<std::string>& f, const Dims& d, const CMatrix& state) {
    for (const auto& s : f)
      if (std::find(names.begin(), names.end(), s) != names.end())
        throw InvalidArgument("dilation: factor " + s + " already present");
    guard_dim(x.rows() * product(d), "dilation");
    x = kron(x, state);
    names.insert(names.end(), f.begin(), f.end());
    dims.insert(dims.end(), d.begin(), d.end());
  }
  void discard(const std::vector<std::string>& f) {
    const auto idx = find_all(f);
    x = partial_trace(x, dims, idx);
    std::vector<char> gone(names.size(), 0);
    for (int i : idx) gone[i] = 1;
    std::vector<std::string> n2;
    Dims d2;
    for (std::size_t k = 0; k < names.size(); ++k)
      if (!gone[k]) {
        n2.push_back(names[k]);
        d2.push_back(dims[k]);
      }
    names = n2;
    dims = d2;
  }
  void rename(const std::string& from, const std::string& to) { names[find(from)] = to; }
  void run(const DilationAction& a) {
    switch (a.kind) {
      case DilationAction::Kind::unitary:
      case DilationAction::Kind::kraus:
        apply(a.factors, a.ops);
        break;
      case DilationAction::Kind::add:
        add(a.factors, a.dims, a.state);
        break;
      case DilationAction::Kind::discard:
        discard(a.factors);
        break;
    }
  }
};

Joint initial_joint(const Dilation& d) {
  Joint j;
  j.x = d.initial;
  j.names = {"S"};
  j.dims = {d.system_dim};
  j.names.insert(j.names.end(), d.env_names.begin(), d.env_names.end());
  j.dims.insert(j.dims.end(), d.env_dims.begin(), d.env_dims.end());
  return j;
}

CMatrix unnormalized_bell(int d) {
  CVector v = CVector::Zero(static_cast<long>(d) * d);
  for (int k = 0; k < d; ++k) v(k * d + k) = 1.0;
  return v * v.adjoint();
}

std::string reg_name(int t, char role) { return "#" + std::to_string(t) + role; }

// Keeps fed-out factors and the final system; everything else is traced.
Labeled finish(Joint j, const Dilation& d, int n, const std::map<std::string, SpaceLabel>& registers) {
  j.rename("S", reg_name(n, 'i'));
  std::vector<std::string> drop;
  for (const auto& name : j.names) {
    if (name[0] == '#') continue;
    if (std::find(d.fed_out.begin(), d.fed_out.end(), name) != d.fed_out.end()) continue;
    drop.push_back(name);
  }
  j.discard(drop);
  SpaceList spaces;
  for (std::size_t k = 0; k < j.names.size(); ++k) {
    const auto& name = j.names[k];
    if (name == reg_name(n, 'i'))
      spaces.push_back(in_leg(n, j.dims[k]));
    else if (name[0] == '#')
      spaces.push_back(registers.at(name));
    else
      spaces.push_back(anc_leg(name, n, j.dims[k]));
  }
  const SpaceList canon = canonical_order(spaces);
  return {reorder(j.x, spaces, canon), canon};
}

}  // namespace

void Dilation::validate(int n) const {
  if (n < 1) throw InvalidArgument("dilation: n must be at least 1");
  if (env_names.size() != env_dims.size()) throw InvalidArgument("dilation: env names and dims differ");
  const long d = system_dim * product(env_dims);
  if (initial.rows() != d || initial.cols() != d) throw DimensionError("dilation: initial state shape");
  if (!is_psd(initial) || std::abs(initial.trace().real() - 1.0) > 1e-10)
    throw InvalidArgument("dilation: initial state is not a density matrix");
  if (static_cast<int>(intervals.size()) < n - 1) throw InvalidArgument("dilation: too few intervals");
  for (const auto& interval : intervals)
    for (const auto& a : interval) {
      if (a.kind == DilationAction::Kind::unitary) {
        const auto& u = a.ops.at(0);
        if ((u * u.adjoint() - CMatrix::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff() > 1e-10)
          throw InvalidArgument("dilation: non-unitary interaction");
      } else if (a.kind == DilationAction::Kind::kraus) {
        CMatrix s = CMatrix::Zero(a.ops.at(0).cols(), a.ops.at(0).cols());
        for (const auto& k : a.ops) s += k.adjoint() * k;
        if ((s - CMatrix::Identity(s.rows(), s.rows())).cwiseAbs().maxCoeff() > 1e-10)
          throw InvalidArgument("dilation: internal intervention is not trace preserving");
      }
    }
}

ProcessTensor from_dilation(const Dilation& d, int n, const std::map<int, std::vector<CMatrix>>& plugged) {
  d.validate(n);
  Joint j = initial_joint(d);
  std::map<std::string, SpaceLabel> registers;
  for (int t = 1; t < n; ++t) {
    const int ds = j.dims[j.find("S")];
    const auto it = plugged.find(t);
    if (it != plugged.end()) {
      j.apply({"S"}, it->second);
    } else {
      j.rename("S", reg_name(t, 'i'));
      registers[reg_name(t, 'i')] = in_leg(t, ds);
      registers[reg_name(t, 'o')] = out_leg(t, ds);
      j.add({reg_name(t, 'o'), "S"}, {ds, ds}, unnormalized_bell(ds));
    }
    for (const auto& a : d.intervals[t - 1]) j.run(a);
  }
  const Labeled out = finish(std::move(j), d, n, registers);
  guard_dim(out.op.rows(), "from_dilation");
  return {out.op, out.spaces};
}

Labeled simulate_dilation(const Dilation& d, int n, const std::vector<std::vector<CMatrix>>& ops) {
  d.validate(n);
  if (static_cast<int>(ops.size()) < n - 1) throw InvalidArgument("simulate_dilation: missing operations");
  Joint j = initial_joint(d);
  for (int t = 1; t < n; ++t) {
    j.apply({"S"}, ops[t - 1]);
    for (const auto& a : d.intervals[t - 1]) j.run(a);
  }
  return finish(std::move(j), d, n, {});
}

double born_rule_self_test(const Dilation& d, int n, Rng& rng, int trials) {
  const ProcessTensor ups = from_dilation(d, n);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<std::vector<CMatrix>> ops;
    std::vector<OperationChoi> chois;
    for (int t = 1; t < n; ++t) {
      int ds = 0;
      for (const auto& s : ups.spaces)
        if (s.timestep == t && s.leg == Leg::input) ds = s.dim;
      // One element of a random two-outcome instrument.
      auto kr = rng.channel(ds, ds, 2);
      kr.resize(1);
      ops.push_back(kr);
      chois.push_back(choi_of_map(kr, ds, ds, t));
    }
    const ProcessTensor out = apply_ops(ups, chois);
    const Labeled sim = simulate_dilation(d, n, ops);
    worst = std::max(worst, (reorder(out.op, out.spaces, sim.spaces) - sim.op).cwiseAbs().maxCoeff());
  }
  return worst;
}

Dilation random_dilation(Rng& rng, int d_sys, int d_env, int n) {
  Dilation d;
  d.system_dim = d_sys;
  d.env_names = {"E"};
  d.env_dims = {d_env};
  d.initial = rng.density_matrix(d_sys * d_env);
  d.intervals.resize(std::max(0, n - 1));
  for (auto& interval : d.intervals) interval.push_back(DilationAction::unitary({"S", "E"}, rng.unitary(d_sys * d_env)));
  return d;
}

}  // namespace qmo
