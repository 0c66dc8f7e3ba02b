#include "qmo/cmi.hpp"

#include "qmo/spectral.hpp"
#include "qmo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace qmo {

long ClassicalProcess::index(const std::vector<int>& x) const {
  long idx = 0;
  for (int k = steps() - 1; k >= 0; --k) idx = idx * alphabet[k] + x[k];
  return idx;
}

std::vector<int> ClassicalProcess::outcome(long index) const {
  std::vector<int> x(steps());
  for (int k = 0; k < steps(); ++k) {
    x[k] = static_cast<int>(index % alphabet[k]);
    index /= alphabet[k];
  }
  return x;
}

void ClassicalProcess::validate() const {
  long size = 1;
  for (int a : alphabet) {
    if (a < 1) throw InvalidArgument("classical process: empty alphabet");
    size *= a;
  }
  if (static_cast<long>(p.size()) != size) throw DimensionError("classical process: table size mismatch");
  double s = 0;
  for (double v : p) {
    if (v < 0) throw InvalidArgument("classical process: negative probability");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) throw InvalidArgument("classical process: probabilities do not sum to 1");
}

ClassicalProcess classical_marginal(const ClassicalProcess& p, std::vector<int> keep) {
  std::sort(keep.begin(), keep.end());
  ClassicalProcess out;
  for (int s : keep) {
    if (s < 1 || s > p.steps()) throw InvalidArgument("classical_marginal: step out of range");
    out.alphabet.push_back(p.alphabet[s - 1]);
  }
  long size = 1;
  for (int a : out.alphabet) size *= a;
  out.p.assign(size, 0.0);
  std::vector<int> y(keep.size());
  for (long i = 0; i < static_cast<long>(p.p.size()); ++i) {
    if (p.p[i] == 0.0) continue;
    const auto x = p.outcome(i);
    for (std::size_t k = 0; k < keep.size(); ++k) y[k] = x[keep[k] - 1];
    out.p[out.index(y)] += p.p[i];
  }
  return out;
}

ClassicalProcess coarse_grain(const ClassicalProcess& p, int step, const std::vector<std::vector<int>>& groups) {
  std::vector<int> map(p.alphabet.at(step - 1), -1);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (int v : groups[g]) map.at(v) = static_cast<int>(g);
  if (std::find(map.begin(), map.end(), -1) != map.end()) throw InvalidArgument("coarse_grain: groups must cover the alphabet");
  ClassicalProcess out = p;
  out.alphabet[step - 1] = static_cast<int>(groups.size());
  long size = 1;
  for (int a : out.alphabet) size *= a;
  out.p.assign(size, 0.0);
  for (long i = 0; i < static_cast<long>(p.p.size()); ++i) {
    auto x = p.outcome(i);
    x[step - 1] = map[x[step - 1]];
    out.p[out.index(x)] += p.p[i];
  }
  return out;
}

double classical_entropy(const ClassicalProcess& p, const std::vector<int>& steps) {
  if (steps.empty()) return 0.0;
  const ClassicalProcess m = classical_marginal(p, steps);
  return shannon_entropy(Eigen::Map<const RVector>(m.p.data(), static_cast<long>(m.p.size())));
}

double classical_cmi(const ClassicalProcess& p, const StepPartition& part) {
  auto join = [](std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const double v = classical_entropy(p, join(part.F, part.M)) + classical_entropy(p, join(part.M, part.H)) -
                   classical_entropy(p, join(join(part.F, part.M), part.H)) - classical_entropy(p, part.M);
  return std::max(0.0, v);
}

namespace {

std::vector<int> range(int lo, int hi) {
  std::vector<int> r;
  for (int k = lo; k <= hi; ++k) r.push_back(k);
  return r;
}

}  // namespace

bool classical_markov_order(const ClassicalProcess& p, int ell, double tol) {
  p.validate();
  const int n = p.steps();
  for (int k = ell + 1; k <= n; ++k) {
    const ClassicalProcess full = classical_marginal(p, range(1, k));
    const ClassicalProcess past = classical_marginal(p, range(1, k - 1));
    const ClassicalProcess win = classical_marginal(p, range(k - ell, k));
    const ClassicalProcess win_past = classical_marginal(p, range(k - ell, k - 1));
    for (long i = 0; i < static_cast<long>(full.p.size()); ++i) {
      const auto x = full.outcome(i);  // x[0] = x_1
      const std::vector<int> xp(x.begin(), x.end() - 1);
      const double pp = past.p[past.index(xp)];
      if (pp <= 0) continue;
      const std::vector<int> xw(x.begin() + (k - ell - 1), x.end());
      const std::vector<int> xwp(xw.begin(), xw.end() - 1);
      const double lhs = full.p[i] / pp;
      const double rhs = win.p[win.index(xw)] / win_past.p[win_past.index(xwp)];
      if (std::abs(lhs - rhs) > tol) return false;
    }
  }
  return true;
}

double classical_conditional(const ClassicalProcess& p, int k, int value, const std::vector<int>& given) {
  const int j = static_cast<int>(given.size());
  if (k - j < 1 || k > p.steps()) throw InvalidArgument("classical_conditional: window outside the process");
  const ClassicalProcess win = classical_marginal(p, range(k - j, k));
  const ClassicalProcess past = classical_marginal(p, range(k - j, k - 1));
  std::vector<int> xp(j);
  for (int q = 0; q < j; ++q) xp[j - 1 - q] = given[q];  // ascending time
  const double den = past.p[past.index(xp)];
  if (den <= 0) throw InvalidArgument("classical_conditional: conditioning event has zero probability");
  std::vector<int> x = xp;
  x.push_back(value);
  return win.p[win.index(x)] / den;
}

ProcessTensor classical_process_tensor(const ClassicalProcess& p) {
  p.validate();
  const int n = p.steps();
  SpaceList ins, outs;
  for (int k = n; k >= 1; --k) ins.push_back(in_leg(k, p.alphabet[k - 1]));
  for (int k = n - 1; k >= 1; --k) outs.push_back(out_leg(k, p.alphabet[k - 1]));
  const long di = total_dim(ins), dout = total_dim(outs);
  guard_dim(di * dout, "classical_process_tensor");
  // Inputs ordered (n^i, …, 1^i): row-major index coincides with the table index.
  CMatrix diag = CMatrix::Zero(di, di);
  for (long i = 0; i < di; ++i) diag(i, i) = p.p[i];
  SpaceList spaces = ins;
  spaces.insert(spaces.end(), outs.begin(), outs.end());
  const SpaceList canon = canonical_order(spaces);
  return {reorder(kron(diag, CMatrix::Identity(dout, dout)), spaces, canon), canon};
}

std::vector<double> sharp_statistics(const ProcessTensor& upsilon, const std::vector<int>& alphabet) {
  std::vector<OperationChoi> feeds;
  for (const auto& s : upsilon.spaces)
    if (s.leg == Leg::output) feeds.push_back({CMatrix::Identity(s.dim, s.dim) / static_cast<double>(s.dim), {s}});
  const ProcessTensor rest = apply_ops(upsilon, feeds);
  SpaceList ins;
  for (int k = static_cast<int>(alphabet.size()); k >= 1; --k) ins.push_back(in_leg(k, alphabet[k - 1]));
  const CMatrix m = reorder(rest.op, rest.spaces, ins);
  std::vector<double> out(m.rows());
  for (long i = 0; i < m.rows(); ++i) out[i] = m(i, i).real();
  return out;
}

ClassicalProcess parse_classical_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("classical CSV: missing header");
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      cell.erase(std::remove_if(cell.begin(), cell.end(), ::isspace), cell.end());
      header.push_back(cell);
    }
  }
  int pcol = -1;
  std::map<int, int> step_col;  // step -> column
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "p") {
      pcol = static_cast<int>(c);
    } else if (header[c].size() > 1 && header[c][0] == 'x') {
      try {
        step_col[std::stoi(header[c].substr(1))] = static_cast<int>(c);
      } catch (const std::logic_error&) {
        throw InvalidArgument("classical CSV: bad column " + header[c]);
      }
    } else {
      throw InvalidArgument("classical CSV: bad column " + header[c]);
    }
  }
  const int n = static_cast<int>(step_col.size());
  if (pcol < 0 || n == 0 || step_col.begin()->first != 1 || step_col.rbegin()->first != n)
    throw InvalidArgument("classical CSV: need columns x1..xn and p");
  std::vector<std::pair<std::vector<int>, double>> rows;
  std::vector<int> alphabet(n, 1);
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) throw InvalidArgument("classical CSV: ragged row");
    std::vector<int> x(n);
    try {
      for (const auto& [step, col] : step_col) {
        x[step - 1] = std::stoi(cells[col]);
        if (x[step - 1] < 0) throw InvalidArgument("classical CSV: negative outcome");
        alphabet[step - 1] = std::max(alphabet[step - 1], x[step - 1] + 1);
      }
      rows.push_back({x, std::stod(cells[pcol])});
    } catch (const std::logic_error&) {
      throw InvalidArgument("classical CSV: unparsable row: " + line);
    }
  }
  ClassicalProcess p;
  p.alphabet = alphabet;
  long size = 1;
  for (int a : alphabet) size *= a;
  p.p.assign(size, 0.0);
  for (const auto& [x, v] : rows) p.p[p.index(x)] += v;
  p.validate();
  return p;
}

ClassicalProcess load_classical_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_classical_csv(ss.str());
}

std::string to_csv(const ClassicalProcess& p) {
  std::ostringstream os;
  os.precision(17);
  for (int k = 1; k <= p.steps(); ++k) os << "x" << k << ",";
  os << "p\n";
  for (long i = 0; i < static_cast<long>(p.p.size()); ++i) {
    const auto x = p.outcome(i);
    for (int v : x) os << v << ",";
    os << p.p[i] << "\n";
  }
  return os.str();
}

}  // namespace qmo
