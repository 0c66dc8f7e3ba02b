#pragma once

// Slow, index-by-index reference implementations. They share no code with
// the library so a test comparing the two catches bookkeeping slips.

#include "qmo/types.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using qmo::CMatrix;
using qmo::cplx;

inline std::vector<int> digits(long idx, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    d[k] = static_cast<int>(idx % dims[k]);
    idx /= dims[k];
  }
  return d;
}

inline long index(const std::vector<int>& d, const std::vector<int>& dims) {
  long idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + d[k];
  return idx;
}

inline long prod(const std::vector<int>& dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      for (long k = 0; k < b.rows(); ++k)
        for (long l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Keeps the factors in `keep` (ascending order of position).
inline CMatrix ptrace_keep(const CMatrix& a, const std::vector<int>& dims, const std::vector<int>& keep) {
  std::vector<int> kd;
  for (int k : keep) kd.push_back(dims[k]);
  const long dk = prod(kd);
  CMatrix out = CMatrix::Zero(dk, dk);
  const long d = prod(dims);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) {
      const auto dr = digits(r, dims), dc = digits(c, dims);
      bool diag = true;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        bool kept = false;
        for (int q : keep) kept = kept || q == static_cast<int>(k);
        if (!kept && dr[k] != dc[k]) diag = false;
      }
      if (!diag) continue;
      std::vector<int> rr, cc;
      for (int q : keep) {
        rr.push_back(dr[q]);
        cc.push_back(dc[q]);
      }
      out(index(rr, kd), index(cc, kd)) += a(r, c);
    }
  return out;
}

inline CMatrix permute(const CMatrix& a, const std::vector<int>& dims, const std::vector<int>& perm) {
  std::vector<int> nd;
  for (int p : perm) nd.push_back(dims[p]);
  const long d = prod(dims);
  CMatrix out(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) {
      const auto dr = digits(r, dims), dc = digits(c, dims);
      std::vector<int> nr, nc;
      for (int p : perm) {
        nr.push_back(dr[p]);
        nc.push_back(dc[p]);
      }
      out(index(nr, nd), index(nc, nd)) = a(r, c);
    }
  return out;
}

inline CMatrix ptranspose(const CMatrix& a, const std::vector<int>& dims, const std::vector<int>& targets) {
  const long d = prod(dims);
  CMatrix out(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) {
      auto dr = digits(r, dims), dc = digits(c, dims);
      for (int t : targets) std::swap(dr[t], dc[t]);
      out(index(dr, dims), index(dc, dims)) = a(r, c);
    }
  return out;
}

// Entropy in bits from the characteristic eigenvalues computed by Jacobi
// rotations on the real symmetric embedding [[Re, -Im], [Im, Re]], which
// doubles every eigenvalue.
inline std::vector<double> eigenvalues(const CMatrix& h) {
  const long n = h.rows();
  std::vector<std::vector<double>> m(2 * n, std::vector<double>(2 * n));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      m[i][j] = h(i, j).real();
      m[i + n][j + n] = h(i, j).real();
      m[i][j + n] = -h(i, j).imag();
      m[i + n][j] = h(i, j).imag();
    }
  const long N = 2 * n;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (long p = 0; p < N; ++p)
      for (long q = p + 1; q < N; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-30) break;
    for (long p = 0; p < N; ++p)
      for (long q = p + 1; q < N; ++q) {
        if (std::abs(m[p][q]) < 1e-300) continue;
        const double theta = (m[q][q] - m[p][p]) / (2 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (long k = 0; k < N; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (long k = 0; k < N; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
  }
  std::vector<double> ev;
  for (long k = 0; k < N; ++k) ev.push_back(m[k][k]);
  std::sort(ev.begin(), ev.end());
  std::vector<double> out;
  for (long k = 0; k < N; k += 2) out.push_back(0.5 * (ev[k] + ev[k + 1]));
  return out;
}

inline double entropy_bits(const CMatrix& rho) {
  const double tr = rho.trace().real();
  double s = 0;
  for (double l : eigenvalues(rho)) {
    const double p = l / tr;
    if (p > 1e-14) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace oracle
