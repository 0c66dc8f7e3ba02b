#pragma once

// Index-level tensor-product plumbing on dense matrices. Everything is
// templated on the scalar so the classical side can reuse it with doubles.

#include "qmo/types.hpp"

#include <numeric>
#include <string>

namespace qmo {

inline long product(const Dims& dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

inline void guard_dim(long d, const char* where) {
  if (d > kMaxDim)
    throw DimensionError(std::string(where) + ": dimension " + std::to_string(d) + " exceeds " +
                         std::to_string(kMaxDim));
}

template <typename DA, typename DB>
Mat<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using S = typename DA::Scalar;
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Mat<S> out(ar * br, ac * bc);
  for (Eigen::Index j = 0; j < ac; ++j)
    for (Eigen::Index i = 0; i < ar; ++i) out.block(i * br, j * bc, br, bc) = a(i, j) * b.template cast<S>();
  return out;
}

template <typename S>
Mat<S> kron_all(const std::vector<Mat<S>>& factors) {
  Mat<S> out = Mat<S>::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

namespace detail {

inline void check_perm(const Dims& dims, const std::vector<int>& perm) {
  if (perm.size() != dims.size()) throw InvalidArgument("permutation length does not match factor count");
  std::vector<char> seen(dims.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(dims.size()) || seen[p])
      throw InvalidArgument("not a permutation of the factors");
    seen[p] = 1;
  }
}

// For each index of the permuted space, the index in the original space.
// New factor k is old factor perm[k].
inline std::vector<long> perm_index_map(const Dims& dims, const std::vector<int>& perm) {
  const std::size_t n = dims.size();
  std::vector<long> old_stride(n, 1);
  for (int k = static_cast<int>(n) - 2; k >= 0; --k) old_stride[k] = old_stride[k + 1] * dims[k + 1];
  std::vector<int> new_dims(n);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = dims[perm[k]];
  const long total = product(dims);
  std::vector<long> map(total);
  std::vector<int> digit(n, 0);
  long old_index = 0;
  for (long idx = 0; idx < total; ++idx) {
    map[idx] = old_index;
    for (int k = static_cast<int>(n) - 1; k >= 0; --k) {
      ++digit[k];
      old_index += old_stride[perm[k]];
      if (digit[k] < new_dims[k]) break;
      old_index -= old_stride[perm[k]] * new_dims[k];
      digit[k] = 0;
    }
  }
  return map;
}

}  // namespace detail

template <typename S>
Mat<S> permute_subsystems(const Mat<S>& a, const Dims& dims, const std::vector<int>& perm) {
  detail::check_perm(dims, perm);
  if (product(dims) != a.rows() || a.rows() != a.cols())
    throw DimensionError("permute_subsystems: dims do not match operator");
  bool identity = true;
  for (std::size_t k = 0; k < perm.size(); ++k) identity = identity && perm[k] == static_cast<int>(k);
  if (identity) return a;
  const auto map = detail::perm_index_map(dims, perm);
  const long d = a.rows();
  Mat<S> out(d, d);
  for (long j = 0; j < d; ++j)
    for (long i = 0; i < d; ++i) out(i, j) = a(map[i], map[j]);
  return out;
}

inline std::vector<int> inverse_perm(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = static_cast<int>(k);
  return inv;
}

// Order that moves `front` factors first (in the given order), the rest after.
inline std::vector<int> front_order(int n, const std::vector<int>& front) {
  std::vector<int> order(front);
  std::vector<char> used(n, 0);
  for (int f : front) used.at(f) = 1;
  for (int k = 0; k < n; ++k)
    if (!used[k]) order.push_back(k);
  return order;
}

// Trace over every factor not listed in `keep`; kept factors stay in `keep` order.
template <typename S>
Mat<S> partial_trace_keep(const Mat<S>& a, const Dims& dims, const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  const auto order = front_order(n, keep);
  const Mat<S> b = permute_subsystems(a, dims, order);
  long dk = 1;
  for (int k : keep) dk *= dims[k];
  const long dt = a.rows() / dk;
  Mat<S> out = Mat<S>::Zero(dk, dk);
  for (long t = 0; t < dt; ++t)
    for (long j = 0; j < dk; ++j)
      for (long i = 0; i < dk; ++i) out(i, j) += b(i * dt + t, j * dt + t);
  return out;
}

template <typename S>
Mat<S> partial_trace(const Mat<S>& a, const Dims& dims, const std::vector<int>& remove) {
  std::vector<char> gone(dims.size(), 0);
  for (int r : remove) gone.at(r) = 1;
  std::vector<int> keep;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (!gone[k]) keep.push_back(k);
  return partial_trace_keep(a, dims, keep);
}

// Σ_k (K_k ⊗ 1) A (K_k ⊗ 1)† with K_k acting on the `targets` factors (square Kraus).
template <typename S>
Mat<S> apply_kraus(const Mat<S>& a, const Dims& dims, const std::vector<int>& targets,
                   const std::vector<Mat<S>>& kraus) {
  const int n = static_cast<int>(dims.size());
  const auto order = front_order(n, targets);
  Dims pdims(n);
  for (int k = 0; k < n; ++k) pdims[k] = dims[order[k]];
  const Mat<S> b = permute_subsystems(a, dims, order);
  long dt = 1;
  for (int t : targets) dt *= dims[t];
  const long d = a.rows();
  const long dr = d / dt;
  Mat<S> acc = Mat<S>::Zero(d, d);
  Mat<S> left(d, d);
  for (const auto& k : kraus) {
    if (k.rows() != dt || k.cols() != dt) throw DimensionError("apply_kraus: Kraus shape mismatch");
    left.setZero();
    for (long r = 0; r < dt; ++r)
      for (long c = 0; c < dt; ++c)
        if (k(r, c) != S(0)) left.middleRows(r * dr, dr) += k(r, c) * b.middleRows(c * dr, dr);
    for (long r = 0; r < dt; ++r)
      for (long c = 0; c < dt; ++c)
        if (k(r, c) != S(0)) {
          if constexpr (Eigen::NumTraits<S>::IsComplex)
            acc.middleCols(r * dr, dr) += std::conj(k(r, c)) * left.middleCols(c * dr, dr);
          else
            acc.middleCols(r * dr, dr) += k(r, c) * left.middleCols(c * dr, dr);
        }
  }
  return permute_subsystems(acc, pdims, inverse_perm(order));
}

// tr_T[(O ⊗ 1) A] where O acts on `targets` (in that order); the remaining
// factors keep their relative order.
template <typename S>
Mat<S> contract(const Mat<S>& a, const Dims& dims, const std::vector<int>& targets, const Mat<S>& o) {
  const int n = static_cast<int>(dims.size());
  std::vector<char> used(n, 0);
  for (int t : targets) used.at(t) = 1;
  std::vector<int> order;
  for (int k = 0; k < n; ++k)
    if (!used[k]) order.push_back(k);
  for (int t : targets) order.push_back(t);
  const Mat<S> b = permute_subsystems(a, dims, order);
  long dt = 1;
  for (int t : targets) dt *= dims[t];
  if (o.rows() != dt || o.cols() != dt) throw DimensionError("contract: operator shape mismatch");
  const long dr = a.rows() / dt;
  Mat<S> out = Mat<S>::Zero(dr, dr);
  for (long t = 0; t < dt; ++t)
    for (long s = 0; s < dt; ++s) {
      const S w = o(t, s);
      if (w == S(0)) continue;
      for (long j = 0; j < dr; ++j)
        for (long i = 0; i < dr; ++i) out(i, j) += w * b(i * dt + s, j * dt + t);
    }
  return out;
}

// Transpose of the listed factors only.
template <typename S>
Mat<S> partial_transpose(const Mat<S>& a, const Dims& dims, const std::vector<int>& targets) {
  const int n = static_cast<int>(dims.size());
  std::vector<long> stride(n, 1);
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];
  const long d = a.rows();
  Mat<S> out(d, d);
  for (long j = 0; j < d; ++j)
    for (long i = 0; i < d; ++i) {
      long ii = i, jj = j;
      for (int t : targets) {
        const long di = (i / stride[t]) % dims[t];
        const long dj = (j / stride[t]) % dims[t];
        ii += (dj - di) * stride[t];
        jj += (di - dj) * stride[t];
      }
      out(ii, jj) = a(i, j);
    }
  return out;
}

}  // namespace qmo
