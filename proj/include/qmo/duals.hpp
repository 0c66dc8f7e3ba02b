#pragma once

#include "qmo/types.hpp"

#include <vector>

namespace qmo {

struct DualSet {
  std::vector<CMatrix> duals;              // tr(ops[x] duals[y]) = δ_xy
  std::vector<CMatrix> complement_basis;   // orthonormal, orthogonal to span(ops)
  double gram_condition = 1.0;
};

// Hilbert–Schmidt-orthonormal basis of the d×d Hermitian matrices.
std::vector<CMatrix> hermitian_basis(int d);

// Real coordinates of a Hermitian matrix in hermitian_basis(d).
RVector hermitian_coordinates(const CMatrix& h);
CMatrix from_hermitian_coordinates(const RVector& v, int d);

// Rank of span{ops} as a real subspace of the Hermitian operators.
int span_rank(const std::vector<CMatrix>& ops, double tol = 1e-9);

// Duals by Gram inversion inside span(ops); the complement is the orthogonal
// complement of span(ops) in the Hermitian space. Throws
// LinearDependenceError when the Gram condition number exceeds 1e12.
DualSet dual_set(const std::vector<CMatrix>& ops, double tol = 1e-9);

}  // namespace qmo
