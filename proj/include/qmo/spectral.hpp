#pragma once

#include "qmo/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace qmo {

template <typename S>
struct EigResult {
  RVector values;   // ascending
  Mat<S> vectors;   // columns
};

template <typename S>
double hermiticity_defect(const Mat<S>& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename S>
EigResult<S> herm_eig(const Mat<S>& a, double tol = kPsdTol) {
  if (a.rows() != a.cols()) throw DimensionError("herm_eig: matrix not square");
  const double scale = std::max(1.0, a.size() ? a.cwiseAbs().maxCoeff() : 0.0);
  if (hermiticity_defect(a) > tol * scale)
    throw NotHermitianError("herm_eig: input not Hermitian (defect " + std::to_string(hermiticity_defect(a)) + ")");
  const Mat<S> h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat<S>> es(h);
  if (es.info() != Eigen::Success) throw Error("herm_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

RVector eigenvalues(const CMatrix& a, double tol = kPsdTol);
double min_eigenvalue(const CMatrix& a);
// PSD within tol, checked on the trace-normalized operator when tr > 0.
bool is_psd(const CMatrix& a, double tol = kPsdTol);

// Shannon entropy in bits of a (not necessarily normalized) weight vector.
double shannon_entropy(const RVector& p);

// S(A / tr A) in bits. Eigenvalues of the normalized operator in [-tol, 0]
// are clamped; anything below throws NotPsdError.
double von_neumann_entropy(const CMatrix& a, double tol = kPsdTol);

}  // namespace qmo
