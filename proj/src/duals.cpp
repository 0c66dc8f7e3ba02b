#include "qmo/duals.hpp"

#include "qmo/spectral.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace qmo {

std::vector<CMatrix> hermitian_basis(int d) {
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < d; ++a) {
    CMatrix e = CMatrix::Zero(d, d);
    e(a, a) = 1.0;
    basis.push_back(e);
  }
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      CMatrix x = CMatrix::Zero(d, d), y = CMatrix::Zero(d, d);
      x(a, b) = x(b, a) = s;
      y(a, b) = cplx(0, -s);
      y(b, a) = cplx(0, s);
      basis.push_back(x);
      basis.push_back(y);
    }
  return basis;
}

RVector hermitian_coordinates(const CMatrix& h) {
  const int d = static_cast<int>(h.rows());
  RVector v(static_cast<Eigen::Index>(d) * d);
  const double r2 = std::sqrt(2.0);
  Eigen::Index k = 0;
  for (int a = 0; a < d; ++a) v(k++) = h(a, a).real();
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      // tr(X h) and tr(Y h) against the basis above.
      v(k++) = r2 * h(a, b).real();
      v(k++) = -r2 * h(a, b).imag();
    }
  return v;
}

CMatrix from_hermitian_coordinates(const RVector& v, int d) {
  CMatrix h = CMatrix::Zero(d, d);
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Index k = 0;
  for (int a = 0; a < d; ++a) h(a, a) = v(k++);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      const double x = v(k++), y = v(k++);
      h(a, b) = cplx(s * x, -s * y);
      h(b, a) = cplx(s * x, s * y);
    }
  return h;
}

namespace {

RMatrix coordinate_matrix(const std::vector<CMatrix>& ops, double tol) {
  if (ops.empty()) throw InvalidArgument("empty operator family");
  const int d = static_cast<int>(ops[0].rows());
  RMatrix m(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].rows() != d || ops[k].cols() != d) throw DimensionError("operator family with mixed shapes");
    const double scale = std::max(1.0, ops[k].cwiseAbs().maxCoeff());
    if (hermiticity_defect(ops[k]) > tol * scale) throw NotHermitianError("operator family is not Hermitian");
    m.col(static_cast<Eigen::Index>(k)) = hermitian_coordinates(ops[k]);
  }
  return m;
}

}  // namespace

int span_rank(const std::vector<CMatrix>& ops, double tol) {
  const RMatrix m = coordinate_matrix(ops, tol);
  Eigen::JacobiSVD<RMatrix> svd(m);
  const RVector sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tol * sv(0)) ++r;
  return r;
}

DualSet dual_set(const std::vector<CMatrix>& ops, double tol) {
  const RMatrix m = coordinate_matrix(ops, tol);
  const int d = static_cast<int>(ops[0].rows());
  const RMatrix gram = m.transpose() * m;  // tr(ops[x] ops[y]) for Hermitian ops
  Eigen::SelfAdjointEigenSolver<RMatrix> es(gram);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  const double cond = lo > 0 ? hi / lo : INFINITY;
  if (!(cond < 1e12))
    throw LinearDependenceError("dual_set: operators are linearly dependent (Gram condition " +
                                std::to_string(cond) + ")");
  DualSet out;
  out.gram_condition = cond;
  const RMatrix dual_coords = m * gram.inverse();
  for (Eigen::Index k = 0; k < dual_coords.cols(); ++k)
    out.duals.push_back(from_hermitian_coordinates(dual_coords.col(k), d));

  // Orthogonal complement from a full SVD of the coordinate matrix.
  const Eigen::Index full = m.rows();
  if (static_cast<Eigen::Index>(ops.size()) < full) {
    Eigen::JacobiSVD<RMatrix> svd(m, Eigen::ComputeFullU);
    const RMatrix u = svd.matrixU();
    for (Eigen::Index k = static_cast<Eigen::Index>(ops.size()); k < full; ++k)
      out.complement_basis.push_back(from_hermitian_coordinates(u.col(k), d));
  }
  return out;
}

}  // namespace qmo
