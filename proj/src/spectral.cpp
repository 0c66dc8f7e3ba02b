#include "qmo/spectral.hpp"

namespace qmo {

RVector eigenvalues(const CMatrix& a, double tol) { return herm_eig(a, tol).values; }

double min_eigenvalue(const CMatrix& a) {
  if (a.rows() == 0) return 0.0;
  const CMatrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_psd(const CMatrix& a, double tol) {
  const double tr = a.trace().real();
  const double scale = tr > 0 ? tr : 1.0;
  if (hermiticity_defect(a) > tol * std::max(1.0, a.cwiseAbs().maxCoeff())) return false;
  return min_eigenvalue(a) / scale >= -tol;
}

double shannon_entropy(const RVector& p) {
  const double total = p.sum();
  if (total <= 0) throw InvalidArgument("shannon_entropy: non-positive total weight");
  double h = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double x = p(k) / total;
    if (x > 0) h -= x * std::log2(x);
  }
  return h;
}

double von_neumann_entropy(const CMatrix& a, double tol) {
  const double tr = a.trace().real();
  if (!(tr > 0)) throw InvalidArgument("von_neumann_entropy: trace must be positive");
  const RVector lam = herm_eig(a, tol).values / tr;
  double h = 0.0;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    const double x = lam(k);
    if (x < -tol) throw NotPsdError("von_neumann_entropy: operator not PSD", x);
    if (x > 0) h -= x * std::log2(x);
  }
  return h;
}

}  // namespace qmo
