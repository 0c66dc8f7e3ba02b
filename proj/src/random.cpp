#include "qmo/random.hpp"

#include <Eigen/QR>

namespace qmo {

CMatrix Rng::ginibre(int rows, int cols) {
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = cnormal();
  return g;
}

CMatrix Rng::unitary(int d) {
  const CMatrix g = ginibre(d, d);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const cplx rk = r(k, k);
    if (std::abs(rk) > 0) q.col(k) *= rk / std::abs(rk);
  }
  return q;
}

CVector Rng::pure_state(int d) {
  CVector v(d);
  for (int k = 0; k < d; ++k) v(k) = cnormal();
  return v / v.norm();
}

CMatrix Rng::density_matrix(int d, int rank) {
  if (rank <= 0) rank = d;
  const CMatrix g = ginibre(d, rank);
  const CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

std::vector<CMatrix> Rng::channel(int d_in, int d_out, int count) {
  // Columns of a random isometry d_in -> d_out·count, sliced into Kraus blocks.
  const CMatrix u = unitary(d_out * count);
  std::vector<CMatrix> kraus;
  for (int k = 0; k < count; ++k) kraus.push_back(u.block(k * d_out, 0, d_out, d_in));
  return kraus;
}

}  // namespace qmo
