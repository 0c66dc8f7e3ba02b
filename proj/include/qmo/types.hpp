#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmo {

using cplx = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Mat<cplx>;
using CVector = Vec<cplx>;
using RMatrix = Mat<double>;
using RVector = Vec<double>;

// Factor dimensions of a tensor-product space, first factor most significant.
using Dims = std::vector<int>;

// Desk-scale guard on any dense operator dimension.
inline constexpr long kMaxDim = 4096;
inline constexpr double kPsdTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimensionError : public Error {
 public:
  using Error::Error;
};
class UnknownLabelError : public Error {
 public:
  using Error::Error;
};
class NotHermitianError : public Error {
 public:
  using Error::Error;
};
class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, double min_eig) : Error(what), min_eigenvalue(min_eig) {}
  double min_eigenvalue;
};
class LinearDependenceError : public Error {
 public:
  using Error::Error;
};
class InvalidArgument : public Error {
 public:
  using Error::Error;
};
class CausalityError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmo
