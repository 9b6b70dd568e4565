#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cvw {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;
using MatrixXc = ComplexMatrix<double>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;

// Single source of truth for numerical thresholds.
namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kOracle = 1e-9;
inline constexpr double kTraceImaginary = 1e-10;
inline constexpr double kPositivity = 1e-10;
inline constexpr double kQubitMap = 1e-10;
inline constexpr double kSpinAlgebra = 1e-12;
inline constexpr double kVariance = 1e-6;
inline constexpr double kFidelity = 1e-3;
inline constexpr double kGridBoundary = 1e-8;
}  // namespace tol

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: wrong dimensions, non-Hermitian matrices, odd cutoffs.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual = 0.0)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class CutoffTooSmall : public Error {
 public:
  CutoffTooSmall(const std::string& what, int minimal_n_max)
      : Error(what), minimal_n_max_(minimal_n_max) {}
  int minimal_n_max() const noexcept { return minimal_n_max_; }

 private:
  int minimal_n_max_;
};

class ParametersOutOfRange : public Error {
 public:
  using Error::Error;
};

class DomainTooSmall : public Error {
 public:
  using Error::Error;
};

// Two independent routes to the same quantity disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvw
