#pragma once

// Truncated two-mode Fock space. Basis |m>_A |n>_B is stored row-major with
// mode A as the slow index: flat = m * n_max + n.

#include <cmath>
#include <string>

#include "cvwerner/core.hpp"

namespace cvw {

struct FockCutoff {
  int n_max = 0;          // photon numbers 0 .. n_max - 1 per mode
  double tail_bound = 0;  // admissible truncated trace mass

  static FockCutoff make(int n_max, double tail_bound) {
    if (n_max < 2) throw StructuralError("FockCutoff: n_max must be >= 2, got " + std::to_string(n_max));
    if (!(tail_bound > 0.0 && tail_bound < 1.0))
      throw StructuralError("FockCutoff: tail_bound must lie in (0, 1)");
    return FockCutoff{n_max, tail_bound};
  }

  int dim() const { return n_max * n_max; }
};

struct CompositeIndex {
  int m = 0;
  int n = 0;
  int flat = 0;

  static CompositeIndex from_modes(int m, int n, int n_max) {
    if (m < 0 || n < 0 || m >= n_max || n >= n_max)
      throw StructuralError("CompositeIndex: photon number outside the truncation");
    return {m, n, m * n_max + n};
  }

  static CompositeIndex from_flat(int flat, int n_max) {
    if (flat < 0 || flat >= n_max * n_max) throw StructuralError("CompositeIndex: flat index out of range");
    return {flat / n_max, flat % n_max, flat};
  }
};

inline int flat_index(int m, int n, int n_max) { return m * n_max + n; }

template <typename Real = double>
struct BasicTwoModeDensityMatrix {
  FockCutoff cutoff;
  ComplexMatrix<Real> data;
  Real trace_deficit = 0;

  int n_max() const { return cutoff.n_max; }

  /// Throws StructuralError naming the first violated invariant.
  void check_invariants() const {
    const int dim = cutoff.dim();
    if (data.rows() != dim || data.cols() != dim)
      throw StructuralError("TwoModeDensityMatrix: data is not n_max^2 x n_max^2");
    const Real herm = (data - data.adjoint()).cwiseAbs().maxCoeff();
    if (herm >= Real(tol::kHermitian))
      throw StructuralError("TwoModeDensityMatrix: not Hermitian (deviation " + std::to_string(double(herm)) + ")");
    if (trace_deficit < 0 || trace_deficit > cutoff.tail_bound)
      throw StructuralError("TwoModeDensityMatrix: trace deficit outside [0, tail_bound]");
    const std::complex<Real> tr = data.trace();
    if (std::abs(tr.real() - (1 - trace_deficit)) > Real(1e-12) || std::abs(tr.imag()) > Real(tol::kTraceImaginary))
      throw StructuralError("TwoModeDensityMatrix: trace != 1 - trace_deficit");
    for (int i = 0; i < dim; ++i) {
      if (data(i, i).real() < Real(-1e-12) || std::abs(data(i, i).imag()) > Real(tol::kHermitian))
        throw StructuralError("TwoModeDensityMatrix: diagonal entry negative or complex");
    }
  }
};

using TwoModeDensityMatrix = BasicTwoModeDensityMatrix<double>;

namespace detail {

inline int mode_dimension(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) throw StructuralError("two-mode operator must be square");
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows))));
  if (static_cast<Eigen::Index>(n) * n != rows)
    throw StructuralError("two-mode operator dimension is not a perfect square");
  return n;
}

}  // namespace detail

/// result[(m,n),(m',n')] = a[m][m'] * b[n][n'].
template <typename DA, typename DB>
typename DA::PlainObject tensor_product(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw StructuralError("tensor_product: factors must be square with equal dimension");
  const Eigen::Index n = a.rows();
  typename DA::PlainObject out(n * n, n * n);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index mp = 0; mp < n; ++mp) out.block(m * n, mp * n, n, n) = a(m, mp) * b;
  return out;
}

/// Transpose on mode A: result[(m,n),(m',n')] = rho[(m',n),(m,n')].
template <typename Derived>
typename Derived::PlainObject partial_transpose_A(const Eigen::MatrixBase<Derived>& rho) {
  const int n = detail::mode_dimension(rho.rows(), rho.cols());
  typename Derived::PlainObject out(rho.rows(), rho.cols());
  for (int m = 0; m < n; ++m)
    for (int mp = 0; mp < n; ++mp) out.block(m * n, mp * n, n, n) = rho.block(mp * n, m * n, n, n);
  return out;
}

/// result[m][m'] = sum_n rho[(m,n),(m',n)].
template <typename Derived>
typename Derived::PlainObject partial_trace_B(const Eigen::MatrixBase<Derived>& rho) {
  const int n = detail::mode_dimension(rho.rows(), rho.cols());
  typename Derived::PlainObject out(n, n);
  for (int m = 0; m < n; ++m)
    for (int mp = 0; mp < n; ++mp) out(m, mp) = rho.block(m * n, mp * n, n, n).trace();
  return out;
}

/// result[n][n'] = sum_m rho[(m,n),(m,n')].
template <typename Derived>
typename Derived::PlainObject partial_trace_A(const Eigen::MatrixBase<Derived>& rho) {
  const int n = detail::mode_dimension(rho.rows(), rho.cols());
  typename Derived::PlainObject out = Derived::PlainObject::Zero(n, n);
  for (int m = 0; m < n; ++m) out += rho.block(m * n, m * n, n, n);
  return out;
}

namespace detail {

template <typename Scalar>
auto checked_real(const Scalar& tr) {
  if (std::abs(tr.imag()) > tol::kTraceImaginary)
    throw NumericalError("expectation: Tr(rho O) has imaginary part " + std::to_string(double(tr.imag())),
                         double(std::abs(tr.imag())));
  return tr.real();
}

}  // namespace detail

/// Re Tr(rho * obs); the imaginary part must vanish to within 1e-10.
template <typename DR, typename DO>
auto expectation(const Eigen::MatrixBase<DR>& rho, const Eigen::MatrixBase<DO>& obs) {
  if (rho.rows() != obs.rows() || rho.cols() != obs.cols())
    throw StructuralError("expectation: operator and state dimensions differ");
  // Tr(rho O) = sum_ij rho_ij O_ji
  return detail::checked_real(rho.cwiseProduct(obs.transpose()).sum());
}

/// Tr(rho (a ⊗ b)) without materialising the product operator.
template <typename DR, typename DA, typename DB>
auto expectation_product(const Eigen::MatrixBase<DR>& rho, const Eigen::MatrixBase<DA>& a,
                         const Eigen::MatrixBase<DB>& b) {
  const int n = detail::mode_dimension(rho.rows(), rho.cols());
  if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n)
    throw StructuralError("expectation_product: single-mode operators do not match the state");
  using Scalar = typename DR::Scalar;
  Scalar total(0);
  const auto bt = b.transpose().eval();
  for (int m = 0; m < n; ++m)
    for (int mp = 0; mp < n; ++mp) {
      const Scalar amp = a(mp, m);
      if (amp == Scalar(0)) continue;
      total += amp * rho.block(m * n, mp * n, n, n).cwiseProduct(bt).sum();
    }
  return detail::checked_real(total);
}

template <typename Real>
Real expectation(const BasicTwoModeDensityMatrix<Real>& rho, const ComplexMatrix<Real>& obs) {
  return expectation(rho.data, obs);
}

}  // namespace cvw
