#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "cvwerner/core.hpp"

namespace cvw {

template <typename Real>
struct EigenResult {
  std::vector<Real> eigenvalues;  // ascending
  Real max_residual = 0;          // max_i |A v_i - lambda_i v_i|
  int sweeps = 0;                 // largest sweep count over blocks
  std::size_t blocks = 0;         // irreducible diagonal blocks found

  Real min() const { return eigenvalues.front(); }
  Real max() const { return eigenvalues.back(); }
};

struct JacobiOptions {
  double relative_off_tolerance = 1e-12;
  int max_sweeps = 100;
};

namespace detail {

// Cyclic complex Jacobi on a dense Hermitian block. Overwrites `a` with its
// (numerically) diagonal form and accumulates the rotations into `v`.
template <typename Real>
int jacobi_sweeps(ComplexMatrix<Real>& a, ComplexMatrix<Real>& v, const JacobiOptions& opt) {
  using C = std::complex<Real>;
  const Eigen::Index n = a.rows();
  v.setIdentity(n, n);
  if (n < 2) return 0;

  const Real norm = a.norm();
  const Real target = Real(opt.relative_off_tolerance) * norm;
  auto off_norm = [&] {
    Real s = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    if (off_norm() <= target) return sweep - 1;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const C apq = a(p, q);
        const Real mag = std::abs(apq);
        if (mag == Real(0)) continue;
        const Real app = a(p, p).real();
        const Real aqq = a(q, q).real();
        // Skip entries already negligible against both diagonals.
        if (sweep > 4 && mag < std::numeric_limits<Real>::epsilon() * Real(1e-2) * (std::abs(app) + std::abs(aqq)))
        {
          a(p, q) = a(q, p) = C(0);
          continue;
        }
        const Real theta = (aqq - app) / (Real(2) * mag);
        Real t = Real(1) / (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
        if (theta < 0) t = -t;
        const Real c = Real(1) / std::sqrt(t * t + Real(1));
        const Real s = t * c;
        const C phase = apq / mag;
        const C sp = s * phase;             // J(p,q)
        const C sq = -s * std::conj(phase); // J(q,p)

        // A <- A J (columns), then A <- J^H A (rows).
        const auto colp = a.col(p).eval();
        a.col(p) = c * colp + sq * a.col(q);
        a.col(q) = sp * colp + c * a.col(q);
        const auto rowp = a.row(p).eval();
        a.row(p) = c * rowp + std::conj(sq) * a.row(q);
        a.row(q) = std::conj(sp) * rowp + c * a.row(q);
        a(p, p) = C(app - t * mag);
        a(q, q) = C(aqq + t * mag);
        a(p, q) = a(q, p) = C(0);

        const auto vp = v.col(p).eval();
        v.col(p) = c * vp + sq * v.col(q);
        v.col(q) = sp * vp + c * v.col(q);
      }
    }
  }
  const Real final_off = off_norm();
  if (final_off <= target) return opt.max_sweeps;
  throw NumericalError("hermitian_eigenvalues: Jacobi did not converge, off-diagonal norm " +
                           std::to_string(double(final_off)),
                       double(final_off));
}

// Connected components of the nonzero pattern. A symmetric permutation
// brings the matrix to block-diagonal form along these components.
template <typename Derived>
std::vector<std::vector<Eigen::Index>> nonzero_components(const Eigen::MatrixBase<Derived>& a) {
  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i)
      if (a(i, j) != typename Derived::Scalar(0)) {
        const auto ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

}  // namespace detail

/// Eigenvalues of a complex Hermitian matrix by cyclic Jacobi rotations.
///
/// The matrix is first split into the irreducible blocks of its sparsity
/// pattern (an exact permutation); each block is diagonalised densely. The
/// residual is measured against the original block with the accumulated
/// rotations as eigenvectors.
template <typename Derived>
EigenResult<typename Eigen::NumTraits<typename Derived::Scalar>::Real> hermitian_eigenvalues(
    const Eigen::MatrixBase<Derived>& input, const JacobiOptions& opt = {}) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Mat = ComplexMatrix<Real>;
  if (input.rows() != input.cols()) throw StructuralError("hermitian_eigenvalues: matrix is not square");
  const Mat a = input.template cast<std::complex<Real>>();
  const Eigen::Index n = a.rows();
  EigenResult<Real> out;
  if (n == 0) return out;
  const Real herm = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (herm > Real(tol::kHermitian))
    throw StructuralError("hermitian_eigenvalues: input not Hermitian (deviation " + std::to_string(double(herm)) + ")");

  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  const auto groups = detail::nonzero_components(a);
  out.blocks = groups.size();
  for (const auto& idx : groups) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    if (k == 1) {
      out.eigenvalues.push_back(a(idx[0], idx[0]).real());
      continue;
    }
    Mat block(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index i = 0; i < k; ++i) block(i, j) = a(idx[i], idx[j]);
    // Symmetrise exactly so rounding in the input cannot leak imaginary diagonals.
    Mat work = (block + block.adjoint()) * Real(0.5);
    Mat vecs;
    out.sweeps = std::max(out.sweeps, detail::jacobi_sweeps(work, vecs, opt));
    const Eigen::Matrix<Real, Eigen::Dynamic, 1> lambda = work.diagonal().real();
    const Mat resid = block * vecs - vecs * lambda.template cast<std::complex<Real>>().asDiagonal();
    out.max_residual = std::max(out.max_residual, resid.colwise().norm().maxCoeff());
    for (Eigen::Index i = 0; i < k; ++i) out.eigenvalues.push_back(lambda(i));
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

// ---------------------------------------------------------------------------
// Phase-space quadrature

/// Uniform grid over [-half_width, half_width]^dims holding sampled values.
/// Values are stored with the first axis slowest.
struct PhaseSpaceGrid {
  double half_width = 0;
  int points_per_axis = 0;
  int dims = 2;
  std::vector<double> values;

  static PhaseSpaceGrid make(double half_width, int points_per_axis, int dims);

  double spacing() const { return 2.0 * half_width / (points_per_axis - 1); }
  double coordinate(int i) const { return -half_width + i * spacing(); }
  std::size_t size() const;
};

/// Sample f(x, p) on a 2D grid.
PhaseSpaceGrid sample_grid(const std::function<double(double, double)>& f, double half_width, int points_per_axis);

/// Sample f(x1, x2, x3, x4) on a 4D grid.
PhaseSpaceGrid sample_grid(const std::function<double(double, double, double, double)>& f, double half_width,
                           int points_per_axis);

/// Trapezoidal rule over a 2D or 4D grid. Throws DomainTooSmall when the
/// boundary carries more than 1e-8 of the peak magnitude.
double integrate_grid(const PhaseSpaceGrid& grid);

/// Smallest odd point count >= min_points whose spacing does not exceed max_spacing.
int odd_points_for_spacing(double half_width, double max_spacing, int min_points = 201);

/// Locate the switch of a monotone predicate on [lo, hi] (pred(lo) false,
/// pred(hi) true) to within `tolerance`.
double bisect_transition(const std::function<bool(double)>& pred, double lo, double hi, double tolerance);

}  // namespace cvw
