#pragma once

// Local compression of each mode onto a qubit by pairing Fock levels
// (2m, 2m+1), plus the two-qubit entanglement and CHSH analyses of the
// resulting state. Qubit basis order is |k1 k2> with qubit 1 (mode A) slow.

#include <array>
#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "cvwerner/fock.hpp"
#include "cvwerner/states.hpp"

namespace cvw {

/// Pseudo-spin operators of one mode:
///   S1 + i S2 = 2 sum_m |2m><2m+1|,   S3 = sum_m (-1)^m |m><m|.
struct SpinOperators {
  int n_max = 0;
  MatrixXc s1, s2, s3;

  const MatrixXc& operator[](int i) const { return i == 0 ? s1 : (i == 1 ? s2 : s3); }
};

/// Throws StructuralError for odd or too small n_max.
SpinOperators build_spin_operators(int n_max);

/// Shared immutable table, built once per n_max.
std::shared_ptr<const SpinOperators> spin_operators(int n_max);

/// Positive operator chi = sum_m sum_{k,l} |2m+k><2m+l| ⊗ |k><l| on mode ⊗ qubit,
/// flat index (a, k) -> 2a + k.
MatrixXc chi_operator(int n_max);

struct QubitPairState {
  Matrix4c rho4 = Matrix4c::Zero();
  Eigen::Vector3d bloch_a = Eigen::Vector3d::Zero();
  Eigen::Vector3d bloch_b = Eigen::Vector3d::Zero();
  Eigen::Matrix3d corr_tensor = Eigen::Matrix3d::Zero();
  double trace = 1;

  /// Moments recovered from a 4x4 matrix by Pauli traces.
  static QubitPairState from_matrix(const Matrix4c& rho4);
};

/// The 2x2 Pauli matrices sigma_1..3 (index 0..2).
const std::array<Eigen::Matrix2cd, 3>& pauli_matrices();

/// rho' = Tr_AB[chi_A1 chi_B2 (rho^T ⊗ I ⊗ I)], contracted entrywise.
Matrix4c map_by_chi_contraction(const TwoModeDensityMatrix& rho);

/// rho' = (Tr(rho) I⊗I + S^A·sigma ⊗ I + I ⊗ S^B·sigma + sum t_ij sigma_i ⊗ sigma_j) / 4.
QubitPairState map_by_pauli_moments(const TwoModeDensityMatrix& rho);

/// Both constructions; throws ConsistencyError if they differ by more than 1e-10.
QubitPairState map_to_qubits(const TwoModeDensityMatrix& rho);

/// Closed-form image of the Werner state in the full Fock space.
Matrix4c closed_form_rho4(const WernerParams& params);
Eigen::Matrix3d closed_form_correlation(const WernerParams& params);

/// Partial transpose on qubit 1 followed by the Jacobi eigensolver.
double min_partial_transpose_eigenvalue(const Matrix4c& rho4);

/// p above which the mapped state has a negative partial transpose.
/// Degenerate cases: r = 0 -> 1 (never), s = 0 -> 0.
double mapped_entanglement_threshold(double r, double s);

/// Bisection in p on the sign of the smallest partial-transpose eigenvalue
/// of `rho4_at(p)`.
double bisect_mapped_threshold(const std::function<Matrix4c(double)>& rho4_at, double tolerance = 1e-12);

struct BellAnalysis {
  std::array<double, 3> u_eigenvalues{};  // spectrum of T^T T, ascending
  double bell_max = 0;                    // 2 sqrt(u_2 + u_3)

  bool nonlocal() const { return bell_max > 2.0; }
};

BellAnalysis bell_analysis(const QubitPairState& q);

/// 2 sqrt(t11^2 + t33^2), valid when t11^2 <= t33^2 and T is diagonal with t22 = -t11.
double bell_factor_diagonal(const Eigen::Matrix3d& t);

/// p above which the CHSH inequality is violated; values >= 1 mean never.
double nonlocality_threshold(double r, double s);

}  // namespace cvw
