#include "cvwerner/qubit_map.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "cvwerner/numerics.hpp"

namespace cvw {

SpinOperators build_spin_operators(int n_max) {
  if (n_max < 2 || n_max % 2 != 0)
    throw StructuralError("build_spin_operators: n_max must be even and >= 2 (got " + std::to_string(n_max) + ")");
  SpinOperators ops;
  ops.n_max = n_max;
  ops.s1 = MatrixXc::Zero(n_max, n_max);
  ops.s2 = MatrixXc::Zero(n_max, n_max);
  ops.s3 = MatrixXc::Zero(n_max, n_max);
  const Complex i(0, 1);
  for (int m = 0; 2 * m + 1 < n_max; ++m) {
    const int lo = 2 * m, hi = 2 * m + 1;
    ops.s1(lo, hi) = ops.s1(hi, lo) = 1.0;
    ops.s2(lo, hi) = -i;
    ops.s2(hi, lo) = i;
  }
  for (int m = 0; m < n_max; ++m) ops.s3(m, m) = (m % 2 == 0) ? 1.0 : -1.0;
  return ops;
}

std::shared_ptr<const SpinOperators> spin_operators(int n_max) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SpinOperators>> table;
  std::lock_guard lock(mutex);
  auto& slot = table[n_max];
  if (!slot) slot = std::make_shared<const SpinOperators>(build_spin_operators(n_max));
  return slot;
}

MatrixXc chi_operator(int n_max) {
  if (n_max < 2 || n_max % 2 != 0) throw StructuralError("chi_operator: n_max must be even and >= 2");
  MatrixXc chi = MatrixXc::Zero(2 * n_max, 2 * n_max);
  for (int m = 0; 2 * m + 1 < n_max; ++m)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) chi(2 * (2 * m + k) + k, 2 * (2 * m + l) + l) = 1.0;
  return chi;
}

const std::array<Eigen::Matrix2cd, 3>& pauli_matrices() {
  static const std::array<Eigen::Matrix2cd, 3> sigma = [] {
    const Complex i(0, 1);
    std::array<Eigen::Matrix2cd, 3> out;
    out[0] << 0, 1, 1, 0;
    out[1] << 0, -i, i, 0;
    out[2] << 1, 0, 0, -1;
    return out;
  }();
  return sigma;
}

namespace {

Matrix4c kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

struct ChiEntry {
  int a, k, ap, l;
};

std::vector<ChiEntry> chi_entries(int n_max) {
  const MatrixXc chi = chi_operator(n_max);
  std::vector<ChiEntry> out;
  for (int row = 0; row < chi.rows(); ++row)
    for (int col = 0; col < chi.cols(); ++col)
      if (chi(row, col) != Complex(0)) out.push_back({row / 2, row % 2, col / 2, col % 2});
  return out;
}

}  // namespace

QubitPairState QubitPairState::from_matrix(const Matrix4c& rho4) {
  QubitPairState q;
  q.rho4 = rho4;
  q.trace = rho4.trace().real();
  const auto& sigma = pauli_matrices();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  for (int i = 0; i < 3; ++i) {
    q.bloch_a(i) = (rho4 * kron2(sigma[i], id)).trace().real();
    q.bloch_b(i) = (rho4 * kron2(id, sigma[i])).trace().real();
    for (int j = 0; j < 3; ++j) q.corr_tensor(i, j) = (rho4 * kron2(sigma[i], sigma[j])).trace().real();
  }
  return q;
}

Matrix4c map_by_chi_contraction(const TwoModeDensityMatrix& rho) {
  const int n = rho.n_max();
  const auto entries = chi_entries(n);
  // <k1 k2|rho'|l1 l2> = sum chi_A[(a,k1),(a',l1)] chi_B[(b,k2),(b',l2)] rho^T[(a',b'),(a,b)]
  Matrix4c out = Matrix4c::Zero();
  for (const auto& ea : entries)
    for (const auto& eb : entries)
      out(2 * ea.k + eb.k, 2 * ea.l + eb.l) += rho.data(flat_index(ea.a, eb.a, n), flat_index(ea.ap, eb.ap, n));
  return out;
}

QubitPairState map_by_pauli_moments(const TwoModeDensityMatrix& rho) {
  const int n = rho.n_max();
  const auto ops = spin_operators(n);
  const MatrixXc id = MatrixXc::Identity(n, n);
  QubitPairState q;
  q.trace = rho.data.trace().real();
  for (int i = 0; i < 3; ++i) {
    q.bloch_a(i) = expectation_product(rho.data, (*ops)[i], id);
    q.bloch_b(i) = expectation_product(rho.data, id, (*ops)[i]);
    for (int j = 0; j < 3; ++j) q.corr_tensor(i, j) = expectation_product(rho.data, (*ops)[i], (*ops)[j]);
  }
  const auto& sigma = pauli_matrices();
  const Eigen::Matrix2cd id2 = Eigen::Matrix2cd::Identity();
  Matrix4c r = q.trace * Matrix4c::Identity();
  for (int i = 0; i < 3; ++i) {
    r += q.bloch_a(i) * kron2(sigma[i], id2) + q.bloch_b(i) * kron2(id2, sigma[i]);
    for (int j = 0; j < 3; ++j) r += q.corr_tensor(i, j) * kron2(sigma[i], sigma[j]);
  }
  q.rho4 = 0.25 * r;
  return q;
}

QubitPairState map_to_qubits(const TwoModeDensityMatrix& rho) {
  const Matrix4c by_chi = map_by_chi_contraction(rho);
  QubitPairState q = map_by_pauli_moments(rho);
  const double gap = (by_chi - q.rho4).cwiseAbs().maxCoeff();
  if (gap > tol::kQubitMap) {
    std::ostringstream msg;
    msg << "map_to_qubits: chi contraction and Pauli-moment assembly differ by " << gap;
    throw ConsistencyError(msg.str());
  }
  return q;
}

Matrix4c closed_form_rho4(const WernerParams& params) {
  const double p = params.p;
  const double l1 = params.lambda1(), l2 = params.lambda2();
  const double d1 = 1 + l1 * l1;
  const double d2 = (1 + l2 * l2) * (1 + l2 * l2);
  Matrix4c out = Matrix4c::Zero();
  out(0, 0) = p / d1 + (1 - p) / d2;
  out(1, 1) = out(2, 2) = l2 * l2 * (1 - p) / d2;
  out(3, 3) = l1 * l1 * p / d1 + std::pow(l2, 4) * (1 - p) / d2;
  out(0, 3) = out(3, 0) = l1 * p / d1;
  return out;
}

Eigen::Matrix3d closed_form_correlation(const WernerParams& params) {
  const double p = params.p;
  const double l1 = params.lambda1(), l2 = params.lambda2();
  const double t11 = 2 * l1 * p / (1 + l1 * l1);
  const double ratio = (1 - l2 * l2) / (1 + l2 * l2);
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  t(0, 0) = t11;
  t(1, 1) = -t11;
  t(2, 2) = p + (1 - p) * ratio * ratio;
  return t;
}

double min_partial_transpose_eigenvalue(const Matrix4c& rho4) {
  const MatrixXc pt = partial_transpose_A(MatrixXc(rho4));
  return hermitian_eigenvalues(pt).min();
}

double mapped_entanglement_threshold(double r, double s) {
  if (r == 0) return 1.0;
  if (s == 0) return 0.0;
  const double t2s = std::tanh(2 * s);
  return 1.0 / (1.0 + 2.0 * std::tanh(2 * r) / (t2s * t2s));
}

double bisect_mapped_threshold(const std::function<Matrix4c(double)>& rho4_at, double tolerance) {
  return bisect_transition([&](double p) { return min_partial_transpose_eigenvalue(rho4_at(p)) < 0; }, 0.0, 1.0,
                           tolerance);
}

BellAnalysis bell_analysis(const QubitPairState& q) {
  const Eigen::Matrix3d u = q.corr_tensor.transpose() * q.corr_tensor;
  const auto eig = hermitian_eigenvalues(u.cast<Complex>().eval());
  BellAnalysis out;
  for (int i = 0; i < 3; ++i) out.u_eigenvalues[i] = std::max(0.0, eig.eigenvalues[i]);
  out.bell_max = 2.0 * std::sqrt(out.u_eigenvalues[1] + out.u_eigenvalues[2]);
  return out;
}

double bell_factor_diagonal(const Eigen::Matrix3d& t) { return 2.0 * std::sqrt(t(0, 0) * t(0, 0) + t(2, 2) * t(2, 2)); }

double nonlocality_threshold(double r, double s) {
  const double a = std::pow(std::tanh(2 * s), 2);
  const double b = std::tanh(2 * r);
  if (a * a + b * b == 0) return 1.0;
  return (a * (a - 1) + std::sqrt(a * (a - a * b * b + 2 * b * b))) / (a * a + b * b);
}

}  // namespace cvw
