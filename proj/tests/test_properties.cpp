// Seeded randomised checks of the eigensolver and the state constructors.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvwerner/numerics.hpp"
#include "cvwerner/qubit_map.hpp"
#include "cvwerner/states.hpp"
#include "support.hpp"

using namespace cvw;

TEST_CASE("eigenvalue sum and square sum match trace and Frobenius norm") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> dim(2, 160);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = dim(rng);
    CAPTURE(n);
    const MatrixXc h = testing::random_hermitian(n, rng);
    const auto ev = hermitian_eigenvalues(h).eigenvalues;
    double sum = 0, sq = 0;
    for (double v : ev) {
      sum += v;
      sq += v * v;
    }
    const double fro = h.squaredNorm();
    CHECK(std::abs(sum - h.trace().real()) <= 1e-9 * std::max(1.0, h.norm()));
    CHECK(std::abs(sq - fro) <= 1e-9 * fro);
  }
}

TEST_CASE("spectrum is invariant under unitary conjugation") {
  std::mt19937_64 rng(4242);
  for (int n : {3, 16, 64}) {
    CAPTURE(n);
    const MatrixXc h = testing::random_hermitian(n, rng);
    const MatrixXc u = testing::random_unitary(n, rng);
    REQUIRE((u * u.adjoint() - MatrixXc::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    const MatrixXc conj = u * h * u.adjoint();
    const MatrixXc rotated = (conj + conj.adjoint()) / 2.0;
    const auto a = hermitian_eigenvalues(h).eigenvalues;
    const auto b = hermitian_eigenvalues(rotated).eigenvalues;
    for (int i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
  }
}

TEST_CASE("constructed states are positive semidefinite") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0), sq(0.0, 1.2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = WernerParams::make(unit(rng), sq(rng), sq(rng));
    CAPTURE(w.p);
    CAPTURE(w.r);
    CAPTURE(w.s);
    const auto cut = select_cutoff(w, 1e-6);
    for (const auto& rho : {werner_state(w, cut), nopa_state(w.r, select_cutoff(WernerParams::make(1, w.r, 0), 1e-6)),
                            thermal_product_state(w.s, select_cutoff(WernerParams::make(0, 0, w.s), 1e-6))}) {
      CHECK_NOTHROW(rho.check_invariants());
      CHECK(hermitian_eigenvalues(rho.data).min() >= -tol::kPositivity);
    }
  }
}

TEST_CASE("chi contraction and Pauli moments agree on random two-mode states") {
  std::mt19937_64 rng(8);
  for (int n_max : {2, 4, 6, 8}) {
    const MatrixXc data = testing::random_density(n_max * n_max, rng);
    const TwoModeDensityMatrix rho{FockCutoff::make(n_max, 0.5), data, 0.0};
    const Matrix4c a = map_by_chi_contraction(rho);
    const Matrix4c b = map_by_pauli_moments(rho).rho4;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(hermitian_eigenvalues(MatrixXc(a)).min() > -1e-10);
    CHECK(std::abs(a.trace().real() - 1.0) < 1e-12);
  }
}
