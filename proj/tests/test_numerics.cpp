#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "cvwerner/numerics.hpp"
#include "cvwerner/qubit_map.hpp"
#include "support.hpp"

using namespace cvw;

TEST_CASE("small spectra") {
  MatrixXc d = MatrixXc::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = -1;
  d(2, 2) = 2;
  const auto rd = hermitian_eigenvalues(d);
  CHECK(rd.eigenvalues == std::vector<double>{-1, 2, 3});

  MatrixXc x(2, 2);
  x << 0, 1, 1, 0;
  const auto rx = hermitian_eigenvalues(x);
  CHECK(rx.eigenvalues[0] == doctest::Approx(-1).epsilon(1e-15));
  CHECK(rx.eigenvalues[1] == doctest::Approx(1).epsilon(1e-15));
}

TEST_CASE("4x4 partial-transpose sign agrees with the coherence-versus-population test") {
  for (double p : {0.2, 0.3, 0.4, 0.6}) {
    const auto w = WernerParams::make(p, 1.0, 1.0);
    const Matrix4c rho4 = closed_form_rho4(w);
    const bool coherence_wins = std::abs(rho4(0, 3)) > rho4(1, 1).real();
    CHECK((min_partial_transpose_eigenvalue(rho4) < 0) == coherence_wins);
  }
}

TEST_CASE("agrees with Eigen's self-adjoint solver") {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 3, 10, 40, 90}) {
    const MatrixXc h = testing::random_hermitian(n, rng);
    const auto ours = hermitian_eigenvalues(h);
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<MatrixXc>(h).eigenvalues();
    REQUIRE(ours.eigenvalues.size() == static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) CHECK(std::abs(ours.eigenvalues[i] - ref(i)) < 1e-10);
    const double radius = std::max(std::abs(ours.min()), std::abs(ours.max()));
    CHECK(ours.max_residual < 1e-9 * n * radius);
    CHECK(std::is_sorted(ours.eigenvalues.begin(), ours.eigenvalues.end()));
  }
}

TEST_CASE("block-diagonal input is split before diagonalisation") {
  std::mt19937_64 rng(3);
  MatrixXc a = MatrixXc::Zero(9, 9);
  a.block(0, 0, 4, 4) = testing::random_hermitian(4, rng);
  a.block(4, 4, 2, 2) = testing::random_hermitian(2, rng);
  a(6, 6) = 0.5;
  a(7, 7) = -0.25;
  a(8, 8) = 0.0;
  const auto res = hermitian_eigenvalues(a);
  CHECK(res.blocks == 5);
  const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<MatrixXc>(a).eigenvalues();
  for (int i = 0; i < 9; ++i) CHECK(std::abs(res.eigenvalues[i] - ref(i)) < 1e-12);
}

TEST_CASE("eigensolver errors") {
  MatrixXc bad(2, 2);
  bad << 1, 2, 0, 1;
  CHECK_THROWS_AS(hermitian_eigenvalues(bad), StructuralError);
  CHECK_THROWS_AS(hermitian_eigenvalues(MatrixXc(2, 3)), StructuralError);

  std::mt19937_64 rng(1);
  const MatrixXc h = testing::random_hermitian(12, rng);
  JacobiOptions one;
  one.max_sweeps = 1;
  try {
    hermitian_eigenvalues(h, one);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.residual() > 0);
  }
}

TEST_CASE("float scalar") {
  std::mt19937_64 rng(9);
  const ComplexMatrix<float> h = testing::random_hermitian(8, rng).cast<std::complex<float>>();
  const auto res = hermitian_eigenvalues(h);
  const Eigen::VectorXf ref = Eigen::SelfAdjointEigenSolver<ComplexMatrix<float>>(h).eigenvalues();
  for (int i = 0; i < 8; ++i) CHECK(std::abs(res.eigenvalues[i] - ref(i)) < 1e-4f);
}

TEST_CASE("grid integration") {
  constexpr double pi = std::numbers::pi;
  const auto gauss = sample_grid([](double x, double p) { return std::exp(-x * x - p * p); }, 6.0, 201);
  CHECK(std::abs(integrate_grid(gauss) - pi) < 1e-6);

  CHECK(integrate_grid(sample_grid([](double, double) { return 0.0; }, 3.0, 11)) == 0.0);

  const auto vacuum = sample_grid([&](double x, double p) { return std::exp(-x * x - p * p) / pi; }, 6.0, 201);
  CHECK(std::abs(integrate_grid(vacuum) - 1.0) < 1e-6);

  const auto wide = sample_grid([](double x, double p) { return std::exp(-(x * x + p * p) / 50); }, 6.0, 201);
  CHECK_THROWS_AS(integrate_grid(wide), DomainTooSmall);

  const auto g4 = sample_grid(
      [](double a, double b, double c, double d) { return std::exp(-a * a - b * b - c * c - d * d); }, 6.0, 41);
  CHECK(std::abs(integrate_grid(g4) - pi * pi) < 1e-8);
}

TEST_CASE("trapezoid error shrinks as the grid is refined") {
  constexpr double pi = std::numbers::pi;
  auto err = [&](int n) {
    return std::abs(integrate_grid(sample_grid([](double x, double p) { return std::exp(-x * x - p * p); }, 6.0, n)) -
                    pi);
  };
  const double e9 = err(9), e17 = err(17), e33 = err(33);
  CHECK(e17 < e9);
  CHECK(e33 <= e17);
}

TEST_CASE("grid validation and helpers") {
  CHECK_THROWS_AS(PhaseSpaceGrid::make(1.0, 10, 2), StructuralError);
  CHECK_THROWS_AS(PhaseSpaceGrid::make(0.0, 11, 2), StructuralError);
  CHECK_THROWS_AS(PhaseSpaceGrid::make(1.0, 11, 3), StructuralError);
  const auto g = PhaseSpaceGrid::make(2.0, 5, 2);
  CHECK(g.coordinate(2) == 0.0);
  CHECK(g.spacing() == 1.0);

  CHECK(odd_points_for_spacing(10.0, 0.05) == 401);
  CHECK(odd_points_for_spacing(1.0, 0.5) == 201);
  CHECK(odd_points_for_spacing(1.0, 0.5, 3) == 5);

  const double root = bisect_transition([](double x) { return x * x > 2; }, 0.0, 2.0, 1e-12);
  CHECK(std::abs(root - std::sqrt(2.0)) < 1e-12);
  CHECK_THROWS_AS(bisect_transition([](double) { return true; }, 0.0, 1.0, 1e-6), NumericalError);
}
