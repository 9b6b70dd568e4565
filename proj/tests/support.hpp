#pragma once

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "cvwerner/core.hpp"

namespace cvw::testing {

inline MatrixXc random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXc a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

inline MatrixXc random_hermitian(int n, std::mt19937_64& rng) {
  const MatrixXc a = random_matrix(n, rng);
  return (a + a.adjoint()) / 2.0;
}

/// A A^dagger / Tr: positive semidefinite with unit trace.
inline MatrixXc random_density(int n, std::mt19937_64& rng) {
  const MatrixXc a = random_matrix(n, rng);
  MatrixXc rho = a * a.adjoint();
  return rho / rho.trace().real();
}

/// exp(K) for a random anti-Hermitian K.
inline MatrixXc random_unitary(int n, std::mt19937_64& rng) {
  const MatrixXc k = Complex(0, 1) * random_hermitian(n, rng);
  return k.exp();
}

}  // namespace cvw::testing
