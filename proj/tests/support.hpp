#ifndef EWOPT_TESTS_SUPPORT_HPP
#define EWOPT_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "ewopt/linalg.hpp"
#include "ewopt/witness.hpp"

namespace ewopt::testing {

inline ComplexMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  const ComplexMatrix m = random_matrix(dim, dim, rng);
  return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
  const Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(dim, dim, rng));
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

inline ComplexVector random_unit(int dim, std::mt19937_64& rng) {
  ComplexVector v = random_matrix(dim, 1, rng);
  return v / v.norm();
}

inline ComplexMatrix random_density(int dim, std::mt19937_64& rng) {
  const ComplexMatrix m = random_matrix(dim, dim, rng);
  const ComplexMatrix rho = m * m.adjoint();
  return rho / rho.trace().real();
}

// Valid witness parameters: |theta| in [0.05, 1.0], b in [0.3, 3] away from 1.
inline HaKyeParams random_hakye(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> t(0.05, 1.0);
  std::uniform_real_distribution<double> bb(0.3, 3.0);
  std::bernoulli_distribution flip(0.5);
  HaKyeParams p;
  p.theta = flip(rng) ? t(rng) : -t(rng);
  do {
    p.b = bb(rng);
  } while (std::abs(p.b - 1.0) < 0.1);
  return p;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace ewopt::testing

#endif  // EWOPT_TESTS_SUPPORT_HPP
