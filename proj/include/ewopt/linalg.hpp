#ifndef EWOPT_LINALG_HPP
#define EWOPT_LINALG_HPP

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ewopt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Bipartite operators act on C^dA (x) C^dB with |i,j> stored at flat index
// i*dB + j.
enum class Subsystem { A, B };

// Relative tolerances shared by the numerical checks. Each is multiplied by
// the Frobenius norm of the operator under test unless noted otherwise.
struct Tolerances {
  double hermitian = 1e-10;  // ||H - H^dag||_F precondition of eigh
  double psd = 1e-10;        // is_psd slack
  double span = 1e-9;        // singular value cutoff, relative to the largest
  double unit = 1e-12;       // absolute | ||v|| - 1 | for unit vectors
};

inline constexpr Tolerances kDefaultTolerances{};

struct Spectrum {
  RealVector values;     // ascending
  ComplexMatrix vectors; // orthonormal columns, one per eigenvalue
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

double hermiticity_defect(const ComplexMatrix& h);

// Hermitian eigendecomposition. Eigenvectors are phase-fixed: the entry of
// largest magnitude (lowest index on ties) is made real positive.
Spectrum eigh(const ComplexMatrix& h,
              double hermitian_tol = kDefaultTolerances.hermitian);

struct MinEigenpair {
  double value;
  ComplexVector vector;
};

// Smallest eigenpair with the same phase convention as eigh. Uses fixed-size
// solvers for 2x2 and 3x3 inputs; skips the hermiticity precondition, so it is
// meant for operators that are Hermitian by construction.
MinEigenpair min_eigenpair(const ComplexMatrix& h);

void fix_phase(ComplexVector& v);

ComplexMatrix partial_transpose(const ComplexMatrix& m, int dA, int dB,
                                Subsystem subsystem);

// Contracts the `side` factor of w against the unit vector v and returns the
// operator left on the other factor. For side == B the result is dA x dA with
// entries sum_{k,l} conj(v_k) w((i,k),(j,l)) v_l.
ComplexMatrix sandwich(const ComplexMatrix& w, int dA, int dB, Subsystem side,
                       const ComplexVector& v);

int span_dimension(std::span<const ComplexVector> vectors,
                   double rel_tol = kDefaultTolerances.span);

double hermitian_min_eig(const ComplexMatrix& h);
bool is_psd(const ComplexMatrix& h, double rel_tol = kDefaultTolerances.psd);

// Schatten-1 norm.
double trace_norm(const ComplexMatrix& m);

}  // namespace ewopt

#endif  // EWOPT_LINALG_HPP
