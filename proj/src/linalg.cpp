#include "ewopt/linalg.hpp"

#include <cmath>
#include <string>

#include "ewopt/error.hpp"

namespace ewopt {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": matrix is " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()));
  }
}

void require_bipartite(const ComplexMatrix& m, int dA, int dB,
                       const char* what) {
  require_square(m, what);
  if (dA <= 0 || dB <= 0 || m.rows() != static_cast<Eigen::Index>(dA) * dB) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": size " + std::to_string(m.rows()) +
                    " does not match dA*dB = " + std::to_string(dA) + "*" +
                    std::to_string(dB));
  }
}

template <typename Solver>
MinEigenpair lowest_of(const Solver& solver) {
  MinEigenpair out{solver.eigenvalues()(0), solver.eigenvectors().col(0)};
  fix_phase(out.vector);
  return out;
}

}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& h) {
  require_square(h, "hermiticity_defect");
  return (h - h.adjoint()).norm();
}

void fix_phase(ComplexVector& v) {
  if (v.size() == 0) return;
  double largest = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) largest = std::max(largest, std::abs(v(i)));
  if (largest == 0.0) return;
  // Entries within rounding of the maximum count as ties; the lowest index wins.
  const double cutoff = largest * (1.0 - 1e-12);
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= cutoff) {
      pivot = i;
      break;
    }
  }
  const Complex phase = v(pivot) / std::abs(v(pivot));
  v *= std::conj(phase);
  v(pivot) = Complex(v(pivot).real(), 0.0);
}

Spectrum eigh(const ComplexMatrix& h, double hermitian_tol) {
  require_square(h, "eigh");
  const double defect = hermiticity_defect(h);
  if (defect > hermitian_tol * h.norm()) {
    throw Error(ErrorCode::NonHermitianInput,
                "hermiticity defect " + std::to_string(defect), defect);
  }
  // Symmetrize so the solver sees an exactly Hermitian matrix.
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  Spectrum out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    ComplexVector col = out.vectors.col(k);
    fix_phase(col);
    out.vectors.col(k) = col;
  }
  return out;
}

MinEigenpair min_eigenpair(const ComplexMatrix& h) {
  if (h.rows() == 3 && h.cols() == 3) {
    const Eigen::Matrix3cd m = h;
    return lowest_of(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd>(m));
  }
  if (h.rows() == 2 && h.cols() == 2) {
    const Eigen::Matrix2cd m = h;
    return lowest_of(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(m));
  }
  require_square(h, "min_eigenpair");
  return lowest_of(Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, int dA, int dB,
                                Subsystem subsystem) {
  require_bipartite(m, dA, dB, "partial_transpose");
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < dA; ++i) {
    for (int k = 0; k < dB; ++k) {
      for (int j = 0; j < dA; ++j) {
        for (int l = 0; l < dB; ++l) {
          // <i k| out |j l>
          const Complex value = subsystem == Subsystem::B
                                    ? m(i * dB + l, j * dB + k)
                                    : m(j * dB + k, i * dB + l);
          out(i * dB + k, j * dB + l) = value;
        }
      }
    }
  }
  return out;
}

ComplexMatrix sandwich(const ComplexMatrix& w, int dA, int dB, Subsystem side,
                       const ComplexVector& v) {
  require_bipartite(w, dA, dB, "sandwich");
  const int contracted = side == Subsystem::B ? dB : dA;
  if (v.size() != contracted) {
    throw Error(ErrorCode::DimensionMismatch,
                "sandwich: vector has dimension " + std::to_string(v.size()) +
                    ", expected " + std::to_string(contracted));
  }
  if (std::abs(v.norm() - 1.0) > kDefaultTolerances.unit) {
    throw Error(ErrorCode::DimensionMismatch,
                "sandwich: vector is not normalized",
                std::abs(v.norm() - 1.0));
  }
  if (side == Subsystem::B) {
    ComplexMatrix out = ComplexMatrix::Zero(dA, dA);
    for (int i = 0; i < dA; ++i) {
      for (int j = 0; j < dA; ++j) {
        const auto block = w.block(i * dB, j * dB, dB, dB);
        out(i, j) = v.dot(block * v);
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dB, dB);
  for (int i = 0; i < dA; ++i) {
    for (int j = 0; j < dA; ++j) {
      const Complex weight = std::conj(v(i)) * v(j);
      if (weight == Complex(0.0, 0.0)) continue;
      out += weight * w.block(i * dB, j * dB, dB, dB);
    }
  }
  return out;
}

int span_dimension(std::span<const ComplexVector> vectors, double rel_tol) {
  if (vectors.empty()) return 0;
  const Eigen::Index dim = vectors.front().size();
  ComplexMatrix stacked(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "span_dimension: vectors of different dimensions");
    }
    stacked.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  const Eigen::JacobiSVD<ComplexMatrix> svd(stacked);
  const RealVector& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > rel_tol * sigma(0)) ++rank;
  }
  return rank;
}

double hermitian_min_eig(const ComplexMatrix& h) {
  return eigh(h).values(0);
}

bool is_psd(const ComplexMatrix& h, double rel_tol) {
  return hermitian_min_eig(h) >= -rel_tol * h.norm();
}

double trace_norm(const ComplexMatrix& m) {
  const Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

}  // namespace ewopt
