#include "ewopt/witness.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ewopt/error.hpp"

namespace ewopt {

namespace {

constexpr double kWitnessHermitianTol = 1e-12;
constexpr double kStateTol = 1e-10;

ComplexVector basis(int dim, int index) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

// |i,j> in C^3 (x) C^3, indices taken mod 3.
ComplexVector ket33(int i, int j) {
  return basis(9, ((i % 3 + 3) % 3) * 3 + ((j % 3 + 3) % 3));
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

}  // namespace

Witness::Witness(int dA, int dB, ComplexMatrix matrix, std::string label)
    : dA_(dA), dB_(dB), label_(std::move(label)) {
  if (dA <= 0 || dB <= 0) {
    throw Error(ErrorCode::DimensionMismatch, "local dimensions must be positive");
  }
  if (matrix.rows() != static_cast<Eigen::Index>(dA) * dB ||
      matrix.cols() != matrix.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(matrix.rows()) + "x" +
                    std::to_string(matrix.cols()) + ", expected " +
                    std::to_string(dA * dB) + "x" + std::to_string(dA * dB));
  }
  const double defect = hermiticity_defect(matrix);
  if (defect > kWitnessHermitianTol * matrix.norm()) {
    throw Error(ErrorCode::NonHermitianInput,
                "witness hermiticity defect " + std::to_string(defect), defect);
  }
  if (defect > 0.0) matrix = 0.5 * (matrix + matrix.adjoint()).eval();
  matrix_ = std::move(matrix);
}

ProductVector ProductVector::normalized(ComplexVector e, ComplexVector f) {
  const double ne = e.norm();
  const double nf = f.norm();
  if (ne == 0.0 || nf == 0.0) {
    throw Error(ErrorCode::InvalidParams, "product vector has a zero factor");
  }
  return ProductVector{e / ne, f / nf};
}

ProductVector ProductVector::canonical() const {
  ProductVector out = *this;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double mag = std::abs(e(k));
    if (mag > 1e-12) {
      const Complex phase = e(k) / mag;
      out.e *= std::conj(phase);
      out.f *= phase;
      out.e(k) = Complex(out.e(k).real(), 0.0);
      break;
    }
  }
  return out;
}

void HaKyeParams::validate(bool allow_theta_zero) const {
  const double third = std::numbers::pi / 3.0;
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidParams, "b must be positive, got " + std::to_string(b));
  }
  if (b == 1.0) {
    throw Error(ErrorCode::InvalidParams, "b = 1 is excluded");
  }
  if (!(theta > -third && theta < third)) {
    throw Error(ErrorCode::InvalidParams,
                "theta must lie in (-pi/3, pi/3), got " + std::to_string(theta));
  }
  if (theta == 0.0 && !allow_theta_zero) {
    throw Error(ErrorCode::InvalidParams,
                "theta = 0 gives a positive semidefinite operator");
  }
}

HaKyeBlocks hakye_blocks(const HaKyeParams& p) {
  const Complex up = std::polar(1.0, p.theta);
  const Complex down = std::conj(up);

  HaKyeBlocks blocks;
  blocks.lambda = ComplexMatrix::Zero(9, 9);
  for (int r = 0; r < 3; ++r) {
    blocks.lambda(4 * r, 4 * r) = 1.0;
    blocks.lambda(4 * r, 4 * ((r + 1) % 3)) = up;
    blocks.lambda(4 * r, 4 * ((r + 2) % 3)) = down;
  }
  for (int i = 1; i <= 3; ++i) {
    blocks.phi[i - 1] = p.b * ket33(i - 1, i) + ket33(i, i - 1);
    blocks.projector[i - 1] = projector(blocks.phi[i - 1]);
  }
  return blocks;
}

Witness hakye_witness(const HaKyeParams& p, bool allow_theta_zero) {
  p.validate(allow_theta_zero);
  const HaKyeBlocks blocks = hakye_blocks(p);
  ComplexMatrix m = blocks.lambda;
  for (const auto& proj : blocks.projector) m += proj / p.b;
  return Witness(3, 3, std::move(m),
                 "hakye(theta=" + std::to_string(p.theta) +
                     ",b=" + std::to_string(p.b) + ")");
}

ComplexMatrix hakye_from_transposed_terms(const HaKyeParams& p) {
  const Complex up = std::polar(1.0, p.theta);
  const ComplexVector w0 = ket33(0, 0) + ket33(1, 1) + ket33(2, 2);
  ComplexMatrix m = partial_transpose(projector(w0), 3, 3, Subsystem::A);
  for (int i = 1; i <= 3; ++i) {
    const ComplexVector wi = p.b * ket33(i - 1, i) + up * ket33(i, i - 1);
    m += partial_transpose(projector(wi), 3, 3, Subsystem::A) / p.b;
  }
  return m;
}

std::vector<ProductVector> hakye_kernel_vectors_raw(const HaKyeParams& p,
                                                    bool allow_theta_zero) {
  p.validate(allow_theta_zero);
  const Complex omega = std::sqrt(p.b) * std::polar(1.0, p.theta / 2.0);
  const Complex omega_bar = std::conj(omega);
  const ComplexMatrix shift = shift_operator();

  std::vector<ProductVector> out;
  out.reserve(6);
  ComplexMatrix power = ComplexMatrix::Identity(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (const double sign : {1.0, -1.0}) {
      ComplexVector e(3), f(3);
      e << sign, omega_bar, 0.0;
      f << omega, -sign, 0.0;
      out.push_back(ProductVector::normalized(power * e, power * f));
    }
    power = shift * power;
  }
  return out;
}

std::vector<ProductVector> hakye_kernel_vectors(const HaKyeParams& p,
                                                bool allow_theta_zero) {
  std::vector<ProductVector> out = hakye_kernel_vectors_raw(p, allow_theta_zero);
  for (auto& pv : out) pv = pv.canonical();
  return out;
}

ComplexMatrix shift_operator() {
  ComplexMatrix s = ComplexMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) s((i + 1) % 3, i) = 1.0;
  return s;
}

double expectation(const Witness& w, const ProductVector& pv) {
  if (pv.e.size() != w.dA() || pv.f.size() != w.dB()) {
    throw Error(ErrorCode::DimensionMismatch,
                "product vector dimensions do not match the witness");
  }
  const ComplexVector z = pv.tensor();
  return z.dot(w.matrix() * z).real();
}

bool detects(const Witness& w, const ComplexMatrix& rho) {
  if (rho.rows() != w.dim() || rho.cols() != w.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension does not match the witness");
  }
  const double trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (trace_defect > kStateTol) {
    throw Error(ErrorCode::InvalidState, "state trace differs from 1", trace_defect);
  }
  if (hermiticity_defect(rho) > kStateTol * rho.norm() || !is_psd(rho, kStateTol)) {
    throw Error(ErrorCode::InvalidState, "state is not positive semidefinite");
  }
  return (w.matrix() * rho).trace().real() < 0.0;
}

Witness two_qubit_segment(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "p must lie in [0, 1], got " + std::to_string(p));
  }
  const double h = std::numbers::sqrt2 / 2.0;
  ComplexVector psi_plus = ComplexVector::Zero(4);
  ComplexVector psi_minus = ComplexVector::Zero(4);
  psi_plus << h, 0.0, 0.0, h;
  psi_minus << h, 0.0, 0.0, -h;
  const ComplexMatrix w_plus = partial_transpose(projector(psi_plus), 2, 2, Subsystem::B);
  const ComplexMatrix w_minus = partial_transpose(projector(psi_minus), 2, 2, Subsystem::B);
  return Witness(2, 2, p * w_plus + (1.0 - p) * w_minus,
                 "two_qubit_segment(p=" + std::to_string(p) + ")");
}

ComplexMatrix phi_plus_transposed() {
  const double h = std::numbers::sqrt2 / 2.0;
  ComplexVector phi = ComplexVector::Zero(4);
  phi << 0.0, h, h, 0.0;
  return partial_transpose(projector(phi), 2, 2, Subsystem::B);
}

}  // namespace ewopt
