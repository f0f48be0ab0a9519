#ifndef EWOPT_WITNESS_HPP
#define EWOPT_WITNESS_HPP

#include <array>
#include <string>
#include <vector>

#include "ewopt/linalg.hpp"

namespace ewopt {

// Hermitian operator on C^dA (x) C^dB. Construction validates the shape and
// hermiticity (defect <= 1e-12 * ||W||_F) and symmetrizes the stored matrix.
class Witness {
 public:
  Witness(int dA, int dB, ComplexMatrix matrix, std::string label = {});

  int dA() const noexcept { return dA_; }
  int dB() const noexcept { return dB_; }
  int dim() const noexcept { return dA_ * dB_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const std::string& label() const noexcept { return label_; }

 private:
  int dA_;
  int dB_;
  ComplexMatrix matrix_;
  std::string label_;
};

// A product vector |e> (x) |f> with unit local factors.
struct ProductVector {
  ComplexVector e;
  ComplexVector f;

  // Normalizes both factors. Throws InvalidParams on a zero factor.
  static ProductVector normalized(ComplexVector e, ComplexVector f);

  ComplexVector tensor() const { return kron(e, f); }

  // Same tensor, with the phase moved so the first nonzero entry of e is real
  // positive.
  ProductVector canonical() const;
};

// Parameters of the qutrit family W_{theta,b}: b > 0, b != 1 and
// -pi/3 < theta < pi/3 with theta != 0 unless explicitly allowed.
struct HaKyeParams {
  double theta = 0.0;
  double b = 1.0;

  void validate(bool allow_theta_zero = false) const;
};

// Block decomposition W = Lambda_theta + (1/b)(P1 + P2 + P3), every block
// embedded in the 9x9 space.
struct HaKyeBlocks {
  ComplexMatrix lambda;
  std::array<ComplexVector, 3> phi;     // b|i-1,i> + |i,i-1>
  std::array<ComplexMatrix, 3> projector;  // |phi_i><phi_i|
};

HaKyeBlocks hakye_blocks(const HaKyeParams& p);

Witness hakye_witness(const HaKyeParams& p, bool allow_theta_zero = false);

// Builds the same operator from partially transposed rank-one terms
// |w0><w0|^{T_A} + (1/b) sum_i |w_i><w_i|^{T_A}.
ComplexMatrix hakye_from_transposed_terms(const HaKyeParams& p);

// The six product vectors z1+, z1-, z2+, z2-, z3+, z3- with
// omega = sqrt(b) e^{i theta/2}. `hakye_kernel_vectors` returns them in
// canonical phase; the raw variant keeps the literal component lists
// (used to build the explicit tangent frames).
std::vector<ProductVector> hakye_kernel_vectors(const HaKyeParams& p,
                                                bool allow_theta_zero = false);
std::vector<ProductVector> hakye_kernel_vectors_raw(const HaKyeParams& p,
                                                    bool allow_theta_zero = false);

// Cyclic shift S|i> = |i+1 mod 3>.
ComplexMatrix shift_operator();

double expectation(const Witness& w, const ProductVector& pv);

// Tr(W rho) < 0, strict. rho must be PSD with unit trace.
bool detects(const Witness& w, const ComplexMatrix& rho);

// W(p) = p |psi+><psi+|^{T_B} + (1-p) |psi-><psi-|^{T_B} on C^2 (x) C^2.
Witness two_qubit_segment(double p);

// |phi+><phi+|^{T_B} with |phi+> = (|01> + |10>)/sqrt(2).
ComplexMatrix phi_plus_transposed();

}  // namespace ewopt

#endif  // EWOPT_WITNESS_HPP
