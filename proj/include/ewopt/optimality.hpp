#ifndef EWOPT_OPTIMALITY_HPP
#define EWOPT_OPTIMALITY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ewopt/seesaw.hpp"
#include "ewopt/witness.hpp"

namespace ewopt {

// A product zero |e0,f0> together with orthonormal complements of its local
// factors. Perturbed points are (e0 + sum d_i e_i) (x) (f0 + sum w_j f_j).
struct TangentFrame {
  ComplexVector e0;
  ComplexVector f0;
  std::vector<ComplexVector> e_perp;
  std::vector<ComplexVector> f_perp;

  int dA() const { return static_cast<int>(e0.size()); }
  int dB() const { return static_cast<int>(f0.size()); }
};

// Complements taken from the Householder reflection that sends e0 (resp. f0)
// to a multiple of the first basis vector.
TangentFrame build_frame(const ProductVector& pv);

// Explicit complements; each vector is normalized and the resulting bases are
// checked for orthonormality (Gram defect <= 1e-12).
TangentFrame build_frame(const ProductVector& pv, std::vector<ComplexVector> e_perp,
                         std::vector<ComplexVector> f_perp);

enum class Sign { Plus, Minus };

// Frame used for the closed-form analysis of z_index^(sign) (index 1..3):
// e1 ~ (-+omega, 1, 0), e2 = |2>, f1 ~ (+-1, conj(omega), 0), f2 = |2>, all
// shifted by S^(index-1), attached to the raw kernel vector.
TangentFrame hakye_frame(const HaKyeParams& p, int index, Sign sign,
                         bool allow_theta_zero = false);

// Real quadratic form x^T H x in the coordinates
// (Re d_1.., Im d_1.., Re w_1.., Im w_1..).
struct PerturbationForm {
  RealMatrix H;
  int dA = 0;
  int dB = 0;

  int size() const { return static_cast<int>(H.rows()); }
  double value(const RealVector& x) const { return x.dot(H * x); }
  double min_eigenvalue() const;
};

// Zeroth-order term and largest first-order coefficient magnitude of the
// expansion around the frame's base point.
struct LowOrderTerms {
  double a0 = 0.0;
  double first_order = 0.0;
};

LowOrderTerms low_order_terms(const Witness& w, const TangentFrame& frame);

// Kernel-membership and first-order tolerance, relative to max(1, ||W||_F).
inline constexpr double kKernelTol = 1e-10;

// Exact degree-2 coefficient of <e(d),f(w)|W|e(d),f(w)> assembled from
// matrix elements of W.
PerturbationForm second_order_form(const Witness& w, const TangentFrame& frame,
                                   double kernel_tol = kKernelTol);

// Central-difference Hessian (halved) of the normalized expectation at the
// origin. Kept as an independent check on second_order_form.
PerturbationForm second_order_form_fd(const Witness& w, const TangentFrame& frame,
                                      double h = 1e-4, double kernel_tol = kKernelTol);

// Closed form of the degree-2 term at z_i^(+-) in hakye_frame coordinates:
// 2 on the d_1 and w_1 coordinates, b + 1/b - 1 on d_2 and w_2, and
// +-(2 sqrt(b) / (1 + b)) sin(3 theta / 2) coupling (Re d_2, Im w_2) and
// (Im d_2, Re w_2).
PerturbationForm hakye_a2_analytic(const HaKyeParams& p, Sign sign,
                                   bool allow_theta_zero = false);

struct Verdict {
  enum class Kind { NotOptimal, Inconclusive };

  Kind kind = Kind::Inconclusive;
  int span_dim = 0;
  std::vector<double> per_zero_min_eig;
  double min_gap = 0.0;
  // Empty for NotOptimal; "spanning" or "nonpositive_form" otherwise.
  std::string reason;
};

const char* to_string(Verdict::Kind kind);

// Default strict-positivity threshold: 1e-7 * ||W||_F.
double default_gap_tol(const Witness& w);

// Sufficient test for non-optimality: the zeros must not span the full space
// and every zero must have a strictly positive second-order form. The answer
// is only as complete as the supplied zero set.
Verdict nonoptimality_sufficient(const Witness& w, std::span<const ProductVector> zeros,
                                 std::optional<double> tol = {});

struct SubtractionOptions {
  double lambda_tol = 1e-4;          // bisection width
  double lambda_upper = 1.0 - 1e-6;  // right end of the search interval
  double positivity_tol = 1e-9;      // relative to ||W~||_F
  double support_tol = 1e-9;         // |<z|P|z>| / ||P||_F allowed at zeros
};

struct SubtractionResult {
  double lambda = 0.0;
  bool converged = false;
  int queries = 0;
};

// Largest lambda in [0, 1) for which W~ - lambda P~ stays block-positive, with
// W~ and P~ the trace-normalized operators. Found by bisection on the
// monotone feasibility predicate; each query is a see-saw search for a
// product vector below -positivity_tol * ||W~||_F.
SubtractionResult subtraction_certificate(const Witness& w, const ComplexMatrix& p,
                                          const SeesawConfig& cfg,
                                          std::span<const ProductVector> zeros = {},
                                          const SubtractionOptions& options = {});

}  // namespace ewopt

#endif  // EWOPT_OPTIMALITY_HPP
