#include "ewopt/optimality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ewopt/error.hpp"

namespace ewopt {

namespace {

std::vector<ComplexVector> householder_complement(const ComplexVector& v) {
  const Eigen::Index d = v.size();
  const double mag = std::abs(v(0));
  const Complex phase = mag > 0.0 ? v(0) / mag : Complex(1.0, 0.0);
  // H = I - 2 u u^dag / |u|^2 with u = v + phase * e_1 maps v to -phase * e_1,
  // so its first column spans v and the others span the complement.
  ComplexVector u = v;
  u(0) += phase;
  const ComplexMatrix h =
      ComplexMatrix::Identity(d, d) - (2.0 / u.squaredNorm()) * (u * u.adjoint());
  std::vector<ComplexVector> out;
  out.reserve(static_cast<std::size_t>(d - 1));
  for (Eigen::Index k = 1; k < d; ++k) out.emplace_back(h.col(k));
  return out;
}

void check_basis(const ComplexVector& base, const std::vector<ComplexVector>& perp,
                 const char* side) {
  if (perp.size() + 1 != static_cast<std::size_t>(base.size())) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string("frame on side ") + side + " needs " +
                    std::to_string(base.size() - 1) + " complement vectors");
  }
  ComplexMatrix basis(base.size(), base.size());
  basis.col(0) = base;
  for (std::size_t k = 0; k < perp.size(); ++k) {
    if (perp[k].size() != base.size()) {
      throw Error(ErrorCode::DimensionMismatch, "frame vector has the wrong dimension");
    }
    basis.col(static_cast<Eigen::Index>(k) + 1) = perp[k];
  }
  const double defect =
      (basis.adjoint() * basis - ComplexMatrix::Identity(base.size(), base.size())).norm();
  if (defect > 1e-12) {
    throw Error(ErrorCode::InvalidParams,
                std::string("frame on side ") + side + " is not orthonormal", defect);
  }
}

// Tangent directions in the order d_1.., w_1..: e_i (x) f0 then e0 (x) f_j.
std::vector<ComplexVector> tangent_directions(const TangentFrame& frame) {
  std::vector<ComplexVector> out;
  for (const auto& e : frame.e_perp) out.push_back(kron(e, frame.f0));
  for (const auto& f : frame.f_perp) out.push_back(kron(frame.e0, f));
  return out;
}

double kernel_scale(const Witness& w) { return std::max(1.0, w.matrix().norm()); }

void check_kernel(const Witness& w, const TangentFrame& frame, double kernel_tol) {
  if (frame.dA() != w.dA() || frame.dB() != w.dB()) {
    throw Error(ErrorCode::DimensionMismatch, "frame dimensions do not match the witness");
  }
  const LowOrderTerms low = low_order_terms(w, frame);
  const double limit = kernel_tol * kernel_scale(w);
  if (std::abs(low.a0) > limit) {
    throw Error(ErrorCode::NotAKernelVector,
                "expectation at the base point is " + std::to_string(low.a0), low.a0);
  }
  if (low.first_order > limit) {
    throw Error(ErrorCode::FirstOrderNonzero,
                "first-order coefficient of magnitude " + std::to_string(low.first_order),
                low.first_order);
  }
}

// Index of the real and imaginary coordinate of complex variable a.
struct Coordinates {
  int n_e;
  int n_f;
  int re(int a) const { return a < n_e ? a : 2 * n_e + (a - n_e); }
  int im(int a) const { return a < n_e ? n_e + a : 2 * n_e + n_f + (a - n_e); }
};

}  // namespace

TangentFrame build_frame(const ProductVector& pv) {
  return TangentFrame{pv.e, pv.f, householder_complement(pv.e), householder_complement(pv.f)};
}

TangentFrame build_frame(const ProductVector& pv, std::vector<ComplexVector> e_perp,
                         std::vector<ComplexVector> f_perp) {
  for (auto& v : e_perp) v.normalize();
  for (auto& v : f_perp) v.normalize();
  check_basis(pv.e, e_perp, "A");
  check_basis(pv.f, f_perp, "B");
  return TangentFrame{pv.e, pv.f, std::move(e_perp), std::move(f_perp)};
}

TangentFrame hakye_frame(const HaKyeParams& p, int index, Sign sign, bool allow_theta_zero) {
  if (index < 1 || index > 3) {
    throw Error(ErrorCode::InvalidParams, "kernel vector index must be 1, 2 or 3");
  }
  const auto raw = hakye_kernel_vectors_raw(p, allow_theta_zero);
  const int slot = 2 * (index - 1) + (sign == Sign::Plus ? 0 : 1);
  const double s = sign == Sign::Plus ? 1.0 : -1.0;
  const Complex omega = std::sqrt(p.b) * std::polar(1.0, p.theta / 2.0);

  ComplexMatrix shift = ComplexMatrix::Identity(3, 3);
  for (int k = 1; k < index; ++k) shift = shift_operator() * shift;

  ComplexVector e1(3), e2(3), f1(3), f2(3);
  e1 << -s * omega, 1.0, 0.0;
  e2 << 0.0, 0.0, 1.0;
  f1 << s, std::conj(omega), 0.0;
  f2 << 0.0, 0.0, 1.0;
  return build_frame(raw[static_cast<std::size_t>(slot)], {shift * e1, shift * e2},
                     {shift * f1, shift * f2});
}

double PerturbationForm::min_eigenvalue() const {
  if (H.rows() == 0) return std::numeric_limits<double>::infinity();
  const Eigen::SelfAdjointEigenSolver<RealMatrix> solver(H, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

LowOrderTerms low_order_terms(const Witness& w, const TangentFrame& frame) {
  const ComplexVector base = kron(frame.e0, frame.f0);
  const ComplexVector w_base = w.matrix() * base;
  LowOrderTerms out;
  out.a0 = base.dot(w_base).real();
  for (const auto& t : tangent_directions(frame)) {
    out.first_order = std::max(out.first_order, std::abs(t.dot(w_base)));
  }
  return out;
}

PerturbationForm second_order_form(const Witness& w, const TangentFrame& frame,
                                   double kernel_tol) {
  check_kernel(w, frame, kernel_tol);
  const Coordinates coord{frame.dA() - 1, frame.dB() - 1};
  const int n = coord.n_e + coord.n_f;
  const std::vector<ComplexVector> dirs = tangent_directions(frame);

  // q(z) = z^dag M z + 2 Re(z^T N z), z = (d, w).
  ComplexMatrix m(n, n);
  for (int a = 0; a < n; ++a) {
    const ComplexVector wa = w.matrix() * dirs[a];
    for (int b = 0; b < n; ++b) m(b, a) = dirs[b].dot(wa);
  }
  ComplexMatrix nn = ComplexMatrix::Zero(n, n);
  const ComplexVector w_base = w.matrix() * kron(frame.e0, frame.f0);
  for (int i = 0; i < coord.n_e; ++i) {
    for (int j = 0; j < coord.n_f; ++j) {
      const Complex k = w_base.dot(kron(frame.e_perp[i], frame.f_perp[j]));
      nn(i, coord.n_e + j) = 0.5 * k;
      nn(coord.n_e + j, i) = 0.5 * k;
    }
  }

  PerturbationForm form{RealMatrix::Zero(2 * n, 2 * n), frame.dA(), frame.dB()};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double mr = m(a, b).real(), mi = m(a, b).imag();
      const double nr = nn(a, b).real(), ni = nn(a, b).imag();
      form.H(coord.re(a), coord.re(b)) = mr + 2.0 * nr;
      form.H(coord.re(a), coord.im(b)) = -mi - 2.0 * ni;
      form.H(coord.im(a), coord.re(b)) = mi - 2.0 * ni;
      form.H(coord.im(a), coord.im(b)) = mr - 2.0 * nr;
    }
  }
  form.H = 0.5 * (form.H + form.H.transpose()).eval();
  return form;
}

PerturbationForm second_order_form_fd(const Witness& w, const TangentFrame& frame, double h,
                                      double kernel_tol) {
  check_kernel(w, frame, kernel_tol);
  const Coordinates coord{frame.dA() - 1, frame.dB() - 1};
  const int n = coord.n_e + coord.n_f;
  const int size = 2 * n;

  auto objective = [&](const RealVector& x) {
    ComplexVector e = frame.e0;
    ComplexVector f = frame.f0;
    for (int i = 0; i < coord.n_e; ++i) {
      e += Complex(x(coord.re(i)), x(coord.im(i))) * frame.e_perp[i];
    }
    for (int j = 0; j < coord.n_f; ++j) {
      const int a = coord.n_e + j;
      f += Complex(x(coord.re(a)), x(coord.im(a))) * frame.f_perp[j];
    }
    const ComplexVector z = kron(ComplexVector(e / e.norm()), ComplexVector(f / f.norm()));
    return z.dot(w.matrix() * z).real();
  };

  const RealVector origin = RealVector::Zero(size);
  const double g0 = objective(origin);
  PerturbationForm form{RealMatrix::Zero(size, size), frame.dA(), frame.dB()};
  for (int a = 0; a < size; ++a) {
    RealVector x = origin;
    x(a) = h;
    const double plus = objective(x);
    x(a) = -h;
    const double minus = objective(x);
    form.H(a, a) = (plus - 2.0 * g0 + minus) / (2.0 * h * h);
    for (int b = a + 1; b < size; ++b) {
      RealVector y = origin;
      double corners[4];
      int c = 0;
      for (const double sa : {1.0, -1.0}) {
        for (const double sb : {1.0, -1.0}) {
          y(a) = sa * h;
          y(b) = sb * h;
          corners[c++] = objective(y);
        }
      }
      const double mixed = (corners[0] - corners[1] - corners[2] + corners[3]) / (8.0 * h * h);
      form.H(a, b) = mixed;
      form.H(b, a) = mixed;
    }
  }
  return form;
}

PerturbationForm hakye_a2_analytic(const HaKyeParams& p, Sign sign, bool allow_theta_zero) {
  p.validate(allow_theta_zero);
  const Coordinates coord{2, 2};
  const double diag2 = p.b + 1.0 / p.b - 1.0;
  const double coupling = (sign == Sign::Plus ? 1.0 : -1.0) * 2.0 * std::sqrt(p.b) /
                          (1.0 + p.b) * std::sin(1.5 * p.theta);

  PerturbationForm form{RealMatrix::Zero(8, 8), 3, 3};
  // Complex variables: 0 = d_1, 1 = d_2, 2 = w_1, 3 = w_2.
  for (const int a : {0, 2}) {
    form.H(coord.re(a), coord.re(a)) = 2.0;
    form.H(coord.im(a), coord.im(a)) = 2.0;
  }
  for (const int a : {1, 3}) {
    form.H(coord.re(a), coord.re(a)) = diag2;
    form.H(coord.im(a), coord.im(a)) = diag2;
  }
  // Im(d_2 w_2) = Re d_2 Im w_2 + Im d_2 Re w_2.
  for (const auto& [r, c] : {std::pair{coord.re(1), coord.im(3)}, std::pair{coord.im(1), coord.re(3)}}) {
    form.H(r, c) = coupling;
    form.H(c, r) = coupling;
  }
  return form;
}

const char* to_string(Verdict::Kind kind) {
  return kind == Verdict::Kind::NotOptimal ? "NotOptimal" : "Inconclusive";
}

double default_gap_tol(const Witness& w) { return 1e-7 * w.matrix().norm(); }

Verdict nonoptimality_sufficient(const Witness& w, std::span<const ProductVector> zeros,
                                 std::optional<double> tol) {
  if (zeros.empty()) throw Error(ErrorCode::EmptyZeroSet, "no product zeros supplied");
  const double threshold = tol.value_or(default_gap_tol(w));

  Verdict verdict;
  std::vector<ComplexVector> tensors;
  tensors.reserve(zeros.size());
  verdict.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& z : zeros) {
    tensors.push_back(z.tensor());
    const double gap = second_order_form(w, build_frame(z)).min_eigenvalue();
    verdict.per_zero_min_eig.push_back(gap);
    verdict.min_gap = std::min(verdict.min_gap, gap);
  }
  verdict.span_dim = span_dimension(tensors);

  if (verdict.span_dim >= w.dim()) {
    verdict.reason = "spanning";
  } else if (!(verdict.min_gap >= threshold)) {
    verdict.reason = "nonpositive_form";
  } else {
    verdict.kind = Verdict::Kind::NotOptimal;
  }
  return verdict;
}

SubtractionResult subtraction_certificate(const Witness& w, const ComplexMatrix& p,
                                          const SeesawConfig& cfg,
                                          std::span<const ProductVector> zeros,
                                          const SubtractionOptions& options) {
  cfg.validate();
  if (p.rows() != w.dim() || p.cols() != w.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "subtracted operator has the wrong size");
  }
  const double p_norm = p.norm();
  if (p_norm == 0.0) throw Error(ErrorCode::ZeroOperator, "subtracted operator is zero");
  if (hermiticity_defect(p) > kDefaultTolerances.hermitian * p_norm || !is_psd(p)) {
    throw Error(ErrorCode::NotPSD, "subtracted operator is not positive semidefinite");
  }
  for (const auto& z : zeros) {
    const ComplexVector t = z.tensor();
    const double overlap = std::abs(t.dot(p * t)) / p_norm;
    if (overlap > options.support_tol) {
      throw Error(ErrorCode::SupportOverlapsZeros,
                  "operator support overlaps a product zero", overlap);
    }
  }
  const double w_trace = w.matrix().trace().real();
  if (!(w_trace > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "witness trace must be positive to normalize");
  }

  const ComplexMatrix w_norm = w.matrix() / w_trace;
  const ComplexMatrix p_normed = p / p.trace().real();
  const double threshold = -options.positivity_tol * w_norm.norm();

  SubtractionResult result;
  auto feasible = [&](double lambda) {
    ++result.queries;
    const Witness shifted(w.dA(), w.dB(), w_norm - lambda * p_normed);
    return !find_product_below(shifted, threshold, cfg).has_value();
  };

  double lo = 0.0;
  double hi = options.lambda_upper;
  if (feasible(hi)) {
    result.lambda = hi;
    result.converged = true;
    return result;
  }
  while (hi - lo > options.lambda_tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  result.lambda = lo;
  result.converged = true;
  return result;
}

}  // namespace ewopt
