#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ewopt/error.hpp"
#include "ewopt/optimality.hpp"
#include "ewopt/seesaw.hpp"
#include "support.hpp"

using namespace ewopt;
using ewopt::testing::max_abs;

namespace {

constexpr double kPi6 = std::numbers::pi / 6.0;

RealVector sorted_eigenvalues(const RealMatrix& h) {
  RealVector v = Eigen::SelfAdjointEigenSolver<RealMatrix>(h).eigenvalues();
  std::sort(v.data(), v.data() + v.size());
  return v;
}

// Closed-form minimum of the 2x2 coupled blocks.
double analytic_gap(const HaKyeParams& p) {
  const double c = p.b + 1.0 / p.b - 1.0;
  const double s = 2.0 * std::sqrt(p.b) / (1.0 + p.b) * std::abs(std::sin(1.5 * p.theta));
  return std::min(2.0, c - s);
}

Sign sign_of(int k) { return k % 2 == 0 ? Sign::Plus : Sign::Minus; }

}  // namespace

TEST_CASE("build_frame") {
  ComplexVector e0 = ComplexVector::Zero(3);
  e0(0) = 1.0;
  const TangentFrame frame = build_frame({e0, e0});
  REQUIRE(frame.e_perp.size() == 2);
  REQUIRE(frame.f_perp.size() == 2);
  CHECK(std::abs(std::abs(frame.e_perp[0](1)) - 1.0) <= 1e-15);
  CHECK(std::abs(std::abs(frame.e_perp[1](2)) - 1.0) <= 1e-15);

  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const ProductVector pv = random_product_vector(3, 2, rng);
    const TangentFrame f = build_frame(pv);
    ComplexMatrix be(3, 3), bf(2, 2);
    be << f.e0, f.e_perp[0], f.e_perp[1];
    bf << f.f0, f.f_perp[0];
    CHECK(max_abs(be.adjoint() * be - ComplexMatrix::Identity(3, 3)) <= 1e-14);
    CHECK(max_abs(bf.adjoint() * bf - ComplexMatrix::Identity(2, 2)) <= 1e-14);
  }

  // Explicit frames must be orthonormal complements.
  std::vector<ComplexVector> not_orthogonal{e0, e0};
  CHECK_THROWS_AS(build_frame({e0, e0}, not_orthogonal, not_orthogonal), Error);
}

TEST_CASE("low-order terms vanish at the kernel vectors") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const HaKyeParams p = testing::random_hakye(rng);
    const Witness w = hakye_witness(p);
    for (const auto& z : hakye_kernel_vectors(p)) {
      const LowOrderTerms t = low_order_terms(w, build_frame(z));
      CHECK(std::abs(t.a0) <= 1e-10);
      CHECK(t.first_order <= 1e-10);
    }
  }
}

TEST_CASE("exact form against the closed form and finite differences") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const HaKyeParams p = testing::random_hakye(rng);
    const Witness w = hakye_witness(p);
    for (int k = 0; k < 6; ++k) {
      const Sign sign = sign_of(k);
      const TangentFrame frame = hakye_frame(p, k / 2 + 1, sign);
      const PerturbationForm exact = second_order_form(w, frame);
      const PerturbationForm analytic = hakye_a2_analytic(p, sign);
      const PerturbationForm fd = second_order_form_fd(w, frame);
      CHECK(max_abs(exact.H - analytic.H) <= 1e-10);
      CHECK(max_abs(exact.H - fd.H) <= 1e-6);
      CHECK(max_abs(exact.H - exact.H.transpose()) == 0.0);
    }
  }
}

TEST_CASE("closed-form layout near theta = 0") {
  // Coordinates (Re d1, Re d2, Im d1, Im d2, Re w1, Re w2, Im w1, Im w2).
  const HaKyeParams p{1e-9, 2.0};
  const PerturbationForm form = second_order_form(hakye_witness(p), hakye_frame(p, 1, Sign::Plus));
  RealMatrix expected = RealMatrix::Zero(8, 8);
  expected.diagonal() << 2.0, 1.5, 2.0, 1.5, 2.0, 1.5, 2.0, 1.5;
  CHECK(max_abs(form.H - expected) <= 1e-6);
}

TEST_CASE("gap at (pi/6, 2)") {
  const HaKyeParams p{kPi6, 2.0};
  const Witness w = hakye_witness(p);
  for (int k = 0; k < 6; ++k) {
    const PerturbationForm form = second_order_form(w, hakye_frame(p, k / 2 + 1, sign_of(k)));
    CHECK(std::abs(form.min_eigenvalue() - 5.0 / 6.0) <= 1e-9);
  }
  // 3/2 -+ 2/3 from the coupled blocks, 2 elsewhere.
  const RealVector ev = sorted_eigenvalues(hakye_a2_analytic(p, Sign::Plus).H);
  RealVector expected(8);
  expected << 5.0 / 6.0, 5.0 / 6.0, 2.0, 2.0, 2.0, 2.0, 13.0 / 6.0, 13.0 / 6.0;
  CHECK((ev - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("frame choice and symmetry leave the spectrum unchanged") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    const HaKyeParams p = testing::random_hakye(rng);
    const Witness w = hakye_witness(p);
    const auto zs = hakye_kernel_vectors(p);
    const RealVector ref = sorted_eigenvalues(hakye_a2_analytic(p, Sign::Plus).H);
    CHECK((sorted_eigenvalues(hakye_a2_analytic(p, Sign::Minus).H) - ref).cwiseAbs().maxCoeff() <= 1e-12);
    for (const auto& z : zs) {
      const PerturbationForm form = second_order_form(w, build_frame(z));
      CHECK((sorted_eigenvalues(form.H) - ref).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(form.min_eigenvalue() >= -1e-12);
    }
    CHECK(std::abs(ref(0) - analytic_gap(p)) <= 1e-12);
    CHECK(ref(0) > 0.0);
  }
}

TEST_CASE("finite-difference error shrinks quadratically") {
  const HaKyeParams p{kPi6, 2.0};
  const Witness w = hakye_witness(p);
  const TangentFrame frame = hakye_frame(p, 1, Sign::Plus);
  const PerturbationForm exact = second_order_form(w, frame);
  const double coarse = max_abs(second_order_form_fd(w, frame, 2e-2).H - exact.H);
  const double fine = max_abs(second_order_form_fd(w, frame, 1e-2).H - exact.H);
  const double ratio = coarse / fine;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);

  RealVector x = RealVector::Zero(8);
  CHECK(exact.value(x) == 0.0);
}

TEST_CASE("local operators give no cross terms") {
  std::mt19937_64 rng(89);
  const ComplexMatrix a = testing::random_hermitian(3, rng);
  const ComplexMatrix b = testing::random_hermitian(3, rng);
  const Spectrum sa = eigh(a), sb = eigh(b);
  // Shift so the ground pair is a zero.
  const ComplexMatrix m = kron(a, ComplexMatrix::Identity(3, 3)) + kron(ComplexMatrix::Identity(3, 3), b) -
                          (sa.values(0) + sb.values(0)) * ComplexMatrix::Identity(9, 9);
  const Witness w(3, 3, m);
  const PerturbationForm form = second_order_form(w, build_frame({sa.vectors.col(0), sb.vectors.col(0)}));
  CHECK(form.H.block(0, 4, 4, 4).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(form.H.block(4, 0, 4, 4).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("second_order_form preconditions") {
  const Witness w = hakye_witness({kPi6, 2.0});
  ComplexVector e0 = ComplexVector::Zero(3);
  e0(0) = 1.0;
  try {
    second_order_form(w, build_frame({e0, e0}));
    FAIL("expected NotAKernelVector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAKernelVector);
    CHECK(e.magnitude() == doctest::Approx(1.0));
  }

  // <00|W|00> = 0 with a nonzero gradient.
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 1) = m(1, 0) = 1.0;
  m(1, 1) = 3.0;
  ComplexVector q = ComplexVector::Zero(2);
  q(0) = 1.0;
  try {
    second_order_form(Witness(2, 2, m), build_frame({q, q}));
    FAIL("expected FirstOrderNonzero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FirstOrderNonzero);
    CHECK(e.magnitude() > 0.5);
  }
}

TEST_CASE("nonoptimality verdicts") {
  SUBCASE("qutrit family on a 10x10 grid") {
    for (int i = 0; i < 10; ++i) {
      const double theta = -0.95 + i * 0.21;
      for (int j = 0; j < 10; ++j) {
        const double b = 0.25 + j * 0.3;
        if (std::abs(b - 1.0) < 1e-9) continue;
        const HaKyeParams p{theta, b};
        const Verdict v = nonoptimality_sufficient(hakye_witness(p), hakye_kernel_vectors(p));
        CHECK(v.kind == Verdict::Kind::NotOptimal);
        CHECK(v.span_dim == 6);
        CHECK(v.per_zero_min_eig.size() == 6);
        CHECK(std::abs(v.min_gap - analytic_gap(p)) <= 1e-9);
      }
    }
  }
  SUBCASE("gap 5/6") {
    const HaKyeParams p{kPi6, 2.0};
    const Verdict v = nonoptimality_sufficient(hakye_witness(p), hakye_kernel_vectors(p));
    CHECK(v.kind == Verdict::Kind::NotOptimal);
    CHECK(std::abs(v.min_gap - 5.0 / 6.0) <= 1e-9);
    CHECK(v.reason.empty());
  }
  SUBCASE("two-qubit W- zeros span") {
    const Witness w = two_qubit_segment(0.0);
    SeesawConfig cfg;
    cfg.restarts = 200;
    cfg.seed = 5;
    const auto zeros = collect_zeros(w, cfg);
    REQUIRE(zeros.size() >= 4);
    const Verdict v = nonoptimality_sufficient(w, zeros);
    CHECK(v.kind == Verdict::Kind::Inconclusive);
    CHECK(v.span_dim == 4);
    CHECK(v.reason == "spanning");
  }
  SUBCASE("isolated zero with a positive form") {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m.diagonal() << 0.0, 1.0, 1.0, 2.0;
    const Witness w(2, 2, m);
    ComplexVector e = ComplexVector::Zero(2);
    e(0) = 1.0;
    const std::vector<ProductVector> one{{e, e}};
    const Verdict v = nonoptimality_sufficient(w, one);
    CHECK(v.kind == Verdict::Kind::NotOptimal);
    CHECK(v.span_dim == 1);
  }
  SUBCASE("non-positive form") {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m.diagonal() << 0.0, 0.0, 1.0, 2.0;
    const Witness w(2, 2, m);
    ComplexVector e = ComplexVector::Zero(2);
    e(0) = 1.0;
    const std::vector<ProductVector> one{{e, e}};
    const Verdict v = nonoptimality_sufficient(w, one);
    CHECK(v.kind == Verdict::Kind::Inconclusive);
    CHECK(v.reason == "nonpositive_form");
  }
  SUBCASE("empty zero set") {
    try {
      nonoptimality_sufficient(hakye_witness({kPi6, 2.0}), std::vector<ProductVector>{});
      FAIL("expected EmptyZeroSet");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyZeroSet);
    }
  }
}

TEST_CASE("subtraction certificate") {
  SeesawConfig cfg;
  cfg.restarts = 100;
  cfg.seed = 17;

  SUBCASE("block removal at theta = 0") {
    const HaKyeParams p{0.0, 2.0};
    const Witness w = hakye_witness(p, true);
    const ComplexMatrix p1 = hakye_blocks(p).projector[0];
    const SubtractionResult r = subtraction_certificate(w, p1, cfg, hakye_kernel_vectors(p, true));
    CHECK(r.converged);
    CHECK(std::abs(r.lambda - 5.0 / 21.0) <= 0.01);
    CHECK(r.lambda <= 5.0 / 21.0 + 1e-3);
  }
  SUBCASE("positive away from theta = 0") {
    const HaKyeParams p{kPi6, 2.0};
    const SubtractionResult r =
        subtraction_certificate(hakye_witness(p), hakye_blocks(p).projector[0], cfg, hakye_kernel_vectors(p));
    CHECK(r.lambda > 0.0);
    CHECK(r.lambda < 1.0);
  }
  SUBCASE("input errors") {
    const HaKyeParams p{kPi6, 2.0};
    const Witness w = hakye_witness(p);
    auto code_of = [&](const ComplexMatrix& op, std::span<const ProductVector> zs) {
      try {
        subtraction_certificate(w, op, cfg, zs);
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::IoError;
    };
    const auto zs = hakye_kernel_vectors(p);
    CHECK(code_of(ComplexMatrix::Zero(9, 9), {}) == ErrorCode::ZeroOperator);
    CHECK(code_of(-ComplexMatrix::Identity(9, 9), {}) == ErrorCode::NotPSD);
    const ComplexVector t = zs[0].tensor();
    CHECK(code_of(t * t.adjoint(), zs) == ErrorCode::SupportOverlapsZeros);
    CHECK(code_of(ComplexMatrix::Identity(4, 4), {}) == ErrorCode::DimensionMismatch);
  }
}
