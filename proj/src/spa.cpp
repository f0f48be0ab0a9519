#include "ewopt/spa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ewopt/error.hpp"

namespace ewopt {

namespace {

constexpr double kStateTol = 1e-10;

void require_state(const ComplexMatrix& rho, int dA, int dB, bool unit_trace) {
  if (rho.rows() != static_cast<Eigen::Index>(dA) * dB || rho.cols() != rho.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "state size does not match dA*dB");
  }
  const double scale = rho.norm();
  if (scale == 0.0) throw Error(ErrorCode::InvalidState, "state is zero");
  const double defect = hermiticity_defect(rho);
  if (defect > kStateTol * scale) {
    throw Error(ErrorCode::InvalidState, "state is not Hermitian", defect);
  }
  const double lowest = hermitian_min_eig(rho);
  if (lowest < -kStateTol * scale) {
    throw Error(ErrorCode::InvalidState,
                "state has eigenvalue " + std::to_string(lowest), lowest);
  }
  if (unit_trace) {
    const double trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (trace_defect > kStateTol) {
      throw Error(ErrorCode::InvalidState, "state trace differs from 1", trace_defect);
    }
  }
}

}  // namespace

SpaResult spa_witness(const Witness& w) {
  const int d = w.dim();
  SpaResult out;
  out.lambda_min_W = hermitian_min_eig(w.matrix());
  // Rounding-level negative eigenvalues count as PSD.
  const bool psd = out.lambda_min_W >= -kDefaultTolerances.psd * w.matrix().norm();
  out.p_star = psd ? 1.0 : 1.0 / (1.0 + d * -out.lambda_min_W);
  out.state_raw = out.p_star * w.matrix() +
                  ((1.0 - out.p_star) / d) * ComplexMatrix::Identity(d, d);
  out.state = out.state_raw / out.state_raw.trace().real();
  return out;
}

PptRecord ppt_check(const ComplexMatrix& rho, int dA, int dB) {
  require_state(rho, dA, dB, false);
  PptRecord out;
  out.min_eig_pt = hermitian_min_eig(partial_transpose(rho, dA, dB, Subsystem::B));
  out.is_npt = out.min_eig_pt < -kStateTol * rho.norm();
  return out;
}

ComplexMatrix realign(const ComplexMatrix& rho, int dA, int dB) {
  ComplexMatrix out(dA * dA, dB * dB);
  for (int i = 0; i < dA; ++i)
    for (int k = 0; k < dA; ++k)
      for (int j = 0; j < dB; ++j)
        for (int l = 0; l < dB; ++l) out(i * dA + k, j * dB + l) = rho(i * dB + j, k * dB + l);
  return out;
}

CcnrRecord ccnr_check(const ComplexMatrix& rho, int dA, int dB) {
  require_state(rho, dA, dB, true);
  CcnrRecord out;
  out.realignment_trace_norm = trace_norm(realign(rho, dA, dB));
  out.flags_entangled = out.realignment_trace_norm > 1.0 + kStateTol;
  return out;
}

}  // namespace ewopt
