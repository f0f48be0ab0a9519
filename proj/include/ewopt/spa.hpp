#ifndef EWOPT_SPA_HPP
#define EWOPT_SPA_HPP

#include "ewopt/witness.hpp"

namespace ewopt {

// Structural physical approximation W(p*) = p* W + (1 - p*) I / (dA dB) with
// p* = 1 / (1 + dA dB max(0, -lambda_min)). A positive semidefinite W
// (lambda_min >= -1e-10 ||W||_F) gets p* = 1.
struct SpaResult {
  double p_star = 1.0;
  ComplexMatrix state_raw;
  ComplexMatrix state;  // state_raw / Tr(state_raw)
  double lambda_min_W = 0.0;
};

SpaResult spa_witness(const Witness& w);

struct PptRecord {
  double min_eig_pt = 0.0;
  bool is_npt = false;
};

// Partial transpose on B. NPT (min eigenvalue < -1e-10 ||rho||_F) certifies
// entanglement; PPT says nothing beyond 2x3.
PptRecord ppt_check(const ComplexMatrix& rho, int dA, int dB);

struct CcnrRecord {
  double realignment_trace_norm = 0.0;
  bool flags_entangled = false;
};

// Realignment R((i,k),(j,l)) = rho((i,j),(k,l)); a trace norm above 1 + 1e-10
// certifies entanglement. rho must have unit trace.
CcnrRecord ccnr_check(const ComplexMatrix& rho, int dA, int dB);

ComplexMatrix realign(const ComplexMatrix& rho, int dA, int dB);

}  // namespace ewopt

#endif  // EWOPT_SPA_HPP
