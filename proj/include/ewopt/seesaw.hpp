#ifndef EWOPT_SEESAW_HPP
#define EWOPT_SEESAW_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "ewopt/witness.hpp"

namespace ewopt {

struct SeesawConfig {
  int restarts = 1000;
  int max_iters = 500;
  // A run stops once a full sweep changes the objective by at most
  // conv_tol * ||W||_F.
  double conv_tol = 1e-12;
  std::uint64_t seed = 0;
  // 0 means one worker per hardware thread.
  int workers = 1;

  void validate() const;
};

struct MinResult {
  double value = 0.0;
  ProductVector argmin;
  int iterations = 0;  // of the winning restart
  bool converged = false;
  int best_restart = 0;
  std::vector<double> restart_values;
  // Largest increase of the objective over any half-step in any run; zero
  // for a monotone descent.
  double max_increase = 0.0;
};

struct SeesawRun {
  double value = 0.0;
  ProductVector point;
  int iterations = 0;
  bool converged = false;
  // Objective after the start and after every half-step.
  std::vector<double> history;
};

// Deterministic 64-bit mixing of a base seed and a stream index.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

// Normalized i.i.d. complex Gaussian local vectors.
ProductVector random_product_vector(int dA, int dB, std::mt19937_64& rng);

// One alternating descent: e <- lowest eigenvector of <f|W|f>, then
// f <- lowest eigenvector of <e|W|e>. Stops early once the objective drops
// below `stop_below`.
SeesawRun seesaw_run(const Witness& w, ProductVector start, int max_iters,
                     double conv_tol, bool record_history = false,
                     double stop_below = -std::numeric_limits<double>::infinity());

MinResult min_product_expectation(const Witness& w, const SeesawConfig& cfg);

// First product vector (in restart order) whose expectation falls below
// `threshold`, if any restart finds one.
std::optional<ProductVector> find_product_below(const Witness& w, double threshold,
                                                const SeesawConfig& cfg);

bool is_entanglement_witness(const Witness& w, const SeesawConfig& cfg, double tol);

// Default zero tolerance: 1e-9 * ||W||_F.
double default_zero_tol(const Witness& w);

// Heuristic discovery of product zeros: converged restarts with value
// <= zero_tol, refined and grouped by fidelity |<e|e'><f|f'>| >= 1 - 1e-6.
// One canonical representative per group, in order of first discovery.
std::vector<ProductVector> collect_zeros(const Witness& w, const SeesawConfig& cfg,
                                         std::optional<double> zero_tol = {});

// Continues alternating updates from a (near) zero until the local vectors
// stop moving, so first-order residuals drop to rounding level.
ProductVector polish_zero(const Witness& w, ProductVector pv, int max_iters = 2000);

// Independent desk-scale oracle for 2x2 and 3x3 systems: a grid over the A
// factor (angles per coordinate = resolution) with the exact minimum over the
// B factor, then see-saw polish from the best grid points.
double grid_oracle_min(const Witness& w, int resolution = 12);

}  // namespace ewopt

#endif  // EWOPT_SEESAW_HPP
