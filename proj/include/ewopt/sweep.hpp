#ifndef EWOPT_SWEEP_HPP
#define EWOPT_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include "ewopt/json_io.hpp"

namespace ewopt {

// Grid of (theta, b) cells for the lambda_max surface. The theta grid is
// anchored at zero (theta = k * theta_step within [theta_min, theta_max]) so
// the theta = 0 column is always present; the b grid starts at b_min.
struct SweepSpec {
  double theta_min = -std::numbers::pi / 3.0;
  double theta_max = std::numbers::pi / 3.0;
  double theta_step = 0.05;
  double b_min = 0.05;
  double b_max = 3.0;
  double b_step = 0.1;
  int restarts = 1000;
  int max_iters = 500;
  std::uint64_t seed = 2013;
  double lambda_tol = 1e-4;
  int workers = 0;

  static SweepSpec fast();
  static SweepSpec full();

  void validate() const;
  std::vector<double> theta_grid() const;
  std::vector<double> b_grid() const;
};

struct SweepCell {
  double theta = 0.0;
  double b = 0.0;
  double lambda_max = 0.0;
  bool converged = false;
};

// Overrides the fields present in j; unknown keys are rejected.
SweepSpec sweep_spec_from_json(const Json& j, SweepSpec base = {});
Json sweep_spec_to_json(const SweepSpec& spec);

// One cell: lambda_max of W_{theta,b} against P1. Cells outside the valid
// family (|b - 1| < 1e-9 with theta != 0, or |theta| >= pi/3) are still
// computed but reported with converged = false.
SweepCell sweep_cell(double theta, double b, const SweepSpec& spec, std::uint64_t cell_seed);

// Cells in row-major (theta outer, b inner) order, independent of the
// number of workers.
std::vector<SweepCell> run_sweep(const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells);
std::vector<SweepCell> read_sweep_csv(std::istream& in);

}  // namespace ewopt

#endif  // EWOPT_SWEEP_HPP
