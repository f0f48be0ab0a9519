#include "ewopt/seesaw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ewopt/error.hpp"
#include "parallel.hpp"

namespace ewopt {

namespace {

double operator_scale(const Witness& w) {
  const double n = w.matrix().norm();
  return n > 0.0 ? n : 1.0;
}

// Distance between two unit vectors after removing their relative phase.
double aligned_distance(const ComplexVector& a, const ComplexVector& b) {
  const Complex overlap = a.dot(b);
  const double mag = std::abs(overlap);
  if (mag == 0.0) return std::numbers::sqrt2;
  return (b - a * (overlap / mag)).norm();
}

struct RunState {
  SeesawRun run;
  double max_increase = 0.0;
};

// Alternating descent with the operator and local vectors held in Eigen types
// of static size when DA and DB are known at compile time.
template <int DA, int DB>
class Descent {
  static constexpr bool kFixed = DA != Eigen::Dynamic && DB != Eigen::Dynamic;
  static constexpr int kDim = kFixed ? DA * DB : Eigen::Dynamic;
  using Op = Eigen::Matrix<Complex, kDim, kDim>;
  using VecA = Eigen::Matrix<Complex, DA, 1>;
  using VecB = Eigen::Matrix<Complex, DB, 1>;
  using MatA = Eigen::Matrix<Complex, DA, DA>;
  using MatB = Eigen::Matrix<Complex, DB, DB>;

 public:
  explicit Descent(const Witness& w) : w_(w.matrix()), dA_(w.dA()), dB_(w.dB()) {}

  RunState run(ProductVector start, double value, int max_iters, double tol,
               bool record_history, double stop_below) const {
    RunState state;
    SeesawRun& out = state.run;
    VecA e = start.e;
    VecB f = start.f;
    if (record_history) out.history.push_back(value);

    auto step = [&](double next) {
      state.max_increase = std::max(state.max_increase, next - value);
      value = next;
      if (record_history) out.history.push_back(value);
    };

    for (int it = 1; it <= max_iters && value >= stop_below; ++it) {
      const double before = value;
      step(lowest(contract_b(f), e));
      out.iterations = it;
      if (value < stop_below) break;
      step(lowest(contract_a(e), f));
      if (std::abs(before - value) <= tol) {
        out.converged = true;
        break;
      }
    }
    out.point = ProductVector{ComplexVector(e), ComplexVector(f)};
    return state;
  }

 private:
  MatA contract_b(const VecB& f) const {
    MatA out(dA_, dA_);
    for (int i = 0; i < dA_; ++i)
      for (int j = 0; j < dA_; ++j) {
        Complex acc(0.0, 0.0);
        for (int k = 0; k < dB_; ++k) {
          Complex row(0.0, 0.0);
          for (int l = 0; l < dB_; ++l) row += w_(i * dB_ + k, j * dB_ + l) * f(l);
          acc += std::conj(f(k)) * row;
        }
        out(i, j) = acc;
      }
    return out;
  }

  MatB contract_a(const VecA& e) const {
    MatB out = MatB::Zero(dB_, dB_);
    for (int i = 0; i < dA_; ++i)
      for (int j = 0; j < dA_; ++j) {
        const Complex weight = std::conj(e(i)) * e(j);
        for (int k = 0; k < dB_; ++k)
          for (int l = 0; l < dB_; ++l) out(k, l) += weight * w_(i * dB_ + k, j * dB_ + l);
      }
    return out;
  }

  template <typename Mat, typename Vec>
  static double lowest(const Mat& m, Vec& target) {
    const Eigen::SelfAdjointEigenSolver<Mat> solver(m);
    ComplexVector v = solver.eigenvectors().col(0);
    fix_phase(v);
    target = v;
    return solver.eigenvalues()(0);
  }

  Op w_;
  int dA_;
  int dB_;
};

RunState descend(const Witness& w, ProductVector start, int max_iters, double conv_tol,
                 bool record_history, double stop_below) {
  const double tol = conv_tol * operator_scale(w);
  const double value = expectation(w, start);
  RunState state;
  if (w.dA() == 3 && w.dB() == 3) {
    state = Descent<3, 3>(w).run(std::move(start), value, max_iters, tol, record_history, stop_below);
  } else if (w.dA() == 2 && w.dB() == 2) {
    state = Descent<2, 2>(w).run(std::move(start), value, max_iters, tol, record_history, stop_below);
  } else {
    state = Descent<Eigen::Dynamic, Eigen::Dynamic>(w).run(std::move(start), value, max_iters, tol,
                                                           record_history, stop_below);
  }
  state.run.value = expectation(w, state.run.point);
  return state;
}

std::vector<RunState> run_restarts(const Witness& w, const SeesawConfig& cfg) {
  std::vector<RunState> runs(static_cast<std::size_t>(cfg.restarts));
  detail::parallel_for(runs.size(), cfg.workers, [&](std::size_t k) {
    std::mt19937_64 rng(stream_seed(cfg.seed, k));
    runs[k] = descend(w, random_product_vector(w.dA(), w.dB(), rng), cfg.max_iters,
                      cfg.conv_tol, false, -std::numeric_limits<double>::infinity());
  });
  return runs;
}

double fidelity(const ProductVector& a, const ProductVector& b) {
  return std::abs(a.e.dot(b.e) * a.f.dot(b.f));
}

ComplexVector grid_vector(int dim, const std::vector<double>& angles) {
  ComplexVector v(dim);
  if (dim == 2) {
    v << std::cos(angles[0]), std::sin(angles[0]) * std::polar(1.0, angles[1]);
  } else {
    v << std::cos(angles[0]),
        std::sin(angles[0]) * std::cos(angles[1]) * std::polar(1.0, angles[2]),
        std::sin(angles[0]) * std::sin(angles[1]) * std::polar(1.0, angles[3]);
  }
  return v;
}

}  // namespace

void SeesawConfig::validate() const {
  if (restarts < 1) throw Error(ErrorCode::InvalidParams, "restarts must be at least 1");
  if (max_iters < 1) throw Error(ErrorCode::InvalidParams, "max_iters must be at least 1");
  if (!(conv_tol > 0.0)) throw Error(ErrorCode::InvalidParams, "conv_tol must be positive");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a combination of both inputs.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ProductVector random_product_vector(int dA, int dB, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&](int dim) {
    ComplexVector v(dim);
    for (int k = 0; k < dim; ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v(k) = Complex(re, im);
    }
    return v;
  };
  ComplexVector e = draw(dA);
  ComplexVector f = draw(dB);
  return ProductVector::normalized(std::move(e), std::move(f));
}

SeesawRun seesaw_run(const Witness& w, ProductVector start, int max_iters, double conv_tol,
                     bool record_history, double stop_below) {
  return descend(w, std::move(start), max_iters, conv_tol, record_history, stop_below).run;
}

MinResult min_product_expectation(const Witness& w, const SeesawConfig& cfg) {
  cfg.validate();
  std::vector<RunState> runs = run_restarts(w, cfg);

  MinResult result;
  result.restart_values.reserve(runs.size());
  std::size_t best = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    result.restart_values.push_back(runs[k].run.value);
    result.max_increase = std::max(result.max_increase, runs[k].max_increase);
    if (runs[k].run.value < runs[best].run.value) best = k;
  }
  const SeesawRun& winner = runs[best].run;
  result.value = winner.value;
  result.argmin = winner.point;
  result.iterations = winner.iterations;
  result.converged = winner.converged;
  result.best_restart = static_cast<int>(best);
  return result;
}

std::optional<ProductVector> find_product_below(const Witness& w, double threshold,
                                                const SeesawConfig& cfg) {
  cfg.validate();
  for (int k = 0; k < cfg.restarts; ++k) {
    std::mt19937_64 rng(stream_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    const RunState state = descend(w, random_product_vector(w.dA(), w.dB(), rng),
                                   cfg.max_iters, cfg.conv_tol, false, threshold);
    if (state.run.value < threshold) return state.run.point;
  }
  return std::nullopt;
}

bool is_entanglement_witness(const Witness& w, const SeesawConfig& cfg, double tol) {
  if (hermitian_min_eig(w.matrix()) >= -tol) return false;
  return !find_product_below(w, -tol, cfg).has_value();
}

double default_zero_tol(const Witness& w) { return 1e-9 * w.matrix().norm(); }

ProductVector polish_zero(const Witness& w, ProductVector pv, int max_iters) {
  constexpr double kTarget = 1e-15;
  constexpr int kPatience = 50;
  double best_move = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int it = 0; it < max_iters; ++it) {
    ComplexVector e = min_eigenpair(sandwich(w.matrix(), w.dA(), w.dB(), Subsystem::B, pv.f)).vector;
    ComplexVector f = min_eigenpair(sandwich(w.matrix(), w.dA(), w.dB(), Subsystem::A, e)).vector;
    const double move = aligned_distance(pv.e, e) + aligned_distance(pv.f, f);
    pv.e = std::move(e);
    pv.f = std::move(f);
    if (move <= kTarget) break;
    if (move < best_move) {
      best_move = move;
      since_best = 0;
    } else if (++since_best >= kPatience) {
      break;
    }
  }
  return pv;
}

std::vector<ProductVector> collect_zeros(const Witness& w, const SeesawConfig& cfg,
                                         std::optional<double> zero_tol) {
  cfg.validate();
  const double tol = zero_tol.value_or(default_zero_tol(w));
  const std::vector<RunState> runs = run_restarts(w, cfg);

  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& r : runs) lowest = std::min(lowest, r.run.value);
  if (lowest < -tol) {
    throw Error(ErrorCode::NotBlockPositive,
                "product expectation reaches " + std::to_string(lowest), lowest);
  }

  std::vector<ProductVector> zeros;
  for (const auto& r : runs) {
    if (!r.run.converged || r.run.value > tol) continue;
    const ProductVector refined = polish_zero(w, r.run.point).canonical();
    const bool known = std::any_of(zeros.begin(), zeros.end(), [&](const ProductVector& z) {
      return fidelity(z, refined) >= 1.0 - 1e-6;
    });
    if (!known) zeros.push_back(refined);
  }
  return zeros;
}

double grid_oracle_min(const Witness& w, int resolution) {
  const bool qutrits = w.dA() == 3 && w.dB() == 3;
  const bool qubits = w.dA() == 2 && w.dB() == 2;
  if (!qutrits && !qubits) {
    throw Error(ErrorCode::UnsupportedDimension,
                "grid oracle supports 2x2 and 3x3 only, got " + std::to_string(w.dA()) +
                    "x" + std::to_string(w.dB()));
  }
  if (resolution < 2) throw Error(ErrorCode::InvalidParams, "resolution must be at least 2");

  // Polar angles span [0, pi/2] inclusive, phases [0, 2 pi) exclusive.
  const int n_angles = qutrits ? 4 : 2;
  const int n_polar = qutrits ? 2 : 1;
  auto angle = [&](int slot, int index) {
    if (slot < n_polar) return (std::numbers::pi / 2.0) * index / (resolution - 1);
    return 2.0 * std::numbers::pi * index / resolution;
  };

  struct Candidate {
    double value;
    ComplexVector e;
  };
  constexpr std::size_t kKeep = 10;
  std::vector<Candidate> best;

  std::vector<int> index(static_cast<std::size_t>(n_angles), 0);
  std::vector<double> angles(static_cast<std::size_t>(n_angles), 0.0);
  for (;;) {
    for (int s = 0; s < n_angles; ++s) angles[s] = angle(s, index[s]);
    ComplexVector e = grid_vector(w.dA(), angles);
    const double value = min_eigenpair(sandwich(w.matrix(), w.dA(), w.dB(), Subsystem::A, e)).value;
    if (best.size() < kKeep || value < best.back().value) {
      best.push_back({value, std::move(e)});
      std::stable_sort(best.begin(), best.end(),
                       [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
      if (best.size() > kKeep) best.pop_back();
    }
    int s = 0;
    while (s < n_angles && ++index[s] == resolution) index[s++] = 0;
    if (s == n_angles) break;
  }

  double lowest = best.front().value;
  for (const auto& c : best) {
    const ComplexVector f =
        min_eigenpair(sandwich(w.matrix(), w.dA(), w.dB(), Subsystem::A, c.e)).vector;
    const SeesawRun run = seesaw_run(w, ProductVector{c.e, f}, 1000, 1e-15);
    lowest = std::min(lowest, run.value);
  }
  return lowest;
}

}  // namespace ewopt
