#include "ewopt/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ewopt/error.hpp"
#include "parallel.hpp"

namespace ewopt {

namespace {

constexpr double kGridSlack = 1e-9;

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

double parse_double(const std::string& text, int line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return value;
}

}  // namespace

SweepSpec SweepSpec::fast() {
  SweepSpec spec;
  spec.theta_step = 0.1;
  spec.b_step = 0.2;
  spec.restarts = 200;
  return spec;
}

SweepSpec SweepSpec::full() { return SweepSpec{}; }

void SweepSpec::validate() const {
  if (!(theta_step > 0.0) || !(b_step > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "grid steps must be positive");
  }
  if (!(theta_min <= theta_max) || !(b_min <= b_max)) {
    throw Error(ErrorCode::InvalidParams, "grid ranges must be nonempty");
  }
  if (!(b_min > 0.0)) throw Error(ErrorCode::InvalidParams, "b_min must be positive");
  if (restarts < 1 || max_iters < 1) {
    throw Error(ErrorCode::InvalidParams, "restarts and max_iters must be at least 1");
  }
  if (!(lambda_tol > 0.0)) throw Error(ErrorCode::InvalidParams, "lambda_tol must be positive");
  if (theta_grid().empty()) throw Error(ErrorCode::InvalidParams, "theta grid is empty");
}

std::vector<double> SweepSpec::theta_grid() const {
  const auto first = static_cast<long>(std::ceil(theta_min / theta_step - kGridSlack));
  const auto last = static_cast<long>(std::floor(theta_max / theta_step + kGridSlack));
  std::vector<double> out;
  for (long k = first; k <= last; ++k) out.push_back(static_cast<double>(k) * theta_step);
  return out;
}

std::vector<double> SweepSpec::b_grid() const {
  std::vector<double> out;
  for (long j = 0;; ++j) {
    const double b = b_min + static_cast<double>(j) * b_step;
    if (b > b_max + kGridSlack * b_step) break;
    out.push_back(b);
  }
  return out;
}

SweepSpec sweep_spec_from_json(const Json& j, SweepSpec base) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "sweep spec must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    auto number = [&]() {
      if (!value.is_number()) throw Error(ErrorCode::ParseError, "'" + key + "' must be a number");
      return value.get<double>();
    };
    auto integer = [&]() {
      if (!value.is_number_integer()) {
        throw Error(ErrorCode::ParseError, "'" + key + "' must be an integer");
      }
      return value.get<long long>();
    };
    if (key == "theta_min") base.theta_min = number();
    else if (key == "theta_max") base.theta_max = number();
    else if (key == "theta_step") base.theta_step = number();
    else if (key == "b_min") base.b_min = number();
    else if (key == "b_max") base.b_max = number();
    else if (key == "b_step") base.b_step = number();
    else if (key == "restarts") base.restarts = static_cast<int>(integer());
    else if (key == "max_iters") base.max_iters = static_cast<int>(integer());
    else if (key == "seed") base.seed = static_cast<std::uint64_t>(integer());
    else if (key == "lambda_tol") base.lambda_tol = number();
    else if (key == "workers") base.workers = static_cast<int>(integer());
    else throw Error(ErrorCode::ParseError, "unknown sweep spec field '" + key + "'");
  }
  return base;
}

Json sweep_spec_to_json(const SweepSpec& spec) {
  return Json{{"theta_min", spec.theta_min}, {"theta_max", spec.theta_max},
              {"theta_step", spec.theta_step}, {"b_min", spec.b_min},
              {"b_max", spec.b_max},         {"b_step", spec.b_step},
              {"restarts", spec.restarts},   {"max_iters", spec.max_iters},
              {"seed", spec.seed},           {"lambda_tol", spec.lambda_tol},
              {"workers", spec.workers}};
}

SweepCell sweep_cell(double theta, double b, const SweepSpec& spec, std::uint64_t cell_seed) {
  const HaKyeParams params{theta, b};
  const bool in_family = std::abs(theta) < std::numbers::pi / 3.0 &&
                         (theta == 0.0 || std::abs(b - 1.0) >= 1e-9);

  const HaKyeBlocks blocks = hakye_blocks(params);
  ComplexMatrix m = blocks.lambda;
  for (const auto& proj : blocks.projector) m += proj / b;
  const Witness w(3, 3, std::move(m));

  std::vector<ProductVector> zeros;
  if (in_family && b != 1.0) zeros = hakye_kernel_vectors(params, true);

  SeesawConfig cfg;
  cfg.restarts = spec.restarts;
  cfg.max_iters = spec.max_iters;
  cfg.seed = cell_seed;
  cfg.workers = 1;
  SubtractionOptions options;
  options.lambda_tol = spec.lambda_tol;

  const SubtractionResult r = subtraction_certificate(w, blocks.projector[0], cfg, zeros, options);
  return SweepCell{theta, b, r.lambda, r.converged && in_family};
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> thetas = spec.theta_grid();
  const std::vector<double> bs = spec.b_grid();
  std::vector<SweepCell> cells(thetas.size() * bs.size());
  detail::parallel_for(cells.size(), spec.workers, [&](std::size_t index) {
    const std::size_t i = index / bs.size();
    const std::size_t j = index % bs.size();
    cells[index] = sweep_cell(thetas[i], bs[j], spec, stream_seed(stream_seed(spec.seed, i), j));
  });
  return cells;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "theta,b,lambda_max,converged\n";
  for (const auto& c : cells) {
    out << format_double(c.theta) << ',' << format_double(c.b) << ','
        << format_double(c.lambda_max) << ',' << (c.converged ? "true" : "false") << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing sweep CSV");
}

std::vector<SweepCell> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "theta,b,lambda_max,converged") {
    throw Error(ErrorCode::ParseError, "line 1: expected header theta,b,lambda_max,converged");
  }
  std::vector<SweepCell> cells;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string fields[4];
    int count = 0;
    while (count < 4 && std::getline(row, fields[count], ',')) ++count;
    std::string extra;
    if (count != 4 || std::getline(row, extra)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": expected 4 fields");
    }
    if (fields[3] != "true" && fields[3] != "false") {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(number) + ": converged must be true or false");
    }
    cells.push_back(SweepCell{parse_double(fields[0], number), parse_double(fields[1], number),
                              parse_double(fields[2], number), fields[3] == "true"});
  }
  return cells;
}

}  // namespace ewopt
