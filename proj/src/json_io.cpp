#include "ewopt/json_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "ewopt/error.hpp"

namespace ewopt {

namespace {

const Json& require(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw Error(ErrorCode::ParseError, std::string("missing field '") + field + "'");
  }
  return j.at(field);
}

Complex complex_from_json(const Json& j, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::ParseError,
                std::string("entries of '") + field + "' must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

ComplexVector vector_from_json(const Json& j, const char* field) {
  if (!j.is_array()) {
    throw Error(ErrorCode::ParseError, std::string("field '") + field + "' must be an array");
  }
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k], field);
  }
  return v;
}

Json witness_to_json(const Witness& w) {
  return Json{{"dA", w.dA()},
              {"dB", w.dB()},
              {"label", w.label()},
              {"matrix", matrix_to_json(w.matrix())}};
}

Witness witness_from_json(const Json& j) {
  const Json& da = require(j, "dA");
  const Json& db = require(j, "dB");
  if (!da.is_number_integer() || !db.is_number_integer()) {
    throw Error(ErrorCode::ParseError, "dA and dB must be integers");
  }
  const int dA = da.get<int>();
  const int dB = db.get<int>();
  if (dA <= 0 || dB <= 0) {
    throw Error(ErrorCode::DimensionMismatch, "dA and dB must be positive");
  }
  std::string label;
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw Error(ErrorCode::ParseError, "label must be a string");
    label = j.at("label").get<std::string>();
  }
  const ComplexVector flat = vector_from_json(require(j, "matrix"), "matrix");
  const Eigen::Index dim = static_cast<Eigen::Index>(dA) * dB;
  if (flat.size() != dim * dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix has " + std::to_string(flat.size()) + " entries, expected " +
                    std::to_string(dim * dim));
  }
  ComplexMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = flat(r * dim + c);
  return Witness(dA, dB, std::move(m), std::move(label));
}

Json zeros_to_json(std::span<const ProductVector> zeros) {
  Json list = Json::array();
  for (const auto& z : zeros) list.push_back({{"e", vector_to_json(z.e)}, {"f", vector_to_json(z.f)}});
  return Json{{"zeros", list}};
}

std::vector<ProductVector> zeros_from_json(const Json& j) {
  const Json& list = require(j, "zeros");
  if (!list.is_array()) throw Error(ErrorCode::ParseError, "'zeros' must be an array");
  std::vector<ProductVector> out;
  for (const auto& item : list) {
    out.push_back(ProductVector::normalized(vector_from_json(require(item, "e"), "e"),
                                            vector_from_json(require(item, "f"), "f")));
  }
  return out;
}

Json verdict_to_json(const Verdict& v) {
  Json out{{"verdict", to_string(v.kind)},
           {"span_dim", v.span_dim},
           {"per_zero_min_eig", v.per_zero_min_eig},
           {"min_gap", v.min_gap}};
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

Json spa_to_json(const SpaResult& spa, const PptRecord& ppt, const CcnrRecord& ccnr) {
  return Json{{"p_star", spa.p_star},
              {"lambda_min_W", spa.lambda_min_W},
              {"state_raw", matrix_to_json(spa.state_raw)},
              {"state", matrix_to_json(spa.state)},
              {"ppt", {{"min_eig_pt", ppt.min_eig_pt}, {"is_npt", ppt.is_npt}}},
              {"ccnr",
               {{"realignment_trace_norm", ccnr.realignment_trace_norm},
                {"flags_entangled", ccnr.flags_entangled}}}};
}

Json min_result_to_json(const MinResult& r) {
  return Json{{"value", r.value},
              {"argmin", {{"e", vector_to_json(r.argmin.e)}, {"f", vector_to_json(r.argmin.f)}}},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"best_restart", r.best_restart},
              {"restarts", r.restart_values.size()},
              {"max_increase", r.max_increase}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for reading");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

Witness read_witness(const std::filesystem::path& path) {
  return witness_from_json(read_json_file(path));
}

void write_witness(const std::filesystem::path& path, const Witness& w) {
  write_json_file(path, witness_to_json(w));
}

}  // namespace ewopt
