#ifndef EWOPT_JSON_IO_HPP
#define EWOPT_JSON_IO_HPP

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "ewopt/optimality.hpp"
#include "ewopt/seesaw.hpp"
#include "ewopt/spa.hpp"
#include "ewopt/witness.hpp"

namespace ewopt {

using Json = nlohmann::json;

// Complex arrays are written as [[re, im], ...]; doubles keep full
// round-trip precision.
Json matrix_to_json(const ComplexMatrix& m);
Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j, const char* field);

// { "dA": int, "dB": int, "label": string, "matrix": [[re, im], ...] }
Json witness_to_json(const Witness& w);
Witness witness_from_json(const Json& j);

// { "zeros": [ { "e": [[re, im], ...], "f": [[re, im], ...] }, ... ] }
Json zeros_to_json(std::span<const ProductVector> zeros);
std::vector<ProductVector> zeros_from_json(const Json& j);

Json verdict_to_json(const Verdict& v);
Json spa_to_json(const SpaResult& spa, const PptRecord& ppt, const CcnrRecord& ccnr);
Json min_result_to_json(const MinResult& r);

// File helpers. Unreadable or unwritable paths raise IoError, malformed JSON
// raises ParseError with the parser's line and column.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

Witness read_witness(const std::filesystem::path& path);
void write_witness(const std::filesystem::path& path, const Witness& w);

}  // namespace ewopt

#endif  // EWOPT_JSON_IO_HPP
