#pragma once

// JSON file formats. Every document carries "schema_version": "1"; complex
// numbers are [re, im] pairs, matrices are row-major arrays of rows and facet
// coefficients are exact integers.

#include "qrange/entangle.hpp"
#include "qrange/geometry.hpp"
#include "qrange/polytope.hpp"
#include "qrange/qcore.hpp"
#include "qrange/tsirelson.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace qrange::cli {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

/// Malformed or unsupported input document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Document {
  json body;
  std::string digest;  // SHA-256 of the file bytes
};

std::string sha256_hex(std::string_view bytes);

/// Reads and parses a document and checks its schema version and kind.
Document read_document(const std::filesystem::path& path, std::string_view kind);

/// Adds schema_version and content_digest (SHA-256 of the body dumped without
/// that field) and returns the pretty-printed text.
std::string finalize(json body);

/// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& text);

json to_json(const RealMatrix& m);
json to_json(const ComplexMatrix& m);
json to_json(const RealVector& v);
json integer_to_json(const BigInt& v);
json to_json(const Facet& f);
json to_json(const VertexSet& vs);
json to_json(const BehaviorMatrix& b);
json to_json(const PureState& s);
json to_json(const ProjectionFamily& fam);
json to_json(const TrajectoryPoint& p);

RealMatrix real_matrix_from_json(const json& j);
ComplexMatrix complex_matrix_from_json(const json& j);
BigInt bigint_from_json(const json& j);
Facet facet_from_json(const json& j);
BehaviorMatrix behavior_from_json(const json& j);
/// Either {"schmidt": [...], optional "basis_left"/"basis_right"} or
/// {"vector": [[re, im], ...], "dims": [dl, dr]}.
PureState state_from_json(const json& j);
SignedCorrelationMatrix correlation_from_json(const json& j);
std::vector<Facet> catalog_from_json(const json& j);

}  // namespace qrange::cli
