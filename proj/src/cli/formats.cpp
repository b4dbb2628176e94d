#include "qrange/cli/formats.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

namespace qrange::cli {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j) {
  if (!j.is_number()) throw FormatError("expected a number");
  return j.get<double>();
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw FormatError("complex numbers are [re, im] pairs");
  return {number(j[0]), number(j[1])};
}

template <typename Scalar, typename Convert>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix_from_json(const json& j, Convert convert) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw FormatError("matrices are non-empty arrays of rows");
  const std::size_t rows = j.size(), cols = j[0].size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw FormatError("matrix rows have unequal length");
    for (std::size_t c = 0; c < cols; ++c) m(Index(r), Index(c)) = convert(j[r][c]);
  }
  return m;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

Document read_document(const std::filesystem::path& path, std::string_view kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json body = json::parse(text, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw FormatError(path.string() + ": not a JSON object");
  const json& version = field(body, "schema_version");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion)
    throw FormatError(path.string() + ": unsupported schema_version " + version.dump());
  if (body.contains("kind") && body["kind"] != kind)
    throw FormatError(path.string() + ": expected kind \"" + std::string(kind) + "\", got " + body["kind"].dump());
  return {std::move(body), sha256_hex(text)};
}

std::string finalize(json body) {
  body["schema_version"] = kSchemaVersion;
  body.erase("content_digest");
  const std::string digest = sha256_hex(body.dump());
  body["content_digest"] = digest;
  return body.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

json to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const RealVector& v) {
  json out = json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

json integer_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

json to_json(const Facet& f) {
  json coeffs = json::array();
  for (const BigInt& c : f.coeffs) coeffs.push_back(integer_to_json(c));
  return {{"coeffs", std::move(coeffs)}, {"bound", integer_to_json(f.bound)}};
}

json to_json(const VertexSet& vs) {
  return {{"set", vs.kind == PolytopeKind::classical ? "c" : "q"},
          {"n", vs.n},
          {"dim", vs.dim},
          {"coordinate_order", coordinate_order(vs.n)},
          {"count", vs.vertices.size()},
          {"vertices", vs.vertices}};
}

json to_json(const BehaviorMatrix& b) {
  return {{"kind", "behavior"}, {"n", b.n()}, {"matrix", to_json(b.matrix())}};
}

json to_json(const PureState& s) {
  return {{"kind", "pure_state"},
          {"dims", {s.dim_left(), s.dim_right()}},
          {"schmidt", s.schmidt()},
          {"basis_left", to_json(s.basis_left())},
          {"basis_right", to_json(s.basis_right())}};
}

json to_json(const ProjectionFamily& fam) {
  json out = json::array();
  for (const Projection& p : fam) out.push_back(to_json(p.matrix()));
  return out;
}

json to_json(const TrajectoryPoint& p) {
  return {{"behavior", to_json(p.behavior)}, {"state", to_json(p.state)}, {"e", to_json(p.e)},
          {"f", to_json(p.f)},               {"dim", p.dim},              {"seed", p.seed},
          {"provenance", p.provenance}};
}

RealMatrix real_matrix_from_json(const json& j) { return matrix_from_json<double>(j, number); }

ComplexMatrix complex_matrix_from_json(const json& j) { return matrix_from_json<cplx>(j, complex_from_json); }

BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
      throw FormatError("invalid integer " + j.dump());
    }
  }
  throw FormatError("expected an integer, got " + j.dump());
}

Facet facet_from_json(const json& j) {
  Facet f;
  const json& coeffs = field(j, "coeffs");
  if (!coeffs.is_array()) throw FormatError("facet coeffs must be an array");
  for (const json& c : coeffs) f.coeffs.push_back(bigint_from_json(c));
  f.bound = bigint_from_json(field(j, "bound"));
  return f;
}

BehaviorMatrix behavior_from_json(const json& j) {
  RealMatrix m = real_matrix_from_json(field(j, "matrix"));
  if (m.rows() != m.cols() || m.rows() < 2) throw FormatError("behavior matrix must be (n+1) x (n+1) with n >= 1");
  if (j.contains("n") && j["n"] != m.rows() - 1) throw FormatError("behavior n does not match the matrix size");
  try {
    return BehaviorMatrix(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

PureState state_from_json(const json& j) {
  try {
    if (j.contains("vector")) {
      const json& dims = field(j, "dims");
      if (!dims.is_array() || dims.size() != 2) throw FormatError("dims must be [dim_left, dim_right]");
      const Index dl = dims[0].get<Index>(), dr = dims[1].get<Index>();
      const json& v = j["vector"];
      if (!v.is_array() || Index(v.size()) != dl * dr || dl < 1 || dr < 1)
        throw FormatError("vector length must equal dim_left * dim_right");
      ComplexVector psi(dl * dr);
      for (Index k = 0; k < psi.size(); ++k) psi(k) = complex_from_json(v[std::size_t(k)]);
      if (std::abs(psi.norm() - 1.0) > tol::kNormalization * 1e3) throw FormatError("state vector must be normalized");
      return schmidt_decompose(psi / psi.norm(), dl, dr);
    }
    const json& sj = field(j, "schmidt");
    if (!sj.is_array() || sj.empty()) throw FormatError("schmidt must be a non-empty array");
    std::vector<double> c;
    for (const json& x : sj) c.push_back(number(x));
    if (j.contains("basis_left") || j.contains("basis_right"))
      return PureState(std::move(c), complex_matrix_from_json(field(j, "basis_left")),
                       complex_matrix_from_json(field(j, "basis_right")));
    if (j.contains("dim")) return PureState::from_schmidt(std::move(c), j["dim"].get<Index>());
    return PureState::from_schmidt(std::move(c));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  }
}

SignedCorrelationMatrix correlation_from_json(const json& j) {
  try {
    return SignedCorrelationMatrix(real_matrix_from_json(field(j, "matrix")));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

std::vector<Facet> catalog_from_json(const json& j) {
  const json& fs = field(j, "facets");
  if (!fs.is_array()) throw FormatError("facets must be an array");
  std::vector<Facet> out;
  for (const json& f : fs) out.push_back(facet_from_json(f));
  return out;
}

}  // namespace qrange::cli
