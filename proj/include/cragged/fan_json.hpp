#pragma once

// JSON fan format:
//   {"rank": n, "beta": [[int,...],...], "max_cones": [[rayIndex,...],...], "name": "optional"}
// Ray indices are 0-based positions into "beta". Faces are generated.

#include "cragged/stackyfan.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace cragged {

using Json = nlohmann::json;

inline Json to_json(const Integer& x) {
  if (x.fits_slong_p()) return Json(x.get_si());
  return Json(x.get_str());
}

inline Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const std::vector<IntVector>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

inline Json to_json(const RatVector& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(format(q));
  return a;
}

inline Json to_json(const IntMatrix& m) { return to_json(m.row_vectors()); }

inline Json fan_to_json(const StackyFan& fan) {
  Json j;
  j["rank"] = fan.rank();
  j["beta"] = to_json(fan.beta());
  j["max_cones"] = fan.max_cones();
  if (!fan.name().empty()) j["name"] = fan.name();
  return j;
}

/// Canonical single-line serialization; used for digests and round trips.
inline std::string fan_to_string(const StackyFan& fan) { return fan_to_json(fan).dump(); }

namespace detail {

inline Error schema_error(const std::string& field, const std::string& what) {
  return Error(ErrorKind::SchemaError, "field '" + field + "': " + what);
}

inline Integer integer_field(const Json& v, const std::string& field) {
  if (v.is_number_integer()) return v.is_number_unsigned() ? Integer(v.get<unsigned long>()) : Integer(v.get<long>());
  if (v.is_string()) {
    // Integers beyond 64 bits may be written as decimal strings.
    auto s = v.get<std::string>();
    Rational q = parse_rational(s);
    if (is_integer(q) && s.find('/') == std::string::npos) return q.get_num();
  }
  throw schema_error(field, "expected an integer");
}

inline Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError,
                "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

}  // namespace detail

/// Parses the fan document. Structural errors throw; geometric validation
/// is recorded in the fan and enforced only when `require_valid` is set.
inline StackyFan parse_fan_text(std::string_view text, bool require_valid = true) {
  Json doc = detail::parse_document(text);
  if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "top level must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "rank" && key != "beta" && key != "max_cones" && key != "name") {
      throw detail::schema_error(key, "unknown field");
    }
  }
  for (const char* req : {"rank", "beta", "max_cones"})
    if (!doc.contains(req)) throw detail::schema_error(req, "missing");

  const Json& jr = doc["rank"];
  if (!jr.is_number_integer() || jr.get<long>() < 0) throw detail::schema_error("rank", "expected a nonnegative integer");
  const auto rank = jr.get<std::size_t>();

  const Json& jb = doc["beta"];
  if (!jb.is_array()) throw detail::schema_error("beta", "expected an array of integer vectors");
  std::vector<IntVector> beta;
  for (std::size_t i = 0; i < jb.size(); ++i) {
    const std::string field = "beta[" + std::to_string(i) + "]";
    if (!jb[i].is_array()) throw detail::schema_error(field, "expected an integer vector");
    IntVector v;
    for (std::size_t k = 0; k < jb[i].size(); ++k) v.push_back(detail::integer_field(jb[i][k], field));
    beta.push_back(std::move(v));
  }

  const Json& jc = doc["max_cones"];
  if (!jc.is_array()) throw detail::schema_error("max_cones", "expected an array of index lists");
  std::vector<RaySet> cones;
  for (std::size_t c = 0; c < jc.size(); ++c) {
    const std::string field = "max_cones[" + std::to_string(c) + "]";
    if (!jc[c].is_array()) throw detail::schema_error(field, "expected an index list");
    RaySet s;
    for (const auto& x : jc[c]) {
      if (!x.is_number_integer() || x.get<long>() < 0) throw detail::schema_error(field, "expected nonnegative indices");
      s.push_back(x.get<std::size_t>());
    }
    cones.push_back(std::move(s));
  }

  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw detail::schema_error("name", "expected a string");
    name = doc["name"].get<std::string>();
  }

  StackyFan fan(rank, std::move(beta), std::move(cones), std::move(name));
  if (require_valid) fan.require_valid();
  return fan;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline StackyFan parse_fan_file(const std::string& path, bool require_valid = true) {
  return parse_fan_text(read_text_file(path), require_valid);
}

}  // namespace cragged
