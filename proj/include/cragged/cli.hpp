#pragma once

// Verbs of the command-line tool and their JSON reports. The tool binary
// only parses argv into a Command; everything else happens here so the
// same code path is exercised by the tests.
//
// Exit codes: 0 success, 1 a check returned a negative verdict, 2 input error.

#include "cragged/craggedness.hpp"
#include "cragged/fan_json.hpp"
#include "cragged/homtheta.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <istream>

namespace cragged::cli {

inline constexpr const char* kSchemaVersion = "1";

struct Command {
  std::string verb;
  std::map<std::string, std::vector<std::string>> options;  // flags map to {}

  bool has(const std::string& key) const { return options.count(key) != 0; }
  const std::string& value(const std::string& key) const {
    auto it = options.find(key);
    if (it == options.end() || it->second.empty()) {
      throw Error(ErrorKind::SchemaError, "option --" + key + " is required for '" + verb + "'");
    }
    return it->second.back();
  }
};

struct OptionSpec {
  std::string name;
  bool flag = false;
  bool repeated = false;
  std::string help;
};

inline const std::map<std::string, std::vector<OptionSpec>>& verb_table() {
  static const std::map<std::string, std::vector<OptionSpec>> table = {
      {"validate", {{"fan", false, false, "fan JSON file ('-' for stdin)"}}},
      {"cragged",
       {{"fan", false, false, "fan JSON file ('-' for stdin)"},
        {"cross-check", true, false, "also check every integrality pattern"}}},
      {"fiber",
       {{"fan", false, false, "fan JSON file ('-' for stdin)"}, {"phi", false, false, "covector p/q,p/q,..."}}},
      {"patterns", {{"fan", false, false, "fan JSON file ('-' for stdin)"}}},
      {"hom",
       {{"fan", false, false, "fan JSON file ('-' for stdin)"},
        {"source", false, false, "character coneId:v1,v2,..."},
        {"target", false, false, "character coneId:v1,v2,..."},
        {"box", false, false, "box half-width K"}}},
      {"hommatrix",
       {{"fan", false, false, "fan JSON file ('-' for stdin)"},
        {"gen", false, true, "generator coneId:v1,v2,... (repeatable)"},
        {"box", false, false, "box half-width K"}}},
      {"fwps", {{"weights", false, false, "positive weights m1,m2,..."}}},
      {"quotient",
       {{"fan", false, false, "fan JSON file ('-' for stdin)"},
        {"gen", false, true, "subgroup generator p/q,p/q,... in N (x) Q (repeatable)"}}},
      {"gale", {{"fan", false, false, "fan JSON file ('-' for stdin)"}}},
      {"catalog", {{"name", false, false, "catalog fan name"}, {"list", true, false, "list catalog names"}}},
  };
  return table;
}

struct RunResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  if (s.empty()) return parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline RatVector parse_rational_vector(const std::string& s) {
  RatVector out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_rational(tok));
  return out;
}

inline Integer parse_integer(const std::string& s) {
  Rational q = parse_rational(s);
  if (!is_integer(q) || s.find('/') != std::string::npos) {
    throw Error(ErrorKind::ParseError, "not an integer: '" + s + "'");
  }
  return q.get_num();
}

inline std::size_t parse_count(const std::string& s) {
  Integer v = parse_integer(s);
  if (v < 0 || !v.fits_ulong_p()) throw Error(ErrorKind::ParseError, "not a count: '" + s + "'");
  return v.get_ui();
}

inline Character parse_character(const StackyFan& fan, const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "character must be coneId:v1,v2,...: '" + s + "'");
  std::size_t cone = parse_count(s.substr(0, colon));
  IntVector values;
  for (const auto& tok : split(s.substr(colon + 1), ',')) values.push_back(parse_integer(tok));
  fan.cone(cone);
  return make_character(fan, cone, std::move(values));
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return ss.str();
}

inline Json cone_json(const Cone& c) {
  Json j;
  j["lineality"] = to_json(c.lineality());
  j["rays"] = to_json(c.rays());
  return j;
}

inline Json character_json(const StackyFan& fan, const Character& chi) {
  Json j;
  j["cone"] = chi.cone;
  j["rays"] = fan.cone(chi.cone);
  j["values"] = to_json(chi.values);
  return j;
}

inline Json cone_sets_json(const StackyFan& fan, const std::vector<std::size_t>& ids) {
  Json a = Json::array();
  for (auto id : ids) a.push_back(fan.cones()[id]);
  return a;
}

}  // namespace detail

inline Json fiber_json(const StackyFan& fan, const LagrangianFiber& f) {
  Json j;
  j["phi"] = to_json(f.phi);
  j["zero_set"] = f.zero_set;
  j["s_phi"] = f.s_phi;
  j["s_phi_cones"] = detail::cone_sets_json(fan, f.s_phi);
  Json cones = Json::array();
  for (const auto& c : f.fiber_cones) cones.push_back(detail::cone_json(c));
  j["fiber_cones"] = cones;
  j["hull"] = detail::cone_json(f.hull);
  j["convex"] = f.convex;
  return j;
}

inline Json cragged_json(const StackyFan& fan, const CraggednessReport& rep) {
  Json j;
  j["cragged"] = rep.cragged;
  j["exhaustive"] = rep.exhaustive();
  j["unimodular"] = rep.unimodular();
  if (rep.exhaustiveness.witness) {
    Json w;
    w["rays"] = *rep.exhaustiveness.witness;
    w["max_cone"] = fan.max_cones()[*rep.exhaustiveness.witness_max_cone];
    j["exhaustiveness_witness"] = w;
  } else {
    j["exhaustiveness_witness"] = nullptr;
  }
  if (rep.unimodularity.witness) {
    const auto& u = *rep.unimodularity.witness;
    Json w;
    w["subset"] = u.subset;
    std::vector<IntVector> vs;
    for (auto i : u.subset) vs.push_back(fan.beta(i));
    w["beta"] = to_json(vs);
    w["lattice_generators"] = u.lattice_generators;
    w["nt_basis"] = to_json(u.nt_basis);
    w["index_kind"] = std::string(to_string(u.index.kind));
    w["index"] = to_json(u.index.index);
    j["unimodularity_witness"] = w;
  } else {
    j["unimodularity_witness"] = nullptr;
  }
  j["fiber_witness"] = rep.fiber_witness ? fiber_json(fan, *rep.fiber_witness) : Json(nullptr);
  if (rep.cross_check) {
    Json c;
    c["patterns"] = rep.cross_check->patterns;
    c["nonconvex"] = rep.cross_check->nonconvex;
    c["consistent"] = rep.cross_check->consistent;
    j["cross_check"] = c;
  }
  return j;
}

inline Json hom_json(const StackyFan& fan, const Character& src, const Character& dst, const HomDimension& h) {
  Json j;
  j["source"] = detail::character_json(fan, src);
  j["target"] = detail::character_json(fan, dst);
  j["box"] = h.box;
  j["zero"] = h.zero;
  j["truncated_count"] = h.truncated_count;
  j["basis_points"] = to_json(h.basis_points);
  return j;
}

inline std::string report(const std::string& verb, const StackyFan& fan, Json payload) {
  Json r;
  r["schema_version"] = kSchemaVersion;
  r["verb"] = verb;
  r["input_digest"] = "sha256:" + detail::sha256_hex(fan_to_string(fan));
  r["payload"] = std::move(payload);
  return r.dump(2) + "\n";
}

inline std::string error_json(std::string_view kind, const std::string& message) {
  Json e;
  e["error"] = std::string(kind);
  e["message"] = message;
  return e.dump() + "\n";
}

/// Rejects unknown verbs and options before anything is computed.
inline void check_command(const Command& cmd) {
  auto it = verb_table().find(cmd.verb);
  if (it == verb_table().end()) throw Error(ErrorKind::SchemaError, "unknown verb '" + cmd.verb + "'");
  for (const auto& [key, values] : cmd.options) {
    auto spec = std::find_if(it->second.begin(), it->second.end(), [&](const OptionSpec& s) { return s.name == key; });
    if (spec == it->second.end()) {
      throw Error(ErrorKind::SchemaError, "unknown option --" + key + " for '" + cmd.verb + "'");
    }
    if (!spec->repeated && values.size() > 1) throw Error(ErrorKind::SchemaError, "option --" + key + " given twice");
  }
}

inline RunResult run(const Command& cmd, std::istream& input) {
  RunResult res;
  try {
    check_command(cmd);
    auto load_fan = [&](bool require_valid = true) {
      if (!cmd.has("fan") || cmd.value("fan") == "-") {
        std::ostringstream ss;
        ss << input.rdbuf();
        return parse_fan_text(ss.str(), require_valid);
      }
      return parse_fan_file(cmd.value("fan"), require_valid);
    };
    const std::string& verb = cmd.verb;

    if (verb == "fwps") {
      std::vector<Integer> weights;
      for (const auto& tok : detail::split(cmd.value("weights"), ',')) weights.push_back(detail::parse_integer(tok));
      res.out = fan_to_json(make_fwps(weights)).dump(2) + "\n";
    } else if (verb == "catalog") {
      if (cmd.has("list")) {
        Json names = catalog_names();
        res.out = names.dump(2) + "\n";
      } else {
        res.out = fan_to_json(catalog(cmd.value("name"))).dump(2) + "\n";
      }
    } else if (verb == "validate") {
      StackyFan fan = load_fan(false);
      const auto& v = fan.validation();
      Json p;
      p["ok"] = v.ok;
      p["is_complete"] = v.is_complete;
      Json failures = Json::array();
      for (const auto& f : v.failures) failures.push_back({{"axiom", f.axiom}, {"witness", f.witness}});
      p["failures"] = failures;
      p["cones"] = fan.cones();
      res.out = report(verb, fan, p);
      res.exit_code = v.ok ? 0 : 1;
    } else if (verb == "cragged") {
      StackyFan fan = load_fan();
      auto rep = is_cragged(fan, cmd.has("cross-check"));
      res.out = report(verb, fan, cragged_json(fan, rep));
      res.exit_code = rep.cragged ? 0 : 1;
    } else if (verb == "fiber") {
      StackyFan fan = load_fan();
      auto f = lambda_fiber(fan, detail::parse_rational_vector(cmd.value("phi")));
      res.out = report(verb, fan, fiber_json(fan, f));
    } else if (verb == "patterns") {
      StackyFan fan = load_fan();
      Json list = Json::array();
      for (const auto& p : enumerate_integrality_patterns(fan)) {
        list.push_back({{"zero_set", p.zero_set},
                        {"representative_phi", to_json(p.representative_phi)},
                        {"s_phi", p.s_phi}});
      }
      Json payload;
      payload["count"] = list.size();
      payload["patterns"] = list;
      res.out = report(verb, fan, payload);
    } else if (verb == "hom") {
      StackyFan fan = load_fan();
      auto src = detail::parse_character(fan, cmd.value("source"));
      auto dst = detail::parse_character(fan, cmd.value("target"));
      auto box = detail::parse_count(cmd.value("box"));
      res.out = report(verb, fan, hom_json(fan, src, dst, hom_dimension(fan, src, dst, box)));
    } else if (verb == "hommatrix") {
      StackyFan fan = load_fan();
      std::vector<Character> gens;
      if (cmd.has("gen"))
        for (const auto& g : cmd.options.at("gen")) gens.push_back(detail::parse_character(fan, g));
      auto box = detail::parse_count(cmd.value("box"));
      auto m = hom_matrix(fan, gens, box);
      Json payload;
      Json jg = Json::array();
      for (const auto& g : gens) jg.push_back(detail::character_json(fan, g));
      payload["generators"] = jg;
      payload["box"] = box;
      Json counts = Json::array(), zeros = Json::array();
      for (const auto& row : m) {
        Json c = Json::array(), z = Json::array();
        for (const auto& h : row) {
          c.push_back(h.truncated_count);
          z.push_back(h.zero);
        }
        counts.push_back(c);
        zeros.push_back(z);
      }
      payload["counts"] = counts;
      payload["zero"] = zeros;
      res.out = report(verb, fan, payload);
    } else if (verb == "quotient") {
      StackyFan fan = load_fan();
      std::vector<RatVector> gens;
      if (cmd.has("gen"))
        for (const auto& g : cmd.options.at("gen")) gens.push_back(detail::parse_rational_vector(g));
      res.out = fan_to_json(quotient_by_subgroup(fan, gens)).dump(2) + "\n";
    } else if (verb == "gale") {
      StackyFan fan = load_fan();
      auto g = gale_dual(fan.beta_matrix());
      Json payload;
      payload["free_rank"] = g.free_rank;
      payload["torsion_factors"] = to_json(IntVector(g.torsion_factors.begin(), g.torsion_factors.end()));
      payload["projection"] = to_json(g.projection);
      payload["torsion_projection"] = to_json(g.torsion_projection);
      res.out = report(verb, fan, payload);
    }
  } catch (const Error& e) {
    res = {2, "", error_json(to_string(e.kind()), e.what())};
  } catch (const std::exception& e) {
    res = {2, "", error_json("InternalError", e.what())};
  }
  return res;
}

}  // namespace cragged::cli
