#pragma once

// JSON file formats: fans, morphisms, theorem reports, certificates.
// Integers are bit-exact: plain JSON numbers within 64-bit range, decimal
// strings beyond it; floats are rejected.

#include <coxfiber/blowup.hpp>
#include <coxfiber/coxring.hpp>
#include <coxfiber/divclass.hpp>
#include <coxfiber/fan.hpp>
#include <coxfiber/intlin.hpp>

#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxfiber {

using nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- exact integers -------------------------------------------------------

inline json int_to_json(const Int& v) {
  if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
  return json(v.get_str());
}

inline Int int_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned())
      return Int(std::to_string(j.get<std::uint64_t>()));
    return Int(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start)
      throw ParseError(where + ": empty integer string");
    for (std::size_t i = start; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw ParseError(where + ": malformed integer string '" + s + "'");
    return Int(s);
  }
  if (j.is_number_float())
    throw ParseError(where + ": floats are not accepted");
  throw ParseError(where + ": expected an integer");
}

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (const Int& x : v) a.push_back(int_to_json(x));
  return a;
}

inline Vec vec_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  Vec v;
  for (const json& x : j) v.push_back(int_from_json(x, where));
  return v;
}

inline json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
  return rows;
}

inline IntMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  std::vector<Vec> rows;
  for (const json& r : j) rows.push_back(vec_from_json(r, where));
  try {
    return IntMatrix::from_rows(rows);
  } catch (const DimensionMismatch&) {
    throw ParseError(where + ": ragged matrix");
  }
}

// --- fans -----------------------------------------------------------------

inline json fan_to_json(const Fan& f) {
  json j;
  j["rank"] = f.rank;
  json rays = json::array();
  for (const Vec& r : f.rays) rays.push_back(vec_to_json(r));
  j["rays"] = rays;
  json cones = json::array();
  for (const auto& c : f.max_cones) {
    json cone = json::array();
    for (std::size_t i : c) cone.push_back(i);
    cones.push_back(cone);
  }
  j["max_cones"] = cones;
  if (!f.name.empty()) j["name"] = f.name;
  return j;
}

inline Fan fan_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("fan: expected an object");
  Fan f;
  if (!j.contains("rank") || !j["rank"].is_number_integer() ||
      j["rank"].is_number_float())
    throw ParseError("fan: missing or malformed 'rank'");
  long long rank = j["rank"].get<long long>();
  if (rank < 0) throw ParseError("fan: negative rank");
  f.rank = static_cast<std::size_t>(rank);
  if (!j.contains("rays") || !j["rays"].is_array())
    throw ParseError("fan: missing 'rays'");
  for (const json& r : j["rays"]) f.rays.push_back(vec_from_json(r, "ray"));
  if (!j.contains("max_cones") || !j["max_cones"].is_array())
    throw ParseError("fan: missing 'max_cones'");
  for (const json& c : j["max_cones"]) {
    if (!c.is_array()) throw ParseError("fan: cone must be an array");
    std::vector<std::size_t> cone;
    for (const json& i : c) {
      Int idx = int_from_json(i, "cone index");
      if (idx < 0 || idx >= Int(f.rays.size()))
        throw ParseError("fan: cone ray index out of range");
      cone.push_back(idx.get_ui());
    }
    f.max_cones.push_back(cone);
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ParseError("fan: 'name' must be a string");
    f.name = j["name"].get<std::string>();
  }
  return f;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return j;
}

inline Fan load_fan(const std::filesystem::path& path) {
  return fan_from_json(read_json_file(path));
}

// --- morphisms --------------------------------------------------------------

inline json morphism_to_json(const ToricMorphism& m) {
  json j;
  j["matrix"] = matrix_to_json(m.matrix);
  j["source"] = fan_to_json(m.source);
  j["target"] = fan_to_json(m.target);
  return j;
}

// "source"/"target" may be inline fan objects or paths relative to `base`
inline ToricMorphism morphism_from_json(const json& j,
                                        const std::filesystem::path& base) {
  if (!j.is_object()) throw ParseError("morphism: expected an object");
  if (!j.contains("matrix") || !j.contains("source") || !j.contains("target"))
    throw ParseError("morphism: need 'matrix', 'source', 'target'");
  auto fan_field = [&](const char* key) -> Fan {
    const json& v = j[key];
    if (v.is_string())
      return load_fan(base / std::filesystem::path(v.get<std::string>()));
    return fan_from_json(v);
  };
  Fan source = fan_field("source");
  Fan target = fan_field("target");
  IntMatrix matrix = matrix_from_json(j["matrix"], "morphism matrix");
  if (matrix.rows() != target.rank || matrix.cols() != source.rank)
    throw ParseError("morphism: matrix shape does not match fan ranks");
  try {
    return make_morphism(std::move(source), std::move(target),
                         std::move(matrix));
  } catch (const IncompatibleMorphism& e) {
    throw ParseError(std::string("morphism: ") + e.what());
  }
}

inline ToricMorphism load_morphism(const std::filesystem::path& path) {
  return morphism_from_json(read_json_file(path), path.parent_path());
}

// --- reports ----------------------------------------------------------------

inline json hypotheses_to_json(const std::vector<HypothesisCheck>& checks) {
  json j = json::object();
  for (const HypothesisCheck& c : checks) {
    json e;
    e["pass"] = c.pass;
    if (!c.note.empty()) e["witness"] = c.note;
    j[c.name] = e;
  }
  return j;
}

inline json theorem_report_to_json(const TheoremReport& rep) {
  json j;
  j["hypotheses"] = hypotheses_to_json(rep.hypotheses);
  if (rep.iso) {
    json iso;
    iso["map"] = matrix_to_json(rep.iso->map.matrix());
    iso["inverse"] = matrix_to_json(rep.iso->inverse.matrix());
    j["grading_iso"] = iso;
  } else if (!rep.iso_failure.empty()) {
    j["grading_iso"] = rep.iso_failure;
  } else {
    j["grading_iso"] = nullptr;
  }
  json table = json::array();
  for (const DimensionRow& row : rep.table) {
    json r;
    r["degree"] = vec_to_json(row.degree);
    r["dim_quotient"] = row.dim_quotient;
    r["dim_fiber"] = row.dim_fiber;
    r["pass"] = row.pass;
    table.push_back(r);
  }
  j["table"] = table;
  j["pass"] = rep.pass;
  return j;
}

inline json certificate_to_json(const NonFGCertificate& cert) {
  json j;
  json spec;
  spec["morphism"] = morphism_to_json(cert.spec.morphism);
  if (!cert.spec.label_x.empty()) spec["label_x"] = cert.spec.label_x;
  if (!cert.spec.label_y.empty()) spec["label_y"] = cert.spec.label_y;
  j["spec"] = spec;
  json checks = json::array();
  for (const HypothesisCheck& c : cert.checks) {
    json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["witness"] = c.note;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["external_input"] = cert.external_input;
  j["valid"] = cert.valid;
  j["conclusion"] = cert.conclusion;
  return j;
}

inline json group_to_json(const FGAbelianGroup& g) {
  json j;
  j["free_rank"] = g.free_rank();
  json tors = json::array();
  for (const Int& d : g.invariant_factors()) tors.push_back(int_to_json(d));
  j["invariant_factors"] = tors;
  return j;
}

}  // namespace coxfiber
