#include <coxfiber/io.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "toric_fixtures.hpp"

using namespace coxfiber;
using namespace fixtures;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("coxfiber-test-" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("fan JSON round trip") {
  for (const Fan& f : {p1_fan(), p1xp1_fan(), hirzebruch_fan(2), p112_fan()}) {
    CAPTURE(f.name);
    json j = fan_to_json(f);
    Fan g = fan_from_json(j);
    CHECK(g.rank == f.rank);
    CHECK(g.rays == f.rays);
    CHECK(g.max_cones == f.max_cones);
    CHECK(g.name == f.name);
    // parse -> serialize -> parse is the identity on the JSON form
    CHECK(fan_to_json(g) == j);
  }
}

TEST_CASE("integers beyond 64 bits round trip as decimal strings") {
  Int big("123456789012345678901234567890");
  json j = int_to_json(big);
  REQUIRE(j.is_string());
  CHECK(int_from_json(j, "t") == big);
  CHECK(int_from_json(int_to_json(Int(-42)), "t") == -42);
  CHECK(int_from_json(json::parse("\"-987654321098765432109876543210\""),
                      "t") == Int("-987654321098765432109876543210"));
}

TEST_CASE("floats and malformed integers are rejected") {
  CHECK_THROWS_AS(int_from_json(json::parse("1.5"), "t"), ParseError);
  CHECK_THROWS_AS(int_from_json(json::parse("\"12x\""), "t"), ParseError);
  CHECK_THROWS_AS(int_from_json(json::parse("\"\""), "t"), ParseError);
  CHECK_THROWS_AS(int_from_json(json::parse("true"), "t"), ParseError);
  CHECK_THROWS_AS(
      fan_from_json(json::parse(R"({"rank":2,"rays":[[1,0.5]],"max_cones":[]})")),
      ParseError);
}

TEST_CASE("fan parsing validates structure") {
  CHECK_THROWS_AS(fan_from_json(json::parse("[]")), ParseError);
  CHECK_THROWS_AS(fan_from_json(json::parse(R"({"rank":1})")), ParseError);
  // cone index out of range
  CHECK_THROWS_AS(fan_from_json(json::parse(
                      R"({"rank":1,"rays":[[1]],"max_cones":[[1]]})")),
                  ParseError);
}

TEST_CASE("morphism file with inline fans") {
  TempDir tmp;
  ToricMorphism m = p1xp1_projection();
  write_file(tmp.path / "m.json", morphism_to_json(m).dump());
  ToricMorphism back = load_morphism(tmp.path / "m.json");
  CHECK(back.source.rays == m.source.rays);
  CHECK(back.target.rays == m.target.rays);
  CHECK(back.matrix == m.matrix);
}

TEST_CASE("morphism file with fan paths resolves relative to the file") {
  TempDir tmp;
  ToricMorphism m = hirzebruch_projection(1);
  write_file(tmp.path / "src.json", fan_to_json(m.source).dump());
  write_file(tmp.path / "tgt.json", fan_to_json(m.target).dump());
  write_file(tmp.path / "m.json",
             R"({"matrix":[[1,0]],"source":"src.json","target":"tgt.json"})");
  ToricMorphism back = load_morphism(tmp.path / "m.json");
  CHECK(back.source.rays == m.source.rays);
  CHECK(back.target.name == "P1");
}

TEST_CASE("morphism parsing rejects shape and compatibility errors") {
  TempDir tmp;
  ToricMorphism m = p1xp1_projection();
  json j = morphism_to_json(m);
  j["matrix"] = json::parse("[[1,0,0]]");
  write_file(tmp.path / "bad.json", j.dump());
  CHECK_THROWS_AS(load_morphism(tmp.path / "bad.json"), ParseError);
  // incompatible matrix: P1xP1 -> P1 by (1,1) maps cone {0,2} nowhere
  j["matrix"] = json::parse("[[1,1]]");
  write_file(tmp.path / "bad2.json", j.dump());
  CHECK_THROWS_AS(load_morphism(tmp.path / "bad2.json"), ParseError);
  CHECK_THROWS_AS(load_morphism(tmp.path / "missing.json"), ParseError);
}

TEST_CASE("theorem report JSON carries the contract fields") {
  TheoremReport rep = verify_theorem(hirzebruch_projection(1), 3);
  REQUIRE(rep.pass);
  json j = theorem_report_to_json(rep);
  REQUIRE(j.contains("hypotheses"));
  REQUIRE(j.contains("grading_iso"));
  REQUIRE(j.contains("table"));
  REQUIRE(j.contains("pass"));
  CHECK(j["pass"].get<bool>());
  CHECK(j["hypotheses"]["connected_fibers"]["pass"].get<bool>());
  REQUIRE(j["table"].is_array());
  REQUIRE(j["table"].size() == 7);
  for (const json& row : j["table"]) {
    CHECK(row.contains("degree"));
    CHECK(row.contains("dim_quotient"));
    CHECK(row.contains("dim_fiber"));
    CHECK(row.contains("pass"));
  }
  CHECK(j["grading_iso"].contains("map"));
  CHECK(j["grading_iso"].contains("inverse"));
}

TEST_CASE("certificate JSON carries the contract fields") {
  NonFGCertificate cert = certify_nonfg(
      FiberSpaceSpec{hirzebruch_projection(1), "F1", "P1"}, "some citation");
  json j = certificate_to_json(cert);
  for (const char* key :
       {"spec", "checks", "external_input", "valid", "conclusion"})
    REQUIRE(j.contains(key));
  CHECK(j["valid"].get<bool>() == cert.valid);
  CHECK(j["external_input"] == "some citation");
  REQUIRE(j["checks"].is_array());
  for (const json& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("pass"));
    CHECK(c.contains("witness"));
  }
}
