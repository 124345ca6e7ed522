// coxfiber: toric fiber-space calculations on the command line.
//
// Exit codes: 0 = pass/ok, 1 = a mathematical check failed, 2 = input or
// usage error.

#include <coxfiber/blowup.hpp>
#include <coxfiber/coxring.hpp>
#include <coxfiber/divclass.hpp>
#include <coxfiber/fan.hpp>
#include <coxfiber/io.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace coxfiber;

constexpr int kPass = 0;
constexpr int kMathFail = 1;
constexpr int kUsage = 2;

std::vector<Int> parse_int_list(const std::string& csv,
                                const std::string& what) {
  std::vector<Int> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string tok = csv.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty()) throw ParseError(what + ": empty entry in '" + csv + "'");
    try {
      out.emplace_back(tok);
    } catch (const std::invalid_argument&) {
      throw ParseError(what + ": bad integer '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string group_str(const FGAbelianGroup& g) {
  std::string s;
  if (g.free_rank() > 0) s = "Z^" + std::to_string(g.free_rank());
  for (const Int& d : g.invariant_factors())
    s += (s.empty() ? "" : " + ") + ("Z/" + d.get_str());
  return s.empty() ? "0" : s;
}

int require_valid(const Fan& f) {
  if (auto err = validate_fan(f)) {
    std::cout << "invalid fan: " << to_string(err->kind) << " ("
              << err->message << ")\n";
    return kMathFail;
  }
  return kPass;
}

int cmd_validate(const std::string& fan_path) {
  Fan f = load_fan(fan_path);
  if (int rc = require_valid(f)) return rc;
  std::cout << "ok: " << f.rays.size() << " rays, " << f.max_cones.size()
            << " maximal cones, complete=" << (is_complete(f) ? "yes" : "no")
            << "\n";
  return kPass;
}

int cmd_classgroup(const std::string& fan_path) {
  Fan f = load_fan(fan_path);
  if (int rc = require_valid(f)) return rc;
  DivisorClassData d;
  try {
    d = class_group(f);
  } catch (const TorusFactor& e) {
    std::cout << "Cl(X) undefined: " << e.what() << "\n";
    return kMathFail;
  }
  std::cout << "Cl(X) = " << group_str(d.class_group) << "\n";
  for (std::size_t rho = 0; rho < f.rays.size(); ++rho) {
    std::cout << "deg D_" << rho << " =";
    for (const Int& c : ray_class(d, rho)) std::cout << " " << c.get_str();
    std::cout << "\n";
  }
  return kPass;
}

int cmd_fiber_fan(const std::string& map_path) {
  ToricMorphism m = load_morphism(map_path);
  FiberFanResult ff = fiber_subfan(m);
  json out;
  out["kernel_basis"] = matrix_to_json(ff.kernel);
  out["fiber_fan"] = fan_to_json(ff.fiber_fan);
  json corr = json::array();
  for (std::size_t i : ff.ray_correspondence) corr.push_back(i);
  out["ray_correspondence"] = corr;
  std::cout << out.dump(2) << "\n";
  return kPass;
}

int cmd_vertical(const std::string& map_path) {
  ToricMorphism m = load_morphism(map_path);
  DivisorClassData d;
  try {
    d = class_group(m.source);
  } catch (const TorusFactor& e) {
    std::cout << "Cl(X) undefined: " << e.what() << "\n";
    return kMathFail;
  }
  VerticalClassData v = vertical_class_group(d, m);
  std::cout << "vertical rays:";
  for (std::size_t rho : v.vertical_ray_set) std::cout << " " << rho;
  std::cout << "\nCl_pi  = " << group_str(v.cl_pi)
            << (is_torsion_free(v.cl_pi) ? " (torsion free)"
                                         : " (HAS TORSION)")
            << "\nCl_eta = " << group_str(v.cl_eta) << "\n";
  return kPass;
}

int cmd_verify_theorem(const std::string& map_path, long box, bool as_json) {
  ToricMorphism m = load_morphism(map_path);
  TheoremReport rep = verify_theorem(m, box);
  if (as_json) {
    std::cout << theorem_report_to_json(rep).dump(2) << "\n";
  } else {
    for (const HypothesisCheck& h : rep.hypotheses)
      std::cout << h.name << ": " << (h.pass ? "ok" : "FAIL")
                << (h.note.empty() ? "" : " (" + h.note + ")") << "\n";
    if (!rep.hypotheses_pass) {
      std::cout << "hypotheses failed; theorem not checked\n";
      return kMathFail;
    }
    if (!rep.iso) {
      std::cout << "grading isomorphism failed: " << rep.iso_failure << "\n";
      return kMathFail;
    }
    std::cout << "degree | dim quotient | dim fiber\n";
    for (const DimensionRow& row : rep.table) {
      std::cout << "(";
      for (std::size_t i = 0; i < row.degree.size(); ++i)
        std::cout << (i ? "," : "") << row.degree[i].get_str();
      std::cout << ") | " << row.dim_quotient << " | " << row.dim_fiber
                << (row.pass ? "" : "  MISMATCH") << "\n";
    }
    std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
  }
  return rep.pass ? kPass : kMathFail;
}

int cmd_verify_lattices(const std::string& map_path) {
  ToricMorphism m = load_morphism(map_path);
  DivisorClassData d;
  try {
    d = class_group(m.source);
  } catch (const TorusFactor& e) {
    std::cout << "Cl(X) undefined: " << e.what() << "\n";
    return kMathFail;
  }
  LatticeCheckResult r = vertical_principal_lattice_check(d, m);
  std::cout << "lattice equality:    " << (r.lattices_equal ? "ok" : "FAIL")
            << "\nsaturation equality: "
            << (r.saturations_equal ? "ok" : "FAIL") << "\n";
  if (r.witness) {
    std::cout << "witness character:";
    for (const Int& c : *r.witness) std::cout << " " << c.get_str();
    std::cout << "\n";
  }
  return r.ok() ? kPass : kMathFail;
}

int cmd_prim1_check(const std::string& map_path, std::uint64_t seed) {
  ToricMorphism m = load_morphism(map_path);
  DivisorClassData d;
  try {
    d = class_group(m.source);
  } catch (const TorusFactor& e) {
    std::cout << "Cl(X) undefined: " << e.what() << "\n";
    return kMathFail;
  }
  std::vector<TorusDivisor> K;
  try {
    K = choose_divisor_subgroup_K(d, m, seed);
  } catch (const SearchExhausted& e) {
    std::cout << "no admissible divisor subgroup K: " << e.what() << "\n";
    return kMathFail;
  } catch (const std::invalid_argument& e) {
    std::cout << "precondition failed: " << e.what() << "\n";
    return kMathFail;
  }
  Prim1Report r = lemma_prim1_check(d, m, K);
  std::cout << "K0_eta / i*(K0) = " << group_str(r.quotient)
            << "\nCl_pi           = " << group_str(r.cl_pi) << "\n"
            << (r.ok ? "PASS" : "MISMATCH") << "\n";
  return r.ok ? kPass : kMathFail;
}

int cmd_wps_bundle(const std::string& weights_csv, const std::string& v_csv,
                   const std::string& out_prefix) {
  std::vector<Int> weights = parse_int_list(weights_csv, "--weights");
  Vec twist = v_csv.empty() ? Vec() : parse_int_list(v_csv, "--v");
  ToricMorphism m;
  try {
    m = build_wps_bundle(weights, twist);
  } catch (const BadWeights& e) {
    throw ParseError(std::string("--weights: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw ParseError(std::string("--v: ") + e.what());
  }
  const std::string fan_path = out_prefix + ".fan.json";
  const std::string map_path = out_prefix + ".morphism.json";
  std::ofstream fan_out(fan_path), map_out(map_path);
  if (!fan_out || !map_out)
    throw ParseError("cannot write output files at prefix " + out_prefix);
  fan_out << fan_to_json(m.source).dump(2) << "\n";
  map_out << morphism_to_json(m).dump(2) << "\n";
  std::cout << "wrote " << fan_path << " (" << m.source.rays.size()
            << " rays, " << m.source.max_cones.size() << " maximal cones)\n"
            << "wrote " << map_path << "\n";
  return kPass;
}

int cmd_certify_nonfg(const std::string& map_path, const std::string& cite,
                      bool as_json) {
  ToricMorphism m = load_morphism(map_path);
  NonFGCertificate cert = certify_nonfg(FiberSpaceSpec{std::move(m), "", ""},
                                        cite);
  if (as_json) {
    std::cout << certificate_to_json(cert).dump(2) << "\n";
  } else {
    for (const HypothesisCheck& c : cert.checks)
      std::cout << c.name << ": " << (c.pass ? "ok" : "FAIL") << "\n";
    std::cout << "valid: " << (cert.valid ? "true" : "false") << "\n"
              << cert.conclusion << "\n";
  }
  return cert.valid ? kPass : kMathFail;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("COXFIBER_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw ParseError("COXFIBER_SEED is not an unsigned integer");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toric fiber-space Cox ring calculations"};
  app.require_subcommand(1);

  std::string fan_path, map_path, weights_csv, v_csv, out_prefix, cite;
  long box = 10;
  std::uint64_t seed = 0;
  bool seed_given = false, as_json = false;

  CLI::App* validate = app.add_subcommand("validate", "check fan invariants");
  validate->add_option("fan", fan_path, "fan JSON file")->required();

  CLI::App* classgroup =
      app.add_subcommand("classgroup", "divisor class group and ray degrees");
  classgroup->add_option("fan", fan_path, "fan JSON file")->required();

  CLI::App* fiberfan =
      app.add_subcommand("fiber-fan", "fiber fan, kernel basis, ray map");
  fiberfan->add_option("--map", map_path, "morphism JSON file")->required();

  CLI::App* vertical =
      app.add_subcommand("vertical", "vertical rays, Cl_pi, Cl_eta");
  vertical->add_option("--map", map_path, "morphism JSON file")->required();

  CLI::App* verify = app.add_subcommand(
      "verify-theorem", "graded-dimension comparison over a degree box");
  verify->add_option("--map", map_path, "morphism JSON file")->required();
  verify->add_option("--box", box, "degree box radius (default 10)");
  verify->add_flag("--json", as_json, "emit the JSON report");

  CLI::App* lattices = app.add_subcommand(
      "verify-lattices", "vertical principal-divisor lattice equality");
  lattices->add_option("--map", map_path, "morphism JSON file")->required();

  CLI::App* prim1 = app.add_subcommand(
      "prim1-check", "compare K0_eta/i*(K0) with Cl_pi for a random K");
  prim1->add_option("--map", map_path, "morphism JSON file")->required();
  prim1->add_option("--seed", seed, "search seed")
      ->each([&seed_given](const std::string&) { seed_given = true; });

  CLI::App* wps = app.add_subcommand(
      "wps-bundle", "build a weighted projective bundle over P1");
  wps->add_option("--weights", weights_csv, "comma-separated weights")
      ->required();
  wps->add_option("--v", v_csv, "comma-separated twist vector");
  wps->add_option("-o,--output", out_prefix, "output file prefix")
      ->required();

  CLI::App* certify = app.add_subcommand(
      "certify-nonfg", "non-finite-generation certificate for the blow-up");
  certify->add_option("--map", map_path, "morphism JSON file")->required();
  certify->add_option("--cite", cite, "citation for the external input")
      ->required();
  certify->add_flag("--json", as_json, "emit the JSON certificate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(fan_path);
    if (*classgroup) return cmd_classgroup(fan_path);
    if (*fiberfan) return cmd_fiber_fan(map_path);
    if (*vertical) return cmd_vertical(map_path);
    if (*verify) return cmd_verify_theorem(map_path, box, as_json);
    if (*lattices) return cmd_verify_lattices(map_path);
    if (*prim1)
      return cmd_prim1_check(map_path, seed_given ? seed : default_seed());
    if (*wps) return cmd_wps_bundle(weights_csv, v_csv, out_prefix);
    if (*certify) return cmd_certify_nonfg(map_path, cite, as_json);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMathFail;
  }
  return kUsage;
}
