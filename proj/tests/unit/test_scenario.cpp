#include "hotent/errors.hpp"
#include "hotent/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hotent;

namespace {

const char* kConfig = R"({
  "scenario": "fig3_nondegenerate",
  "omega_a": "10 GHz",
  "truncation": 4,
  "system": { "ancilla": "tls", "omega": ["5 MHz", "2.5 MHz"], "alpha": 0.1 },
  "baths": {
    "hot":  { "temperature": "300 K", "coupling": "500 kHz", "filter": { "center": "auto", "kappa": "auto" } },
    "cold": { "temperature": "65 mK", "coupling": "500 kHz", "filter": { "center": "auto", "kappa": "auto" } },
    "local": { "temperature": "0.1 K", "coupling": "100 Hz" }
  },
  "integration": { "t_final": 2000, "stride": 500 },
  "curves": [
    { "name": "warm", "set": { "baths.hot.temperature": "1 K" } },
    { "name": "hot" }
  ]
})";

json config() { return parse_document(kConfig); }

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("resolve converts units and fills defaults") {
  const ScenarioConfig c = resolve(curve_documents(config())[1].second);
  CHECK(c.kind == ScenarioKind::Fig3Nondegenerate);
  CHECK(c.generator == GeneratorKind::FilteredNondegenerate);
  CHECK(c.system.omega[0] == doctest::Approx(5e-4));
  CHECK(c.system.omega[1] == doctest::Approx(2.5e-4));
  CHECK(c.baths.hot.filter->center == doctest::Approx(1.0 - 7.5e-4));
  CHECK(c.baths.cold.filter->center == doctest::Approx(1.0));
  CHECK(c.baths.hot.filter->filter_coupling == doctest::Approx(5e-5));
  CHECK(c.baths.local[1].label == BathLabel::Local2);
  CHECK(c.baths.local[1].temperature == doctest::Approx(c.baths.local[0].temperature));
  CHECK(c.conversions.contains("baths.cold.temperature"));
  CHECK(c.warnings.empty());
}

TEST_CASE("curves apply their overrides") {
  const auto docs = curve_documents(config());
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].first == "warm");
  CHECK(resolve(docs[0].second).baths.hot.temperature == doctest::Approx(2.0837).epsilon(1e-4));
  CHECK(resolve(docs[1].second).baths.hot.temperature == doctest::Approx(625.1).epsilon(1e-3));
}

TEST_CASE("config errors name the key path") {
  json d = config();
  d["system"]["ancilla"] = "qutrit";
  try {
    resolve(d);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "system.ancilla");
  }
  d = config();
  d["bogus"] = 1;
  CHECK_THROWS_AS(resolve(d), ConfigError);
  d = config();
  d["baths"]["hot"].erase("filter");
  CHECK_THROWS_AS(resolve(d), ConfigError);
  d = config();
  d["baths"]["cold"]["temperature"] = "65 MHz";
  CHECK_THROWS_AS(resolve(d), ConfigError);

  CHECK(locate_key_line(kConfig, "system.ancilla") == 5);
  CHECK(locate_key_line(kConfig, "baths.cold.temperature") == 8);
}

TEST_CASE("parse errors carry the line") {
  try {
    parse_document("{\n  \"a\": 1,\n  \"b\": ,\n}", "cfg.json");
    FAIL("expected a parse error");
  } catch (const InvalidConfiguration& e) {
    CHECK(std::string(e.what()).find("cfg.json:3:") == 0);
  }
}

TEST_CASE("overrides") {
  json d = config();
  const auto [k, v] = parse_assignment("baths.local.temperature=0.2");
  apply_override(d, k, v);
  CHECK(d["baths"]["local"]["temperature"] == 0.2);
  const auto [k2, v2] = parse_assignment("system.omega.1=3 MHz");
  apply_override(d, k2, v2);
  CHECK(d["system"]["omega"][1] == "3 MHz");
  CHECK_THROWS_AS(parse_assignment("novalue"), InvalidConfiguration);
  CHECK_THROWS_AS(apply_override(d, "system.omega.7", 1), ConfigError);
}

TEST_CASE("temperature ordering only warns") {
  json d = config();
  d["baths"]["local"]["temperature"] = "400 K";
  const ScenarioConfig c = resolve(d);
  CHECK_FALSE(c.warnings.empty());
}

TEST_CASE("generator selection") {
  json d = config();
  d["system"]["omega"] = json::array({"5 MHz", "5 MHz"});
  CHECK_THROWS_AS(check_scenario(d), DegenerateConfiguration);
  d["scenario"] = "fig4_degenerate";
  CHECK(resolve(d).generator == GeneratorKind::FilteredDegenerate);
  d["generator"] = "full_secular";
  CHECK(resolve(d).generator == GeneratorKind::FullSecular);
}

TEST_CASE("check reports the term audit") {
  const json out = check_scenario(config());
  REQUIRE(out["curves"].size() == 2);
  CHECK(out["curves"][0]["terms"].size() == 12);
  CHECK(out["curves"][0]["rates"]["cooling_dominance"].is_boolean());
}

TEST_CASE("fig2 comparison defines two curves") {
  const json d = parse_document(R"({"scenario": "fig2_comparison", "truncation": 4})");
  const auto docs = curve_documents(d);
  REQUIRE(docs.size() == 2);
  const ScenarioConfig c = resolve(docs[0].second);
  CHECK(c.integration.t_final == doctest::Approx(6 * M_PI));
  CHECK(c.integration.stride == doctest::Approx(M_PI / 60));
  CHECK(c.time_unit == "omega1");
  CHECK(c.comparison.reference.kappa_c == doctest::Approx(0.1));
}

TEST_CASE("run writes CSVs and a manifest that round-trips") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hotent_scenario_test";
  fs::remove_all(dir);
  RunOptions o;
  o.output_dir = dir.string();
  const RunResult r = run_scenario(config(), o);
  REQUIRE(r.curves.size() == 2);
  CHECK(fs::exists(dir / "warm.csv"));
  CHECK(fs::exists(dir / "hot.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  const std::string first = read(dir / "hot.csv");
  CHECK(first.rfind("t,EN,n1,n2,na,trace_err,min_eig\n", 0) == 0);

  const json manifest = load_document((dir / "manifest.json").string());
  const fs::path dir2 = dir / "again";
  o.output_dir = dir2.string();
  run_scenario(manifest, o);
  CHECK(read(dir2 / "hot.csv") == first);
  CHECK(read(dir2 / "warm.csv") == read(dir / "warm.csv"));

  const json m = r.manifest;
  CHECK(m["manifest_version"] == 1);
  CHECK(m["curves"][1]["terms"].size() == 12);
  CHECK(m["curves"][1]["unit_conversions"].contains("system.omega.0"));
  fs::remove_all(dir);
}

TEST_CASE("single-point sweep equals the run summary") {
  json d = config();
  d.erase("curves");
  RunOptions o;
  o.write_files = false;
  const RunResult r = run_scenario(d, o);
  const auto rows = run_sweep(d, "alpha", {json(0.1)});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].peak_EN == r.curves[0].manifest["summary"]["peak_EN"].get<double>());
  CHECK(rows[0].late_EN == r.curves[0].manifest["summary"]["late_EN"].get<double>());
  std::ostringstream os;
  write_sweep_csv(os, "alpha", rows);
  CHECK(os.str().rfind("alpha,peak_EN,late_EN,dominance_margin\n", 0) == 0);
  CHECK_THROWS_AS(run_sweep(d, "colour", {json(1)}), InvalidConfiguration);
}
