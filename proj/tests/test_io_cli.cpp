#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "groups.hpp"
#include "yamflat/cli.hpp"
#include "yamflat/errors.hpp"
#include "yamflat/io.hpp"

using namespace yamflat;
namespace fs = std::filesystem;

namespace {

const fs::path kData = YAMFLAT_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("yamflat_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string group(const char* name) { return (kData / "groups" / name).string(); }
std::string scenario(const char* name) { return (kData / "scenarios" / name).string(); }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("group JSON round trip") {
    for (const auto& g : {fixtures::klein(), fixtures::hantzsche_wendt()}) {
      const Json j = to_json(g);
      const CrystalGroup back = group_from_json(j);
      CHECK(back.lattice() == g.lattice());
      REQUIRE(back.order() == g.order());
      for (std::size_t i = 0; i < g.order(); ++i) CHECK(back.holonomy()[i] == g.holonomy()[i]);
      CHECK(Json::parse(j.dump()) == j);
    }
  }

  TEST_CASE("exact data refuses floats") {
    CHECK_THROWS_AS(lattice_from_json(Json::parse(R"({"basis": [[0.5, 0], [0, 1]]})")), Error);
    CHECK(lattice_from_json(Json::parse(R"({"basis": [["1/2", 0], [0, 1]]})")).covolume() == ratio(1, 2));
    CHECK_THROWS_AS(lattice_from_json(Json::parse(R"({"basis": [["1", "0"]]})")), Error);
  }

  TEST_CASE("spectrum JSON round trip") {
    const SpectrumSlice s = bieberbach_spectrum(fixtures::klein(), Real(200));
    const Json j = to_json(s);
    const SpectrumSlice back = spectrum_from_json(j);
    REQUIRE(back.entries.size() == s.entries.size());
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
      CHECK(compare(back.entries[i].eigenvalue, s.entries[i].eigenvalue) == 0);
      CHECK(back.entries[i].multiplicity == s.entries[i].multiplicity);
    }
    CHECK(Json::parse(j.dump()) == j);
    const Json scan_json = to_json(ScanReport{{{ratio(1, 10), 9}}, {{ratio(1, 3), ratio(1, 2), "x", 2, true}}, {}, {}});
    CHECK(Json::parse(scan_json.dump()) == scan_json);
  }

  TEST_CASE("bundled scenarios load") {
    const ScenarioFile f = load_scenario(scenario("s2xt2.json"));
    CHECK(f.scenario.threshold().to_string() == "8/3*pi");
    CHECK(f.scan.t_min == ratio(1, 10));
    CHECK(f.scan.t_max == 1);
    CHECK(f.scan.steps == 91);
    REQUIRE(f.tower.has_value());
    CHECK(f.tower->degrees == std::vector<long>{2, 2, 2});
    CHECK_FALSE(load_scenario(scenario("s2xt2_fixed.json")).scenario.projection.has_value());
    const ScenarioFile k = load_scenario(scenario("s2xklein.json"));
    CHECK(k.scenario.flat.order() == 2);
    CHECK(*k.scenario.projection == fixtures::diag({1, 0}));
  }

  TEST_CASE("scenario errors") {
    Json bad = read_json_file(scenario("s2xt2.json"));
    bad["flat_factor"] = Json::parse(R"({"group": {"lattice": {"basis": [["2", "0"], ["0", "1"]]}}})");
    CHECK_THROWS_AS(scenario_from_json(bad, kData / "scenarios"), Error);
    Json low = read_json_file(scenario("s2xt2.json"));
    low["scan"]["precision_bits"] = 32;
    CHECK_THROWS_AS(scenario_from_json(low, kData / "scenarios"), Error);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    const fs::path dir = scratch("exit");
    const std::string od = dir.string();
    CHECK(cli({"--output-dir", od, "check", "torsion", "--group", group("klein.json")}).code == 0);
    CHECK(cli({"--output-dir", od, "check", "torsion", "--group", group("hw3.json")}).code == 0);
    CHECK(cli({"--output-dir", od, "check", "torsion", "--group", group("inversion2.json")}).code == 1);
    CHECK(cli({"--output-dir", od, "check", "cone", "--group", group("klein.json"), "--matrix", group("diag2_3.json")}).code == 0);
    CHECK(cli({"--output-dir", od, "check", "torsion", "--group", "missing.json"}).code == 2);
    CHECK(cli({"--output-dir", od, "frobnicate"}).code == 2);
    CHECK(cli({"--output-dir", od, "spectrum", "quotient", "--group", group("inversion2.json"), "--cutoff", "10"}).code == 2);
    const Run coarse = cli({"--output-dir", od, "bifurcate", "--scenario", scenario("s2xt2.json"), "--steps", "2",
                            "--t-min", "1/100"});
    CHECK((coarse.code == 0 || coarse.code == 4));
  }

  TEST_CASE("spectrum commands") {
    const fs::path dir = scratch("spectrum");
    const std::string od = dir.string();
    REQUIRE(cli({"--output-dir", od, "--format", "csv", "spectrum", "torus", "--basis", "identity2", "--cutoff", "1"}).code == 0);
    CHECK(slurp(dir / "spectrum.csv") == "eigenvalue,eigenvalue_exact,multiplicity\n0,0,1\n");
    CHECK_FALSE(fs::exists(dir / "spectrum.json"));
    REQUIRE(cli({"--output-dir", od, "spectrum", "sphere", "--dim", "2", "--unit-volume", "--cutoff", "100"}).code == 0);
    const Json s = read_json_file(dir / "spectrum.json");
    CHECK(s["entries"][1]["eigenvalue_exact"] == "8*pi");
    CHECK(s["entries"][1]["multiplicity"] == 3);
    REQUIRE(cli({"--output-dir", od, "spectrum", "quotient", "--group", group("klein.json"), "--cutoff", "100"}).code == 0);
    const Json k = read_json_file(dir / "spectrum.json");
    CHECK(k["entries"][1]["eigenvalue_exact"] == "4*pi^2");
    CHECK(k["entries"][1]["multiplicity"] == 1);
  }

  TEST_CASE("bifurcate and tower") {
    const fs::path dir = scratch("bif");
    const std::string od = dir.string();
    REQUIRE(cli({"--output-dir", od, "bifurcate", "--scenario", scenario("s2xt2.json")}).code == 0);
    CHECK(read_json_file(dir / "scan.json")["instants"].size() == 4);
    REQUIRE(cli({"--output-dir", od, "bifurcate", "--scenario", scenario("s2xt2_short.json")}).code == 0);
    CHECK(read_json_file(dir / "scan.json")["instants"].empty());
    REQUIRE(cli({"--output-dir", od, "bifurcate", "--scenario", scenario("s2xt2_fixed.json")}).code == 0);
    CHECK(read_json_file(dir / "scan.json")["instants"].empty());
    REQUIRE(cli({"--output-dir", od, "index-scan", "--scenario", scenario("s2xt2.json"), "--steps", "10"}).code == 0);
    CHECK(read_json_file(dir / "index_scan.json")["grid"].size() == 10);
    REQUIRE(cli({"--output-dir", od, "tower", "--scenario", scenario("s2xt2.json"), "--degrees", "2,2,2"}).code == 0);
    const Json l = read_json_file(dir / "ledger.json");
    CHECK(l["first_crossed_level"] == 3);
    CHECK(l["minimal_forcing_degree"] == 7);
    CHECK(l["equality_at_previous_degree"] == true);
    REQUIRE(cli({"--output-dir", od, "collapse", "--group", group("hw3.json"), "--t", "1/2"}).code == 0);
    const Json c = read_json_file(dir / "collapse.json");
    CHECK(c["det"] == "1");
    CHECK(c["conjugated_group_valid"] == true);
    CHECK(cli({"--output-dir", od, "check", "cheng", "--basis", "identity2"}).code == 0);
    CHECK(read_json_file(dir / "cheng.json")["violations"] == 0);
  }

  TEST_CASE("outputs do not depend on the thread count") {
    const fs::path a = scratch("thr1"), b = scratch("thr4");
    REQUIRE(cli({"--output-dir", a.string(), "--threads", "1", "bifurcate", "--scenario", scenario("s2xt2.json")}).code == 0);
    REQUIRE(cli({"--output-dir", b.string(), "--threads", "4", "bifurcate", "--scenario", scenario("s2xt2.json")}).code == 0);
    CHECK(slurp(a / "scan.json") == slurp(b / "scan.json"));
    CHECK(slurp(a / "grid.csv") == slurp(b / "grid.csv"));
  }

  TEST_CASE("golden outputs") {
    struct Case {
      std::vector<std::string> args;
      std::string produced, golden;
    };
    const std::vector<Case> cases{
        {{"spectrum", "quotient", "--group", group("klein.json"), "--cutoff", "200"}, "spectrum.json", "klein_spectrum.json"},
        {{"spectrum", "quotient", "--group", group("hw3.json"), "--cutoff", "200"}, "spectrum.json", "hw3_spectrum.json"},
        {{"spectrum", "torus", "--basis", group("torus_z3.json"), "--cutoff", "100"}, "spectrum.json", "torus_z3_spectrum.json"},
        {{"bifurcate", "--scenario", scenario("s2xt2.json")}, "scan.json", "s2xt2_scan.json"},
        {{"bifurcate", "--scenario", scenario("s2xt2.json")}, "grid.csv", "s2xt2_grid.csv"},
        {{"tower", "--scenario", scenario("s2xt2.json")}, "ledger.json", "s2xt2_ledger.json"},
    };
    for (const auto& c : cases) {
      INFO(c.golden);
      const fs::path dir = scratch("golden");
      std::vector<std::string> args{"--output-dir", dir.string()};
      args.insert(args.end(), c.args.begin(), c.args.end());
      REQUIRE(cli(args).code == 0);
      CHECK(slurp(dir / c.produced) == slurp(kData / "golden" / c.golden));
    }
  }
}
