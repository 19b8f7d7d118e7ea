#include <catch2/catch_amalgamated.hpp>

#include "igc/report.hpp"
#include "igc/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace igc;
using Catch::Approx;

namespace {

std::filesystem::path temp_file(const std::string& stem) {
  return std::filesystem::temp_directory_path() / stem;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("check rows evaluate tolerances") {
  const CheckRow ok = make_check("x", 2.0, 2.0 + 5e-7, 1e-6, "reference");
  REQUIRE(ok.pass);
  const CheckRow bad = make_check("x", 2.0, 2.1, 1e-6, "reference");
  REQUIRE_FALSE(bad.pass);
  const CheckRow nan_row = make_check("x", 2.0, kNaN, 1e-6, "reference");
  REQUIRE_FALSE(nan_row.pass);

  const CheckRow rel = make_rel_check("y", 100.0, 104.0, 0.05, "reference");
  REQUIRE(rel.pass);
  REQUIRE(rel.tol == Approx(5.0));

  REQUIRE(make_flag_check("z", true, "definition").pass);
  REQUIRE_FALSE(make_flag_check("z", false, "definition").pass);
}

TEST_CASE("report aggregates and serializes") {
  Report rep;
  rep.name = "demo";
  rep.experiment = "curvature";
  rep.checks.push_back(make_check("a", 1.0, 1.0, 0.0, "definition"));
  REQUIRE(rep.pass());
  rep.checks.push_back(make_check("b", 1.0, 2.0, 0.5, "reference"));
  REQUIRE_FALSE(rep.pass());

  const Json j = rep.to_json();
  REQUIRE(j["name"] == "demo");
  REQUIRE(j["experiment"] == "curvature");
  REQUIRE(j["pass"] == false);
  REQUIRE(j["checks"].size() == 2);
  REQUIRE(j["checks"][0]["name"] == "a");
  REQUIRE(j["checks"][1]["pass"] == false);
  REQUIRE(j.contains("runtime_seconds"));

  // Key order is canonical, so equal content gives equal bytes.
  Report rep2 = rep;
  REQUIRE(rep.to_json().dump(2) == rep2.to_json().dump(2));
}

TEST_CASE("csv output is RFC 4180 with full-precision floats") {
  const auto file = temp_file("igc_test_cols.csv");
  const double tricky = 0.1 + 0.2;  // not representable as a short decimal
  write_csv_columns(file, {"t", "has,comma", "quote\"d"},
                    {{0.0, tricky}, {1.0, 2.0}, {3.0, 4.0}});
  const std::string text = slurp(file);
  std::filesystem::remove(file);

  REQUIRE(text.find("\r\n") != std::string::npos);
  REQUIRE(text.find("\"has,comma\"") != std::string::npos);
  REQUIRE(text.find("\"quote\"\"d\"") != std::string::npos);

  // Second data row starts with the tricky value; it must round-trip.
  const size_t row2 = text.find("\r\n", text.find("\r\n") + 2) + 2;
  const double parsed = std::strtod(text.c_str() + row2, nullptr);
  REQUIRE(parsed == tricky);

  REQUIRE_THROWS_AS(write_csv_columns(file, {"a"}, {{1.0}, {2.0}}), std::domain_error);
  REQUIRE_THROWS_AS(write_csv_columns(file, {"a", "b"}, {{1.0}, {2.0, 3.0}}),
                    std::domain_error);
}

TEST_CASE("trajectory table layout") {
  const auto file = temp_file("igc_test_traj.csv");
  std::vector<double> tau = {0.0, 1.0};
  Vec th0(2), th1(2);
  th0 << 1.0, 2.0;
  th1 << 3.0, 4.0;
  std::vector<Vec> theta = {th0, th1}, vel = {0.5 * th0, 0.5 * th1};
  write_trajectory_csv(file, tau, theta, vel, {7.0, 7.0});
  const std::string text = slurp(file);
  std::filesystem::remove(file);
  REQUIRE(text.rfind("tau,theta_1,theta_2,v_1,v_2,speed_norm\r\n", 0) == 0);
  REQUIRE(text.find("1,3,4,1.5,2,7") != std::string::npos);
}

TEST_CASE("scenario files load with defaults") {
  const auto file = temp_file("igc_test_scenario.json");
  {
    std::ofstream out(file);
    out << R"({"name":"probe","experiment":"geodesic","params":{"alpha":2.0}})";
  }
  const Scenario sc = load_scenario(file.string());
  std::filesystem::remove(file);
  REQUIRE(sc.name == "probe");
  REQUIRE(sc.experiment == "geodesic");
  REQUIRE(sc.params.at("alpha") == 2.0);

  // The stem names the scenario when no name is given.
  const auto anon = temp_file("igc_anon.json");
  {
    std::ofstream out(anon);
    out << R"({"experiment":"ratios"})";
  }
  const Scenario sc2 = load_scenario(anon.string());
  std::filesystem::remove(anon);
  REQUIRE(sc2.name == "igc_anon");
  REQUIRE(sc2.params.is_object());

  const auto broken = temp_file("igc_broken.json");
  {
    std::ofstream out(broken);
    out << R"({"params":{}})";
  }
  REQUIRE_THROWS(load_scenario(broken.string()));
  std::filesystem::remove(broken);

  const Scenario d = default_scenario("jacobi");
  REQUIRE(d.experiment == "jacobi");
  REQUIRE(d.name == "jacobi_default");
}

TEST_CASE("runs are deterministic") {
  Scenario sc = default_scenario("geodesic");
  RunOptions opt;
  opt.quick = true;
  const Report a = run_scenario(sc, opt);
  const Report b = run_scenario(sc, opt);
  Json ja = a.to_json(), jb = b.to_json();
  ja.erase("runtime_seconds");
  jb.erase("runtime_seconds");
  REQUIRE(ja.dump() == jb.dump());
  REQUIRE(a.pass());
}

TEST_CASE("scenario dispatch rejects unknown experiments") {
  Scenario sc;
  sc.name = "x";
  sc.experiment = "nonsense";
  REQUIRE_THROWS_AS(run_scenario(sc, RunOptions{}), std::domain_error);
}

TEST_CASE("output directory receives report and traces") {
  const auto dir = std::filesystem::temp_directory_path() / "igc_test_outdir";
  std::filesystem::remove_all(dir);
  Scenario sc = default_scenario("geodesic");
  RunOptions opt;
  opt.quick = true;
  opt.out_dir = dir.string();
  const Report rep = run_scenario(sc, opt);
  REQUIRE(rep.pass());
  REQUIRE(std::filesystem::exists(dir / "report.json"));
  REQUIRE(std::filesystem::exists(dir / "trajectory.csv"));

  // The written report parses back to the same content.
  const Json onDisk = Json::parse(slurp(dir / "report.json"));
  REQUIRE(onDisk["name"] == rep.name);
  REQUIRE(onDisk["pass"] == true);
  std::filesystem::remove_all(dir);
}
