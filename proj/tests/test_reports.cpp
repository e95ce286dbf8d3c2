#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "ylab/reports.hpp"

using namespace ylab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Numeric payload = everything except the walltime metadata line/field.
std::string strip_walltime(std::string s) {
  s = std::regex_replace(s, std::regex("# walltime_ms=[^\n]*\n"), "");
  s = std::regex_replace(s, std::regex("\"walltime_ms\": [^,\n]*"), "\"walltime_ms\": X");
  return s;
}

fs::path test_dir() {
  const fs::path dir = fs::temp_directory_path() / "ylab_reports_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("family json matches the documented schema") {
  const auto j = family_json(ProductFamily::spheres(2, 2, 2.0));
  CHECK(j["k"] == 2);
  CHECK(j["l"] == 2);
  CHECK(j["t"] == 2.0);
  CHECK(j["factor"] == "sphere");
}

TEST_CASE("invariants: json fields and classification") {
  RunConfig cfg;
  cfg.command = "invariants";
  cfg.k = 2;
  cfg.l = 2;
  cfg.t = 2.0;
  std::ostringstream out, err;
  REQUIRE(run_invariants(cfg, out, err) == 0);
  const auto j = nlohmann::ordered_json::parse(out.str());
  CHECK(j["meta"]["tool"] == "ylab");
  CHECK(j["meta"]["seed"] == 42);
  CHECK(j["result"]["classification"] == "equality");
  CHECK(j["result"]["energy"].get<double>() == doctest::Approx(53.3145952579).epsilon(1e-10));
  CHECK(j["result"]["aubin"].get<double>() == doctest::Approx(61.5623918478).epsilon(1e-10));
  CHECK(j["result"]["lambda1"] == 2.0);
  CHECK(j["result"]["threshold"] == 2.0);
}

TEST_CASE("invariants: the Einstein point") {
  RunConfig cfg;
  cfg.command = "invariants";
  cfg.t = 1.0;
  std::ostringstream out, err;
  REQUIRE(run_invariants(cfg, out, err) == 0);
  const auto j = nlohmann::ordered_json::parse(out.str());
  CHECK(j["result"]["classification"] == "einstein");
}

TEST_CASE("scan with minimizer: the estimate column is populated") {
  RunConfig cfg;
  cfg.command = "scan";
  cfg.t_min = 1.0;
  cfg.t_max = 2.5;
  cfg.steps = 3;
  cfg.l_max = 2;
  cfg.restarts = 1;
  cfg.with_minimizer = true;
  std::ostringstream out, err;
  REQUIRE(run_scan(cfg, out, err) == 0);
  std::istringstream lines(out.str());
  std::string line;
  int data_rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    ++data_rows;
    // estimate sits in the 7th comma-separated field and must be nonempty
    std::size_t pos = 0;
    for (int comma = 0; comma < 6; ++comma) pos = line.find(',', pos) + 1;
    CHECK(line[pos] != ',');
  }
  CHECK(data_rows == 3);
}

TEST_CASE("invariants: usage errors exit with code 2") {
  RunConfig cfg;
  cfg.command = "invariants";
  cfg.t = 0.5;
  std::ostringstream out, err;
  CHECK(run_invariants(cfg, out, err) == 2);
  CHECK(err.str().find("t must be >= 1") != std::string::npos);
}

TEST_CASE("scan csv: schema, boundary, reproducibility") {
  RunConfig cfg;
  cfg.command = "scan";
  cfg.t_min = 1.0;
  cfg.t_max = 2.5;
  cfg.steps = 16;
  const fs::path p1 = test_dir() / "scan1.csv";
  const fs::path p2 = test_dir() / "scan2.csv";

  std::ostringstream out, err;
  cfg.out = p1.string();
  REQUIRE(run_scan(cfg, out, err) == 0);
  cfg.out = p2.string();
  REQUIRE(run_scan(cfg, out, err) == 0);

  const std::string csv = slurp(p1);
  CHECK(csv.find("t,s,lambda1,threshold,classification,energy,estimate,drop\n") !=
        std::string::npos);
  CHECK(csv.find("# ylab v") != std::string::npos);
  CHECK(csv.find("# seed=42") != std::string::npos);
  CHECK(csv.find("einstein") != std::string::npos);
  CHECK(csv.find("equality") != std::string::npos);
  CHECK(csv.find("violated") != std::string::npos);

  // byte-identical numeric payload across runs
  CHECK(strip_walltime(slurp(p1)) == strip_walltime(slurp(p2)));
}

TEST_CASE("scan: svg written next to the csv with the critical marker") {
  RunConfig cfg;
  cfg.command = "scan";
  cfg.t_min = 1.0;
  cfg.t_max = 2.5;
  cfg.steps = 7;
  cfg.format = "svg";
  const fs::path p = test_dir() / "scan_plot.csv";
  cfg.out = p.string();
  std::ostringstream out, err;
  REQUIRE(run_scan(cfg, out, err) == 0);
  const fs::path svg = test_dir() / "scan_plot.svg";
  REQUIRE(fs::exists(svg));
  const std::string body = slurp(svg);
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("<polyline") != std::string::npos);
  CHECK(body.find("t = k/(k-1)") != std::string::npos);
}

TEST_CASE("scan json with minimizer reports the heuristic bracket") {
  RunConfig cfg;
  cfg.command = "scan";
  cfg.t_min = 1.0;
  cfg.t_max = 2.5;
  cfg.steps = 4;  // 1, 1.5, 2, 2.5
  cfg.l_max = 2;
  cfg.restarts = 1;
  cfg.with_minimizer = true;
  cfg.format = "json";
  cfg.tol = 1e-3;
  std::ostringstream out, err;
  REQUIRE(run_scan(cfg, out, err) == 0);
  const auto j = nlohmann::ordered_json::parse(out.str());
  REQUIRE(j.contains("bracket"));
  CHECK(j["bracket"]["heuristic"] == true);
  CHECK(j["bracket"]["t_low"].get<double>() >= 1.0);
  CHECK(j["bracket"]["t_high"].get<double>() <= 2.5);
  CHECK(j["records"].size() == 4);
}

TEST_CASE("scan: usage errors") {
  RunConfig cfg;
  cfg.command = "scan";
  cfg.t_min = 2.0;
  cfg.t_max = 1.0;
  cfg.steps = 4;
  std::ostringstream out, err;
  CHECK(run_scan(cfg, out, err) == 2);
  CHECK(err.str().find("empty range") != std::string::npos);
}

TEST_CASE("minimize: json report plus trace csv, deterministic numeric payload") {
  RunConfig cfg;
  cfg.command = "minimize";
  cfg.t = 2.5;
  cfg.l_max = 3;
  cfg.restarts = 2;
  cfg.seed = 42;
  const fs::path p1 = test_dir() / "min.json";
  std::ostringstream out, err;
  cfg.out = p1.string();
  REQUIRE(run_minimize(cfg, out, err) == 0);
  const std::string first_json = slurp(p1);
  const std::string first_trace = slurp(test_dir() / "min.trace.csv");
  REQUIRE(run_minimize(cfg, out, err) == 0);  // identical config, second run

  const auto j = nlohmann::ordered_json::parse(first_json);
  CHECK(j["result"]["estimate"].get<double>() < j["result"]["energy"].get<double>());
  CHECK(j["result"]["gap_to_energy"].get<double>() > 0.0);
  CHECK(j["result"]["gap_to_aubin"].get<double>() > 0.0);
  CHECK(j["result"]["seed"] == 42);
  CHECK(j["result"]["basis_size"].get<int>() > 0);

  // same config + seed, byte-identical numeric fields (JSON and trace CSV)
  CHECK(strip_walltime(first_json) == strip_walltime(slurp(p1)));
  const std::string trace = slurp(test_dir() / "min.trace.csv");
  CHECK(trace.find("restart,iter,quotient,step,min_u\n") != std::string::npos);
  CHECK(strip_walltime(first_trace) == strip_walltime(trace));
}

TEST_CASE("minimize at t=1 reports a nonnegative-within-tol gap") {
  RunConfig cfg;
  cfg.command = "minimize";
  cfg.t = 1.0;
  cfg.l_max = 3;
  cfg.restarts = 2;
  std::ostringstream out, err;
  REQUIRE(run_minimize(cfg, out, err) == 0);
  const auto j = nlohmann::ordered_json::parse(out.str());
  CHECK(j["result"]["gap_to_energy"].get<double>() >= -cfg.tol);
}

TEST_CASE("static-check: critical default and off-critical flag") {
  RunConfig cfg;
  cfg.command = "static-check";
  cfg.t = 0.0;
  std::ostringstream out, err;
  REQUIRE(run_static_check(cfg, out, err) == 0);
  const auto j = nlohmann::ordered_json::parse(out.str());
  CHECK(j["report"]["is_static"] == true);
  CHECK(j["report"]["t"] == 2.0);
  CHECK(j["report"]["static_residual"].get<double>() <= 1e-8);
  CHECK(j["report"]["rayleigh"].get<double>() == doctest::Approx(2.0).epsilon(1e-10));

  std::ostringstream out2, err2;
  cfg.t = 1.5;
  REQUIRE(run_static_check(cfg, out2, err2) == 0);
  const auto j2 = nlohmann::ordered_json::parse(out2.str());
  CHECK(j2["report"]["is_static"] == false);
  CHECK(j2["report"]["static_residual"].get<double>() > 1e-3);

  std::ostringstream out3, err3;
  cfg.t = 0.4;
  CHECK(run_static_check(cfg, out3, err3) == 2);
}

TEST_CASE("config serialization carries every knob") {
  RunConfig cfg;
  cfg.command = "scan";
  cfg.seed = 99;
  cfg.l_max = 5;
  const auto j = cfg.to_json();
  CHECK(j["seed"] == 99);
  CHECK(j["lmax"] == 5);
  CHECK(j["command"] == "scan");
  CHECK(j.contains("tol"));
  CHECK(j.contains("restarts"));
  CHECK(j.contains("degree"));
}
