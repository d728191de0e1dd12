// End-to-end checks of the command-line tool: determinism, manifests,
// ingestion diagnostics, and agreement with the library pipeline.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "unifdr/density.hpp"
#include "unifdr/fdr.hpp"
#include "unifdr/filters.hpp"
#include "unifdr/io.hpp"

#ifndef UNIFDR_CLI_PATH
#error "UNIFDR_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

const fs::path kCli = UNIFDR_CLI_PATH;

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "unifdr_cli_out.txt";
  const std::string cmd = kCli.string() + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "unifdr_cli_tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("generate is deterministic given the seed") {
  const auto dir = work_dir();
  const auto a = dir / "gen_a.csv";
  const auto b = dir / "gen_b.csv";
  const std::string base = "generate --family cauchy --epsilon 0.15 --mu 10 --m 1000";
  CHECK(run_cli(base + " --seed 7 --out " + a.string()).exit_code == 0);
  CHECK(run_cli(base + " --seed 7 --out " + b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(run_cli(base + " --seed 8 --out " + b.string()).exit_code == 0);
  CHECK(slurp(a) != slurp(b));

  // 1000 data rows plus header.
  std::ifstream in(a);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1001);
}

TEST_CASE("missing seed is generated and printed") {
  const auto dir = work_dir();
  const auto out = dir / "gen_noseed.csv";
  const auto r = run_cli("generate --family gaussian --epsilon 0 --mu 0 --m 10 --out " +
                         out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("seed ") != std::string::npos);
  CHECK(r.output.find("--seed") != std::string::npos);
}

TEST_CASE("usage errors exit non-zero") {
  CHECK(run_cli("generate --family cauchy --epsilon 1.5 --mu 1 --m 10 --out /tmp/x.csv")
            .exit_code != 0);
  CHECK(run_cli("generate --family cauchy --epsilon 0.1 --mu 1 --m 0 --out /tmp/x.csv")
            .exit_code != 0);
  CHECK(run_cli("generate --family nosuch --epsilon 0.1 --mu 1 --m 10 --out /tmp/x.csv")
            .exit_code != 0);
  CHECK(run_cli("frobnicate").exit_code != 0);
}

TEST_CASE("ingestion errors name the offending row") {
  const auto dir = work_dir();
  const auto bad = dir / "bad.csv";
  {
    std::ofstream out(bad);
    out << "index,p,h\n1,0.5,\n2,1.0,\n";
  }
  const auto r = run_cli("analyze --in " + bad.string() + " --out " + (dir / "r.json").string());
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("row 2") != std::string::npos);
}

TEST_CASE("analyze matches the library pipeline exactly") {
  const auto dir = work_dir();
  const auto csv = dir / "pipe.csv";
  const auto json_path = dir / "pipe.json";
  REQUIRE(run_cli("generate --family cauchy --epsilon 0.15 --mu 10 --m 1000 --seed 21 --out " +
                  csv.string()).exit_code == 0);
  REQUIRE(run_cli("analyze --in " + csv.string() + " --xi 0.15 --xi-select 0.4 --alpha 0.1 "
                  "--out " + json_path.string()).exit_code == 0);

  const auto sample = unifdr::io::read_sample_csv(csv);
  unifdr::FilterConfig fcfg;
  fcfg.xi = 0.15;
  const auto retained = unifdr::fixed_length_filter(sample, fcfg).retained_values();
  const auto mode = unifdr::estimate_mode(retained);
  const auto report = unifdr::select_delta(sample.p, mode.theta_hat, 0.4, 0.1);

  nlohmann::json j = nlohmann::json::parse(slurp(json_path));
  CHECK(j["theta_hat"].get<double>() == report.theta);
  CHECK(j["delta_hat"].get<double>() == report.delta_hat);
  CHECK(j["epsilon_hat"].get<double>() == report.epsilon_hat);
  CHECK(j["fdr_hat"].get<double>() == report.fdr_hat);
  CHECK(j["R"].get<std::size_t>() == report.R);
  REQUIRE(j["rejected"].size() == report.rejected.size());
  for (std::size_t i = 0; i < report.rejected.size(); ++i) {
    CHECK(j["rejected"][i].get<std::size_t>() == report.rejected[i] + 1);
  }
  CHECK(j.contains("confusion"));  // the generated file carries labels
}

TEST_CASE("explore bins a file") {
  const auto dir = work_dir();
  const auto csv = dir / "three.csv";
  {
    std::ofstream out(csv);
    out << "index,p,h\n1,0.05,\n2,0.15,\n3,0.95,\n";
  }
  const auto bins = dir / "bins.csv";
  REQUIRE(run_cli("explore --in " + csv.string() + " --nbins 10 --upto 1.0 --out " +
                  bins.string()).exit_code == 0);
  std::ifstream in(bins);
  std::string line;
  std::getline(in, line);
  CHECK(line == "bin_mid,count");
  std::size_t rows = 0, total = 0;
  while (std::getline(in, line)) {
    ++rows;
    total += std::strtoul(line.substr(line.find(',') + 1).c_str(), nullptr, 10);
  }
  CHECK(rows == 10);
  CHECK(total == 3);

  // The default range cut keeps midpoints at or below 0.2.
  const auto cut = dir / "bins_cut.csv";
  REQUIRE(run_cli("explore --in " + csv.string() + " --nbins 10 --upto 0.2 --out " +
                  cut.string()).exit_code == 0);
  std::ifstream in2(cut);
  std::getline(in2, line);
  rows = 0;
  while (std::getline(in2, line)) {
    ++rows;
    CHECK(std::strtod(line.c_str(), nullptr) <= 0.2);
  }
  CHECK(rows == 2);
}

TEST_CASE("manifest re-runs to a byte-identical output") {
  const auto dir = work_dir();
  const auto out1 = dir / "m1.csv";
  REQUIRE(run_cli("generate --family gaussian --epsilon 0.01 --mu 3 --m 500 --seed 99 --out " +
                  out1.string()).exit_code == 0);
  nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "m1.csv.manifest.json"));
  CHECK(manifest["tool"] == "unifdr");
  CHECK(manifest["command"] == "generate");

  // Reconstruct the command from the manifest alone.
  const auto out2 = dir / "m2.csv";
  std::ostringstream cmd;
  cmd << "generate --family " << manifest["params"]["family"].get<std::string>()
      << " --epsilon " << manifest["params"]["epsilon"].get<double>() << " --mu "
      << manifest["params"]["mu"].get<double>() << " --m "
      << manifest["params"]["m"].get<std::size_t>() << " --seed "
      << manifest["seed"].get<std::uint64_t>() << " --out " << out2.string();
  REQUIRE(run_cli(cmd.str()).exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("config file supplies defaults and flags override it") {
  const auto dir = work_dir();
  const auto cfg = dir / "gen.cfg";
  {
    std::ofstream out(cfg);
    out << "epsilon=0.5\nmu=4\nm=50\nseed=11\nfamily=gaussian\n";
  }
  const auto a = dir / "cfg_a.csv";
  REQUIRE(run_cli("generate --config " + cfg.string() + " --out " + a.string()).exit_code == 0);
  nlohmann::json ma = nlohmann::json::parse(slurp(dir / "cfg_a.csv.manifest.json"));
  CHECK(ma["params"]["epsilon"].get<double>() == 0.5);
  CHECK(ma["params"]["m"].get<std::size_t>() == 50);

  const auto b = dir / "cfg_b.csv";
  REQUIRE(run_cli("generate --config " + cfg.string() + " --epsilon 0.2 --out " + b.string())
              .exit_code == 0);
  nlohmann::json mb = nlohmann::json::parse(slurp(dir / "cfg_b.csv.manifest.json"));
  CHECK(mb["params"]["epsilon"].get<double>() == 0.2);  // flag wins
  CHECK(mb["params"]["mu"].get<double>() == 4.0);       // config fills the rest
}

TEST_CASE("relative outputs honor UNIFDR_OUT_DIR") {
  const auto dir = work_dir() / "envout";
  fs::create_directories(dir);
  const std::string cmd = "UNIFDR_OUT_DIR=" + dir.string() + " " + kCli.string() +
                          " generate --family cauchy --epsilon 0 --mu 0 --m 10 --seed 1 "
                          "--out env_sample.csv > /dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(dir / "env_sample.csv"));
  CHECK(fs::exists(dir / "env_sample.csv.manifest.json"));
}

TEST_CASE("reproduce output is invariant to the worker count") {
  const auto dir1 = work_dir() / "jobs1";
  const auto dir4 = work_dir() / "jobs4";
  REQUIRE(run_cli("reproduce table2 --mu 10 --reps 6 --seed 3 --jobs 1 --outdir " +
                  dir1.string()).exit_code == 0);
  REQUIRE(run_cli("reproduce table2 --mu 10 --reps 6 --seed 3 --jobs 4 --outdir " +
                  dir4.string()).exit_code == 0);
  CHECK(slurp(dir1 / "table2_mu10.csv") == slurp(dir4 / "table2_mu10.csv"));
  CHECK(!slurp(dir1 / "table2_mu10.csv").empty());
}
