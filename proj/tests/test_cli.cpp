#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "momspace/io.hpp"

using namespace momspace;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return MOMSPACE_CLI_PATH; }

int run(const std::string& args) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("momspace_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("cli limit: fixed mean writes the golden denominator") {
  const auto dir = fresh_dir("limit");
  REQUIRE(run("limit --constraint m1=0.3 --out " + dir.string()) == 0);
  const json out = json::parse(slurp(dir / "limit.json"));
  CHECK(out.at("schema") == "moment-spaces/1");
  const auto& den = out.at("minimizers")[0].at("measure").at("ac").at("denominator");
  CHECK(den[0].get<double>() == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(den[1].get<double>() == doctest::Approx(0.4).epsilon(1e-12));
  // limit.json round-trips through the library's own parser
  const Measure mu = measure_from_json(out.at("minimizers")[0].at("measure"));
  CHECK(mu.ac.has_value());
  // density.csv has a header and 512 rows
  const std::string csv = slurp(dir / "density.csv");
  CHECK(csv.rfind("x,density\r\n", 0) == 0);
  int rows = 0;
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == 513);
}

TEST_CASE("cli limit: real-line preset emits the atom") {
  const auto dir = fresh_dir("limit_r");
  REQUIRE(run("limit --domain realline --preset example-r --constraint m1=0 --out " +
              dir.string()) == 0);
  const json out = json::parse(slurp(dir / "limit.json"));
  const auto& atoms = out.at("minimizers")[0].at("measure").at("atoms");
  REQUIRE(atoms.size() == 1);
  CHECK(atoms[0].at("location").get<double>() == doctest::Approx(-0.25).epsilon(1e-8));
  CHECK(atoms[0].at("weight").get<double>() == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("cli limit: empty constraint is the arcsine measure") {
  const auto dir = fresh_dir("limit_arcsine");
  REQUIRE(run("limit --out " + dir.string()) == 0);
  const json out = json::parse(slurp(dir / "limit.json"));
  CHECK(out.at("minimizers")[0].at("measure").at("ac").at("reference") == "arcsine");
  CHECK(out.at("minimizers")[0].at("coordinates").size() == 0);
}

TEST_CASE("cli exit codes") {
  CHECK(run("limit --constraint m1=0.3 m2=0.5 --out /tmp/momspace_test_na") == 2);
  CHECK(run("sample --domain halfline --potential 0 0 --n 5 --count 2 --out "
            "/tmp/momspace_test_ni") == 3);
}

TEST_CASE("cli sample: csv shape, constraints, reproducibility") {
  const auto dir = fresh_dir("sample");
  REQUIRE(run("sample --n 5 --count 20 --seed 42 --constraint m1=0.3 --out " + dir.string()) ==
          0);
  const std::string csv = slurp(dir / "samples.csv");
  CHECK(csv.rfind("m_1,m_2,m_3,m_4,m_5\r\n", 0) == 0);
  int rows = 0;
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == 21);
  // constrained column is constant
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    CHECK(line.rfind("0.3,", 0) == 0);
  }
  const json meta = json::parse(slurp(dir / "metadata.json"));
  CHECK(meta.at("seed") == 42);
  CHECK(meta.at("config").at("n") == 5);
  CHECK(meta.at("ks_tail").at("pvalue").get<double>() > 0.0);

  // byte-identical re-run from metadata.json
  const auto dir2 = fresh_dir("sample_rerun");
  REQUIRE(run("sample --from-metadata " + (dir / "metadata.json").string() + " --out " +
              dir2.string()) == 0);
  CHECK(slurp(dir2 / "samples.csv") == csv);
}

TEST_CASE("cli sample: n=1 column is uniform-ish") {
  const auto dir = fresh_dir("sample_u");
  REQUIRE(run("sample --n 1 --count 400 --seed 9 --out " + dir.string()) == 0);
  std::istringstream lines(slurp(dir / "samples.csv"));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "m_1\r");
  double mean = 0;
  int count = 0;
  while (std::getline(lines, line)) {
    mean += std::stod(line);
    ++count;
  }
  mean /= count;
  CHECK(count == 400);
  CHECK(std::fabs(mean - 0.5) < 0.06);
}

TEST_CASE("cli spectral") {
  const auto dir = fresh_dir("spectral");
  const fs::path coords = dir / "coords.txt";
  {
    std::ofstream f(coords);
    for (int i = 0; i < 8; ++i) f << "0.5\n";
  }
  REQUIRE(run("spectral --coords " + coords.string() + " --out " + dir.string()) == 0);
  std::istringstream lines(slurp(dir / "spectral.csv"));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "eigenvalue,weight\r");
  double mass = 0;
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    const double ev = std::stod(line.substr(0, comma));
    mass += std::stod(line.substr(comma + 1));
    CHECK(ev > -1e-12);
    CHECK(ev < 1 + 1e-12);
    ++rows;
  }
  CHECK(rows == 4);  // 8 coordinates determine a 4x4 Jacobi matrix
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cli verify runs green on a small configuration") {
  const auto dir = fresh_dir("verify");
  REQUIRE(run("verify --n 100 --count 1500 --l 2 --seed 4 --constraint m1=0.3 --out " +
              dir.string()) == 0);
  const json out = json::parse(slurp(dir / "verify.json"));
  CHECK(out.at("pass") == true);
  CHECK(out.at("checks").size() == 3);
}

TEST_CASE("cli verify exits 6 when a statistical check fails") {
  // 25 samples are far too few for the 10% covariance tolerance
  const auto dir = fresh_dir("verify_fail");
  CHECK(run("verify --n 40 --count 25 --l 2 --seed 1 --out " + dir.string()) == 6);
  const json out = json::parse(slurp(dir / "verify.json"));
  CHECK(out.at("pass") == false);
}

TEST_CASE("cli config file with flag override") {
  const auto dir = fresh_dir("config");
  const fs::path cfg = dir / "run.ini";
  {
    std::ofstream f(cfg);
    f << "[sample]\nn=3\ncount=5\nseed=17\n";
  }
  REQUIRE(run("--config " + cfg.string() + " sample --out " + dir.string()) == 0);
  const json meta = json::parse(slurp(dir / "metadata.json"));
  CHECK(meta.at("config").at("n") == 3);
  CHECK(meta.at("config").at("count") == 5);
  // flags override file values
  const auto dir2 = fresh_dir("config_override");
  REQUIRE(run("--config " + cfg.string() + " sample --count 7 --out " + dir2.string()) == 0);
  const json meta2 = json::parse(slurp(dir2 / "metadata.json"));
  CHECK(meta2.at("config").at("count") == 7);
  CHECK(meta2.at("config").at("n") == 3);
}
