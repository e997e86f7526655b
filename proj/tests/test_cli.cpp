#include <catch2/catch.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "essrk/cli.hpp"
#include "essrk/csv.hpp"

namespace fs = std::filesystem;
using essrk::cli::run;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

struct temp_dir {
  fs::path path;
  temp_dir() {
    path = fs::temp_directory_path() / "essrk_cli_test";
    fs::create_directories(path);
  }
};

}  // namespace

TEST_CASE("format_double round-trips exactly", "[cli]") {
  for (double v : {0.1, 1.0 / 3.0, -0.0, 2.1, 1e-300, 5.0e22, -17.25}) {
    const std::string text = essrk::format_double(v);
    REQUIRE(std::stod(text) == v);
  }
}

TEST_CASE("simulate writes one row per recorded step plus the header",
          "[cli]") {
  temp_dir tmp;
  const auto out = (tmp.path / "traj.csv").string();
  REQUIRE(run({"simulate", "--preset", "paper-tokamak", "--method", "essrk4",
               "--h", "0.5", "--steps", "2000", "--out", out}) == 0);
  const std::string text = slurp(out);
  REQUIRE(line_count(text) == 2002);  // header + initial + 2000 steps
  REQUIRE(text.rfind("t,q1,q2,q3,p1,p2,p3,E\n", 0) == 0);

  // stride bounds the file size of long runs; the final state is kept
  const auto strided = (tmp.path / "strided.csv").string();
  REQUIRE(run({"simulate", "--preset", "paper-tokamak", "--method", "essrk4",
               "--steps", "2000", "--stride", "100", "--out", strided}) == 0);
  REQUIRE(line_count(slurp(strided)) == 22);  // header + 20 records + end
}

TEST_CASE("identical configs give byte-identical CSVs", "[cli]") {
  temp_dir tmp;
  const auto a = (tmp.path / "a.csv").string();
  const auto b = (tmp.path / "b.csv").string();
  const std::vector<std::string> args{"simulate", "--preset", "paper-parametric",
                                      "--method", "essrk4", "--steps", "50"};
  auto with_out = [&](const std::string& out) {
    auto v = args;
    v.push_back("--out");
    v.push_back(out);
    return v;
  };
  REQUIRE(run(with_out(a)) == 0);
  REQUIRE(run(with_out(b)) == 0);
  REQUIRE(slurp(a) == slurp(b));
}

TEST_CASE("a zero inline field yields a straight line", "[cli]") {
  temp_dir tmp;
  const auto out = (tmp.path / "zero.csv").string();
  REQUIRE(run({"simulate", "--field", "zero", "--method", "rk4", "--h", "0.5",
               "--steps", "4", "--q0", "0,0,0", "--p0", "1,2,3", "--out",
               out}) == 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);  // header
  for (int k = 0; std::getline(in, line); ++k) {
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    REQUIRE(values.size() == 8);
    REQUIRE(values[0] == Approx(0.5 * k));
    REQUIRE(values[1] == Approx(0.5 * k * 1.0));
    REQUIRE(values[2] == Approx(0.5 * k * 2.0));
    REQUIRE(values[3] == Approx(0.5 * k * 3.0));
    REQUIRE(values[7] == Approx(7.0));  // |p|^2 / 2
  }
}

TEST_CASE("config files feed the run and flags win", "[cli]") {
  temp_dir tmp;
  const auto cfg = tmp.path / "run.cfg";
  const auto out = (tmp.path / "cfg.csv").string();
  {
    std::ofstream f(cfg);
    f << "# reproducible run\n"
      << "preset = paper-tokamak\n"
      << "method = essrk4\n"
      << "steps = 5\n"
      << "out = " << out << "\n";
  }
  REQUIRE(run({"simulate", "--config", cfg.string(), "--steps", "7"}) == 0);
  REQUIRE(line_count(slurp(out)) == 9);  // header + initial + 7 steps
}

TEST_CASE("exit codes separate the failure classes", "[cli]") {
  temp_dir tmp;
  const auto out = (tmp.path / "x.csv").string();
  // unknown preset
  REQUIRE(run({"simulate", "--preset", "nope", "--out", out}) == 2);
  // malformed config: bad method, missing field/preset, bad config key
  REQUIRE(run({"simulate", "--preset", "paper-tokamak", "--method", "essrk3",
               "--out", out}) == 3);
  REQUIRE(run({"simulate", "--preset", "paper-tokamak", "--method", "essrk8",
               "--out", out}) == 3);  // no shipped tableau of order 8
  REQUIRE(run({"simulate", "--out", out}) == 3);
  REQUIRE(run({"simulate", "--field", "zero", "--steps", "3", "--out", out}) ==
          3);  // h missing
  const auto cfg = tmp.path / "bad.cfg";
  {
    std::ofstream f(cfg);
    f << "no_such_key = 1\n";
  }
  REQUIRE(run({"simulate", "--config", cfg.string(), "--out", out}) == 3);
  // step failure: starting on the torus axis violates the field domain
  REQUIRE(run({"simulate", "--field", "tokamak", "--method", "rk4", "--h",
               "0.1", "--steps", "100", "--q0", "0,0,0", "--p0", "0,-1,0",
               "--out", out}) == 4);
}

TEST_CASE("converge passes a true order and fails a floored one", "[cli]") {
  REQUIRE(run({"converge", "--preset", "paper-parametric", "--method",
               "essrk2", "--h-list", "0.4,0.2,0.1,0.05"}) == 0);
  REQUIRE(run({"converge", "--preset", "paper-parametric", "--method",
               "essrk4", "--h-list", "0.4,0.2,0.1,0.05"}) == 0);
  REQUIRE(run({"converge", "--preset", "paper-parametric", "--method", "rk4",
               "--h-list", "0.4,0.2,0.1,0.05"}) == 0);
  // free flight is exact for every method: errors sit at round-off and the
  // fitted slope cannot match the declared order
  REQUIRE(run({"converge", "--field", "zero", "--method", "essrk2", "--h",
               "0.1", "--q0", "0,0,0", "--p0", "1,0,0", "--h-list",
               "0.4,0.2,0.1"}) == 5);
  // needs at least three step sizes
  REQUIRE(run({"converge", "--preset", "paper-parametric", "--h-list",
               "0.4,0.2"}) == 3);
}

TEST_CASE("diagnose passes on the symplectic method", "[cli]") {
  REQUIRE(run({"diagnose", "--preset", "paper-parametric", "--method",
               "essrk4"}) == 0);
}

TEST_CASE("diagnose reports the baseline symplecticity failure as informational",
          "[cli]") {
  // at h = 0.5 the rk4 defect sits well above the tolerance, but the check
  // is informational for the baseline: exit stays 0
  REQUIRE(run({"diagnose", "--preset", "paper-tokamak", "--method", "rk4"}) == 0);
}

TEST_CASE("diagnose flags finite-difference derivatives", "[cli]") {
  // wrapping the tokamak field in the FD adapter with a coarse step breaks
  // both the field consistency and the exact-symplecticity checks
  REQUIRE(run({"diagnose", "--preset", "paper-tokamak", "--method", "essrk4",
               "--fd-derivatives", "0.05"}) == 5);
}

TEST_CASE("compare writes one error-series CSV per method", "[cli]") {
  temp_dir tmp;
  const auto out = (tmp.path / "report.csv").string();
  REQUIRE(run({"compare", "--preset", "ensemble", "--out", out}) == 0);
  for (const char* label : {"essrk4", "rk4", "rk4-benchmark"}) {
    const auto path = tmp.path / (std::string("report.") + label + ".csv");
    const std::string text = slurp(path);
    REQUIRE(line_count(text) == 1002);  // header + 1001 grid points
    REQUIRE(text.rfind("t,amplitude_error,phase_error,E\n", 0) == 0);
  }
  REQUIRE(run({"compare", "--out", out}) == 3);      // preset required
  REQUIRE(run({"compare", "--preset", "nope"}) == 2);
}
