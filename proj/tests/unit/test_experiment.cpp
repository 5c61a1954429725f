#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "rwppt/experiment.hpp"

using namespace rwppt;
namespace fs = std::filesystem;

namespace {

const char* kGaussian = R"({
  "dimension": 100, "beta": 1.0, "seed": 17,
  "regions": [{"offset": 0, "half_width": 80, "weight": 1,
               "family": {"kind": "exp_power", "z": 2, "sigma": 1}}],
  "ell_grid": {"start": 0, "stop": 4, "count": 5},
  "ladder": {"beta_min": 0.01, "construction": "geometric"},
  "simulate": {"n_sweeps": 0}
})";

const char* kTwoRegion = R"({
  "dimension": 16, "beta": 0.5, "seed": 3,
  "regions": [{"offset": 0, "half_width": 12, "weight": 0.4,
               "family": {"kind": "exp_power", "z": 2, "sigma": 1}},
              {"offset": 40, "half_width": 12, "weight": 0.6,
               "family": {"kind": "exp_power", "z": 2, "sigma": 1}}],
  "d_list": [16, 64], "n_samples": 4000,
  "simulate": {"betas": [1.0, 0.8, 0.6], "n_sweeps": 500, "within_moves": 1}
})";

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rwppt_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int cli(const std::string& args) {
  const std::string cmd = std::string(RWPPT_CLI) + " " + args + " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(kGaussian);
  CHECK(c.dimension == 100);
  CHECK(c.seed == 17u);
  REQUIRE(c.ell_grid);
  CHECK(*c.ell_grid == std::vector<double>{0, 1, 2, 3, 4});
  CHECK(c.ladder->construction == Construction::geometric);
  CHECK(c.m_grid.size() == 401);
  CHECK(c.model().size() == 1);

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dimension": 1, "regions": [], "x": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dimension": 1, "regions": []})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dimension": 1, "regions": [{"offset": 0, "half_width": 1,
      "weight": 1, "family": {"kind": "exp_power", "z": 2, "sigma": 1, "mu": 0}}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dimension": 1, "regions": [{"offset": 0, "half_width": 1,
      "weight": 0.5, "family": {"kind": "exp_power", "z": 2, "sigma": 1}}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dimension": 1, "regions": [{"offset": 0, "half_width": 1,
      "weight": 1, "family": {"kind": "cauchy"}}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dimension": 2, "regions": [{"center": [0], "half_width": 1,
      "weight": 1, "family": {"kind": "exp_power", "z": 2, "sigma": 1}}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dimension": 1, "seed": -4, "regions": [{"offset": 0,
      "half_width": 1, "weight": 1, "family": {"kind": "exp_power", "z": 2, "sigma": 1}}]})"),
                  ConfigError);
}

TEST_CASE("output schemas") {
  const auto c = parse_config(kGaussian);
  const auto theory = lines(theory_curve_csv(c));
  CHECK(theory[0] == "ell,E_ell,a_ell");
  CHECK(theory[1] == "0,0,1");
  CHECK(theory[3] == "2,1.26924203145,0.317310507863");
  CHECK(theory.size() == 6);

  const auto ladder = lines(ladder_csv(c));
  CHECK(ladder[0] == "index,beta,ell_used,predicted_acceptance");
  CHECK(ladder[1] == "0,1,0,1");

  const auto sim = lines(simulate_csv(c));
  CHECK(sim[0] == "pair_index,beta_lo,beta_hi,proposals,accepts,acc_rate,esjd");
  CHECK(sim.size() == ladder.size() - 1);
  CHECK(sim[1].substr(sim[1].size() - 8) == ",0,0,0,0");

  CHECK_THROWS_AS(convergence_csv(c), ConfigError);  // no d_list
  const auto conv = lines(convergence_csv(parse_config(kTwoRegion)));
  CHECK(conv[0] == "d,a_emp,stderr,a_limit,gap");
  CHECK(conv.size() == 3);
  CHECK(conv[1].rfind("16,", 0) == 0);

  const auto fig = lines(figure_csv(c));
  CHECK(fig[0] == "m,value");
  CHECK(fig[1] == "0,1");

  const std::string opt = optimize_json(c);
  CHECK(opt.find("\"ell_hat\"") != std::string::npos);
  CHECK(opt.find("\"a_hat\"") != std::string::npos);
  CHECK(opt.find("\"sigma\"") != std::string::npos);

  const auto two = parse_config(kTwoRegion);
  CHECK_THROWS_AS(theory_curve_csv(two), ConfigError);  // no ell_grid
  CHECK_THROWS_AS(ladder_csv(two), ConfigError);        // no ladder section
  CHECK(lines(simulate_csv(two)).size() == 3);
  CHECK(lines(convergence_csv(two, 2)) == lines(convergence_csv(two, 1)));
}

TEST_CASE("number formatting") {
  CHECK(format_theory(0.23381016133183664) == "0.233810161332");
  CHECK(format_theory(0.0) == "0");
  CHECK(format_exact(0.1) == "0.1");
  CHECK(std::stod(format_exact(0.8076759913002802)) == 0.8076759913002802);
}

TEST_CASE("command-line runner") {
  TempDir dir;
  const fs::path cfg = dir.path / "gauss.json";
  write(cfg, kGaussian);
  const fs::path out = dir.path / "out";
  const std::string base = "--config " + cfg.string() + " --out " + out.string();
  const fs::path cfg2 = dir.path / "two.json";
  write(cfg2, kTwoRegion);
  const std::string two = "--config " + cfg2.string() + " --out " + out.string();

  for (const char* cmd : {"theory-curve", "optimize", "ladder", "simulate", "figure"}) {
    CAPTURE(cmd);
    CHECK(cli(std::string(cmd) + " " + base) == 0);
  }
  CHECK(cli("convergence " + two) == 0);
  for (const char* f : {"theory_curve.csv", "optimize.json", "ladder.csv", "simulate.csv",
                        "convergence.csv", "figure.csv"}) {
    CHECK(fs::exists(out / f));
  }
  const std::string first = slurp(out / "convergence.csv");
  CHECK(cli("convergence " + two + " --threads 3") == 0);
  CHECK(slurp(out / "convergence.csv") == first);
  CHECK(cli("convergence " + two + " --seed 18") == 0);
  CHECK(slurp(out / "convergence.csv") != first);

  const std::string fig = slurp(out / "figure.csv");
  CHECK(fig.find("1.19,0.000186998400275\n1.2,-0.00288392553644") != std::string::npos);

  // errors: bad config, bad flags, optimizer failure
  const fs::path bad = dir.path / "bad.json";
  write(bad, R"({"dimension": 1, "typo": 2})");
  CHECK(cli("optimize --config " + bad.string() + " --out " + out.string()) == 2);
  CHECK(cli("optimize --config " + (dir.path / "missing.json").string()) == 2);
  CHECK(cli("optimize " + base + " --threads 0") == 2);
  CHECK(cli("nonsense " + base) == 2);

  const fs::path flat = dir.path / "flat.json";
  std::string grid, vals;
  for (int i = 0; i < 16; ++i) {
    grid += (i ? "," : "") + format_exact(-1.0 + 2.0 * i / 15.0);
    vals += (i ? "," : "") + std::string("0");
  }
  write(flat, R"({"dimension": 1, "beta": 0.5, "regions": [{"offset": 0, "half_width": 1,
    "weight": 1, "family": {"kind": "tabulated", "grid": [)" + grid + R"(], "log_values": [)" +
                  vals + "]}}]}");
  CHECK(cli("optimize --config " + flat.string() + " --out " + out.string() + "/flat") == 3);
  CHECK_FALSE(fs::exists(out / "flat" / "optimize.json"));

  // no seed anywhere: config error, nothing written
  const fs::path noseed = dir.path / "noseed.json";
  write(noseed, R"({"dimension": 16, "beta": 0.5, "d_list": [16], "n_samples": 1000,
    "regions": [{"offset": 0, "half_width": 12, "weight": 1,
                 "family": {"kind": "exp_power", "z": 2, "sigma": 1}}]})");
  CHECK(cli("convergence --config " + noseed.string() + " --out " + (dir.path / "ns").string()) == 2);
  CHECK_FALSE(fs::exists(dir.path / "ns" / "convergence.csv"));
  CHECK(cli("convergence --config " + noseed.string() + " --out " + (dir.path / "ns").string() +
            " --seed 1") == 0);
  for (const auto& e : fs::recursive_directory_iterator(dir.path)) {
    CHECK(e.path().extension() != ".tmp");
  }
}
