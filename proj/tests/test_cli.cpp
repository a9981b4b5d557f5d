#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = RRU_CLI_PATH;

int run_cli(const std::string& args) {
  std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  int ret = std::system(cmd.c_str());
  REQUIRE(ret != -1);
  return WEXITSTATUS(ret);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("rru_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

const char* kGoodConfig = R"({
  "arms": {"B": {"kind": "bernoulli", "params": {"p": 0.6}},
           "W": {"kind": "bernoulli", "params": {"p": 0.6}}},
  "utility": {"kind": "identity", "params": {"u_max": 1.0}},
  "urn": {"b": 1.0, "w": 1.0},
  "horizon": 400,
  "checkpoints": [100, 400],
  "alpha": 0.05
})";

std::size_t count_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  return rows - 1;  // minus header
}

}  // namespace

TEST_CASE("simulate: deterministic trajectory files") {
  fs::path dir = fresh_dir("simulate");
  write(dir / "config.json", kGoodConfig);
  fs::path out1 = dir / "run1", out2 = dir / "run2";
  CHECK(run_cli("simulate --config " + (dir / "config.json").string() + " --seed 7 --out " +
                out1.string()) == 0);
  CHECK(run_cli("simulate --config " + (dir / "config.json").string() + " --seed 7 --out " +
                out2.string()) == 0);
  std::string traj = slurp(out1 / "trajectory.csv");
  CHECK(count_rows(traj) == 400);
  CHECK(traj == slurp(out2 / "trajectory.csv"));
  CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));
  auto man1 = nlohmann::json::parse(slurp(out1 / "run_manifest.json"));
  auto man2 = nlohmann::json::parse(slurp(out2 / "run_manifest.json"));
  CHECK(man1["files"] == man2["files"]);
  CHECK(man1["files"].contains("trajectory.csv"));
}

TEST_CASE("simulate: invalid config exits 2 naming the field") {
  fs::path dir = fresh_dir("badcfg");
  std::string bad = kGoodConfig;
  auto pos = bad.find("\"b\": 1.0");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, 8, "\"b\": 0.0");
  write(dir / "config.json", bad);
  std::string cmd = kCli + " simulate --config " + (dir / "config.json").string() + " --out " +
                    (dir / "out").string() + " 2>" + (dir / "err.txt").string() + " >/dev/null";
  int ret = std::system(cmd.c_str());
  REQUIRE(ret != -1);
  CHECK(WEXITSTATUS(ret) == 2);
  CHECK(slurp(dir / "err.txt").find("b") != std::string::npos);
}

TEST_CASE("mc: row count and RRU_WORKERS invariance") {
  fs::path dir = fresh_dir("mc");
  write(dir / "config.json", kGoodConfig);
  fs::path out1 = dir / "w1", out2 = dir / "w3";
  std::string base = " mc --config " + (dir / "config.json").string() +
                     " --replicates 8 --seed 11 --out ";
  int r1 = std::system(("RRU_WORKERS=1 " + kCli + base + out1.string() + " >/dev/null 2>&1").c_str());
  int r2 = std::system(("RRU_WORKERS=3 " + kCli + base + out2.string() + " >/dev/null 2>&1").c_str());
  REQUIRE(WEXITSTATUS(r1) == 0);
  REQUIRE(WEXITSTATUS(r2) == 0);
  std::string csv = slurp(out1 / "replicates.csv");
  CHECK(count_rows(csv) == 8 * 2);  // 8 replicates x 2 checkpoints
  CHECK(csv == slurp(out2 / "replicates.csv"));
  CHECK(slurp(out1 / "aggregate.json") == slurp(out2 / "aggregate.json"));

  auto agg = nlohmann::json::parse(slurp(out1 / "aggregate.json"));
  CHECK(agg.contains("zeta0_ks"));
  CHECK(agg["zeta0_ks"].contains("p_value"));
}

TEST_CASE("power: sorted table with a size row; unrealizable effect exits 2") {
  fs::path dir = fresh_dir("power");
  write(dir / "config.json", kGoodConfig);
  fs::path out = dir / "out";
  CHECK(run_cli("power --config " + (dir / "config.json").string() +
                " --effects 0.2 0.0 --replicates 20 --seed 3 --out " + out.string()) == 0);
  std::string csv = slurp(out / "power.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "effect,n,R,alpha,empirical_power,mean_NW_share,mean_eta_sq");
  std::getline(in, line);
  CHECK(line.rfind("0,", 0) == 0);  // effect 0 first after sorting
  std::getline(in, line);
  CHECK(line.rfind("0.2,", 0) == 0);

  // p_B + 0.5 > 1: impossible bernoulli shift
  CHECK(run_cli("power --config " + (dir / "config.json").string() +
                " --effects 0.5 --replicates 5 --out " + (dir / "out2").string()) == 2);
}

TEST_CASE("check --list exits 0") {
  CHECK(run_cli("check --list") == 0);
}

TEST_CASE("check with an unattainable tolerance manifest exits 1") {
  fs::path dir = fresh_dir("check");
  // tiny sizes so the battery runs fast; polya_p_min > 1 cannot be met
  write(dir / "tol.json", R"({
    "version": "t",
    "base_seed": 77,
    "polya": {"n": 200, "R": 60, "p_min": 2.0},
    "enumeration": {"trials": 2000, "p_min": 1e-12},
    "h1": {"n": 400, "n_mid": 100, "R": 30, "nb_share_min": 0.0,
           "eta_ratio_lo": 0.0, "eta_ratio_hi": 1e9, "remark2_median_max": 1e9,
           "cor2_lo": 0.0, "cor2_hi": 1e9, "mixture_ks_d_max": 1.0,
           "corr_zeta_eta_max": 1.0, "zeta0_normality_p_max": 1.0},
    "normality": {"n": 200, "R": 50, "ks_d_max": 1.0, "corr_max": 1.0},
    "h0": {"n": 400, "R": 50, "ks_d_max": 1.0, "size_lo": 0.0, "size_hi": 1.0,
           "subseq_pass_min": 0.0},
    "equal_means": {"n": 200, "R": 50, "extreme_frac_max": 1.0}
  })");
  fs::path out = dir / "out";
  CHECK(run_cli("check --manifest " + (dir / "tol.json").string() + " --out " + out.string()) == 1);
  std::string verdict = slurp(out / "acceptance.txt");
  CHECK(verdict.find("[FAIL]") != std::string::npos);
  CHECK(verdict.find("polya_beta_limit") != std::string::npos);
}
