#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = PLATOON_CLI;
const std::string kConfigs = PLATOON_CONFIG_DIR;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("platoon_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SynthWritesArtifactsAndSnapshot) {
  ASSERT_EQ(run("synth --config " + kConfigs + "/example1.json --lambda 0.23 --out " + out("a")), 0);
  for (const char* f : {"parameterization.json", "report.json", "config.json"}) EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  const auto report = nlohmann::json::parse(slurp(dir_ / "a" / "report.json"));
  EXPECT_EQ(report["status"], "feasible");
  EXPECT_GT(report["lp"]["variables"].get<int>(), 0);
  EXPECT_GE(report["seconds"].get<double>(), 0.0);

  // Re-running from the echoed snapshot reproduces the artifact byte for byte.
  ASSERT_EQ(run("synth --config " + out("a") + "/config.json --out " + out("b")), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "parameterization.json"), slurp(dir_ / "b" / "parameterization.json"));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("synth"), 1);
  EXPECT_EQ(run("frobnicate --config x"), 1);
  {
    std::ofstream(dir_ / "bad.json") << "{\"platoon\": ";
  }
  EXPECT_EQ(run("synth --config " + out("bad.json") + " --out " + out("p")), 2);
  EXPECT_EQ(run("synth --config " + kConfigs + "/example1.json --alpha 1.5 --out " + out("p")), 2);
  EXPECT_EQ(run("synth --config " + kConfigs + "/example1.json --lambda 0.9 --out " + out("i")), 3);
  EXPECT_FALSE(fs::exists(dir_ / "i" / "parameterization.json"));
}

TEST_F(Cli, LambdaReportsAndLogsProbes) {
  ASSERT_EQ(run("lambda --config " + kConfigs + "/example1.json --out " + out("l")), 0);
  const auto report = nlohmann::json::parse(slurp(dir_ / "l" / "report.json"));
  EXPECT_DOUBLE_EQ(report["lambda_star"].get<double>(), 0.33);
  const std::string probes = slurp(dir_ / "l" / "probes.csv");
  EXPECT_EQ(probes.rfind("lambda,status,seconds\n", 0), 0u);

  ASSERT_EQ(run("lambda --config " + kConfigs + "/example1.json --arch distributed --out " + out("d")), 0);
  const auto dist = nlohmann::json::parse(slurp(dir_ / "d" / "report.json"));
  EXPECT_LE(dist["lambda_star"].get<double>(), 0.33);
}

TEST_F(Cli, EmptyTableHasOnlyTheHeader) {
  nlohmann::json cfg = nlohmann::json::parse(slurp(kConfigs + "/example1.json"));
  cfg["n_list"] = nlohmann::json::array();
  {
    std::ofstream(dir_ / "empty.json") << cfg.dump();
  }
  ASSERT_EQ(run("table1 --config " + out("empty.json") + " --out " + out("t")), 0);
  EXPECT_EQ(slurp(dir_ / "t" / "table1.csv"), "N,L,lambda_star,seconds\n");
}

TEST_F(Cli, SimulateFromAPolicyFile) {
  ASSERT_EQ(run("synth --config " + kConfigs + "/example1.json --lambda 0.3 --out " + out("s")), 0);
  ASSERT_EQ(run("simulate --config " + kConfigs + "/example1.json --lambda 0.3 --horizon 30 --policy " + out("s") +
                "/parameterization.json --out " + out("r")),
            0);
  const auto summary = nlohmann::json::parse(slurp(dir_ / "r" / "summary.json"));
  EXPECT_EQ(summary["records"], 31);
  EXPECT_EQ(summary["violations"]["total_steps_with_violation"], 0);
  EXPECT_TRUE(fs::exists(dir_ / "r" / "trace.csv"));

  // A policy for a different platoon is a configuration error.
  ASSERT_EQ(run("synth --config " + kConfigs + "/fig2.json --lambda 0.2 --out " + out("six")), 0);
  EXPECT_EQ(run("simulate --config " + kConfigs + "/example1.json --policy " + out("six") +
                "/parameterization.json --out " + out("x")),
            2);
}

TEST_F(Cli, CompareWritesTheDensityTable) {
  ASSERT_EQ(run("compare --config " + kConfigs + "/example2.json --out " + out("c")), 0);
  std::istringstream in(slurp(dir_ / "c" / "compare.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "rho,N,L,lambda_centralized,lambda_distributed");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}
