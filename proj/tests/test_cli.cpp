// Runs the command-line tool as a subprocess.

#include "replicator/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
namespace rio = replicator::io;

namespace {

const std::string kCli = REPLICATOR_CLI_PATH;
const std::string kData = REPLICATOR_DATA_DIR;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("replicator_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    int run(const std::string& args) const {
        const std::string cmd = kCli + " " + args + " 2>" + path("stderr.txt");
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulatePdConvergesAndIsDeterministic) {
    const std::string args = "simulate --model " + kData + "/pd.json --x0 0.9,0.1 --dt 1e-3 --t-end 10 --method rk4";
    ASSERT_EQ(run(args + " --out " + path("a.csv")), 0);
    ASSERT_EQ(run(args + " --out " + path("b.csv")), 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

    std::ifstream in(path("a.csv"));
    const auto traj = rio::read_trajectory_csv(in);
    EXPECT_LE(traj.back()[0], 1e-3);

    std::ostringstream again;
    rio::write_trajectory_csv(again, traj);
    EXPECT_EQ(again.str(), slurp(path("a.csv")));
}

TEST_F(Cli, HamiltonianReplicatorInitHasZeroEnergy) {
    ASSERT_EQ(run("hamiltonian --model " + kData + "/pd.json --y0 0.6 --replicator-init --dt 1e-4 --t-end 5 --out " +
                  path("phase.csv")),
              0);
    std::ifstream in(path("phase.csv"));
    const auto traj = rio::read_phase_csv(in);
    ASSERT_GT(traj.size(), 1u);
    for (double h : traj.hs) EXPECT_LE(std::abs(h), 1e-6);
}

TEST_F(Cli, HamiltonianNeedsInitialMomentum) {
    EXPECT_EQ(run("hamiltonian --model " + kData + "/pd.json --y0 0.6"), 2);
    EXPECT_EQ(run("hamiltonian --model " + kData + "/pd.json --y0 0.6 --p0 1 --replicator-init"), 2);
}

TEST_F(Cli, PeriodicReport) {
    ASSERT_EQ(run("periodic --payoff " + kData + "/pd.json --c -1 --out " + path("p.json")), 0);
    const auto j = rio::Json::parse(slurp(path("p.json")));
    EXPECT_EQ(j["verdict"], "periodic");
    ASSERT_EQ(run("periodic --payoff " + kData + "/pd.json --c -2 --out " + path("q.json")), 0);
    EXPECT_EQ(rio::Json::parse(slurp(path("q.json")))["verdict"], "not-detected");
}

TEST_F(Cli, ControllabilityRepeatedEntriesExitThree) {
    EXPECT_EQ(run("controllability --a 1,1 --B id --out " + path("c.json")), 3);
    const auto j = rio::Json::parse(slurp(path("c.json")));
    EXPECT_FALSE(j["hypotheses"]["a distinct"]["passed"].get<bool>());
    EXPECT_NE(slurp(path("stderr.txt")).find("a distinct"), std::string::npos);
}

TEST_F(Cli, ControllabilityIsDeterministic) {
    const std::string args = "controllability --a 1,2,3 --B " + kData + "/b3.json --samples 50 --seed 4";
    ASSERT_EQ(run(args + " --out " + path("a.json")), 0);
    ASSERT_EQ(run("--threads 1 " + args + " --out " + path("b.json")), 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    EXPECT_EQ(rio::Json::parse(slurp(path("a.json")))["verdict"], "controllable");
}

TEST_F(Cli, BracketReport) {
    const std::string args = "bracket --model-a " + kData + "/constant3.json --model-b " + kData +
                             "/linear3.json --samples 30 --seed 2";
    ASSERT_EQ(run(args + " --out " + path("a.json")), 0);
    ASSERT_EQ(run(args + " --out " + path("b.json")), 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    const auto j = rio::Json::parse(slurp(path("a.json")));
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["samples"].size(), 30u);
}

TEST_F(Cli, ElCheckOnSimulatedTrajectory) {
    ASSERT_EQ(run("simulate --model " + kData + "/pd.json --x0 0.6,0.4 --dt 1e-4 --t-end 1 --out " + path("t.csv")), 0);
    ASSERT_EQ(run("el-check --model " + kData + "/pd.json --traj " + path("t.csv") + " --out " + path("el.json")), 0);
    const auto j = rio::Json::parse(slurp(path("el.json")));
    EXPECT_LE(j["residual"].get<double>(), 1e-4);
}

TEST_F(Cli, InvalidArgumentsExitTwo) {
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("simulate --model " + kData + "/pd.json --x0 0.9,0.2"), 2);
    EXPECT_EQ(run("simulate --model " + kData + "/pd.json --x0 0.9,0.1 --dt -1"), 2);
    EXPECT_EQ(run("simulate --model " + kData + "/pd.json --x0 0.9,0.1 --method euler"), 2);
    EXPECT_EQ(run("simulate --model " + path("missing.json") + " --x0 0.9,0.1"), 2);
    EXPECT_EQ(run("bogus"), 2);
}

TEST_F(Cli, NumericalFailureExitsThree) {
    std::ofstream(path("wild.json")) << R"({"type":"linear","B":[[0,50],[0,0]]})";
    EXPECT_EQ(run("simulate --model " + path("wild.json") + " --x0 0.5,0.5 --dt 1 --t-end 10 --method midpoint --out " +
                  path("w.csv")),
              3);
}
