#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../../tools/cli.hpp"

namespace {

namespace fs = std::filesystem;
using troppca::cli::run;

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "troppca");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        ::unsetenv("TROPPCA_SEED");
        dir = fs::temp_directory_path() /
              ("troppca_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        trees = (dir / "trees.nwk").string();
        ASSERT_EQ(call({"simulate", "--m", "4", "--n", "12", "--seed", "3", "-o", trees}).code, 0);
    }
    void TearDown() override { fs::remove_all(dir); }

    fs::path dir;
    std::string trees;
};

TEST_F(Cli, SimulateWritesManifest) {
    const auto m = nlohmann::json::parse(slurp(trees + ".manifest.json"));
    EXPECT_EQ(m["n"], 12);
    EXPECT_EQ(m["seed"], 3);
    std::istringstream lines(slurp(trees));
    int count = 0;
    for (std::string l; std::getline(lines, l);) count += !l.empty();
    EXPECT_EQ(count, 12);
}

TEST_F(Cli, FitIsDeterministic) {
    const auto a = call({"fit", "-i", trees, "--iterations", "50", "--seed", "5"});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto b = call({"fit", "-i", trees, "--iterations", "50", "--seed", "5", "--threads", "4"});
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["trace"].size(), 50u);
    EXPECT_EQ(j["config"]["seed"], 5);
}

TEST_F(Cli, SeedFromEnvironment) {
    ::setenv("TROPPCA_SEED", "5", 1);
    const auto env = call({"fit", "-i", trees, "--iterations", "40"});
    ::unsetenv("TROPPCA_SEED");
    const auto flag = call({"fit", "-i", trees, "--iterations", "40", "--seed", "5"});
    ASSERT_EQ(env.code, 0) << env.err;
    EXPECT_EQ(env.out, flag.out);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
    const auto cfg = (dir / "run.toml").string();
    spit(cfg, "[fit]\niterations = 25\nseed = 2\n");
    const auto a = call({"--config", cfg, "fit", "-i", trees});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(nlohmann::json::parse(a.out)["trace"].size(), 25u);
    const auto b = call({"--config", cfg, "fit", "-i", trees, "--iterations", "30"});
    ASSERT_EQ(b.code, 0) << b.err;
    const auto j = nlohmann::json::parse(b.out);
    EXPECT_EQ(j["trace"].size(), 30u);
    EXPECT_EQ(j["config"]["seed"], 2);
}

TEST_F(Cli, RenderFwStatsProject) {
    const auto fit_path = (dir / "fit.json").string();
    ASSERT_EQ(call({"fit", "-i", trees, "--iterations", "60", "-o", fit_path}).code, 0);
    const auto svg = call({"render", "-i", fit_path});
    ASSERT_EQ(svg.code, 0) << svg.err;
    EXPECT_NE(svg.out.find("<svg"), std::string::npos);

    const auto fw = call({"fw", "-i", trees});
    ASSERT_EQ(fw.code, 0) << fw.err;

    const auto st = call({"stats", "-i", trees, "--fit", fit_path});
    ASSERT_EQ(st.code, 0) << st.err;
    const auto fitj = nlohmann::json::parse(slurp(fit_path));
    const auto stj = nlohmann::json::parse(st.out);
    EXPECT_NEAR(stj["pi"].get<double>(), fitj["pi"].get<double>(), 1e-9);
    EXPECT_NEAR(stj["r_squared"].get<double>(), fitj["r_squared"].get<double>(), 1e-9);

    EXPECT_EQ(call({"project", "-i", trees, "--fit", fit_path}).code, 0);
    const auto check = call({"check-conjecture", "-i", trees, "--iterations", "30"});
    ASSERT_EQ(check.code, 0) << check.err;
    EXPECT_TRUE(nlohmann::json::parse(check.out).contains("contained"));
}

TEST_F(Cli, Sensitivity) {
    const auto r = call({"sensitivity", "--iterations-list", "10,20", "--chains", "2", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "topology_mode,m,n,iterations,chain,r_squared,pi,runtime_ms");
    int rows = 0;
    for (std::string l; std::getline(lines, l);) rows += !l.empty();
    EXPECT_EQ(rows, 4);
    EXPECT_EQ(call({"sensitivity", "--m-list", "12"}).code, 1);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(call({}).code, 1);
    EXPECT_EQ(call({"fit"}).code, 1);
    EXPECT_EQ(call({"fit", "-i", trees, "--iterations", "0"}).code, 1);
    EXPECT_EQ(call({"fit", "-i", (dir / "missing.nwk").string()}).code, 1);

    const auto bad = (dir / "bad.nwk").string();
    spit(bad, "((1:1,2:1):1,3:2;\n");
    EXPECT_EQ(call({"fit", "-i", bad}).code, 2);

    const auto ragged = (dir / "ragged.nwk").string();
    spit(ragged, "((1:1,2:1):1,3:1);\n((1:1,2:1):1,3:2);\n((1:1,3:1):1,2:2);\n");
    const auto r = call({"fit", "-i", ragged, "--iterations", "10"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("--force-equidistant"), std::string::npos);
    EXPECT_EQ(call({"fw", "-i", ragged, "--force-equidistant"}).code, 0);

    const auto fit_path = (dir / "fit2.json").string();
    ASSERT_EQ(call({"fit", "-i", trees, "-s", "2", "--iterations", "10", "-o", fit_path}).code, 0);
    const auto rr = call({"render", "-i", fit_path});
    EXPECT_EQ(rr.code, 3);
    EXPECT_NE(rr.err.find("render requires 3 vertices"), std::string::npos);
}

}  // namespace
