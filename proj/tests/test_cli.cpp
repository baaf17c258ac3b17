#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = ncilab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ncilab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir_;
};

const char* kFourByFour =
    R"({"rows": 4, "cols": 4, "re": [3, 0, -2, -2, 0, 3, 2, -1, -2, 2, 4, 0, -2, -1, 0, 3]})";
const char* kIdentity3 = R"({"rows": 3, "cols": 3, "re": [1, 0, 0, 0, 1, 0, 0, 0, 1]})";

}  // namespace

TEST_F(CliTest, CheckPrintedCounterexampleExitsTwo) {
    const Result r = run({"check", "--p", "1.5", "--input", write("a.json", kFourByFour)});
    EXPECT_EQ(r.code, 2);
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["reports"][0]["lhs"].get<double>(), 9.49929, 1e-4);
    EXPECT_NEAR(j["reports"][0]["rhs"].get<double>(), 9.63184, 1e-4);
    EXPECT_FALSE(j["reports"][0]["satisfied"].get<bool>());
}

TEST_F(CliTest, NormOfIdentity) {
    const Result r = run({"norm", "--p", "2", "--p", "inf", "--input", write("i.json", kIdentity3)});
    EXPECT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["results"][0]["norm"].get<double>(), std::sqrt(3.0), 1e-11);
    EXPECT_EQ(j["results"][1]["p"], "inf");
    EXPECT_NEAR(j["results"][1]["norm"].get<double>(), 1.0, 1e-12);
}

TEST_F(CliTest, ReproDuality) {
    const Result r = run({"repro", "duality"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(json::parse(r.out)["data"]["y_norm"].get<double>(), 1.0426, 1e-3);
}

TEST_F(CliTest, ReproCounterexampleExitsTwo) { EXPECT_EQ(run({"repro", "counterexample-4x4"}).code, 2); }

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"norm", "--input", write("i.json", kIdentity3)}).code, 1);  // --p missing
    EXPECT_EQ(run({"norm", "--p", "abc", "--input", write("i.json", kIdentity3)}).code, 1);
    EXPECT_EQ(run({"norm", "--p", "2", "--input", (dir_ / "missing.json").string()}).code, 1);
    EXPECT_EQ(run({"repro", "unknown"}).code, 1);
    EXPECT_EQ(run({"search", "--p", "1.5", "--ensemble", "scalar-blocks", "--shape", "3,3,2,2"}).code, 1);
    EXPECT_EQ(run({"check", "--p", "1.5", "--format", "xml", "--input", write("a.json", kFourByFour)}).code, 1);
}

TEST_F(CliTest, MalformedJsonReportsPosition) {
    const Result r = run({"norm", "--p", "2", "--input", write("bad.json", "{\"rows\": 3,\n \"cols\" 3}")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("byte"), std::string::npos) << r.err;
}

TEST_F(CliTest, ShapeViolationExitsOne) {
    const Result r = run({"norm", "--p", "2", "--input", write("s.json", R"({"rows": 2, "cols": 2, "re": [1, 2, 3]})")});
    EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, CompressAndGramCheck) {
    const std::string T = write("t.json", R"({"rows": 2, "cols": 2, "re": [1, 2, -0.1, 1]})");
    const Result c = run({"compress", "--p", "1.5", "--input", T});
    EXPECT_EQ(c.code, 0);
    EXPECT_NEAR(json::parse(c.out)["results"][0]["compression"]["re"][2].get<double>(), 0.1, 1e-12);
    const Result g = run({"check", "--q", "1.5", "--input", T});
    EXPECT_EQ(g.code, 0);
    EXPECT_EQ(json::parse(g.out)["reports"][0]["name"], "nci-gram");
    EXPECT_EQ(run({"check", "--q", "1.5", "--p", "3", "--input", T}).code, 1);
}

TEST_F(CliTest, HannerDerivativeAc) {
    const std::string A = write("a.json", R"({"rows": 2, "cols": 2, "re": [1, 0.5, 0.2, 2]})");
    const std::string B = write("b.json", R"({"rows": 2, "cols": 2, "re": [0.3, 1, 0.7, 0.4]})");
    EXPECT_EQ(run({"hanner", "--p", "1.5", "--input", A, "--input", B}).code, 0);
    EXPECT_EQ(run({"derivative-check", "--p", "1.5", "--input", A, "--input", B}).code, 0);
    EXPECT_EQ(run({"ac", "--p", "1.5", "--input", A, "--input", A}).code, 0);
    EXPECT_EQ(run({"hanner", "--p", "1.5", "--input", A}).code, 1);

    const std::string E = write("e.json", R"({"rows": 3, "cols": 3, "re": [1, 0, 0, 0, 0, 0, 0, 0, 0]})");
    const std::string C = write("c.json",
                                R"({"rows": 3, "cols": 3, "re": [1e-6, 1, 1e-6, 1, 1e-6, 1, 1e-6, 1, 1]})");
    EXPECT_EQ(run({"ac", "--p", "1.5", "--input", E, "--input", C}).code, 2);
    EXPECT_EQ(run({"derivative-check", "--p", "1.5", "--input", E, "--input", C}).code, 1);  // boundary
}

TEST_F(CliTest, LimitStudyTable) {
    const Result r = run({"limit-study", "--p", "1.5", "--format", "table"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("rows[6].entry11: 0.116"), std::string::npos) << r.out;
}

TEST_F(CliTest, ProbeRuns) {
    const Result r = run({"probe", "--q", "1.5", "--q-vals", "0.3,1", "--r-vals", "0.8,0.2", "--trials", "20"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["reports"][0]["scope"], "open");
}

TEST_F(CliTest, OutputFile) {
    const fs::path out = dir_ / "report.json";
    const Result r = run({"repro", "limit-0p11669", "--output", out.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(out);
    EXPECT_EQ(json::parse(in)["case"], "limit-0p11669");
}

TEST_F(CliTest, SearchViolationExitsTwoAndJobsEnv) {
    ::setenv("NCILAB_JOBS", "3", 1);
    const Result r = run({"search", "--ensemble", "scalar-blocks", "--shape", "3,3,1,1", "--p", "1.5", "--trials",
                          "50", "--seed", "42", "--refine-steps", "50"});
    ::unsetenv("NCILAB_JOBS");
    EXPECT_EQ(r.code, 2);
    const Result serial = run({"search", "--ensemble", "scalar-blocks", "--shape", "3,3,1,1", "--p", "1.5",
                               "--trials", "50", "--seed", "42", "--refine-steps", "50", "--jobs", "1"});
    EXPECT_EQ(r.out, serial.out);
}

TEST_F(CliTest, SearchQuietExitsZero) {
    const Result r = run({"search", "--ensemble", "proportional-rows", "--shape", "2,3,2,2", "--p", "5", "--trials",
                          "20", "--seed", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["count"], 0);
}

TEST_F(CliTest, GoldenSearchOutput) {
    const Result r = run({"search", "--ensemble", "scalar-blocks", "--shape", "3,3,1,1", "--p", "1.5", "--trials",
                          "300", "--seed", "7", "--refine-steps", "40"});
    std::ifstream in(fs::path(NCILAB_GOLDEN_DIR) / "search_scalar_seed7.json", std::ios::binary);
    ASSERT_TRUE(in) << "golden file missing";
    std::stringstream golden;
    golden << in.rdbuf();
    EXPECT_EQ(r.out, golden.str());
}
