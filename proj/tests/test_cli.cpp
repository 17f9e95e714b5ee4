#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = rotkit::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

const std::vector<std::string> kWorked = {"--lambda", "1/2", "--mu", "1", "--a", "3/4", "--b", "1", "--c", "0"};
const std::vector<std::string> kSqrt2 = {"--lambda", "0.8", "--mu", "0.9", "--a", "0.4355727234222227",
                                        "--b", "0.9", "--c", "0.1"};

std::vector<std::string> cmd(const std::string& name, std::vector<std::string> params,
                             std::vector<std::string> extra = {}) {
    std::vector<std::string> v{name};
    v.insert(v.end(), params.begin(), params.end());
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
}

std::string item(const Result& r, const std::string& key) {
    for (const auto& row : csv(r.out)) {
        if (row.size() == 2 && row[0] == key) return row[1];
    }
    return "<missing>";
}

} // namespace

TEST(Validate, SqrtTwoParametersAreValid) {
    const auto r = run({"validate", "--lambda", "0.8", "--mu", "0.9", "--a", "0.43557", "--b", "0.9", "--c", "0.1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(item(r, "eta")), 0.580538, 1e-6);
    EXPECT_EQ(item(r, "valid"), "true");
}

TEST(Validate, OpenEndpointRejected) {
    const auto r = run({"validate", "--lambda", "2/3", "--mu", "1/2", "--a", "1/4", "--b", "3/4", "--c", "1/4",
                        "--mode", "exact"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(item(r, "b - b*lambda < a"), "false");
    EXPECT_NE(r.err.find("b - b*lambda < a"), std::string::npos);
}

TEST(Validate, QuadMembershipRejected) {
    const auto r = run({"validate", "--lambda", "0.9", "--mu", "200", "--a", "0.5", "--b", "0.5", "--c", "0.1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(item(r, "lambda*mu <= 1 or mu*(1-b) <= 1-c"), "false");
}

TEST(Usage, ParseErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"rho", "--lambda", "0.5"}).code, 2);
    EXPECT_EQ(run(cmd("rho", kWorked, {"--mode", "fuzzy"})).code, 2);
    EXPECT_EQ(run(cmd("rho", {"--lambda", "x", "--mu", "1", "--a", "3/4", "--b", "1", "--c", "0"})).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Rho, WorkedExampleExact) {
    const auto r = run(cmd("rho", kWorked, {"--mode", "exact"}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"kind", "p", "q", "rho_lo", "rho_hi", "a_lo", "a_hi",
                                                 "right_endpoint"}));
    EXPECT_EQ(rows[1], (std::vector<std::string>{"exact", "1", "2", "1/2", "1/2", "2/3", "5/6", "false"}));
    EXPECT_NE(r.err.find("1/2, plateau [2/3, 5/6]"), std::string::npos);
}

TEST(Rho, OracleColumn) {
    const auto r = run(cmd("rho", {"--lambda", "0.6", "--mu", "1.3", "--a", "0.5", "--b", "0.9", "--c", "0.2"},
                           {"--oracle", "100000"}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv(r.out);
    ASSERT_EQ(rows[0].size(), 10u);
    const double lo = std::stod(rows[1][3]), hi = std::stod(rows[1][4]);
    EXPECT_LE(std::stod(rows[1][9]), 1e-5 + (hi - lo));
}

TEST(Rho, EnclosureWhenCapped) {
    const auto r = run(cmd("rho", kSqrt2, {"--max-q", "50"}));
    ASSERT_EQ(r.code, 0);
    const auto rows = csv(r.out);
    EXPECT_EQ(rows[1][0], "enclosure");
    EXPECT_LT(std::stod(rows[1][3]), 0.414214);
    EXPECT_GT(std::stod(rows[1][4]), 0.414213);
}

TEST(Rho, InvalidParamsExitTwo) {
    const auto r = run(cmd("rho", {"--lambda", "2/3", "--mu", "1/2", "--a", "1/4", "--b", "3/4", "--c", "1/4"}));
    EXPECT_EQ(r.code, 2);
}

TEST(Staircase, FullRangeSweep) {
    const auto r = run({"staircase", "--lambda", "2/3", "--mu", "1/2", "--b", "3/4", "--c", "1/4", "--steps", "100"});
    ASSERT_EQ(r.code, 0);
    const auto rows = csv(r.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "kind", "p", "q", "rho_lo", "rho_hi"}));
    EXPECT_EQ(rows.size(), 100u);  // 101 grid points, both ends omitted
    EXPECT_NE(r.err.find("2 grid point(s)"), std::string::npos);
    double prev_a = 0, prev_lo = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double a = std::stod(rows[i][0]), lo = std::stod(rows[i][4]), hi = std::stod(rows[i][5]);
        EXPECT_GT(a, prev_a);
        EXPECT_GE(lo, prev_lo);
        EXPECT_GT(lo, 0.0);
        EXPECT_LT(hi, 1.0);
        EXPECT_LE(lo, hi);
        prev_a = a;
        prev_lo = lo;
    }
    EXPECT_LT(std::stod(rows[1][4]), 0.15);
    EXPECT_GT(std::stod(rows.back()[5]), 0.75);
}

TEST(Staircase, PlateauHitRate) {
    for (const char* mode : {"float", "exact"}) {
        const auto r = run({"staircase", "--lambda", "1/2", "--mu", "1", "--b", "1", "--c", "0", "--steps", "100",
                            "--max-q", "50", "--mode", mode});
        ASSERT_EQ(r.code, 0);
        const auto rows = csv(r.out);
        int exact = 0;
        for (std::size_t i = 1; i < rows.size(); ++i) exact += rows[i][1] == "exact";
        EXPECT_GE(exact, 0.9 * (rows.size() - 1)) << mode;
    }
}

TEST(Staircase, ExactModePrintsNoFloats) {
    const auto r = run({"staircase", "--lambda", "2/3", "--mu", "1/2", "--b", "3/4", "--c", "1/4", "--steps", "12",
                        "--mode", "exact"});
    ASSERT_EQ(r.code, 0);
    const auto rows = csv(r.out);
    ASSERT_GT(rows.size(), 5u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t c : {0u, 4u, 5u}) {
            EXPECT_EQ(rows[i][c].find_first_of(".e"), std::string::npos) << rows[i][c];
        }
    }
}

TEST(Cycle, WorkedExample) {
    const auto r = run(cmd("cycle", kWorked, {"--mode", "exact"}));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "m,point\n0,1/6\n1,5/6\n");
    EXPECT_NE(r.err.find("period 2, winding 1"), std::string::npos);
}

TEST(Cycle, UnresolvedExitFour) {
    EXPECT_EQ(run(cmd("cycle", kSqrt2, {"--max-q", "50"})).code, 4);
    const auto end = run(cmd("cycle", {"--lambda", "1/2", "--mu", "1", "--a", "5/6", "--b", "1", "--c", "0"},
                             {"--mode", "exact"}));
    EXPECT_EQ(end.code, 4);
    EXPECT_NE(end.err.find("right end"), std::string::npos);
}

TEST(Phi, SqrtTwoEndpoints) {
    const auto r = run(cmd("phi", kSqrt2, {"--rho", "0.41421356237", "--n", "512"}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 514u);
    EXPECT_NEAR(std::stod(rows[1][1]), 0.1, 1e-5);
    EXPECT_EQ(rows.back()[0], "1");
    EXPECT_NEAR(std::stod(rows.back()[1]), 0.9, 1e-5);
}

TEST(Phi, UnresolvedWithoutRho) {
    EXPECT_EQ(run(cmd("phi", kSqrt2, {"--max-q", "50"})).code, 4);
}

TEST(Phi, ExactRhoToken) {
    const auto r = run(cmd("phi", kWorked, {"--mode", "exact", "--rho", "1/2", "--n", "4"}));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "y,phi\n0,1/6\n1/4,1/6\n1/2,5/6\n3/4,5/6\n1,5/6\n");
}

TEST(Cantor, GapColumnAndStats) {
    const auto r = run(cmd("cantor", kSqrt2, {"--rho", "0.4142135623730951", "--n", "64"}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv(r.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"y", "phi", "gap"}));
    EXPECT_EQ(rows[1][2], "");
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_GT(std::stod(rows[i][2]), 0.0);
    EXPECT_NE(r.err.find("gaps: min"), std::string::npos);
    EXPECT_NE(r.err.find("flat "), std::string::npos);
}

TEST(Cantor, RandomSamplingIsSeeded) {
    const auto extra = std::vector<std::string>{"--rho", "0.4142135623730951", "--n", "16", "--random", "--seed", "7"};
    const auto a = run(cmd("cantor", kSqrt2, extra));
    const auto b = run(cmd("cantor", kSqrt2, extra));
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    auto other = extra;
    other.back() = "8";
    EXPECT_NE(run(cmd("cantor", kSqrt2, other)).out, a.out);
}

TEST(Orbit, ZeroStepsAndWraps) {
    const auto z = run(cmd("orbit", kWorked, {"--n", "0", "--x0", "0.25"}));
    ASSERT_EQ(z.code, 0);
    EXPECT_EQ(z.out, "k,lift,wrap\n0,0.25,0\n");
    const auto r = run(cmd("orbit", kWorked, {"--mode", "exact", "--x0", "1/6", "--n", "4"}));
    EXPECT_EQ(r.out, "k,lift,wrap\n0,1/6,0\n1,5/6,0\n2,7/6,1\n3,11/6,1\n4,13/6,2\n");
}

TEST(Output, JsonMirrorsCsv) {
    const auto r = run(cmd("orbit", kWorked, {"--mode", "exact", "--x0", "1/6", "--n", "2", "--format", "json"}));
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 3u);
    EXPECT_EQ(j[1]["k"], 1);
    EXPECT_EQ(j[1]["lift"], "5/6");
    EXPECT_EQ(j[2]["wrap"], 1);
    const auto f = run(cmd("rho", kWorked, {"--format", "json"}));
    const auto jf = nlohmann::json::parse(f.out);
    EXPECT_DOUBLE_EQ(jf[0]["rho_lo"].get<double>(), 0.5);
    EXPECT_EQ(jf[0]["kind"], "exact");
}

TEST(Output, FileAndDeterminism) {
    const auto path = std::filesystem::temp_directory_path() / "rotkit_cli_test.csv";
    const auto r = run(cmd("phi", kSqrt2, {"--rho", "0.41421356237", "--n", "32", "--out", path.string()}));
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto again = run(cmd("phi", kSqrt2, {"--rho", "0.41421356237", "--n", "32"}));
    EXPECT_EQ(ss.str(), again.out);
    std::filesystem::remove(path);
}

TEST(Mode, EnvironmentDefault) {
    ::setenv("ROTKIT_MODE", "exact", 1);
    const auto r = run(cmd("cycle", kWorked));
    ::unsetenv("ROTKIT_MODE");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "m,point\n0,1/6\n1,5/6\n");
    ::setenv("ROTKIT_MODE", "bogus", 1);
    EXPECT_EQ(run(cmd("cycle", kWorked)).code, 2);
    ::unsetenv("ROTKIT_MODE");
}
