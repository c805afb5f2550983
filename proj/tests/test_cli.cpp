#include "cli.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace hyperheat;
using namespace hyperheat::cli;

namespace {

struct Outcome {
    int status;
    std::string out, err;
};

Outcome run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "hyperheat_cli");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(Grid, ListsAndRanges) {
    EXPECT_EQ(parse_grid("0,1", "--r"), (std::vector<double>{0.0, 1.0}));
    EXPECT_EQ(parse_grid("0:1:5", "--r"), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
    EXPECT_EQ(parse_grid("2.5", "--t"), (std::vector<double>{2.5}));
}

TEST(Grid, RejectsMalformedInput) {
    EXPECT_THROW(parse_grid("1,0.5", "--r"), config_error);
    EXPECT_THROW(parse_grid("1,1", "--r"), config_error);
    EXPECT_THROW(parse_grid("abc", "--r"), config_error);
    EXPECT_THROW(parse_grid("1:2", "--r"), config_error);
    EXPECT_THROW(parse_grid("0:1:1", "--r"), config_error);
    EXPECT_THROW(parse_grid("0:1:2.5", "--r"), config_error);
    EXPECT_THROW(parse_grid("", "--r"), config_error);
    EXPECT_THROW(parse_grid("1,", "--r"), config_error);
    EXPECT_THROW(parse_grid("1,nan", "--r"), config_error);
}

TEST(Kernel, ThreeDimensionalRows) {
    Outcome o = run_args({"kernel", "--dim", "3", "--t", "1", "--r", "0,1"});
    ASSERT_EQ(o.status, exit_ok) << o.err;
    auto rows = csv_rows(o.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "m", "r", "t", "value", "method"}));
    EXPECT_NEAR(std::stod(rows[1][4]), 0.0082583, 5e-8);
    EXPECT_NEAR(std::stod(rows[2][4]), std::exp(-1.25) / std::sinh(1.0) / std::pow(4 * pi, 1.5), 1e-17);
    EXPECT_EQ(rows[1][5], "closed_form");
}

TEST(Kernel, RoundTripExactFormatting) {
    Outcome o = run_args({"kernel", "--dim", "5", "--t", "0.7", "--r", "0.3"});
    ASSERT_EQ(o.status, exit_ok);
    auto rows = csv_rows(o.out);
    EXPECT_EQ(std::stod(rows[1][4]), p_odd(DimensionParams(5), 0.3, 0.7).value);
}

TEST(Kernel, OneDimensionalAndMethods) {
    Outcome o = run_args({"kernel", "--dim", "1", "--t", "1", "--r", "0"});
    ASSERT_EQ(o.status, exit_ok);
    EXPECT_NEAR(std::stod(csv_rows(o.out)[1][4]), 1.0 / std::sqrt(4 * pi), 1e-16);
    Outcome s = run_args({"kernel", "--dim", "3", "--t", "1", "--r", "1", "--method", "spectral"});
    ASSERT_EQ(s.status, exit_ok);
    EXPECT_EQ(csv_rows(s.out)[1][5], "spectral");
    EXPECT_NEAR(std::stod(csv_rows(s.out)[1][4]), std::exp(-1.25) / std::sinh(1.0) / std::pow(4 * pi, 1.5), 1e-10);
    Outcome d = run_args({"kernel", "--dim", "2", "--t", "0.8", "--r", "0.5", "--method", "descent"});
    ASSERT_EQ(d.status, exit_ok);
    EXPECT_EQ(csv_rows(d.out)[1][5], "descent");
    EXPECT_EQ(run_args({"kernel", "--dim", "4", "--t", "1", "--r", "1", "--method", "spectral"}).status, exit_config);
}

TEST(Kernel, JsonMatchesCsv) {
    Outcome c = run_args({"kernel", "--dim", "4", "--t", "0.5,1", "--r", "0.7", "--mass", "0.3"});
    Outcome j = run_args({"kernel", "--dim", "4", "--t", "0.5,1", "--r", "0.7", "--mass", "0.3", "--format", "json"});
    ASSERT_EQ(c.status, exit_ok);
    ASSERT_EQ(j.status, exit_ok);
    auto doc = nlohmann::json::parse(j.out);
    EXPECT_EQ(doc["command"], "kernel");
    auto rows = csv_rows(c.out);
    ASSERT_EQ(doc["rows"].size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(doc["rows"][i]["value"].get<double>(), std::stod(rows[i + 1][4]));
        EXPECT_EQ(doc["rows"][i]["method"], rows[i + 1][5]);
        EXPECT_NE(j.out.find(rows[i + 1][4]), std::string::npos);
    }
}

TEST(Kernel, ThreadsPreserveOrderAndValues) {
    std::vector<std::string> base{"kernel", "--dim", "4", "--t", "0.2:2:4", "--r", "0:2:5"};
    Outcome serial = run_args(base);
    base.insert(base.end(), {"--threads", "4"});
    Outcome parallel = run_args(base);
    ASSERT_EQ(serial.status, exit_ok);
    EXPECT_EQ(serial.out, parallel.out);
}

TEST(Trace, Sectors) {
    Outcome s = run_args({"trace", "--dim", "3", "--t", "1"});
    ASSERT_EQ(s.status, exit_ok);
    EXPECT_NEAR(std::stod(csv_rows(s.out)[1][4]), std::exp(-1.0) / std::pow(4 * pi, 1.5), 1e-15);
    Outcome u = run_args({"trace", "--dim", "3", "--t", "1", "--sector", "u1"});
    ASSERT_EQ(u.status, exit_ok);
    EXPECT_NEAR(std::stod(csv_rows(u.out)[1][4]), (6.0 + std::exp(-1.0)) / std::pow(4 * pi, 1.5), 1e-9);
    Outcome g = run_args({"trace", "--dim", "3", "--t", "1", "--sector", "ghost_subtracted"});
    ASSERT_EQ(g.status, exit_ok);
    EXPECT_NEAR(std::stod(csv_rows(g.out)[1][4]), (6.0 - std::exp(-1.0)) / std::pow(4 * pi, 1.5), 1e-9);
    EXPECT_EQ(run_args({"trace", "--dim", "5", "--t", "1", "--sector", "u1"}).status, exit_config);
    EXPECT_EQ(run_args({"trace", "--dim", "1", "--t", "1"}).status, exit_config);
}

TEST(Coeffs, FiveDimensionalScalar) {
    Outcome o = run_args({"coeffs", "--dim", "5", "--sector", "scalar"});
    ASSERT_EQ(o.status, exit_ok) << o.err;
    auto rows = csv_rows(o.out);
    std::vector<std::string> bt, a;
    for (std::size_t i = 1; i < rows.size(); ++i) (rows[i][2] == "b_tilde" ? bt : a).push_back(rows[i][4]);
    EXPECT_EQ(bt, (std::vector<std::string>{"1", "-10/3", "32/3"}));
    EXPECT_EQ(a, (std::vector<std::string>{"1", "2/3"}));
}

TEST(Coeffs, EvenDimensionSeriesAndVectorSectors) {
    Outcome e = run_args({"coeffs", "--dim", "2", "--order", "2", "--format", "json"});
    ASSERT_EQ(e.status, exit_ok);
    auto doc = nlohmann::json::parse(e.out);
    EXPECT_EQ(doc["rows"].back()["series"], "coincidence");
    EXPECT_EQ(doc["rows"].back()["value"], "7/480");
    Outcome g = run_args({"coeffs", "--dim", "3", "--sector", "ghost_subtracted"});
    auto rows = csv_rows(g.out);
    EXPECT_EQ(rows[1][4], "1");
    EXPECT_EQ(rows[2][4], "5");
    EXPECT_EQ(rows[3][4], "-1/2");
}

TEST(Fourier, Rows) {
    Outcome o = run_args({"fourier", "--dim", "5", "--lambda", "1", "--r", "0"});
    ASSERT_EQ(o.status, exit_ok) << o.err;
    auto rows = csv_rows(o.out);
    EXPECT_EQ(std::stod(rows[1][3]), 1.0);
    EXPECT_EQ(std::stod(rows[1][4]), 18.0);
    EXPECT_EQ(run_args({"fourier", "--dim", "3", "--lambda", "0"}).status, exit_config);
}

TEST(Action, ScalarWithSplitCheck) {
    Outcome o = run_args({"action", "--dim", "3", "--cutoff", "1,10", "--split-tol", "1e-8"});
    ASSERT_EQ(o.status, exit_ok) << o.err;
    auto rows = csv_rows(o.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].back(), "split_deviation");
    EXPECT_NEAR(std::stod(rows[2][5]), 1.0 / (12 * pi), 1e-15);
    EXPECT_LT(std::stod(rows[2][8]), 1e-8);
}

TEST(Action, VectorSectors) {
    Outcome u = run_args({"action", "--dim", "3", "--cutoff", "10", "--sector", "ghost_subtracted"});
    ASSERT_EQ(u.status, exit_ok) << u.err;
    EXPECT_TRUE(std::isfinite(std::stod(csv_rows(u.out)[1][6])));
    EXPECT_EQ(run_args({"action", "--dim", "3", "--cutoff", "10", "--sector", "u1", "--split-tol", "1e-8"}).status, exit_config);
}

TEST(Verify, SingleChecks) {
    Outcome ok = run_args({"verify", "--check", "4"});
    EXPECT_EQ(ok.status, exit_ok) << ok.out;
    Outcome bad = run_args({"verify", "--check", "8"});
    EXPECT_EQ(bad.status, exit_verification);
    EXPECT_NE(bad.out.find("false"), std::string::npos);
    EXPECT_EQ(run_args({"verify", "--check", "13"}).status, exit_config);
    EXPECT_EQ(run_args({"verify", "--all", "--check", "1"}).status, exit_config);
}

TEST(ExitCodes, ConfigErrors) {
    EXPECT_EQ(run_args({}).status, exit_config);
    EXPECT_EQ(run_args({"kernel", "--dim", "0", "--t", "1", "--r", "0"}).status, exit_config);
    EXPECT_EQ(run_args({"kernel", "--dim", "3", "--t", "-1", "--r", "0"}).status, exit_config);
    EXPECT_EQ(run_args({"kernel", "--dim", "3", "--t", "1"}).status, exit_config);
    EXPECT_EQ(run_args({"kernel", "--dim", "3", "--t", "1", "--r", "0", "--bogus"}).status, exit_config);
    EXPECT_EQ(run_args({"kernel", "--dim", "3", "--t", "1", "--r", "0", "--format", "xml"}).status, exit_config);
    EXPECT_EQ(run_args({"kernel", "--dim", "3", "--t", "1", "--r", "0", "--threads", "0"}).status, exit_config);
    EXPECT_EQ(run_args({"kernel", "--dim", "3", "--t", "1", "--r", "0", "--mass", "-1"}).status, exit_config);
    EXPECT_EQ(run_args({"kernel", "--help"}).status, exit_ok);
}
