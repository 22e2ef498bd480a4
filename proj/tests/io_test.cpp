#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bpbr/error.hpp"
#include "bpbr/io.hpp"
#include "test_support.hpp"

using namespace bpbr;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

GroupedDataset parse(const std::string& text) {
  std::istringstream in(text);
  return io::read_csv(in);
}

}  // namespace

TEST(ReadCsv, Basic) {
  const auto ds = parse("x,y,group\n1.0,1.1,A\n2.0,2.1,A\n5.0,5.2,B\n");
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.group_sizes(), (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(ds.points()[2].y, 5.2);
}

TEST(ReadCsv, ColumnOrderCrlfAndBlankLines) {
  const auto ds = parse("group, y ,x\r\n\r\nS1,2,1\r\nS2,4,+3e0\r\n");
  EXPECT_EQ(ds.labels(), (std::vector<std::string>{"S1", "S2"}));
  EXPECT_EQ(ds.points()[1].x, 3.0);
  EXPECT_EQ(ds.points()[1].y, 4.0);
}

TEST(ReadCsv, ErrorsNameTheLine) {
  try {
    parse("x,y,group\n1,2,A\n1,abc,B\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { parse("a,b,c\n1,2,3\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse("x,y,group\n1,2\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse("x,y,group\n1,nan,A\n"); }), ErrorCode::NonFiniteValue);
  EXPECT_EQ(code_of([] { parse("x,y,group\n"); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { parse(""); }), ErrorCode::EmptyInput);
}

TEST(WriteCsv, RoundTripIsLossless) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = build_dataset(bpbr::testing::random_rows(rng, 5, 7));
    std::ostringstream out;
    io::write_csv(out, ds);
    EXPECT_EQ(parse(out.str()), ds);
  }
}

TEST(ParseScenario, AllKeys) {
  std::istringstream in(
      "# Figure-style configuration\n"
      "label = fig\n"
      "group_sizes = 820, 9x20\n"
      "beta = 0.8\nalpha = 0.1\nsigma = 0.2\n"
      "dist = uniform\nreplicates = 50\nseed = 9\ngamma = 0.1\n"
      "modes = block\nvariance = empirical-q\n");
  const Scenario sc = io::parse_scenario(in);
  EXPECT_EQ(sc.label, "fig");
  ASSERT_EQ(sc.group_sizes.size(), 10u);
  EXPECT_EQ(sc.group_sizes[0], 820u);
  EXPECT_EQ(sc.group_sizes[9], 20u);
  EXPECT_EQ(sc.beta, 0.8);
  EXPECT_EQ(sc.alpha, 0.1);
  EXPECT_EQ(sc.error_dist, ErrorDistribution::Uniform);
  EXPECT_EQ(sc.replicates, 50u);
  EXPECT_EQ(sc.seed, 9u);
  EXPECT_EQ(sc.gamma, 0.1);
  EXPECT_EQ(sc.modes, std::vector<RegressionMode>{RegressionMode::Block});
  EXPECT_EQ(sc.variance_source, VarianceSource::EmpiricalQ);
}

TEST(ParseScenario, Errors) {
  for (const char* text : {"colour = red\n", "beta 1\n", "sigma = -1\n", "group_sizes = 0\n",
                           "replicates = many\n", "dist = cauchy\n"}) {
    std::istringstream in(text);
    EXPECT_EQ(code_of([&] { io::parse_scenario(in); }), ErrorCode::ParseError) << text;
  }
}

TEST(Json, FitResultSchema) {
  const auto ds = bpbr::testing::make(
      {{1, 1, "A"}, {1.1, 1.2, "A"}, {2, 2.1, "B"}, {2.2, 2.1, "B"}, {3, 3.2, "C"},
       {3.1, 2.9, "C"}, {4, 4.1, "D"}, {4.2, 3.8, "D"}, {5, 5.2, "E"}, {5.1, 5.0, "E"}});
  const auto r = equivalence_test(ds, RegressionMode::Block, 0.05);
  const auto j = io::to_json(r);
  for (const char* key : {"mode", "beta_hat", "alpha_hat", "N", "K", "beta_ci", "alpha_ci", "M1",
                          "M2", "C_gamma", "variance", "verdict", "discarded_identical",
                          "discarded_minus_one"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["mode"], "block");
  EXPECT_EQ(j["beta_hat"].get<double>(), r.estimate.beta_hat);
  EXPECT_EQ(j["variance"]["kind"], "equal-groups-non-overlapping");
}

TEST(PlotData, Sections) {
  const auto ds = bpbr::testing::make({{1, 2, "A"}, {3, 4, "B"}});
  std::ostringstream out;
  io::write_plot_data(out, ds, {{"true", 0.0, 0.8}, {"block", 0.1, 0.79}});
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("# points\nx,y,group\n1,2,A\n3,4,B\n# lines\nline,intercept,slope\n", 0),
            0u);
  EXPECT_NE(text.find("true,0,0.80000000000000004\n"), std::string::npos);
}
