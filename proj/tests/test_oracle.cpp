#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

using namespace mintime;
using namespace testing_support;

namespace {

const DiscreteGrid kSmall{60, 60};

InitialData scaled(InitialData y, double f) {
  for (auto& row : y)
    for (auto& v : row) v *= f;
  return y;
}

}  // namespace

TEST(Oracle, ZeroDataHasZeroResidual) {
  const auto y0 = InitialData(2, std::vector<double>(61, 0.0));
  EXPECT_EQ(null_reach_residual(one_plus_one(), 1.0, kSmall, y0), 0.0);
}

TEST(Oracle, ResidualIsScaleInvariant) {
  const auto spec = worked_example();
  const NullReachOracle oracle(spec, kSmall, 3.0);
  const auto y0 = random_initial_data(5, 60, 3);
  for (double T : {1.0, 1.8, 2.4}) {
    const double r = oracle.residual(T, y0);
    EXPECT_NEAR(oracle.residual(T, scaled(y0, 7.5)), r, 1e-9 * (1 + r));
  }
}

TEST(Oracle, OnePlusOneShapeAndMonotonicity) {
  const auto spec = one_plus_one();
  const NullReachOracle oracle(spec, kSmall, 2.4);
  const auto y0 = random_initial_data(2, 60, 5);
  double prev = oracle.residual_steps(0, y0);
  EXPECT_NEAR(prev, 1.0, 1e-12);
  for (int s = 1; s <= oracle.max_steps(); ++s) {
    const double r = oracle.residual_steps(s, y0);
    EXPECT_LE(r, prev + 1e-6) << "step " << s;
    prev = r;
  }
  EXPECT_GT(oracle.residual(1.5, y0), 0.1);
  EXPECT_LT(oracle.residual(2.1, y0), 1e-6);
}

TEST(Oracle, BracketOnOnePlusOne) {
  OracleOptions opt;
  opt.grid = {100, 100};
  const auto br = bracket_transition(one_plus_one(), opt);
  EXPECT_LE(br.lo, 2.0);
  EXPECT_GE(br.hi, 2.0);
  EXPECT_LE(br.hi - br.lo, 0.4);
  EXPECT_FALSE(br.scan.horizons.empty());
}

TEST(Oracle, RangeAboveTransitionHasNoCrossing) {
  OracleOptions opt;
  opt.grid = {60, 60};
  opt.lo = 2.1;
  opt.hi = 2.2;
  try {
    bracket_transition(one_plus_one(), opt);
    FAIL() << "expected NoTransition";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoTransition);
  }
}

TEST(Oracle, RejectsCoarseGridsAndBadData) {
  EXPECT_THROW(NullReachOracle(one_plus_one(), DiscreteGrid{4, 60}, 1.0), Error);
  const NullReachOracle oracle(one_plus_one(), kSmall, 1.0);
  EXPECT_THROW(oracle.residual(0.5, random_initial_data(3, 60, 1)), Error);
  EXPECT_THROW(oracle.residual(0.5, InitialData(2, std::vector<double>(1, 1.0))), Error);
}

TEST(Oracle, ScanAndCsv) {
  const auto scan = residual_scan(one_plus_one(), {0.5, 1.0, 2.2}, kSmall, random_initial_data(2, 60, 9));
  ASSERT_EQ(scan.residuals.size(), 3u);
  std::ostringstream os;
  write_csv(os, scan);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "T,residual");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Oracle, OnePlusOneResidualsAroundTransition) {
  const auto spec = one_plus_one();
  const NullReachOracle oracle(spec, DiscreteGrid{200, 200}, 2.2);
  const auto y0 = random_initial_data(2, 200, 11);
  EXPECT_LT(oracle.residual(2.2, y0), 1e-3);
  EXPECT_GT(oracle.residual(1.8, y0), 1e-1);
}

TEST(Oracle, PureTransportTransitionsAtLongestTime) {
  SystemSpec<R> s;
  s.m = 1;
  s.p = 1;
  s.lambda = {cst(-1), cst(2)};  // T = 1, 1/2
  s.M = constant_matrix({{0, 0}, {0, 0}});
  s.Q = Matrix<R>(1, 1);
  OracleOptions opt;
  opt.grid = {120, 120};
  opt.delta = 0.05;
  const auto br = bracket_transition(validate_spec(s), opt);
  const double dt = 1.5 / 120;
  EXPECT_LE(br.lo, 1.0 + dt);
  EXPECT_GE(br.hi, 1.0 - dt);
}

TEST(Oracle, BracketStableUnderRefinement) {
  OracleOptions coarse;
  coarse.grid = {100, 100};
  OracleOptions fine;
  fine.grid = {200, 200};
  const auto a = bracket_transition(one_plus_one(), coarse);
  const auto b = bracket_transition(one_plus_one(), fine);
  EXPECT_LT(std::abs((a.lo + a.hi) / 2 - (b.lo + b.hi) / 2), b.hi - b.lo);
}
