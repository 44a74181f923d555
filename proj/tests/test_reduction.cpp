#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mintime;
using namespace testing_support;

TEST(Reduction, WorkedExampleTrace) {
  const auto res = run_reduction(worked_example());
  ASSERT_TRUE(res.complete);
  ASSERT_EQ(res.trace.size(), 2u);
  EXPECT_EQ(res.trace[0].outcome, StepOutcome::untouched);

  const auto& step = res.trace[1];
  EXPECT_EQ(step.outcome, StepOutcome::independent);
  EXPECT_EQ(step.s, 1);
  ASSERT_EQ(step.a.size(), 2u);
  EXPECT_EQ(step.a[0], (std::vector<R>{-2}));
  EXPECT_EQ(step.a[1], (std::vector<R>{-1}));
  ASSERT_EQ(step.omegas.size(), 3u);
  EXPECT_EQ(step.omegas[1], (std::vector<R>{0, 1, -2}));
  EXPECT_EQ(step.omegas[2], (std::vector<R>{-2, R(149, 3), R(-305, 3)}));
  EXPECT_EQ(res.Q, (Matrix<R>{{0, 1, -2}, {-2, R(149, 3), R(-305, 3)}}));
}

TEST(Reduction, OmegaNextAgreesWithTrace) {
  const auto spec = worked_example();
  const auto m0 = diagonal_removal(spec, 5);
  const auto g = g_row_jets(spec, kernel_origin_jets(spec, m0, {}, 5));
  auto state = initial_state(spec, g);
  state.k = 1;
  const std::vector<std::vector<R>> a{{-2}, {-1}};
  EXPECT_EQ(omega_next(spec, state, 1, a, 1), (std::vector<R>{0, 1, -2}));
  EXPECT_EQ(omega_next(spec, state, 1, a, 2), (std::vector<R>{-2, R(149, 3), R(-305, 3)}));
}

TEST(Reduction, FloatBackendReproducesTrace) {
  const auto res = run_reduction(validate_spec(worked_example_raw().cast<double>()));
  ASSERT_TRUE(res.complete);
  EXPECT_EQ(res.trace[1].s, 1);
  EXPECT_NEAR(res.Q(1, 1), 149.0 / 3.0, 1e-9);
  EXPECT_NEAR(res.Q(1, 2), -305.0 / 3.0, 1e-9);
}

TEST(Reduction, NoCouplingLeavesIndependentRowsAlone) {
  Rng rng(59);
  for (int t = 0; t < 20; ++t) {
    const int m = 2 + t % 2, p = 2;
    SystemSpec<R> s;
    s.m = m;
    s.p = p;
    for (const R& v : random_constant_speeds(rng, m, p)) s.lambda.push_back(cst(v));
    s.M.assign(m + p, std::vector<Poly<R>>(m + p));
    s.Q = random_matrix(rng, p, m, 0.2);
    if (rank(s.Q) < p) continue;
    const auto res = run_reduction(validate_spec(s));
    EXPECT_TRUE(res.complete);
    EXPECT_EQ(res.Q, s.Q);
    for (const auto& st : res.trace) EXPECT_EQ(st.outcome, StepOutcome::untouched);
  }
}

TEST(Reduction, DependentRowWithoutCouplingIsExhausted) {
  SystemSpec<R> s;
  s.m = 2;
  s.p = 2;
  s.lambda = {cst(-2), cst(-1), cst(1), cst(2)};
  s.M.assign(4, std::vector<Poly<R>>(4));
  s.Q = Matrix<R>{{1, 1}, {2, 2}};
  const auto res = run_reduction(validate_spec(s));
  EXPECT_FALSE(res.complete);
  EXPECT_EQ(res.completed_rows, 1);
  EXPECT_EQ(res.trace.back().outcome, StepOutcome::exhausted);
  EXPECT_TRUE(res.decoupled_component);
}

TEST(Reduction, MaxOrderCapsBudget) {
  // The worked example needs one derivative of G; order zero is not enough.
  const auto res = run_reduction(worked_example(), ReductionOptions{0});
  EXPECT_FALSE(res.complete);
  EXPECT_EQ(res.completed_rows, 1);
  EXPECT_FALSE(res.decoupled_component);  // row 5 of M couples to the negative side
}

TEST(Reduction, DkMultipliesDerivativeBySpeed) {
  const auto spec = worked_example();
  const auto dk = make_dk(spec, 1, 3);  // lambda_5 = 2
  const std::vector<Jet<R>> row{Jet<R>(std::vector<R>{1, 2, 3, 4})};
  const auto out = apply_dk(dk, row);
  EXPECT_EQ(out[0], Jet<R>(std::vector<R>{4, 12, 24}));
  EXPECT_THROW(apply_dk(dk, std::vector<Jet<R>>{Jet<R>::constant(1, 0)}), Error);
}
