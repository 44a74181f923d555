#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mintime;
using namespace testing_support;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::ParseError;
}

}  // namespace

TEST(Validate, AcceptsWorkedExampleAndFillsRegularity) {
  const auto spec = worked_example();
  EXPECT_EQ(spec->n(), 5);
  EXPECT_EQ(spec->nmin(), 2);
  EXPECT_EQ(spec->r, 4);  // constant data: degree 0 plus four
}

TEST(Validate, ReportsEachFailureKind) {
  auto s = worked_example_raw();
  s.m = 0;
  EXPECT_EQ(kind_of([&] { validate_spec(s); }), ErrorKind::EmptySide);

  s = worked_example_raw();
  s.lambda.pop_back();
  EXPECT_EQ(kind_of([&] { validate_spec(s); }), ErrorKind::DimensionMismatch);

  s = worked_example_raw();
  s.Q = Matrix<R>(2, 2);
  EXPECT_EQ(kind_of([&] { validate_spec(s); }), ErrorKind::DimensionMismatch);

  s = worked_example_raw();
  s.M[2].pop_back();
  EXPECT_EQ(kind_of([&] { validate_spec(s); }), ErrorKind::DimensionMismatch);

  s = worked_example_raw();
  std::swap(s.lambda[3], s.lambda[4]);
  EXPECT_EQ(kind_of([&] { validate_spec(s); }), ErrorKind::SpeedOrderViolation);

  s = worked_example_raw();
  s.lambda[2] = cst(R(1, 2));  // last negative speed is positive
  EXPECT_EQ(kind_of([&] { validate_spec(s); }), ErrorKind::SpeedOrderViolation);
}

TEST(Validate, SpeedOrderCheckedOnWholeInterval) {
  // lambda_2 - lambda_1 = 1 - 3x/2 changes sign inside [0, 1].
  SystemSpec<R> s;
  s.m = 1;
  s.p = 2;
  s.lambda = {cst(-1), cst(1), poly({2, R(-3, 2)})};
  s.M.assign(3, std::vector<Poly<R>>(3));
  s.Q = Matrix<R>(2, 1);
  EXPECT_THROW(validate_spec(s), Error);
  // Quadratic dip that stays positive: 1 - x + x^2 > 0.
  s.lambda = {cst(-1), poly({R(1, 2)}), poly({R(3, 2), -1, 1})};
  EXPECT_NO_THROW(validate_spec(s));
  // Quadratic touching zero inside the interval: (x - 1/2)^2 for lambda_3 - lambda_2.
  s.lambda = {cst(-1), poly({R(1, 2)}), poly({R(3, 4), -1, 1})};
  EXPECT_THROW(validate_spec(s), Error);
}

TEST(Validate, FloatBackendUsesGrid) {
  auto s = worked_example_raw().cast<double>();
  EXPECT_NO_THROW(validate_spec(s));
  s.lambda[1] = Poly<double>(std::vector<double>{-0.4});
  EXPECT_THROW(validate_spec(s), Error);
}

TEST(MatrixOps, RankAndRowCombination) {
  const Matrix<R> q{{0, 1, -2}, {0, 2, -4}};
  EXPECT_EQ(rank(q), 1);
  const auto a = solve_row_combination(q.top_rows(1), q.row(1));
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ((*a)[0], R(2));
  EXPECT_FALSE(solve_row_combination(q.top_rows(1), std::vector<R>{1, 0, 0}).has_value());

  const Matrix<double> qd = q.cast<double>();
  EXPECT_EQ(rank(qd, 1e-9), 1);
  EXPECT_EQ(rank(Matrix<double>(2, 2), 1e-9), 0);
}

TEST(MatrixOps, RankMatchesDeterminantOnRandomSquares) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Matrix<R> a = random_matrix(rng, 2, 2, 0.4);
    const R det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const int expected = det != 0 ? 2 : (a.is_zero() ? 0 : 1);
    EXPECT_EQ(rank(a), expected);
    EXPECT_EQ(rank(a.cast<double>(), 1e-9), expected);
  }
}

TEST(MatrixOps, ProductsAndTranspose) {
  const Matrix<R> a{{1, 2}, {3, 4}};
  const Matrix<R> b{{0, 1}, {1, 0}};
  EXPECT_EQ(a * b, (Matrix<R>{{2, 1}, {4, 3}}));
  EXPECT_EQ(a.transpose(), (Matrix<R>{{1, 3}, {2, 4}}));
  EXPECT_EQ(row_times(std::vector<R>{1, 1}, a), (std::vector<R>{4, 6}));
  EXPECT_EQ(a * std::vector<R>({1, 1}), (std::vector<R>{3, 7}));
}

TEST(PolyOps, EvaluationDerivativeRemainder) {
  const Poly<R> p = poly({1, -3, 0, 2});  // 2x^3 - 3x + 1
  EXPECT_EQ(p(R(1, 2)), R(-1, 4));
  EXPECT_EQ(p.derivative(), poly({-3, 0, 6}));
  const Poly<R> d = poly({-1, 1});  // x - 1 divides p
  EXPECT_TRUE(poly_rem(p, d).is_zero());
  EXPECT_EQ(poly_rem(p, poly({0, 1})), cst(1));
  EXPECT_EQ(Poly<R>().degree(), -1);
}
