#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mintime;
using namespace testing_support;

namespace {

// Gauss-Jordan inverse written independently of the library solver.
Matrix<R> reference_inverse(Matrix<R> a) {
  const int n = a.rows();
  Matrix<R> inv = Matrix<R>::identity(n);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (a(piv, c) == 0) ++piv;
    for (int j = 0; j < n; ++j) {
      std::swap(a(c, j), a(piv, j));
      std::swap(inv(c, j), inv(piv, j));
    }
    const R d = a(c, c);
    for (int j = 0; j < n; ++j) {
      a(c, j) /= d;
      inv(c, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      const R f = a(r, c);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

struct ExampleJets {
  KernelOriginJets<R> k;
  GRowJets<R> g;
};

ExampleJets example_jets(int order) {
  const auto spec = worked_example();
  const auto m0 = diagonal_removal(spec, order);
  auto k = kernel_origin_jets(spec, m0, {}, order);
  auto g = g_row_jets(spec, k);
  return {k, g};
}

}  // namespace

TEST(JMatrix, ClosedFormInverseMatchesGaussJordan) {
  Rng rng(43);
  for (int t = 0; t < 40; ++t) {
    const int N = 1 + t % 6;
    const R la = random_nonzero(rng, 5, 3);
    R lb = random_nonzero(rng, 5, 3);
    const bool same = t % 4 == 0;
    if (!same && lb == la) lb += 1;
    const Matrix<R> J = j_matrix(N, la, lb, same);
    EXPECT_EQ(j_matrix_inverse(N, la, lb, same), reference_inverse(J)) << "N = " << N;
    EXPECT_EQ(J * j_matrix_inverse(N, la, lb, same), Matrix<R>::identity(N + 1));
  }
}

TEST(JMatrix, SameIndexOrderOne) {
  // J = [[c, c], [1, 0]] has inverse [[0, 1], [1/c, -1]].
  const R c(3);
  EXPECT_EQ(j_matrix_inverse(1, c, c, true), (Matrix<R>{{0, 1}, {R(1, 3), -1}}));
}

TEST(JMatrix, FloatInverse) {
  const Matrix<double> inv = j_matrix_inverse(4, 1.5, -0.75, false);
  const Matrix<double> prod = j_matrix(4, 1.5, -0.75, false) * inv;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(prod(i, j), i == j ? 1.0 : 0.0, 1e-12);
  EXPECT_THROW(j_matrix(2, 1.0, 1.0, false), Error);
}

TEST(KernelJets, WorkedExampleOriginValues) {
  const auto [k, g] = example_jets(2);
  EXPECT_EQ(k.row(3).levels[0], (Matrix<R>{{1, 1, R(2, 3), 0, 0}}));
  EXPECT_EQ(k.row(4).levels[0], (Matrix<R>{{2, 3, R(-8, 3), 0, 0}}));
  EXPECT_EQ(k.row(4).levels[1].row(0), (std::vector<R>{0, 0, 0, 0, 0}));
  EXPECT_EQ(k.row(3).levels[1].row(0), (std::vector<R>{0, 0, 0, 0, R(19, 3)}));

  auto g_at = [&](int j, int l) {
    std::vector<R> v;
    for (const auto& e : g.rows[j]) v.push_back(e[l]);
    return v;
  };
  EXPECT_EQ(g_at(0, 0), (std::vector<R>{2, 1, R(1, 3)}));
  EXPECT_EQ(g_at(1, 0), (std::vector<R>{4, 3, R(-4, 3)}));
  EXPECT_EQ(g_at(0, 1), (std::vector<R>{0, R(-76, 3), R(152, 3)}));
}

TEST(KernelJets, OriginValueIsCouplingOverSpeedGap) {
  Rng rng(47);
  for (int t = 0; t < 50; ++t) {
    const int m = 1 + t % 3, p = 1 + (t / 3) % 3, n = m + p;
    SystemSpec<R> s;
    s.m = m;
    s.p = p;
    s.lambda = random_poly_speeds(rng, m, p, t % 2);
    s.M.assign(n, std::vector<Poly<R>>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s.M[a][b] = poly({random_rational(rng, 3), random_rational(rng, 2)});
    s.Q = random_matrix(rng, p, m);
    const auto spec = validate_spec(s);
    const auto m0 = diagonal_removal(spec, 1);
    const auto k = kernel_origin_jets(spec, m0, {}, 1);
    for (int a = m; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const R expected = s.M[a][b].coeff(0) / (s.lambda[a].coeff(0) - s.lambda[b].coeff(0));
        EXPECT_EQ(k.row(a).levels[0](0, b), expected);
      }
  }
}

TEST(KernelJets, ConstantShortcutMatchesGeneralRecursion) {
  Rng rng(53);
  for (int t = 0; t < 20; ++t) {
    const int m = 1 + t % 3, p = 1 + (t / 3) % 3, n = m + p;
    SystemSpec<R> s;
    s.m = m;
    s.p = p;
    for (const R& v : random_constant_speeds(rng, m, p)) s.lambda.push_back(cst(v));
    s.M.assign(n, std::vector<Poly<R>>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) s.M[a][b] = cst(random_rational(rng, 3, 2));
    s.Q = random_matrix(rng, p, m);
    const auto spec = validate_spec(s);
    const int order = 4;
    const auto m0 = diagonal_removal(spec, order);
    const auto general = kernel_origin_jets(spec, m0, {}, order);
    for (int a = m; a < n; ++a) {
      const auto fast = kernel_row_jets_constant(spec, m0, a, order);
      ASSERT_EQ(fast.levels.size(), general.row(a).levels.size());
      for (std::size_t N = 0; N < fast.levels.size(); ++N) EXPECT_EQ(fast.levels[N], general.row(a).levels[N]);
    }
  }
}

TEST(KernelJets, OrderBeyondRegularityIsRejected) {
  const auto spec = worked_example();
  const auto m0 = diagonal_removal(spec, 8);
  try {
    kernel_origin_jets(spec, m0, {}, 6);
    FAIL() << "expected OrderExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderExceeded);
  }
}

TEST(KernelJets, DiagonalRemovalClearsDiagonal) {
  auto s = worked_example_raw();
  s.M[0][0] = poly({1, 2});
  s.M[3][3] = cst(-3);
  const auto spec = validate_spec(s);
  const auto m0 = diagonal_removal(spec, 4);
  for (int a = 0; a < 5; ++a) EXPECT_TRUE(m0.entries[a][a].is_zero());
  // D_4 = exp(3x) for lambda_4 = 1 and m_44 = -3.
  EXPECT_EQ(m0.gauge[3][1], R(3));
  EXPECT_EQ(m0.gauge[3][2], R(9, 2));
}
