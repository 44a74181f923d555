#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mintime;
using namespace testing_support;

TEST(ParseRational, FractionsDecimalsAndExponents) {
  EXPECT_EQ(parse_rational("19/3"), R(19, 3));
  EXPECT_EQ(parse_rational("-20/3"), R(-20, 3));
  EXPECT_EQ(parse_rational("0.1"), R(1, 10));
  EXPECT_EQ(parse_rational("-1.25"), R(-5, 4));
  EXPECT_EQ(parse_rational("3e-2"), R(3, 100));
  EXPECT_EQ(parse_rational("2.5E1"), R(25));
  EXPECT_EQ(parse_rational(" 7 "), R(7));
  EXPECT_EQ(parse_rational("1.5/0.5"), R(3));
}

TEST(ParseRational, RejectsMalformedInput) {
  for (const char* bad : {"", "abc", "1/0", "1..2", "--1", "1e", "/3"}) {
    EXPECT_THROW(parse_rational(bad), Error) << bad;
  }
}

TEST(Scalar, RationalPrintsAsFraction) {
  EXPECT_EQ(to_string(R(19, 3)), "19/3");
  EXPECT_EQ(to_string(R(-4)), "-4");
}

TEST(Scalar, BinomialAndFactorial) {
  EXPECT_EQ(factorial<R>(6), R(720));
  EXPECT_EQ(binomial<R>(6, 2), R(15));
  EXPECT_EQ(binomial<R>(6, 7), R(0));
  EXPECT_DOUBLE_EQ(binomial<double>(10, 5), 252.0);
  for (int n = 1; n < 12; ++n)
    for (int k = 1; k < n; ++k) EXPECT_EQ(binomial<R>(n, k), binomial<R>(n - 1, k - 1) + binomial<R>(n - 1, k));
}

namespace {

Jet<R> random_jet(Rng& rng, int order, bool zero_constant = false) {
  Jet<R> j = Jet<R>::zero(order);
  for (int l = 0; l <= order; ++l) j[l] = random_rational(rng, 5, 4);
  if (zero_constant) j[0] = 0;
  return j;
}

}  // namespace

TEST(JetRing, AxiomsOnRandomJets) {
  Rng rng(101);
  std::uniform_int_distribution<int> ord(0, 6);
  for (int t = 0; t < 200; ++t) {
    const int k = ord(rng);
    const Jet<R> a = random_jet(rng, k), b = random_jet(rng, k), c = random_jet(rng, k);
    const Jet<R> one = Jet<R>::constant(1, k);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * one, a);
    EXPECT_EQ(a + Jet<R>::zero(k), a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(JetRing, ProductMatchesPolynomialProduct) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Poly<R> p = poly({random_rational(rng, 3), random_rational(rng, 3), random_rational(rng, 3)});
    const Poly<R> q = poly({random_rational(rng, 3), random_rational(rng, 3)});
    EXPECT_EQ(jet_mul(p.jet(5), q.jet(5)), (p * q).jet(5));
  }
}

TEST(JetOps, DivisionInvertsMultiplication) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const Jet<R> a = random_jet(rng, 5);
    Jet<R> b = random_jet(rng, 5);
    if (b[0] == 0) b[0] = 1;
    EXPECT_EQ(jet_mul(jet_div(a, b), b), a);
  }
  EXPECT_THROW(jet_div(Jet<R>::constant(1, 2), Jet<R>::identity(2)), Error);
}

TEST(JetOps, CompositionMatchesSubstitution) {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const Poly<R> f = poly({random_rational(rng, 3), random_rational(rng, 3), random_rational(rng, 3)});
    const Poly<R> g = poly({0, random_rational(rng, 3), random_rational(rng, 3)});
    // f(g(x)) by Horner over polynomials, then truncated.
    Poly<R> fog;
    for (int l = f.degree(); l >= 0; --l) fog = fog * g + Poly<R>::constant(f.coeff(l));
    EXPECT_EQ(jet_compose(f.jet(6), g.jet(6)), fog.jet(6));
  }
  EXPECT_THROW(jet_compose(Jet<R>::identity(2), Jet<R>::constant(1, 2)), Error);
}

TEST(JetOps, DeriveAndIntegrate) {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const Jet<R> a = random_jet(rng, 5);
    const Jet<R> d = jet_derive(a);
    EXPECT_EQ(d.order(), 4);
    for (int l = 0; l < 5; ++l) EXPECT_EQ(d[l], a[l + 1] * R(l + 1));
    Jet<R> back = jet_integrate(d);
    back[0] = a[0];
    EXPECT_EQ(back, a);
  }
}

TEST(JetOps, ExponentialSatisfiesItsOde) {
  Rng rng(19);
  for (int t = 0; t < 50; ++t) {
    const Jet<R> a = random_jet(rng, 6, true);
    const Jet<R> e = jet_exp(a);
    EXPECT_EQ(e[0], R(1));
    // e' = a' e, truncated to the order of the derivative.
    EXPECT_EQ(jet_derive(e), jet_mul(jet_derive(a), e.truncate(5)));
  }
  EXPECT_THROW(jet_exp(Jet<R>::constant(1, 3)), Error);
}

TEST(JetOps, ExponentialOfLinearIsTaylorSeries) {
  const Jet<R> e = jet_exp(Jet<R>::identity(6) * R(2));
  for (int l = 0; l <= 6; ++l) {
    R expected = 1;
    for (int i = 1; i <= l; ++i) expected *= R(2, i);
    EXPECT_EQ(e[l], expected);
  }
}

TEST(JetOps, FloatingBackendAgreesWithExact) {
  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const Jet<R> a = random_jet(rng, 5), b = random_jet(rng, 5, true);
    std::vector<double> ad, bd;
    for (int l = 0; l <= 5; ++l) {
      ad.push_back(a[l].convert_to<double>());
      bd.push_back(b[l].convert_to<double>());
    }
    const Jet<double> c = jet_compose(Jet<double>(ad), Jet<double>(bd));
    const Jet<R> ce = jet_compose(a, b);
    for (int l = 0; l <= 5; ++l) EXPECT_NEAR(c[l], ce[l].convert_to<double>(), 1e-9 * (1 + std::abs(c[l])));
  }
}
