#include <gtest/gtest.h>

#include <random>

#include "cuemoments/exact_algebra.hpp"

using namespace cuem;

namespace {

Poly P(std::vector<long> c) {
  std::vector<Rational> r;
  for (long x : c) r.emplace_back(x);
  return Poly(r);
}

const Poly s = Poly::x();

Poly random_poly(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg), num(-9, 9), den(1, 5);
  std::vector<Rational> c(deg(rng) + 1);
  for (auto& x : c) x = ratio(num(rng), den(rng));
  return Poly(c);
}

bool canonical(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num() == q.get_num() && c.get_den() == q.get_den();
}

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(RationalTest, RatioIsCanonical) {
  Rational q = ratio(4, -6);
  EXPECT_TRUE(canonical(q));
  EXPECT_EQ(q, Rational(-2) / 3);
  EXPECT_EQ(to_string(q), "-2/3");
  EXPECT_EQ(to_string(Rational(5)), "5/1");
  EXPECT_EQ(parse_rational("6/4"), ratio(3, 2));
  EXPECT_EQ(parse_rational("-7"), -7);
  EXPECT_THROW(ratio(1, 0), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(RationalTest, FactorialBinomial) {
  EXPECT_EQ(factorial(5), 120);
  EXPECT_EQ(binomial(6, 2), 15);
  EXPECT_EQ(binomial(3, 5), 0);
}

TEST(PolyTest, TrimAndArithmetic) {
  EXPECT_TRUE(P({0, 0}).is_zero());
  EXPECT_EQ(P({1, 2, 0}).degree(), 1);
  EXPECT_EQ((s + P({1})) * (s - P({1})), P({-1, 0, 1}));
  EXPECT_EQ(P({1, 1}).pow(3), P({1, 3, 3, 1}));
  EXPECT_EQ(P({1, 2, 3}).derivative(), P({2, 6}));
  EXPECT_EQ(P({1, 1}).scale_arg(2), P({1, 2}));
  EXPECT_EQ(P({0, 1, 1}).compose(P({1, 1})), P({2, 3, 1}));
  EXPECT_EQ(P({2, 4}).monic(), P({1, 2}).monic());
  EXPECT_EQ(P({1, 2, 3}).eval(Rational(2)), 17);
}

TEST(PolyTest, DivmodAndGcd) {
  auto [q, r] = Poly::divmod(P({-1, 0, 1}), P({-1, 1}));
  EXPECT_EQ(q, P({1, 1}));
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(Poly::gcd(P({-1, 0, 1}), P({1, 2, 1})), P({1, 1}));
  EXPECT_TRUE(Poly::gcd(Poly(), Poly()).is_zero());
  EXPECT_THROW(Poly::exact_div(P({1, 0, 1}), P({1, 1})), Error);
}

TEST(RationalFunctionTest, Examples) {
  RationalFunction a(Poly(Rational(1)), P({-1, 2}));
  RationalFunction b(P({-1, 2}));
  EXPECT_EQ(a * b, RationalFunction(1));
  RationalFunction c(Poly(Rational(1)), P({1, 2}));
  EXPECT_EQ(a + c, RationalFunction(P({0, 4}), P({-1, 0, 4})));
  RationalFunction d(P({-1, 0, 1}), P({-1, 1}));
  EXPECT_EQ(d, RationalFunction(P({1, 1})));
  EXPECT_EQ(d.den(), P({1}));
}

TEST(RationalFunctionTest, Evaluation) {
  RationalFunction f(Poly(Rational(1)), P({-1, 0, 4}));
  EXPECT_EQ(f.eval(Rational(1)), ratio(1, 3));
  EXPECT_EQ(code_of([&] { f.eval(ratio(1, 2)); }), "pole-at-evaluation-point");
  RationalFunction g(P({-1, 2}), P({3, 2}));
  EXPECT_EQ(g.eval(Rational(2)), ratio(3, 7));
  EXPECT_DOUBLE_EQ(g.eval(2.0), 3.0 / 7.0);
}

TEST(RationalFunctionTest, DivisionByZero) {
  EXPECT_EQ(code_of([] { RationalFunction(1) / RationalFunction(); }), "division-by-zero-function");
  EXPECT_EQ(code_of([] { RationalFunction(P({1}), Poly()); }), "division-by-zero-function");
}

TEST(RationalFunctionTest, CanonicalFormIndependentOfFactorization) {
  // (s+1)(s-2) / ((2s-1)(s+1)) built two ways
  RationalFunction a(P({1, 1}) * P({-2, 1}), P({-1, 2}) * P({1, 1}));
  RationalFunction b = RationalFunction(P({-2, 1})) / RationalFunction(P({-1, 2}));
  RationalFunction c = RationalFunction(P({-2, 1}) * Rational(3)) / RationalFunction(P({-3, 6}));
  EXPECT_EQ(a, b);
  EXPECT_EQ(b, c);
  EXPECT_EQ(a.num().coeffs(), c.num().coeffs());
  EXPECT_EQ(a.den().leading(), 1);
  for (const auto& x : a.num().coeffs()) EXPECT_TRUE(canonical(x));
}

TEST(RationalFunctionTest, RandomizedMulDivRoundTrip) {
  std::mt19937 rng(12345);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    RationalFunction a(random_poly(rng, 3));
    Poly bd = random_poly(rng, 2);
    if (bd.is_zero()) continue;
    RationalFunction b(random_poly(rng, 3), bd);
    if (b.is_zero()) continue;
    EXPECT_EQ((a * b) / b, a);
    EXPECT_EQ((a + b) - b, a);
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(RationalFunctionTest, DerivativeAndIntegerForm) {
  RationalFunction f(Poly(Rational(1)), P({1, 1}));
  EXPECT_EQ(f.derivative(), RationalFunction(Poly(Rational(-1)), P({1, 2, 1})));
  RationalFunction g(P({1}) * ratio(1, 2), P({-1, 0, 4}));
  auto [num, den] = g.integer_form();
  EXPECT_EQ(num, (std::vector<Integer>{1}));
  EXPECT_EQ(den, (std::vector<Integer>{-2, 0, 8}));
}

TEST(RationalFunctionTest, JsonRoundTrip) {
  RationalFunction f(Poly(Rational(1)), P({-1, 0, 4}));
  nlohmann::json j = to_json(f);
  EXPECT_EQ(j["num"], nlohmann::json::array({"1"}));
  EXPECT_EQ(j["den"], nlohmann::json::array({"-1", "0", "4"}));
  EXPECT_EQ(ratfun_from_json(j), f);
  nlohmann::json zero = to_json(RationalFunction());
  EXPECT_EQ(zero["num"], nlohmann::json::array({"0"}));
  EXPECT_EQ(ratfun_from_json(zero), RationalFunction());
  EXPECT_EQ(to_json(ratio(-3, 4)), "-3/4");
  EXPECT_EQ(rational_from_json(to_json(ratio(-3, 4))), ratio(-3, 4));
}

TEST(SymPolyTest, BasicsAndParse) {
  SymPoly x1 = SymPoly::variable(2, 0), x2 = SymPoly::variable(2, 1);
  SymPoly p = (x1 + x2) * (x1 + x2);
  EXPECT_EQ(p.size(), 3u);
  EXPECT_EQ(p.coeff({1, 1}), 2);
  EXPECT_EQ(p, SymPoly::parse("x1^2 + 2*x1*x2 + x2^2", 2));
  EXPECT_EQ(SymPoly::parse("3/2*x1^2*x2 - x2 + 1", 2).coeff({2, 1}), ratio(3, 2));
  EXPECT_TRUE(p.is_symmetric());
  EXPECT_FALSE(x1.is_symmetric());
  EXPECT_EQ(p.total_degree(), 2);
  EXPECT_EQ(p.negated_args(), p);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_THROW(SymPoly::parse("x3", 2), Error);
  EXPECT_THROW(SymPoly(9), Error);
}

TEST(PowerSeriesTest, LogDerivExamples) {
  PowerSeries f(6);
  f[0] = 1;
  f[1] = 1;
  PowerSeries g = f.logderiv();
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(g[k], k % 2 ? 1 : -1);
  EXPECT_EQ(g[0], 0);
  EXPECT_TRUE(PowerSeries::constant(6, 1).logderiv().is_zero());
  PowerSeries h(4);
  h[0] = 1;
  h[2] = ratio(-1, 6);
  PowerSeries lh = h.logderiv();
  EXPECT_EQ(lh[2], ratio(-1, 3));
  EXPECT_EQ(lh[4], ratio(-1, 18));
  EXPECT_EQ(lh[1], 0);
  EXPECT_EQ(lh[3], 0);
  PowerSeries z(4);
  z[1] = 1;
  EXPECT_THROW(z.logderiv(), Error);
}

TEST(PowerSeriesTest, ExpLogRoundTrip) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    PowerSeries g(12);
    for (int k = 1; k <= 12; ++k) g[k] = ratio(num(rng), den(rng));
    PowerSeries one_plus_g = g + PowerSeries::constant(12, 1);
    EXPECT_EQ(one_plus_g.log().exp(), one_plus_g);
    EXPECT_EQ((one_plus_g * one_plus_g.inverse()), PowerSeries::constant(12, 1));
  }
}

TEST(ExpPolyTest, DerivativeCommutesWithSum) {
  ExpPolyFunction a(2, P({1, 3, 1})), b(2, P({0, -1, 0, 5}));
  EXPECT_EQ((a + b).derivative(), a.derivative() + b.derivative());
  EXPECT_EQ(a.derivative(), ExpPolyFunction(2, P({1, -4, -2})));
  EXPECT_EQ((a * b).decay(), 4);
  EXPECT_THROW(a + ExpPolyFunction(1, P({1})), Error);
  EXPECT_NEAR(a.eval(1.0), 5 * std::exp(-2.0), 1e-15);
}

TEST(DeterminantTest, RationalAndPolynomial) {
  EXPECT_EQ(determinant(std::vector<std::vector<Rational>>{{1, 2}, {3, 4}}), -2);
  std::vector<std::vector<Rational>> hilbert(4, std::vector<Rational>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) hilbert[i][j] = ratio(1, i + j + 1);
  EXPECT_EQ(determinant(hilbert), ratio(1, 6048000));
  std::vector<std::vector<Poly>> m{{s, P({1})}, {P({1}), s}};
  EXPECT_EQ(determinant(m), P({-1, 0, 1}));
}
