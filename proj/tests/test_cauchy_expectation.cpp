#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include "cuemoments/cauchy_expectation.hpp"
#include "cuemoments/symmetric_expansion.hpp"

using namespace cuem;

namespace {

Poly P(std::vector<long> c) {
  std::vector<Rational> r;
  for (long x : c) r.emplace_back(x);
  return Poly(r);
}

RationalFunction inv(const Poly& p) { return RationalFunction(Poly(Rational(1)), p); }

// Oracle: collect P * Delta^2 monomial by monomial against the one-dimensional moments.
RationalFunction hp_by_monomials(const SymPoly& Pm, int m) {
  SymPoly V = vandermonde_squared(m);
  auto integrate = [&](const SymPoly& Q) {
    RationalFunction total;
    for (const auto& [key, c] : Q.terms()) {
      RationalFunction term(c);
      for (int e : SymPoly::exponents(key, m)) term *= weight_moment(e, m);
      total += term;
    }
    return total;
  };
  return integrate(Pm * V) / integrate(V);
}

MomentSpec spec(std::vector<int> orders, std::vector<long> exps, Variant v, std::optional<int> N) {
  MomentSpec sp;
  sp.orders = std::move(orders);
  for (long e : exps) sp.exponents.emplace_back(e);
  sp.variant = v;
  sp.N = N;
  return sp;
}

// Denominator splits into linear factors 2s - k with integer k.
bool half_integer_linear_den(const RationalFunction& f) {
  Poly d = f.den();
  for (int k = -60; k <= 60 && d.degree() > 0; ++k) {
    Poly lin = P({-k, 2});
    while (d.degree() > 0) {
      auto [q, r] = Poly::divmod(d, lin);
      if (!r.is_zero()) break;
      d = q;
    }
  }
  return d.degree() == 0;
}

// Oracle: the unitary-group side. Haar eigenangle average with the |V(0)|^{2s} weight, computed
// by the trapezoid rule, which is exact for these trigonometric polynomials.
double haar_ratio(int N, int s, const std::vector<int>& orders, const std::vector<int>& exps, Variant variant,
                  int M = 32) {
  using C = std::complex<double>;
  const double two_pi = 2 * std::numbers::pi;
  std::vector<int> idx(N, 0);
  double num = 0, den = 0;
  int weight_left = 2 * s;
  for (int e : exps) weight_left -= e;
  while (true) {
    std::vector<C> a(N);
    for (int j = 0; j < N; ++j) a[j] = std::polar(1.0, two_pi * (idx[j] + 0.5) / M);
    // V(u) = sum_k c_k e^{-iku}, c_k = (-1)^k e_k(a)
    std::vector<C> c{C(1)};
    for (int j = 0; j < N; ++j) {
      std::vector<C> next(c.size() + 1, C(0));
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k] += c[k];
        next[k + 1] -= c[k] * a[j];
      }
      c = next;
    }
    auto deriv = [&](int n) {
      C total(0);
      for (int k = 0; k <= N; ++k) {
        // V: (-ik)^n; Z up to a unimodular factor: (i(N/2 - k))^n
        C w = variant == Variant::V ? C(0, -k) : C(0, N / 2.0 - k);
        total += c[k] * std::pow(w, n);
      }
      return total;
    };
    double vand = 1;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) vand *= std::norm(a[i] - a[j]);
    double v0 = std::abs(deriv(0));
    double integrand = std::pow(v0, weight_left) * vand;
    for (std::size_t j = 0; j < orders.size(); ++j) integrand *= std::pow(std::abs(deriv(orders[j])), exps[j]);
    num += integrand;
    den += std::pow(v0, 2 * s) * vand;
    int d = 0;
    while (d < N && ++idx[d] == M) idx[d++] = 0;
    if (d == N) break;
  }
  return num / den;
}

}  // namespace

TEST(WeightMoment, Examples) {
  EXPECT_TRUE(weight_moment(1, 1).is_zero());
  EXPECT_EQ(weight_moment(0, 3), RationalFunction(1));
  EXPECT_EQ(weight_moment(2, 1), inv(P({-1, 2})));
  EXPECT_EQ(weight_moment(4, 1), RationalFunction(P({3})) / RationalFunction(P({-1, 2}) * P({-3, 2})));
  EXPECT_EQ(weight_moment_valid_above(2, 1), ratio(1, 2));
}

// Oracle: quadrature after x = tan(theta), which maps the line onto a bounded interval.
TEST(WeightMoment, MatchesNumericalIntegral) {
  const double s = 2.7;
  const int n = 400000;
  const double h = std::numbers::pi / n;
  for (int m = 1; m <= 3; ++m)
    for (int r = 0; r <= 4; r += 2) {
      double num = 0, den = 0;
      for (int i = 0; i < n; ++i) {
        double th = -std::numbers::pi / 2 + (i + 0.5) * h;
        double w = std::pow(std::cos(th), 2 * (s + m) - 2);
        num += std::pow(std::tan(th), r) * w;
        den += w;
      }
      EXPECT_NEAR(weight_moment(r, m).eval(s), num / den, 1e-8) << r << " " << m;
    }
}

TEST(HpExpectation, Examples) {
  EXPECT_EQ(hp_expectation(SymPoly::constant(3, 1)), RationalFunction(1));
  EXPECT_EQ(hp_expectation(SymPoly::parse("x1^2", 1)), inv(P({-1, 2})));
  EXPECT_EQ(hp_expectation(SymPoly::parse("x1^2+2*x1*x2+x2^2", 2)).eval(Rational(2)), ratio(4, 5));
  EXPECT_THROW(hp_expectation(SymPoly::constant(8, 1)), Error);
}

TEST(HpExpectation, MatchesMonomialCollection) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> coef(-3, 3), ex(0, 3);
  for (int m = 1; m <= 4; ++m)
    for (int trial = 0; trial < 6; ++trial) {
      SymPoly Q(m);
      for (int t = 0; t < 4; ++t) {
        std::vector<int> e(m);
        for (auto& v : e) v = ex(rng);
        Q += SymPoly::monomial(m, e, Rational(coef(rng)));
      }
      EXPECT_EQ(hp_expectation(Q), hp_by_monomials(Q, m)) << m << " " << Q.to_string();
    }
}

TEST(HpExpectation, ParityAndLinearity) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> coef(-4, 4), ex(0, 3);
  for (int m = 1; m <= 3; ++m)
    for (int trial = 0; trial < 10; ++trial) {
      SymPoly A(m), B(m);
      for (int t = 0; t < 3; ++t) {
        std::vector<int> e(m), f(m);
        for (auto& v : e) v = ex(rng);
        for (auto& v : f) v = ex(rng);
        A += SymPoly::monomial(m, e, Rational(coef(rng)));
        B += SymPoly::monomial(m, f, Rational(coef(rng)));
      }
      EXPECT_EQ(hp_expectation(A), hp_expectation(A.negated_args()));
      EXPECT_EQ(hp_expectation(A * Rational(3) - B), hp_expectation(A) * RationalFunction(3) - hp_expectation(B));
    }
}

TEST(LimitingMoment, FirstOrder) {
  RationalFunction f = limiting_moment({1}, {2});
  EXPECT_EQ(f, inv(P({-1, 0, 4})));
  EXPECT_EQ(f.eval(Rational(1)), ratio(1, 3));
  EXPECT_EQ(f, oracle_second_moment_Y(1));
}

TEST(LimitingMoment, MatchesSecondMomentOracle) {
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(limiting_moment({n}, {2}), oracle_second_moment_Y(n)) << n;
  EXPECT_EQ(oracle_second_moment_Y(1).eval(Rational(1)), ratio(1, 3));
}

// Oracle: the finite alternating sum written out with monomial-collection expectations, starting
// at m = 1 (the extra terms vanish because e_2 is zero at arity 1).
TEST(LimitingMoment, SumFormulaFromArityOne) {
  const int L = 4;
  RationalFunction total;
  for (int m = 1; m <= L; ++m) {
    RationalFunction term = hp_by_monomials(elementary(2, m).pow(2), m) * RationalFunction(binomial(L, m));
    total += (m + L) % 2 ? -term : term;
  }
  total *= RationalFunction(Rational(4) / factorial(L));
  EXPECT_EQ(total, limiting_moment({2}, {2}));
  EXPECT_EQ(limiting_moment({2}, {2}), inv(P({-1, 2}) * P({3, 2})));
}

TEST(LimitingMoment, ArityBoundAndSpecErrors) {
  EXPECT_THROW(limiting_moment({4}, {2}), Error);
  EXPECT_THROW(limiting_moment({1}, {3}), Error);
  EXPECT_NO_THROW(limiting_moment({2, 1}, {2, 2}));
  EXPECT_THROW(limiting_moment({3, 1}, {2, 2}), Error);  // L = 8
}

TEST(LimitingMoment, DenominatorsAreHalfIntegerLinear) {
  for (int n = 1; n <= 3; ++n) {
    EXPECT_TRUE(half_integer_linear_den(limiting_moment({n}, {2})));
    EXPECT_TRUE(half_integer_linear_den(limiting_moment_V({n}, {2})));
  }
  EXPECT_TRUE(half_integer_linear_den(limiting_moment({2, 1}, {2, 2})));
  EXPECT_TRUE(half_integer_linear_den(limiting_moment({1}, {4})));
}

TEST(LimitingMomentV, MatchesOracle) {
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(limiting_moment_V({n}, {2}), oracle_second_moment_V(n)) << n;
}

TEST(OracleV, Values) {
  // 4s^2/(4s^2-1) at n = 1
  EXPECT_EQ(oracle_second_moment_V(1).eval(Rational(2)), ratio(16, 15));
  EXPECT_EQ(oracle_second_moment_V(2).eval(Rational(1)), ratio(16, 5));
  EXPECT_EQ(oracle_second_moment_V(0), RationalFunction(1));
  EXPECT_EQ(leading_coefficient(spec({1}, {2}, Variant::V, std::nullopt)).eval(Rational(2)), ratio(4, 15));
}

TEST(FiniteJointMoment, SecondDerivativeAtNOne) {
  EXPECT_EQ(finite_joint_moment(spec({2, 0}, {2, 0}, Variant::Z, 1)), RationalFunction(ratio(1, 16)));
  EXPECT_EQ(oracle_finiteN_F20(1), RationalFunction(ratio(1, 16)));
  EXPECT_EQ(finite_joint_moment(spec({0}, {4}, Variant::Z, 3)), RationalFunction(1));
}

TEST(FiniteJointMoment, MatchesClosedFormForNUpToSix) {
  for (int N = 1; N <= 6; ++N)
    EXPECT_EQ(finite_joint_moment(spec({2, 0}, {2, 0}, Variant::Z, N)), oracle_finiteN_F20(N)) << N;
  EXPECT_EQ(oracle_finiteN_F20(2).eval(Rational(2)), ratio(2, 5));
}

TEST(FiniteJointMoment, Errors) {
  EXPECT_THROW(finite_joint_moment(spec({1}, {3}, Variant::Z, 2)), Error);
  EXPECT_THROW(finite_joint_moment(spec({1}, {2}, Variant::Z, 8)), Error);
  EXPECT_THROW(finite_joint_moment(spec({1}, {2}, Variant::Z, std::nullopt)), Error);
  EXPECT_THROW(finite_joint_moment(spec({1, 2}, {2, 2}, Variant::Z, 2)), Error);
  EXPECT_THROW(finite_joint_moment(spec({1}, {0}, Variant::Z, 2)), Error);
}

// Oracle: Haar average over the unitary group in eigenangles.
TEST(FiniteJointMoment, MatchesUnitaryGroupAverage) {
  struct Case {
    std::vector<int> orders, exps;
  };
  const std::vector<Case> cases{{{1}, {2}}, {{2}, {2}}, {{2, 1}, {2, 2}}, {{1}, {4}}};
  for (Variant v : {Variant::Z, Variant::V})
    for (int N = 1; N <= 3; ++N)
      for (int s = 1; s <= 3; ++s)
        for (const auto& c : cases) {
          int h = 0;
          for (int e : c.exps) h += e / 2;
          if (h > s) continue;
          std::vector<int> o = c.orders, e = c.exps;
          o.push_back(0);
          e.push_back(2 * (s - h));
          MomentSpec sp;
          sp.orders = o;
          for (int x : e) sp.exponents.emplace_back(x);
          sp.variant = v;
          sp.N = N;
          double exact = finite_joint_moment(sp).eval(double(s));
          // 2^{-sum 2h n} cancels the 2^n in Xi_n = 2^n Z^{(n)}(0)/Z(0)
          double haar = haar_ratio(N, s, c.orders, c.exps, v);
          EXPECT_NEAR(exact, haar, 1e-10 * std::max(1.0, std::abs(haar)))
              << (v == Variant::Z ? "Z" : "V") << " N=" << N << " s=" << s << " orders=" << c.orders[0];
        }
}

TEST(FiniteScaledMoment, AsymptoticsExamples) {
  EXPECT_EQ(finite_scaled_moment(spec({2}, {2}, Variant::Z, 1)).eval(Rational(2)), ratio(1, 16));
  EXPECT_EQ(finite_scaled_moment(spec({2}, {2}, Variant::Z, 2)).eval(Rational(2)), ratio(1, 40));
  EXPECT_EQ(leading_coefficient(spec({1}, {2}, Variant::Z, std::nullopt)).eval(Rational(2)), ratio(1, 60));
}

// The N^4 coefficient of the closed form equals 2^{-4} E[Y_2^2], fixing the normalization of Y_n.
TEST(FiniteScaledMoment, LargeNLimitOfClosedForm) {
  RationalFunction lim = leading_coefficient(spec({2}, {2}, Variant::Z, std::nullopt));
  for (Rational s : {Rational(1), Rational(2), ratio(7, 2)}) {
    std::vector<double> err;
    for (int N : {100, 1000, 10000}) {
      double v = oracle_finiteN_F20(N).eval(s.get_d()) / std::pow(double(N), 4);
      err.push_back(std::abs(v / lim.eval(s.get_d()) - 1));
    }
    // relative error is O(1/N)
    EXPECT_LT(err[1], 0.15 * err[0]);
    EXPECT_LT(err[2], 0.15 * err[1]);
    EXPECT_LT(err[2], 1e-2);
  }
}

TEST(CauchyDeterminant, ProductFormulaMatchesDirect) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(0, 9);
  for (int n = 1; n <= 4; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Rational> p(n), q(n);
      for (auto& v : p) v = d(rng);
      for (auto& v : q) v = ratio(d(rng), 2);
      std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M[i][j] = 1 / (p[i] + q[j] + 1);
      EXPECT_EQ(cauchy_determinant(p, q), determinant(M));
    }
}

TEST(CauchyDeterminant, LeadingCoefficient) {
  EXPECT_EQ(cauchy_det_leading_coeff(0, 0, 1), 1);
  for (int s = 1; s <= 4; ++s) {
    EXPECT_EQ(cauchy_det_leading_coeff(0, 0, s), keating_snaith_constant_exact(s));
    for (int n = 1; n <= 3; ++n) {
      Rational ratio_nn = cauchy_det_leading_coeff(n, n, s) / cauchy_det_leading_coeff(0, 0, s);
      Rational expect = oracle_second_moment_V(n).eval(Rational(s)) / Rational(Integer(1) << (2 * n));
      EXPECT_EQ(ratio_nn, expect) << s << " " << n;
    }
  }
}

TEST(KeatingSnaith, Values) {
  EXPECT_EQ(keating_snaith_constant_exact(1), 1);
  EXPECT_EQ(keating_snaith_constant_exact(2), ratio(1, 12));
  EXPECT_DOUBLE_EQ(keating_snaith_constant(2.0), 1.0 / 12);
  double half = keating_snaith_constant(0.5);
  EXPECT_GT(half, 0);
  // G(3/2)^2 / G(2), reference value from an independent arbitrary-precision Barnes G
  EXPECT_NEAR(half, 1.14323707370429, 1e-12);
  EXPECT_THROW(keating_snaith_constant(-1.0), Error);
}
