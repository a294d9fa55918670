#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cuemoments/monte_carlo.hpp"
#include "cuemoments/symmetric_expansion.hpp"

using namespace cuem;

namespace {

MomentSpec spec(std::vector<int> orders, std::vector<double> exps, Variant v, int N) {
  MomentSpec sp;
  sp.orders = std::move(orders);
  for (double e : exps) sp.exponents.emplace_back(e);
  sp.variant = v;
  sp.N = N;
  return sp;
}

ChainConfig config(int N, double s, std::uint64_t seed) {
  ChainConfig c;
  c.N = N;
  c.s = s;
  c.seed = seed;
  return c;
}

// Monomial symmetric polynomial m_lambda in N variables.
SymPoly monomial_symmetric(const std::vector<int>& lambda, int N) {
  std::vector<int> e(N, 0);
  for (std::size_t i = 0; i < lambda.size(); ++i) e[i] = lambda[i];
  std::sort(e.begin(), e.end());
  SymPoly p(N);
  do p += SymPoly::monomial(N, e, Rational(1));
  while (std::next_permutation(e.begin(), e.end()));
  return p;
}

void partitions(int n, int max_part, int max_len, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  if (static_cast<int>(cur.size()) == max_len) return;
  for (int k = std::min(n, max_part); k >= 1; --k) {
    cur.push_back(k);
    partitions(n - k, k, max_len, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TEST(Rng, SplitMixReferenceVector) {
  // first outputs of the reference SplitMix64 generator seeded with 0
  EXPECT_EQ(splitmix64_at(0, 0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64_at(0, 1), 0x6E789E6AA1B965F4ULL);
  CounterRng r(0);
  EXPECT_EQ(r.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(r.counter(), 1u);
}

TEST(Rng, UniformAndCauchyRanges) {
  CounterRng r(42);
  int below_zero = 0;
  for (int i = 0; i < 20000; ++i) {
    double u = r.uniform();
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
    below_zero += r.cauchy() < 0;
  }
  EXPECT_NEAR(below_zero / 20000.0, 0.5, 0.02);
}

TEST(Sampler, ConfigValidation) {
  ChainConfig c;
  c.chains = 0;
  EXPECT_THROW(c.validate(), Error);
  c = ChainConfig();
  c.proposal_scale = 0;
  EXPECT_THROW(c.validate(), Error);
  c = ChainConfig();
  c.s = -1;
  EXPECT_THROW(sample_hp(c), Error);
}

TEST(Sampler, DeterministicUnderSeed) {
  ChainConfig c = config(2, 1.5, 99);
  c.samples = 2000;
  SampleBatch a = sample_hp(c), b = sample_hp(c);
  EXPECT_EQ(a.draws, b.draws);
  c.seed = 100;
  EXPECT_NE(sample_hp(c).draws, a.draws);
  EXPECT_EQ(a.size(), static_cast<std::size_t>(c.chains * c.samples));
  for (double x : a.draws) EXPECT_TRUE(std::isfinite(x));
  EXPECT_GT(a.acceptance_rate, 0.05);
  EXPECT_LT(a.acceptance_rate, 0.95);
  EXPECT_FALSE(a.flagged);
}

TEST(Sampler, SecondMomentNOne) {
  SampleBatch b = sample_hp(config(1, 2, 1));
  Estimate e = estimate_statistic(b, [](const double* x) { return x[0] * x[0]; });
  EXPECT_NEAR(e.estimate, 1.0 / 3, 4 * e.stderr_);
  EXPECT_EQ(e.blocks, 25);
}

TEST(Sampler, SumSquaredNTwo) {
  SampleBatch b = sample_hp(config(2, 2, 2));
  Estimate e = estimate_statistic(b, [](const double* x) { return (x[0] + x[1]) * (x[0] + x[1]); });
  double exact = hp_expectation(SymPoly::parse("x1^2 + 2*x1*x2 + x2^2", 2)).eval(2.0);
  EXPECT_DOUBLE_EQ(exact, 0.8);
  EXPECT_NEAR(e.estimate, exact, 4 * e.stderr_);
}

TEST(Sampler, OddStatisticIsCentered) {
  SampleBatch b = sample_hp(config(3, 2.5, 3));
  Estimate e = estimate_statistic(b, [](const double* x) { return x[0] + x[1] + x[2]; });
  EXPECT_LE(std::fabs(e.estimate), 4 * e.stderr_);
}

TEST(Estimator, ConstantIntegrand) {
  SampleBatch b = sample_hp(config(2, 1, 4));
  Estimate e = estimate_joint_moment(b, spec({0}, {3.7}, Variant::Z, 2));
  EXPECT_EQ(e.estimate, 1.0);
  EXPECT_EQ(e.stderr_, 0.0);
}

TEST(Estimator, TooFewSamples) {
  ChainConfig c = config(1, 2, 5);
  c.chains = 1;
  c.samples = 10;
  SampleBatch b = sample_hp(c);
  EXPECT_THROW(estimate_statistic(b, [](const double* x) { return x[0]; }), Error);
  EXPECT_THROW(estimate_joint_moment(sample_hp(config(2, 2, 5)), spec({1}, {2}, Variant::Z, 3)), Error);
}

TEST(Estimator, SecondDerivativeNTwo) {
  SampleBatch b = sample_hp(config(2, 2, 6));
  MomentSpec sp = spec({2, 0}, {2, 0}, Variant::Z, 2);
  Estimate e = estimate_joint_moment(b, sp);
  double exact = finite_joint_moment(sp).eval(2.0);
  EXPECT_DOUBLE_EQ(exact, 0.4);
  EXPECT_NEAR(e.estimate, exact, 4 * e.stderr_);
}

// Oracle: int |x| (1+x^2)^{-3} dx = 1/2 and int (1+x^2)^{-3} dx = 3 pi / 8.
TEST(Estimator, NonIntegerExponent) {
  MomentSpec sp = spec({1}, {1.0}, Variant::Z, 1);
  double closed = 0.5 * (0.5 / (3 * std::numbers::pi / 8));  // 2^{-1} E|Xi_1|, Xi_1 = -x
  QuadratureResult q =
      quadrature_expectation(1, 2.0, [&](const std::vector<double>& x) { return joint_moment_integrand(sp, 1, x.data()); });
  EXPECT_NEAR(q.value, closed, 1e-10);
  SampleBatch b = sample_hp(config(1, 2, 7));
  Estimate e = estimate_joint_moment(b, sp);
  EXPECT_NEAR(e.estimate, closed, 3 * e.stderr_);
}

TEST(Estimator, IntegrandMatchesExactPolynomials) {
  std::vector<double> x{0.3, -1.7, 2.2};
  std::vector<Rational> xr{ratio(3, 10), ratio(-17, 10), ratio(22, 10)};
  for (Variant v : {Variant::Z, Variant::V}) {
    MomentSpec sp = spec({2, 1}, {2, 4}, v, 3);
    SymPoly P = v == Variant::Z ? z_variant_integrand({2, 1}, {2, 4}, 3) : v_variant_integrand({2, 1}, {2, 4}, 3);
    double expect = P.eval(xr).get_d() / std::pow(2.0, 2 * 2 + 4 * 1);
    EXPECT_NEAR(joint_moment_integrand(sp, 3, x.data()), expect, 1e-12 * std::fabs(expect));
  }
}

TEST(Quadrature, Examples) {
  QuadratureResult a = quadrature_expectation(1, 2.0, SymPoly::parse("x1^2", 1));
  EXPECT_NEAR(a.value, 1.0 / 3, 1e-10);
  QuadratureResult b = quadrature_expectation(2, 1.0, SymPoly::constant(2, 1));
  EXPECT_NEAR(b.value, 1.0, 1e-12);
  // (1+x^2)^{-2} has Fourier transform (1+|t|) e^{-|t|} pi/2
  std::complex<double> c = quadrature_expectation_complex(
      1, 1.0, [](const std::vector<double>& x) { return std::exp(std::complex<double>(0, -x[0])); }, 2048);
  EXPECT_NEAR(c.real(), 2 / std::numbers::e, 1e-7);
  EXPECT_NEAR(c.imag(), 0.0, 1e-12);
  EXPECT_THROW(quadrature_expectation(1, 1.0, SymPoly::parse("x1^4", 1)), Error);
  EXPECT_THROW(quadrature_expectation(4, 1.0, SymPoly::constant(4, 1)), Error);
  EXPECT_TRUE(quadrature_integrable(SymPoly::parse("x1^2*x2^2", 2), 1.0));
  EXPECT_FALSE(quadrature_integrable(SymPoly::parse("x1^3", 2), 1.0));
}

TEST(Quadrature, MatchesExactOnMonomialSymmetric) {
  int checked = 0;
  for (int N = 1; N <= 3; ++N)
    for (int s = 1; s <= 3; ++s)
      for (int d = 0; d <= 6; ++d) {
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        partitions(d, d, N, cur, parts);
        for (const auto& lam : parts) {
          SymPoly P = d == 0 ? SymPoly::constant(N, 1) : monomial_symmetric(lam, N);
          if (!quadrature_integrable(P, s)) continue;
          double exact = hp_expectation(P).eval(double(s));
          double q = quadrature_expectation(N, double(s), P).value;
          EXPECT_NEAR(q, exact, 1e-9 * std::max(1.0, std::fabs(exact))) << N << " " << s << " " << P.to_string();
          ++checked;
        }
      }
  EXPECT_GT(checked, 60);
}

TEST(Asymptotics, ExactRows) {
  auto rows = asymptotics_table(spec({1}, {2}, Variant::Z, 2), {1, 2, 3}, Engine::Exact, Rational(2));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].N, 2);
  EXPECT_EQ(rows[1].exact->eval(Rational(2)), ratio(1, 20));
  EXPECT_DOUBLE_EQ(rows[1].value, 0.05);
  EXPECT_FALSE(rows[3].N.has_value());
  EXPECT_EQ(rows[3].exact->eval(Rational(2)), ratio(1, 60));
  // N = 1: Xi_2 is the constant -1, so the scaled value is 2^{-4}
  auto second = asymptotics_table(spec({2}, {2}, Variant::Z, 1), {1}, Engine::Exact, Rational(2));
  EXPECT_EQ(second[0].exact->eval(Rational(2)), ratio(1, 16));
}

TEST(Asymptotics, MonteCarloRowsAgreeWithExact) {
  ChainConfig mc;
  mc.seed = 11;
  MomentSpec sp = spec({1}, {2}, Variant::Z, 2);
  auto exact = asymptotics_table(sp, {1, 2}, Engine::Exact, Rational(3));
  auto sampled = asymptotics_table(sp, {1, 2}, Engine::MonteCarlo, Rational(3), mc);
  for (int i = 0; i < 2; ++i) {
    EXPECT_GT(sampled[i].stderr_, 0);
    EXPECT_NEAR(sampled[i].value, exact[i].value, 4 * sampled[i].stderr_);
  }
  EXPECT_DOUBLE_EQ(sampled[2].value, exact[2].value);
}
