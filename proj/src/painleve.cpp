#include "cuemoments/painleve.hpp"

#include <cmath>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "cuemoments/hankel_engine.hpp"

namespace cuem {

namespace {

using Big = boost::multiprecision::cpp_dec_float_50;

bool is_integer(double z) { return std::floor(z) == z; }

Rational pow2(long e) {
  Rational r(Integer(1) << static_cast<unsigned>(e < 0 ? -e : e));
  return e < 0 ? Rational(1) / r : r;
}

Big log_barnes_G_product_big(const Big& z, int K) {
  const Big x = z - 1;
  if (x <= -1) throw Error("invalid-argument", "Barnes G product needs z > 0");
  if (boost::multiprecision::abs(x) >= K + 1) throw Error("invalid-argument", "Barnes G product needs |z-1| < K+1");
  const Big two_pi = 2 * boost::math::constants::pi<Big>();
  const Big gamma = boost::math::constants::euler<Big>();
  Big acc = x / 2 * log(two_pi) - (x + x * x * (1 + gamma)) / 2;
  for (int k = 1; k <= K; ++k) acc += k * log1p(x / k) - x + x * x / (2 * k);
  // Tail sum_{k>K}: expand k log(1+x/k) - x + x^2/(2k) in powers of x.
  const Big eps = Big("1e-45");
  Big xj = x * x;
  for (int j = 3; j < 400; ++j) {
    xj *= x;
    Big partial = 0;
    for (int k = 1; k <= K; ++k) partial += pow(Big(k), -(j - 1));
    Big hurwitz = boost::math::zeta(Big(j - 1)) - partial;
    Big term = xj / j * hurwitz;
    acc += (j % 2 == 1) ? term : Big(-term);
    if (boost::multiprecision::abs(term) < eps) break;
  }
  return acc;
}

}  // namespace

double bessel_I(int nu, double z, int digits) {
  if (nu < 0) throw Error("invalid-argument", "bessel_I needs nu >= 0");
  if (digits < 1 || digits > 45) throw Error("precision-unachievable", "bessel_I supports 1..45 digits");
  if (z == 0) return nu == 0 ? 1.0 : 0.0;
  const Big half = Big(z) / 2;
  const Big q = half * half;
  Big term = pow(half, nu) / boost::math::factorial<Big>(nu);
  Big sum = term;
  const Big tol = pow(Big(10), -digits);
  for (int m = 0; m < 100000; ++m) {
    Big r = q / ((m + 1) * (m + 1 + nu));
    term *= r;
    sum += term;
    // Remaining terms are bounded by a geometric series once the ratio drops below 1/2.
    if (r < 0.5 && boost::multiprecision::abs(term * r / (1 - r)) <= tol * boost::multiprecision::abs(sum))
      return static_cast<double>(sum);
  }
  throw Error("precision-unachievable", "bessel_I series did not converge");
}

Rational barnes_G_integer(int n) {
  if (n < 1) throw Error("invalid-argument", "integer Barnes G needs n >= 1");
  Rational g(1);
  for (int k = 1; k <= n - 2; ++k) g *= factorial(k);
  return g;
}

double log_barnes_G_product(double z, int K) { return static_cast<double>(log_barnes_G_product_big(Big(z), K)); }

double log_barnes_G(double z) {
  if (!(z > 0)) throw Error("invalid-argument", "log_barnes_G needs z > 0");
  if (is_integer(z) && z < 1000) return std::log(barnes_G_integer(static_cast<int>(z)).get_d());
  Big acc = 0;
  Big w(z);
  while (w > 2) {
    w -= 1;
    acc += boost::math::lgamma(w);
  }
  return static_cast<double>(acc + log_barnes_G_product_big(w, 50));
}

double barnes_G(double z) {
  if (!(z > 0)) throw Error("invalid-argument", "barnes_G needs z > 0");
  if (is_integer(z) && z < 100) return barnes_G_integer(static_cast<int>(z)).get_d();
  return std::exp(log_barnes_G(z));
}

// ---------------------------------------------------------------- phi_s

PowerSeries phi_series(int s, int K) {
  if (s < 1) throw Error("unsupported", "phi_series needs integer s >= 1");
  const int s2 = s * s;
  const int W = 2 * K + s2;  // order in w = sqrt(2t)
  // I_nu(2w) = sum_m w^{nu+2m} / (m! (m+nu)!)
  auto bessel_series = [&](int nu) {
    PowerSeries f(W);
    for (int m = 0; nu + 2 * m <= W; ++m) f[nu + 2 * m] = Rational(1) / (factorial(m) * factorial(m + nu));
    return f;
  };
  std::vector<std::vector<PowerSeries>> a(s, std::vector<PowerSeries>(s, PowerSeries(W)));
  for (int j = 0; j < s; ++j)
    for (int k = 0; k < s; ++k) a[j][k] = bessel_series(j + k + 1);
  std::vector<int> perm(s);
  for (int i = 0; i < s; ++i) perm[i] = i;
  PowerSeries det(W);
  do {
    int inv = 0;
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j)
        if (perm[i] > perm[j]) ++inv;
    PowerSeries term = PowerSeries::constant(W, inv % 2 ? Rational(-1) : Rational(1));
    for (int i = 0; i < s; ++i) term = term * a[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (int i = 0; i < s2; ++i)
    if (det[i] != 0) throw Error("residual-half-integer-powers", "Bessel determinant below w^{s^2} is nonzero");
  PowerSeries g(K);
  for (int i = 0; i <= 2 * K; ++i) {
    const Rational& c = det[i + s2];
    if (i % 2 == 1) {
      if (c != 0) throw Error("residual-half-integer-powers", "odd power of sqrt(2t) survived");
      continue;
    }
    g[i / 2] = c * pow2(i / 2);
  }
  PowerSeries e = (PowerSeries::variable(K) * Rational(-1)).exp();
  Rational pre = barnes_G_integer(2 * s + 1) / (barnes_G_integer(s + 1) * barnes_G_integer(s + 1));
  if ((s * (s - 1) / 2) % 2 == 1) pre = -pre;
  PowerSeries phi = e * g * pre;
  if (phi[0] != 1) throw Error("normalization-failed", "phi_s(0) != 1");
  return phi;
}

double phi_value(int s, double t) {
  if (s < 1) throw Error("unsupported", "phi_value needs integer s >= 1");
  if (t < 0) t = -t;
  // phi_s(t) <= C e^{-t + 2s sqrt(2t)}; far beyond that it is below double range.
  if (t - 2.0 * s * std::sqrt(2.0 * t) > 800) return 0.0;
  const Big u = 2 * Big(t);
  auto f = [&](int nu) {
    Big term = 1 / boost::math::factorial<Big>(nu);
    Big sum = term;
    const Big tol = Big("1e-48") ;
    for (int m = 0; m < 200000; ++m) {
      term *= u / ((m + 1) * (m + 1 + nu));
      sum += term;
      if (term < tol * sum && Big(m) > u) break;
    }
    return sum;
  };
  std::vector<std::vector<Big>> a(s, std::vector<Big>(s));
  std::vector<Big> fv(2 * s);
  for (int nu = 1; nu < 2 * s; ++nu) fv[nu] = f(nu);
  for (int j = 0; j < s; ++j)
    for (int k = 0; k < s; ++k) a[j][k] = fv[j + k + 1];
  // Gaussian elimination with partial pivoting.
  Big det = 1;
  for (int c = 0; c < s; ++c) {
    int p = c;
    for (int r = c + 1; r < s; ++r)
      if (boost::multiprecision::abs(a[r][c]) > boost::multiprecision::abs(a[p][c])) p = r;
    if (a[p][c] == 0) return 0.0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < s; ++r) {
      Big factor = a[r][c] / a[c][c];
      for (int k = c; k < s; ++k) a[r][k] -= factor * a[c][k];
    }
  }
  Rational pre = barnes_G_integer(2 * s + 1) / (barnes_G_integer(s + 1) * barnes_G_integer(s + 1));
  if ((s * (s - 1) / 2) % 2 == 1) pre = -pre;
  Big value = det * exp(-Big(t)) * Big(pre.get_num().get_str()) / Big(pre.get_den().get_str());
  return static_cast<double>(value);
}

// ---------------------------------------------------------------- tau functions

TauFunction tau_limit(int s, int K) {
  TauFunction tau;
  tau.kind = TauFunction::Kind::Series;
  tau.s = s;
  tau.series = phi_series(s, K).scale_arg(ratio(1, 2)).logderiv();
  return tau;
}

PowerSeries sigma_p3_residual(const TauFunction& tau) {
  if (tau.kind != TauFunction::Kind::Series) throw Error("invalid-argument", "sigma_p3_residual needs a series tau");
  const int K = tau.series.order();
  if (K < 2) throw Error("invalid-argument", "series order must be at least 2");
  const int R = K - 2;
  const PowerSeries f = tau.series.truncated(R);
  const PowerSeries d1 = tau.series.derivative().truncated(R);
  const PowerSeries d2 = tau.series.derivative().derivative();  // order K-2
  const PowerSeries t = PowerSeries::variable(R);
  const Rational s2(4L * tau.s * tau.s);
  PowerSeries td2 = t * d2;
  PowerSeries res = td2 * td2 + t * d1 * d1 * d1 * Rational(4) -
                    (PowerSeries::constant(R, s2) + f * Rational(4)) * d1 * d1 - t * d1 + f;
  return res;
}

TauFunction tau_finiteN(int N, int s) {
  const Poly D = hankel_det(N, s, Partition()).value.poly();
  const Poly Dt = D.scale_arg(ratio(1, 2 * N));  // D(t/2N); its derivative is D'(t/2N)/(2N)
  const RationalFunction t(Poly::x());
  TauFunction tau;
  tau.kind = TauFunction::Kind::ExactRational;
  tau.s = s;
  tau.N = N;
  tau.exact = t * RationalFunction(Dt.derivative(), Dt) - t * RationalFunction(ratio(1, 2));
  return tau;
}

RationalFunction painleve5_residual(const TauFunction& tau) {
  if (tau.kind != TauFunction::Kind::ExactRational || !tau.N)
    throw Error("invalid-argument", "painleve5_residual needs an exact finite-N tau");
  const int N = *tau.N;
  const int s = tau.s;
  const RationalFunction t(Poly::x());
  const RationalFunction& f = tau.exact;
  const RationalFunction d1 = f.derivative();
  const RationalFunction d2 = d1.derivative();
  const RationalFunction iN2(ratio(1, N * N));
  const RationalFunction a(Rational(1) + ratio(2 * s, N));
  RationalFunction td2 = t * d2;
  return td2 * td2 + RationalFunction(4) * t * d1 * d1 * d1 -
         (RationalFunction(4L * s * s) + RationalFunction(4) * f + t * t * iN2) * d1 * d1 -
         t * (a - RationalFunction(2) * f * iN2) * d1 + (a - f * iN2) * f;
}

// ---------------------------------------------------------------- fractional moments

double fractional_kernel_integral(double p, double y, const QuadConfig& config) {
  if (!(p > 0 && p < 2)) throw Error("invalid-argument", "fractional moments need 0 < p < 2");
  if (y == 0) return 0.0;
  y = std::fabs(y);
  // [0,1]: sum_{n>=1} (-1)^{n+1} y^{2n} / ((2n)! (2n-p)), termwise integration of 1 - cos.
  double head = 0;
  double fact_term = 1;  // y^{2n}/(2n)!
  for (int n = 1; n < 200; ++n) {
    fact_term *= y * y / ((2.0 * n - 1) * (2.0 * n));
    double term = fact_term / (2.0 * n - p);
    head += (n % 2 == 1) ? term : -term;
    if (fact_term < 1e-18 * std::fabs(head) && n > 2) break;
  }
  // [1,inf): 1/p - int_0^inf cos(y(u+1)) (u+1)^{-p-1} du
  auto g = [p](double u) { return std::pow(u + 1, -p - 1); };
  boost::math::quadrature::ooura_fourier_cos<double> fc(config.tolerance, config.max_refinements);
  boost::math::quadrature::ooura_fourier_sin<double> fs(config.tolerance, config.max_refinements);
  auto [c, ce] = fc.integrate(g, y);
  auto [sn, se] = fs.integrate(g, y);
  double osc = std::cos(y) * c - std::sin(y) * sn;
  double err = std::fabs(ce * c) + std::fabs(se * sn);
  double value = head + 1.0 / p - osc;
  if (err > config.tolerance * std::max(1.0, std::fabs(value)))
    throw Error("quadrature-tolerance-not-met", "oscillatory tail did not reach the requested tolerance");
  return value;
}

double fractional_constant(double p, const QuadConfig& config) {
  return 1.0 / fractional_kernel_integral(p, 1.0, config);
}

double fractional_moment_q1(double p, int s, const QuadConfig& config) {
  if (!(p > 0 && p < 2)) throw Error("invalid-argument", "fractional moments need 0 < p < 2");
  if (s < 1) throw Error("unsupported", "fractional moments need integer s >= 1");
  // [0,1]: 1 - phi = -sum_{n>=2} c_n t^n integrated termwise.
  const int K = 60;
  const PowerSeries phi = phi_series(s, K);
  if (phi[1] != 0) throw Error("normalization-failed", "phi_s has a nonzero linear term");
  double head = 0;
  for (int n = 2; n <= K; ++n) head -= phi[n].get_d() / (n - p);
  if (std::fabs(phi[K].get_d()) > config.tolerance * 1e-3)
    throw Error("quadrature-tolerance-not-met", "phi series tail too large on [0,1]");
  // [1,T]: phi_s(t)/t^{p+1}; beyond T the integrand is below e^{-100}.
  double T = 2;
  while (T - 2.0 * s * std::sqrt(2.0 * T) < 120) T *= 1.5;
  auto f = [&](double t) { return phi_value(s, t) * std::pow(t, -p - 1); };
  double err = 0;
  double body = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 1.0, T, config.max_refinements,
                                                                              config.tolerance, &err);
  double integral = head + 1.0 / p - body;
  if (err > config.tolerance * std::max(1.0, std::fabs(integral)))
    throw Error("quadrature-tolerance-not-met", "phi tail quadrature did not converge");
  return fractional_constant(p, config) * integral;
}

}  // namespace cuem
