#include "cuemoments/cauchy_expectation.hpp"

#include <algorithm>
#include <cmath>

#include "cuemoments/painleve.hpp"
#include "cuemoments/symmetric_expansion.hpp"

namespace cuem {

namespace {

constexpr int kMaxExactArity = 7;
constexpr int kMaxL = 7;

// s as a polynomial in s.
Poly s_poly() { return Poly::x(); }

// Linear factor a*s + b.
Poly lin(long a, long b) { return Poly::linear(Rational(b), Rational(a)); }

Rational pow2(int e) {
  Rational r = 1;
  if (e >= 0) r = Rational(Integer(1) << e);
  else r = Rational(Integer(1), Integer(1) << (-e));
  return r;
}

bool is_even_positive(const Rational& q) { return q.get_den() == 1 && q > 0 && q.get_num() % 2 == 0; }

// Sign of the permutation sorting v into descending order; 0 if v has repeated entries.
int sort_desc_with_sign(std::vector<int>& v) {
  int sign = 1;
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && v[j - 1] <= v[j]; --j) {
      if (v[j - 1] == v[j]) return 0;
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  return sign;
}

}  // namespace

void MomentSpec::validate() const {
  if (orders.empty()) throw Error("invalid-spec", "empty orders list");
  if (orders.size() != exponents.size())
    throw Error("invalid-spec", "orders and exponents must have equal length");
  for (std::size_t j = 0; j < orders.size(); ++j) {
    if (orders[j] < 0) throw Error("invalid-spec", "orders must be nonnegative");
    if (j > 0 && orders[j] >= orders[j - 1]) throw Error("invalid-spec", "orders must be strictly decreasing");
    if (exponents[j] < 0 || (exponents[j] == 0 && orders[j] != 0))
      throw Error("invalid-spec", "exponents must be positive (0 allowed only on an order-0 entry)");
  }
  if (N && *N < 1) throw Error("invalid-spec", "N must be at least 1");
}

bool MomentSpec::exact_supported() const {
  for (std::size_t j = 0; j < orders.size(); ++j)
    if (orders[j] != 0 && !is_even_positive(exponents[j])) return false;
  return true;
}

std::vector<int> MomentSpec::even_exponents() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    if (orders[j] == 0) {
      out.push_back(0);
      continue;
    }
    if (!is_even_positive(exponents[j]))
      throw Error("unsupported-in-exact-engine",
                  "exponent " + exponents[j].get_str() + " is not a positive even integer; use the Monte Carlo engine");
    out.push_back(static_cast<int>(exponents[j].get_num().get_si()));
  }
  return out;
}

RationalFunction weight_moment(int r, int m) {
  if (r < 0) throw Error("invalid-argument", "moment order must be nonnegative");
  if (r % 2) return RationalFunction();
  // mu_{2p} = prod_{j=1}^p (2j-1)/(2s+2m-1-2j)
  Poly num(Rational(1)), den(Rational(1));
  for (int j = 1; j <= r / 2; ++j) {
    num *= Poly(Rational(2 * j - 1));
    den *= lin(2, 2 * m - 1 - 2 * j);
  }
  return RationalFunction(num, den);
}

Rational weight_moment_valid_above(int r, int m) { return ratio(r + 1, 2) - m; }

RationalFunction hp_expectation(const SymPoly& P) {
  const int m = P.arity();
  if (m > kMaxExactArity)
    throw Error("arity-too-large", "exact engine supports arity <= 7, got " + std::to_string(m));
  if (P.is_zero()) return RationalFunction();
  if (m == 0) return RationalFunction(P.terms().begin()->second);

  // E[P] = sum_alpha c_alpha det[mu_{(alpha+delta)_i + delta_j}] / det[mu_{delta_i + delta_j}]
  // for symmetric P (Andreief); non-symmetric P is averaged over its orbits first.
  std::vector<int> delta(m);
  for (int i = 0; i < m; ++i) delta[i] = m - 1 - i;
  const bool symmetric = P.is_symmetric();

  std::map<std::vector<int>, Rational> coef;
  auto accumulate = [&](const std::vector<int>& gamma, const Rational& c) {
    std::vector<int> beta(m);
    for (int i = 0; i < m; ++i) beta[i] = gamma[i] + delta[i];
    int sign = sort_desc_with_sign(beta);
    if (sign == 0) return;
    Rational& slot = coef[beta];
    slot += sign > 0 ? c : Rational(-c);
  };
  for (const auto& [key, c] : P.terms()) {
    std::vector<int> alpha = SymPoly::exponents(key, m);
    if (symmetric) {
      accumulate(alpha, c);
      continue;
    }
    std::vector<int> orbit = alpha;
    std::sort(orbit.begin(), orbit.end());
    std::vector<std::vector<int>> members;
    do members.push_back(orbit);
    while (std::next_permutation(orbit.begin(), orbit.end()));
    Rational share = c / Rational(static_cast<long>(members.size()));
    for (const auto& g : members) accumulate(g, share);
  }

  int pmax = m - 1;
  for (const auto& [beta, c] : coef)
    if (c != 0) pmax = std::max(pmax, (beta[0] + delta[0]) / 2);

  // Entries scaled by D = prod_{j=1}^{pmax} (u - 2j), u = 2s + 2m - 1; the scale cancels in the ratio.
  std::vector<Poly> mu(pmax + 1);
  for (int p = 0; p <= pmax; ++p) {
    Poly v(Rational(1));
    for (int j = 1; j <= p; ++j) v *= Poly(Rational(2 * j - 1));
    for (int j = p + 1; j <= pmax; ++j) v *= lin(2, 2 * m - 1 - 2 * j);
    mu[p] = v;
  }
  auto moment_det = [&](const std::vector<int>& rows) {
    std::vector<std::vector<Poly>> M(m, std::vector<Poly>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        int r = rows[i] + delta[j];
        if (r % 2 == 0) M[i][j] = mu[r / 2];
      }
    return determinant(std::move(M));
  };

  Poly num;
  for (const auto& [beta, c] : coef)
    if (c != 0) num += moment_det(beta) * c;
  Poly den = moment_det(delta);
  return RationalFunction(num, den);
}

RationalFunction limiting_mixed_moment(const std::map<int, int>& v) {
  int L = 0, n1 = 0;
  for (const auto& [k, e] : v) {
    if (k < 1 || e < 0) throw Error("invalid-spec", "mixed moment needs k >= 1 and v_k >= 0");
    L += k * e;
    if (e > 0) n1 = std::max(n1, k);
  }
  if (L == 0) return RationalFunction(1);
  if (L > kMaxL)
    throw Error("arity-bound-exceeded", "L = sum k v_k = " + std::to_string(L) + " exceeds 7");
  Rational pref = 1 / factorial(L);
  for (const auto& [k, e] : v)
    for (int i = 0; i < e; ++i) pref *= factorial(k);
  RationalFunction total;
  for (int m = n1; m <= L; ++m) {
    SymPoly integrand = SymPoly::constant(m, 1);
    for (const auto& [k, e] : v)
      if (e > 0) integrand = integrand * elementary(k, m).pow(e);
    RationalFunction term = hp_expectation(integrand) * RationalFunction(binomial(L, m));
    if ((m + L) % 2) total -= term;
    else total += term;
  }
  return total * RationalFunction(pref);
}

RationalFunction limiting_moment(const std::vector<int>& orders, const std::vector<int>& exponents) {
  if (orders.size() != exponents.size()) throw Error("invalid-spec", "orders and exponents must have equal length");
  std::map<int, int> v;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    if (orders[j] == 0) continue;
    if (exponents[j] <= 0 || exponents[j] % 2)
      throw Error("unsupported-in-exact-engine", "exact engine needs positive even exponents");
    v[orders[j]] += exponents[j];
  }
  return limiting_mixed_moment(v);
}

RationalFunction limiting_moment_V(const std::vector<int>& orders, const std::vector<int>& exponents) {
  if (orders.size() != exponents.size()) throw Error("invalid-spec", "orders and exponents must have equal length");
  int K = 1, L = 0;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    K = std::max(K, orders[j]);
    if (orders[j] == 0) continue;
    if (exponents[j] <= 0 || exponents[j] % 2)
      throw Error("unsupported-in-exact-engine", "exact engine needs positive even exponents");
    L += orders[j] * exponents[j];
  }
  if (L > kMaxL) throw Error("arity-bound-exceeded", "L = " + std::to_string(L) + " exceeds 7");
  // Y_k is variable k-1 of a SymPoly in K variables, Y_0 = 1.
  auto Y = [&](int k) { return k == 0 ? SymPoly::constant(K, 1) : SymPoly::variable(K, k - 1); };
  SymPoly poly = SymPoly::constant(K, 1);
  for (std::size_t j = 0; j < orders.size(); ++j) {
    int n = orders[j];
    if (n == 0) continue;
    SymPoly re(K), im(K);
    for (int m = 0; m <= n; ++m) {
      SymPoly t = Y(n - m) * binomial(n, m);
      switch (m % 4) {
        case 0: re += t; break;
        case 1: im -= t; break;
        case 2: re -= t; break;
        default: im += t; break;
      }
    }
    poly = poly * (re * re + im * im).pow(exponents[j] / 2);
  }
  RationalFunction total;
  for (const auto& [key, c] : poly.terms()) {
    std::map<int, int> v;
    for (int k = 1; k <= K; ++k) {
      int e = SymPoly::exponent(key, k - 1);
      if (e) v[k] = e;
    }
    total += limiting_mixed_moment(v) * RationalFunction(c);
  }
  return total;
}

static int weighted_order(const MomentSpec& spec, const std::vector<int>& ex) {
  int w = 0;
  for (std::size_t j = 0; j < spec.orders.size(); ++j) w += spec.orders[j] * ex[j];
  return w;
}

RationalFunction leading_coefficient(const MomentSpec& spec) {
  spec.validate();
  std::vector<int> ex = spec.even_exponents();
  RationalFunction base = spec.variant == Variant::Z ? limiting_moment(spec.orders, ex)
                                                     : limiting_moment_V(spec.orders, ex);
  return base * RationalFunction(pow2(-weighted_order(spec, ex)));
}

RationalFunction finite_joint_moment(const MomentSpec& spec) {
  spec.validate();
  if (!spec.N) throw Error("invalid-spec", "finite_joint_moment needs a matrix size N");
  int N = *spec.N;
  if (N > kMaxExactArity) throw Error("arity-too-large", "exact engine supports N <= 7");
  std::vector<int> ex = spec.even_exponents();
  std::vector<int> o, e;
  for (std::size_t j = 0; j < spec.orders.size(); ++j)
    if (spec.orders[j] != 0) {
      o.push_back(spec.orders[j]);
      e.push_back(ex[j]);
    }
  if (o.empty()) return RationalFunction(1);
  SymPoly integrand = spec.variant == Variant::Z ? z_variant_integrand(o, e, N) : v_variant_integrand(o, e, N);
  return hp_expectation(integrand) * RationalFunction(pow2(-weighted_order(spec, ex)));
}

RationalFunction finite_scaled_moment(const MomentSpec& spec) {
  RationalFunction f = finite_joint_moment(spec);
  std::vector<int> ex = spec.even_exponents();
  Rational scale = 1;
  for (int i = 0; i < weighted_order(spec, ex); ++i) scale /= *spec.N;
  return f * RationalFunction(scale);
}

RationalFunction oracle_second_moment_Y(int n) {
  if (n < 1) throw Error("invalid-argument", "oracle_second_moment_Y needs n >= 1");
  // prefactor 2^{2n} (2s-1) / prod_{l=1}^n (2s-2+l)^2
  Poly pden(Rational(1));
  for (int l = 1; l <= n; ++l) pden *= lin(2, l - 2).pow(2);
  RationalFunction pref(lin(2, -1) * pow2(2 * n), pden);
  RationalFunction sum;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      // Gamma ratios expanded into linear factors.
      Poly g(Rational(1));
      for (int l = 0; l < i; ++l) g *= lin(1, l);
      for (int l = 0; l < j; ++l) g *= lin(1, l);
      for (int l = i + 1; l <= n; ++l) g *= lin(2, l - 2);
      for (int l = j + 1; l <= n; ++l) g *= lin(2, l - 2);
      Rational c = binomial(n, i) * binomial(n, j) * pow2(-2 * n + i + j);
      if ((i + j) % 2) c = -c;
      sum += RationalFunction(g * c, lin(2, i + j - 1));
    }
  return pref * sum;
}

RationalFunction oracle_second_moment_V(int n) {
  if (n < 0) throw Error("invalid-argument", "oracle_second_moment_V needs n >= 0");
  RationalFunction r(lin(2, -1) * pow2(2 * n), lin(2, 2 * n - 1));
  for (int l = 1; l <= n; ++l) r *= RationalFunction(lin(1, l - 1), lin(2, l - 2)).pow(2);
  return r;
}

RationalFunction oracle_finiteN_F20(int N) {
  if (N < 1) throw Error("invalid-argument", "oracle_finiteN_F20 needs N >= 1");
  Poly s = s_poly();
  Rational n(N);
  Poly d2 = lin(2, 3) * lin(2, -1);
  Poly d3 = d2 * lin(2, 1);
  RationalFunction bracket = RationalFunction(Poly(n * n * n * n), d2);
  bracket += RationalFunction(s * (4 * n * n * n), d2);
  bracket += RationalFunction((Poly::monomial(2, 3) + Poly::monomial(1, 2) - Poly(1)) * (4 * n * n), d3);
  bracket -= RationalFunction(s * (8 * n), d3);
  return bracket * RationalFunction(ratio(1, 16));
}

Rational cauchy_determinant(const std::vector<Rational>& p, const std::vector<Rational>& q) {
  if (p.size() != q.size()) throw Error("invalid-argument", "Cauchy determinant needs equal-length p and q");
  Rational num = 1, den = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) num *= (p[j] - p[i]) * (q[j] - q[i]);
  for (const auto& a : p)
    for (const auto& b : q) den *= a + b + 1;
  if (den == 0) throw Error("pole-at-evaluation-point", "Cauchy determinant has p_i + q_j + 1 = 0");
  return num / den;
}

Rational cauchy_det_leading_coeff(int n, int m, int s) {
  if (s < 1 || n < 0 || m < 0) throw Error("invalid-argument", "cauchy_det_leading_coeff needs s >= 1, n, m >= 0");
  std::vector<Rational> p(s), q(s);
  p[0] = s - 1 + n;
  q[0] = s - 1 + m;
  for (int i = 2; i <= s; ++i) p[i - 1] = q[i - 1] = s - i;
  Rational c = factorial(n) * factorial(m) / (factorial(s - 1 + n) * factorial(s - 1 + m));
  for (int j = 2; j <= s; ++j) c /= factorial(s - j) * factorial(s - j);
  return c * cauchy_determinant(p, q);
}

Rational keating_snaith_constant_exact(int s) {
  if (s < 0) throw Error("invalid-argument", "keating_snaith_constant_exact needs s >= 0");
  auto G = [](int z) {  // G(1) = 1, G(z+1) = (z-1)! G(z)
    Rational g = 1;
    for (int k = 1; k < z; ++k) g *= factorial(k - 1);
    return g;
  };
  Rational a = G(s + 1);
  return a * a / G(2 * s + 1);
}

double keating_snaith_constant(double s) {
  if (!(s > 0)) throw Error("invalid-argument", "keating_snaith_constant needs s > 0");
  if (s == std::floor(s) && s < 100) return keating_snaith_constant_exact(static_cast<int>(s)).get_d();
  double lg = 2 * log_barnes_G(s + 1) - log_barnes_G(2 * s + 1);
  return std::exp(lg);
}

}  // namespace cuem
