#include "cuemoments/symmetric_expansion.hpp"

namespace cuem {

namespace {

void check_arity(int m) {
  if (m < 0 || m > SymPoly::kMaxArity)
    throw Error("arity-too-large", "arity must be in [0, 8], got " + std::to_string(m));
}

void check_even_exponents(const std::vector<int>& orders, const std::vector<int>& exponents) {
  if (orders.size() != exponents.size())
    throw Error("invalid-spec", "orders and exponents must have equal length");
  for (int e : exponents)
    if (e <= 0 || e % 2 != 0)
      throw Error("unsupported-in-exact-engine", "exact engine needs positive even exponents, got " + std::to_string(e));
  for (int n : orders)
    if (n < 0) throw Error("invalid-spec", "derivative orders must be nonnegative");
}

}  // namespace

SymPoly elementary(int k, int m) {
  check_arity(m);
  SymPoly out(m);
  if (k < 0 || k > m) return out;
  std::vector<int> e(m, 0);
  // Enumerate k-subsets via a bitmask walk.
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    for (int i = 0; i < m; ++i) e[i] = (mask >> i) & 1u;
    out.add_term(SymPoly::key(e), 1);
  }
  return out;
}

SymPoly vandermonde_squared(int m) {
  check_arity(m);
  if (m < 1) throw Error("invalid-arity", "vandermonde_squared needs m >= 1");
  SymPoly out = SymPoly::constant(m, 1);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      SymPoly d = SymPoly::variable(m, i) - SymPoly::variable(m, j);
      out = out * (d * d);
    }
  return out;
}

SymPoly power_sum(int k, int m) {
  check_arity(m);
  SymPoly out(m);
  std::vector<int> e(m, 0);
  for (int i = 0; i < m; ++i) {
    e.assign(m, 0);
    e[i] = k;
    out.add_term(SymPoly::key(e), 1);
  }
  return out;
}

Integer a_coeff(int n, int l, int N) {
  if (n < 0 || l < 0 || l > n || N < 1) throw Error("invalid-argument", "a_coeff needs 0 <= l <= n and N >= 1");
  if ((n - l) % 2 != 0 || l > N) return 0;
  PowerSeries sh(n), ch(n);
  for (int k = 0; k <= n; ++k) {
    if (k % 2) sh[k] = 1 / factorial(k);
    else ch[k] = 1 / factorial(k);
  }
  PowerSeries prod = PowerSeries::constant(n, 1);
  for (int i = 0; i < l; ++i) prod = prod * sh;
  for (int i = 0; i < N - l; ++i) prod = prod * ch;
  Rational v = prod[n] * factorial(n);
  if (((n + l) / 2) % 2) v = -v;
  if (v.get_den() != 1) throw Error("internal", "a_coeff produced a non-integer");
  return v.get_num();
}

ACoeffTable a_table(int n_max, int N) {
  ACoeffTable t;
  t.N = N;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<Integer> row;
    for (int l = 0; l <= n; ++l) row.push_back(a_coeff(n, l, N));
    t.a.push_back(std::move(row));
  }
  return t;
}

XiPoly xi_poly(int n, int N) {
  check_arity(N);
  if (n < 0 || N < 1) throw Error("invalid-argument", "xi_poly needs n >= 0 and N >= 1");
  SymPoly p(N);
  for (int l = 0; l <= n && l <= N; ++l) {
    Integer a = a_coeff(n, l, N);
    if (a != 0) p += elementary(l, N) * Rational(a);
  }
  return XiPoly{n, N, std::move(p)};
}

SymPoly v_variant_integrand(const std::vector<int>& orders, const std::vector<int>& exponents, int N) {
  check_even_exponents(orders, exponents);
  SymPoly out = SymPoly::constant(N, 1);
  for (std::size_t j = 0; j < orders.size(); ++j) {
    int n = orders[j];
    SymPoly re(N), im(N);
    Rational Np = 1;
    for (int m = 0; m <= n; ++m) {
      // (-i)^m = 1, -i, -1, i for m mod 4 = 0, 1, 2, 3.
      Rational c = Np * binomial(n, m);
      SymPoly xi = xi_poly(n - m, N).poly * c;
      switch (m % 4) {
        case 0: re += xi; break;
        case 1: im -= xi; break;
        case 2: re -= xi; break;
        default: im += xi; break;
      }
      Np *= N;
    }
    SymPoly mod2 = re * re + im * im;
    out = out * mod2.pow(exponents[j] / 2);
  }
  return out;
}

SymPoly z_variant_integrand(const std::vector<int>& orders, const std::vector<int>& exponents, int N) {
  check_even_exponents(orders, exponents);
  SymPoly out = SymPoly::constant(N, 1);
  for (std::size_t j = 0; j < orders.size(); ++j)
    out = out * xi_poly(orders[j], N).poly.pow(exponents[j]);
  return out;
}

}  // namespace cuem
