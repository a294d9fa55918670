#include "cuemoments/hankel_engine.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace cuem {

namespace {

// binom(n, k) for integer n of either sign, k >= 0.
Rational gen_binomial(long n, long k) {
  if (k < 0) return Rational(0);
  if (n >= 0) return binomial(n, k);
  Rational r = binomial(k - n - 1, k);
  return k % 2 == 0 ? r : Rational(-r);
}

Rational signed_unit(long e) { return e % 2 == 0 ? Rational(1) : Rational(-1); }

Poly det_of(std::vector<std::vector<Poly>> m) {
  if (m.empty()) return Poly(Rational(1));
  return determinant(std::move(m));
}

// Matrix of theta polynomials with column offsets (already including any shift).
std::vector<std::vector<Poly>> theta_matrix(int N, int s, const std::vector<int>& offsets,
                                            const std::vector<bool>& weighted = {}) {
  std::vector<std::vector<Poly>> m(N, std::vector<Poly>(N));
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      int g = i + offsets[j];
      Poly p = theta_poly(g, N, s);
      if (!weighted.empty() && weighted[j]) p *= Rational(g);
      m[i][j] = std::move(p);
    }
  }
  return m;
}

void compositions(int total, int parts, std::vector<int>& cur, const std::function<void()>& visit) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    visit();
    cur.pop_back();
    return;
  }
  for (int c = 0; c <= total; ++c) {
    cur.push_back(c);
    compositions(total - c, parts, cur, visit);
    cur.pop_back();
  }
}

}  // namespace

// ---------------------------------------------------------------- Partition

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
  parts.erase(std::remove(parts.begin(), parts.end(), 0), parts.end());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 0) throw Error("invalid-partition", "negative part");
    if (i > 0 && parts[i] > parts[i - 1]) throw Error("invalid-partition", "parts must be weakly decreasing");
  }
}

Partition Partition::hook(int k, int q) {
  if (q < 1 || q > k) throw Error("invalid-partition", "hook needs 1 <= q <= k");
  std::vector<int> p{k - q + 1};
  p.insert(p.end(), q - 1, 1);
  return Partition(std::move(p));
}

int Partition::size() const { return std::accumulate(parts.begin(), parts.end(), 0); }

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------- theta

Poly theta_poly(int m, int N, int s) {
  if (N < 1 || s < 1) throw Error("unsupported", "theta needs N >= 1 and integer s >= 1");
  if (m < 0) throw Error("invalid-index", "theta index must be nonnegative");
  const long n = N + s - 1;
  const long a = 1 - 2L * N - 2L * s + m;
  // (-1)^n n! L_n^{(a)}(2t), L_n^{(a)}(z) = sum_i binom(n+a, n-i) (-z)^i / i!
  std::vector<Rational> c(n + 1);
  const Rational pre = signed_unit(n) * factorial(static_cast<unsigned>(n));
  for (long i = 0; i <= n; ++i) {
    Rational two_i(Integer(1) << static_cast<unsigned>(i));
    c[i] = pre * gen_binomial(n + a, n - i) * signed_unit(i) * two_i / factorial(static_cast<unsigned>(i));
  }
  return Poly(std::move(c));
}

ExpPolyFunction theta(int m, int N, int s) { return ExpPolyFunction(1, theta_poly(m, N, s)); }

ThetaFamily::ThetaFamily(int N, int s, int m_max) : N_(N), s_(s) {
  for (int m = 0; m <= m_max; ++m) table_.push_back(theta_poly(m, N, s));
}

Poly ThetaFamily::poly(int m) const {
  if (m >= 0 && m < static_cast<int>(table_.size())) return table_[m];
  return theta_poly(m, N_, s_);
}

ExpPolyFunction ThetaFamily::at(int m) const { return ExpPolyFunction(1, poly(m)); }

// ---------------------------------------------------------------- Hankel determinants

std::vector<int> column_offsets(int N, const Partition& lambda) {
  std::vector<int> off(N);
  for (int j = 0; j < N; ++j) off[j] = j + lambda.part(N - j);
  return off;
}

ExpPolyFunction shifted_det(int N, int s, const Partition& lambda, const std::vector<int>& column_shift) {
  if (lambda.length() > N) return ExpPolyFunction();
  std::vector<int> off = column_offsets(N, lambda);
  for (int j = 0; j < N && j < static_cast<int>(column_shift.size()); ++j) off[j] += column_shift[j];
  return ExpPolyFunction(N, det_of(theta_matrix(N, s, off)));
}

HankelValue hankel_det(int N, int s, const Partition& lambda, int h) {
  HankelValue H;
  H.N = N;
  H.s = s;
  H.lambda = lambda;
  H.shift = h;
  H.value = shifted_det(N, s, lambda, std::vector<int>(N, h));
  return H;
}

ExpPolyFunction hankel_derivative(const HankelValue& H, int order) {
  if (order < 0) throw Error("invalid-order", "derivative order must be nonnegative");
  return H.value.derivative(static_cast<unsigned>(order));
}

ExpPolyFunction hankel_derivative_column_rule(int N, int s, const Partition& lambda) {
  if (lambda.length() > N) return ExpPolyFunction();
  const std::vector<int> off = column_offsets(N, lambda);
  auto base = theta_matrix(N, s, off);
  Poly total;
  for (int j = 0; j < N; ++j) {
    auto m = base;
    for (int i = 0; i < N; ++i) m[i][j] = theta_poly(i + off[j], N, s) - theta_poly(i + off[j] + 1, N, s) * Rational(2);
    total += det_of(std::move(m));
  }
  return ExpPolyFunction(N, total);
}

ExpPolyFunction mixed_derivative(int N, int s, const std::map<int, int>& ell, const Partition& lambda) {
  int units = 0;
  for (const auto& [q, l] : ell) {
    if (q < 1 || l < 0) throw Error("invalid-derivative", "derivative keys must be >= 1 with nonnegative counts");
    units += l;
  }
  if (units > 12) throw Error("bound-exceeded", "mixed derivative supports at most 12 derivative units");
  if (lambda.length() > N) return ExpPolyFunction();

  // Distribute each ell_q over the N columns; weight ell_q! / prod c!.
  std::map<std::vector<int>, Rational> shifts{{std::vector<int>(N, 0), Rational(1)}};
  for (const auto& [q, l] : ell) {
    if (l == 0) continue;
    std::map<std::vector<int>, Rational> next;
    std::vector<int> cur;
    compositions(l, N, cur, [&] {
      Rational w = factorial(l);
      for (int c : cur) w /= factorial(c);
      for (const auto& [sh, coef] : shifts) {
        std::vector<int> ns = sh;
        for (int j = 0; j < N; ++j) ns[j] += q * cur[j];
        next[ns] += coef * w;
      }
    });
    shifts = std::move(next);
  }
  ExpPolyFunction total;
  for (const auto& [sh, coef] : shifts) total += shifted_det(N, s, lambda, sh) * coef;
  if (total.is_zero()) return ExpPolyFunction(N, Poly());
  return total;
}

std::pair<Rational, Rational> normalized_L(int N, int s, const std::map<int, int>& ell, const Rational& t0) {
  if (t0 <= 0) throw Error("invalid-argument", "normalized_L needs t0 > 0");
  const Rational u = t0 / N;
  const Rational den = hankel_det(N, s, Partition()).value.poly_value(u);
  const Rational ratio = mixed_derivative(N, s, ell).poly_value(u) / den;
  int M = 0;
  for (const auto& [q, l] : ell) M += q * l;
  // (-2i)^M = (-2)^M i^M
  Rational mag = signed_unit(M) * Rational(Integer(1) << static_cast<unsigned>(M));
  switch (M % 4) {
    case 0: return {ratio * mag, Rational(0)};
    case 1: return {Rational(0), ratio * mag};
    case 2: return {-ratio * mag, Rational(0)};
    default: return {Rational(0), -ratio * mag};
  }
}

ExpPolyFunction trace_adjugate(int N, int s, const Partition& lambda, int h, bool weighted, TraceOrder order) {
  if (lambda.length() > N) return ExpPolyFunction();
  const std::vector<int> off = column_offsets(N, lambda);
  std::vector<int> off_h = off;
  for (int& o : off_h) o += h;
  const std::vector<bool> w(N, weighted);
  auto plain = theta_matrix(N, s, off);
  auto shifted = theta_matrix(N, s, off_h, w);
  // Tr[adj(X) Y] = sum_j det(X with column j taken from Y)
  const auto& X = order == TraceOrder::Corrected ? plain : shifted;
  const auto& Y = order == TraceOrder::Corrected ? shifted : plain;
  Poly total;
  for (int j = 0; j < N; ++j) {
    auto m = X;
    for (int i = 0; i < N; ++i) m[i][j] = Y[i][j];
    total += det_of(std::move(m));
  }
  return ExpPolyFunction(N, total);
}

ExpPolyFunction hook_alternating_sum(int N, int s, int l) {
  ExpPolyFunction total(N, Poly());
  for (int j = 1; j <= l; ++j) total += hankel_det(N, s, Partition::hook(l, j)).value * signed_unit(j - 1);
  return total;
}

ExpPolyFunction weighted_hook_sum(int N, int s, int l, const Rational& alpha) {
  ExpPolyFunction total(N, Poly());
  for (int j = 1; j <= l; ++j) {
    Rational c = signed_unit(j - 1) * (Rational(2 * N - 2 * j + l) + alpha);
    total += hankel_det(N, s, Partition::hook(l, j)).value * c;
  }
  return total;
}

// ---------------------------------------------------------------- B and Q matrices

RecursionMatrices appendix_matrices(int l, int k, int N, int s, BPrecedence prec) {
  if (l < 2) throw Error("invalid-argument", "B and Q matrices need l >= 2");
  if (k < 2) throw Error("invalid-argument", "B and Q matrices need k >= 2");
  RecursionMatrices A;
  A.l = l;
  A.k = k;
  A.B.assign(l, std::vector<Rational>(l));
  for (int i = 1; i <= l; ++i) {
    for (int j = 1; j <= l; ++j) {
      Rational v(0);
      if (j >= i) v = signed_unit(i + j - 1) / Rational(j * (j + 1));
      else if (j == i - 1) v = ratio(-1, i);
      if (j == l && (prec == BPrecedence::LastColumn || j < i)) v = signed_unit(i - 1) / Rational(l);
      A.B[i - 1][j - 1] = v;
    }
  }
  A.Q.resize(k + 2);
  RMatrix& Q0 = A.Q[0];
  RMatrix& Q1 = A.Q[1];
  RMatrix& Q2 = A.Q[2];
  Q0.assign(l, std::vector<Rational>(l - 1));
  Q1.assign(l, std::vector<Rational>(l - 1));
  Q2.assign(l, std::vector<Rational>(l - 2));
  for (int i = 1; i <= l; ++i) {
    for (int j = 1; j <= l - 1; ++j) {
      if (i <= j) {
        Q0[i - 1][j - 1] = signed_unit(i + j) * ratio(j * (l - j - 2) + 1 - 2 * s, j * (j + 1));
        Q1[i - 1][j - 1] = signed_unit(i + j) / Rational(j * (j + 1));
      } else if (j == i - 1) {
        Q0[i - 1][j - 1] = ratio(j * (j + 2 * s) - l + 1, j + 1);
        Q1[i - 1][j - 1] = ratio(-j, j + 1);
      }
    }
    for (int j = 1; j <= l - 2; ++j) {
      if (i - 1 <= j) {
        long num = static_cast<long>(s - 2) * N + j * (j + 3) - (j + 2) * (l - 2) + 2 * (s - 1);
        Q2[i - 1][j - 1] = signed_unit(i + j) * ratio(num, (j + 1) * (j + 2));
      } else if (j == i - 2) {
        Q2[i - 1][j - 1] = ratio((j + s) * (j - N), j + 2);
      }
    }
  }
  for (int m = 3; m <= k + 1; ++m) {
    RMatrix& Q = A.Q[m];
    Q.assign(l, std::vector<Rational>(l + m - 2));
    for (int i = 1; i <= l; ++i) {
      for (int j = 1; j <= l + m - 2; ++j) {
        Rational v(0);
        if (i == 1 && j <= m - 1) v = signed_unit(m - j - 1);
        else if (j > i + m - 2) v = signed_unit(i + j + m) * ratio(2 - m, (j - m + 1) * (j - m + 2));
        else if (i != 1 && j == i + m - 2) v = ratio(i + m - 2, i);
        Q[i - 1][j - 1] = v;
      }
    }
  }
  return A;
}

// ---------------------------------------------------------------- expansion coefficients

namespace {

void check_expansion_args(const std::vector<int>& h, const std::vector<int>& hp, int i, int j) {
  const int k = static_cast<int>(h.size()) + 1;
  if (k < 3) throw Error("constraint-violation", "expansion coefficients need k >= 3");
  if (static_cast<int>(hp.size()) != k - 3) throw Error("constraint-violation", "h' must hold h'_3..h'_{k-1}");
  int total = 0;
  for (int x : h) {
    if (x < 0) throw Error("constraint-violation", "negative h");
    total += x;
  }
  if (j < 0 || total != i - 1 - j) throw Error("constraint-violation", "need sum h = i-1-j with j >= 0");
  for (int n = 3; n <= k - 1; ++n) {
    int hn = h[n - 2], hpn = hp[n - 3];
    if (hpn < 0 || hpn > hn) throw Error("constraint-violation", "need 0 <= h'_n <= h_n");
  }
}

}  // namespace

std::vector<int> expansion_bracket_counts(const std::vector<int>& h, const std::vector<int>& hp) {
  const int k = static_cast<int>(h.size()) + 1;
  // h'_k := h_k; c_3 = h_2 + h'_3, c_{n+1} = h_n - h'_n + h'_{n+1}
  auto hprime = [&](int n) { return n == k ? h[k - 2] : hp[n - 3]; };
  std::vector<int> c;
  c.push_back(h[0] + hprime(3));
  for (int n = 3; n <= k - 1; ++n) c.push_back(h[n - 2] - hprime(n) + hprime(n + 1));
  return c;
}

Rational expansion_coeff(const std::vector<int>& h, const std::vector<int>& hp, int i, int j) {
  check_expansion_args(h, hp, i, j);
  const int k = static_cast<int>(h.size()) + 1;
  int sign = h[k - 2];
  for (int x : hp) sign += x;
  Rational v = signed_unit(sign) * factorial(i - 1 - j);
  for (int c : expansion_bracket_counts(h, hp)) v /= factorial(c);
  return v;
}

Rational expansion_coeff_collected(const std::vector<int>& h, const std::vector<int>& hp, int i, int j) {
  Rational v = expansion_coeff(h, hp, i, j);
  const int k = static_cast<int>(h.size()) + 1;
  const std::vector<int> c = expansion_bracket_counts(h, hp);
  for (int q = 3; q <= k; ++q) {
    int hq = q == k ? h[k - 2] : hp[q - 3];
    v *= binomial(c[q - 3], hq);
  }
  return v;
}

}  // namespace cuem
