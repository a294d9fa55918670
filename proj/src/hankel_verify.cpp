#include "cuemoments/hankel_verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace cuem {

namespace {

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational max_abs_coeff(const Poly& p) {
  Rational m(0);
  for (const auto& c : p.coeffs()) m = std::max(m, abs_q(c));
  return m;
}

IdentityCheck poly_check(std::string name, const Poly& residual, std::string detail = {}) {
  IdentityCheck c;
  c.name = std::move(name);
  c.residual = max_abs_coeff(residual);
  c.pass = residual.is_zero();
  c.detail = std::move(detail);
  return c;
}

IdentityCheck fn_check(std::string name, const ExpPolyFunction& lhs, const ExpPolyFunction& rhs,
                       std::string detail = {}) {
  ExpPolyFunction d = lhs - rhs;
  return poly_check(std::move(name), d.poly(), std::move(detail));
}

IdentityCheck ratfun_check(std::string name, const RationalFunction& residual, std::string detail = {}) {
  IdentityCheck c;
  c.name = std::move(name);
  c.residual = max_abs_coeff(residual.num());
  c.pass = residual.is_zero();
  c.detail = std::move(detail);
  return c;
}

std::string params(int N, int s) {
  std::ostringstream os;
  os << "N=" << N << " s=" << s;
  return os.str();
}

Rational signed_unit(long e) { return e % 2 == 0 ? Rational(1) : Rational(-1); }

// Truncated multivariate series in t_2..t_k (variable index q-2 for t_q) at fixed t_1.
class TruncSeries {
public:
  TruncSeries(int vars, int degree) : p_(vars), degree_(degree) {}
  TruncSeries(SymPoly p, int degree) : p_(std::move(p)), degree_(degree) { truncate(); }

  const SymPoly& poly() const { return p_; }
  int degree() const { return degree_; }

  TruncSeries& operator+=(const TruncSeries& o) { p_ += o.p_; return *this; }
  TruncSeries& operator-=(const TruncSeries& o) { p_ -= o.p_; return *this; }
  TruncSeries& operator*=(const Rational& c) { p_ *= c; return *this; }
  friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
  friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) { return a -= b; }
  friend TruncSeries operator*(TruncSeries a, const Rational& c) { return a *= c; }
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    return TruncSeries(a.p_ * b.p_, a.degree_);
  }

private:
  void truncate() {
    SymPoly out(p_.arity());
    for (const auto& [key, c] : p_.terms()) {
      int d = 0;
      for (int i = 0; i < p_.arity(); ++i) d += SymPoly::exponent(key, i);
      if (d <= degree_) out.add_term(key, c);
    }
    p_ = std::move(out);
  }
  SymPoly p_;
  int degree_;
};

using SeriesVec = std::vector<TruncSeries>;
using SeriesMat = std::vector<std::vector<TruncSeries>>;

// Boldface Hankel machinery as truncated series in t_2..t_k at t_1 = t1.
class SeriesHankel {
public:
  SeriesHankel(int N, int s, int k, int degree, const Rational& t1)
      : N_(N), s_(s), k_(k), D_(degree), t1_(t1), vars_(k - 1) {}

  int vars() const { return vars_; }
  int degree() const { return D_; }
  TruncSeries zero() const { return TruncSeries(vars_, D_); }
  TruncSeries constant(const Rational& c) const { return TruncSeries(SymPoly::constant(vars_, c), D_); }
  // Rational t_1 for q = 1, the variable t_q otherwise.
  TruncSeries t(int q) const {
    if (q == 1) return constant(t1_);
    return TruncSeries(SymPoly::variable(vars_, q - 2), D_);
  }

  // Entry psi_g: sum over multi-indices m of prod (t_q/N)^{m_q}/m_q! theta_{g + sum q m_q}(t_1/N),
  // dropping the common exponential.
  const TruncSeries& psi(int g) {
    auto it = cache_.find(g);
    if (it != cache_.end()) return it->second;
    TruncSeries total = zero();
    std::vector<int> m(vars_, 0);
    std::function<void(int, int)> rec = [&](int idx, int used) {
      if (idx == vars_) {
        int shift = 0;
        Rational coef(1);
        for (int v = 0; v < vars_; ++v) {
          shift += (v + 2) * m[v];
          coef /= factorial(m[v]);
          for (int e = 0; e < m[v]; ++e) coef /= N_;
        }
        coef *= theta_value(g + shift);
        total += TruncSeries(SymPoly::monomial(vars_, m, coef), D_);
        return;
      }
      for (int e = 0; used + e <= D_; ++e) {
        m[idx] = e;
        rec(idx + 1, used + e);
      }
      m[idx] = 0;
    };
    rec(0, 0);
    return cache_.emplace(g, std::move(total)).first->second;
  }

  TruncSeries det(const SeriesMat& a) const {
    const int n = static_cast<int>(a.size());
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    TruncSeries total = zero();
    do {
      int inversions = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (perm[i] > perm[j]) ++inversions;
      TruncSeries term = constant(signed_unit(inversions));
      for (int i = 0; i < n; ++i) term = term * a[i][perm[i]];
      total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
  }

  SeriesMat matrix(const Partition& lambda) {
    const std::vector<int> off = column_offsets(N_, lambda);
    SeriesMat m(N_, std::vector<TruncSeries>(N_, zero()));
    for (int i = 0; i < N_; ++i)
      for (int j = 0; j < N_; ++j) m[i][j] = psi(i + off[j]);
    return m;
  }

  TruncSeries Psi(const Partition& lambda) {
    if (lambda.length() > N_) return zero();
    return det(matrix(lambda));
  }

  // Column rule: sum over columns of det with column j replaced by op(g) at its indices.
  TruncSeries column_rule(const Partition& lambda, const std::function<TruncSeries(int)>& op) {
    if (lambda.length() > N_) return zero();
    const std::vector<int> off = column_offsets(N_, lambda);
    const SeriesMat base = matrix(lambda);
    TruncSeries total = zero();
    for (int j = 0; j < N_; ++j) {
      SeriesMat m = base;
      for (int i = 0; i < N_; ++i) m[i][j] = op(i + off[j]);
      total += det(m);
    }
    return total;
  }

  // d/dt_1 through d psi_g = (psi_g - 2 psi_{g+1}) / N.
  TruncSeries d1(const Partition& lambda) {
    return column_rule(lambda, [&](int g) { return (psi(g) - psi(g + 1) * Rational(2)) * ratio(1, N_); });
  }
  // d/dt_h, h >= 2, through d psi_g = psi_{g+h} / N.
  TruncSeries dh(const Partition& lambda, int h) {
    return column_rule(lambda, [&](int g) { return psi(g + h) * ratio(1, N_); });
  }

private:
  Rational theta_value(int g) {
    auto it = theta_cache_.find(g);
    if (it != theta_cache_.end()) return it->second;
    Rational v = theta_poly(g, N_, s_).eval(t1_ / N_);
    theta_cache_.emplace(g, v);
    return v;
  }

  int N_, s_, k_, D_;
  Rational t1_;
  int vars_;
  std::map<int, TruncSeries> cache_;
  std::map<int, Rational> theta_cache_;
};

SeriesVec mat_vec(const RMatrix& M, const SeriesVec& v, const TruncSeries& zero) {
  SeriesVec out(M.size(), zero);
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (M[i].size() != v.size()) throw Error("dimension-mismatch", "matrix/vector size mismatch in recursion");
    for (std::size_t j = 0; j < v.size(); ++j)
      if (M[i][j] != 0) out[i] += v[j] * M[i][j];
  }
  return out;
}

void add_scaled(SeriesVec& acc, const SeriesVec& v, const TruncSeries& factor) {
  if (acc.size() != v.size()) throw Error("dimension-mismatch", "vector size mismatch in recursion");
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i] * factor;
}

}  // namespace

ExpPolyFunction bold(const ExpPolyFunction& f, int N) {
  if (f.is_zero()) return ExpPolyFunction(1, Poly());
  if (f.decay() % N != 0) throw Error("decay-mismatch", "boldface rescaling needs decay divisible by N");
  return ExpPolyFunction(f.decay() / N, f.poly().scale_arg(ratio(1, N)));
}

IdentityCheck check_theta_recurrences(int N, int s, int m_max) {
  const ThetaFamily fam(N, s, m_max + 2);
  Poly worst;
  Rational worst_abs(0);
  for (int m = 0; m <= m_max; ++m) {
    // e^{-t}: (p' - p) = p - 2 p_{+1}
    ExpPolyFunction d = fam.at(m).derivative() - (fam.at(m) - fam.at(m + 1) * Rational(2));
    // 2t theta_{m+2} = (N+s-1-m) theta_m + (2-2N-2s+m+2t) theta_{m+1}
    Poly r = Poly::linear(0, 2) * fam.poly(m + 2) - fam.poly(m) * Rational(N + s - 1 - m) -
             Poly::linear(Rational(2 - 2 * N - 2 * s + m), Rational(2)) * fam.poly(m + 1);
    for (const Poly* p : std::initializer_list<const Poly*>{&d.poly(), &r}) {
      Rational a = max_abs_coeff(*p);
      if (a > worst_abs) {
        worst_abs = a;
        worst = *p;
      }
    }
  }
  return poly_check("theta_recurrences", worst, params(N, s) + " m<=" + std::to_string(m_max));
}

IdentityCheck check_column_rule(int N, int s, const Partition& lambda) {
  ExpPolyFunction formal = hankel_derivative(hankel_det(N, s, lambda), 1);
  ExpPolyFunction rule = hankel_derivative_column_rule(N, s, lambda);
  return fn_check("column_rule_derivative", formal, rule, params(N, s) + " lambda=" + lambda.to_string());
}

IdentityCheck check_hook_identity(int N, int s, int l, TraceOrder order) {
  ExpPolyFunction lhs = trace_adjugate(N, s, Partition(), l, false, order);
  ExpPolyFunction rhs = hook_alternating_sum(N, s, l);
  std::string name = order == TraceOrder::Corrected ? "hook_alternating_sum" : "hook_alternating_sum_as_printed";
  return fn_check(name, lhs, rhs, params(N, s) + " l=" + std::to_string(l));
}

IdentityCheck check_weighted_hook_identity(int N, int s, int l, const Rational& alpha) {
  ExpPolyFunction lhs = trace_adjugate(N, s, Partition(), l, true);
  ExpPolyFunction rhs = weighted_hook_sum(N, s, l, alpha);
  return fn_check("weighted_hook_sum", lhs, rhs,
                  params(N, s) + " l=" + std::to_string(l) + " alpha=" + to_string(alpha));
}

std::optional<Rational> fit_hook_alpha(int N, int s) {
  std::optional<Rational> alpha;
  for (int l = 1; l <= 2; ++l) {
    Poly r = (trace_adjugate(N, s, Partition(), l, true) - weighted_hook_sum(N, s, l, 0)).poly();
    Poly h = hook_alternating_sum(N, s, l).poly();
    if (h.is_zero()) {
      if (!r.is_zero()) return std::nullopt;
      continue;
    }
    Rational a = r.coeff(h.degree()) / h.leading();
    if (!(r == h * a)) return std::nullopt;
    if (alpha && *alpha != a) return std::nullopt;
    alpha = a;
  }
  return alpha;
}

IdentityCheck check_tq_derivative(int N, int s, const Partition& lambda, int q, const Rational& t0, TraceOrder order) {
  if (q < 2) throw Error("invalid-argument", "t_q derivative check needs q >= 2");
  SeriesHankel sh(N, s, q, 1, t0);
  std::vector<int> e(q - 1, 0);
  e[q - 2] = 1;
  const Rational lhs = sh.Psi(lambda).poly().coeff(e);
  // The series drops e^{-t_1}; so does the polynomial factor of the bold trace.
  const Rational rhs = bold(trace_adjugate(N, s, lambda, q, false, order), N).poly_value(t0) / N;
  IdentityCheck c;
  c.name = order == TraceOrder::Corrected ? "tq_derivative_trace" : "tq_derivative_trace_as_printed";
  c.residual = abs_q(lhs - rhs);
  c.pass = lhs == rhs;
  c.detail = params(N, s) + " lambda=" + lambda.to_string() + " q=" + std::to_string(q) + " t=" + to_string(t0);
  return c;
}

IdentityCheck check_t1_trace(int N, int s, const Partition& lambda) {
  ExpPolyFunction P = bold(hankel_det(N, s, lambda).value, N);
  ExpPolyFunction lhs = bold(trace_adjugate(N, s, lambda, 1), N);
  ExpPolyFunction rhs = P.derivative() * ratio(-N, 2) + P * ratio(N, 2);
  return fn_check("t1_trace", lhs, rhs, params(N, s) + " lambda=" + lambda.to_string());
}

IdentityCheck check_initial_conditions(int N, int s) {
  ExpPolyFunction P = bold(hankel_det(N, s, Partition()).value, N);
  ExpPolyFunction d2 = bold(mixed_derivative(N, s, {{2, 1}}), N) * ratio(1, N);
  ExpPolyFunction common = P.derivative(2) * ratio(N * N, 8) - P.derivative() * ratio(N * N, 4) +
                           P * ratio(N * N, 8);
  ExpPolyFunction l21 = bold(hankel_det(N, s, Partition::hook(2, 1)).value, N);
  ExpPolyFunction l22 = bold(hankel_det(N, s, Partition::hook(2, 2)).value, N);
  Poly r1 = (l21 - (common + d2 * ratio(N, 2))).poly();
  Poly r2 = (l22 - (common - d2 * ratio(N, 2))).poly();
  Poly worst = max_abs_coeff(r1) >= max_abs_coeff(r2) ? r1 : r2;
  return poly_check("initial_conditions", worst, params(N, s));
}

Rational verify_vector_recursion(int l, int k, int N, int s, const Rational& t0, const RecursionOptions& options) {
  if (l < 3) throw Error("invalid-argument", "vector recursion needs l >= 3");
  if (k < 2) throw Error("invalid-argument", "vector recursion needs k >= 2");
  if (t0 <= 0) throw Error("invalid-argument", "vector recursion needs t0 > 0");
  const int D = std::max(1, options.degree);
  SeriesHankel H(N, s, k, D, t0);
  const TruncSeries zero = H.zero();
  const Rational halfN(N, 2);

  RecursionMatrices A = appendix_matrices(l, k, N, s, options.precedence);
  if (options.perturb) A.Q[2][0][0] += 1;
  const RMatrix& B = A.B;

  using Fn = std::function<TruncSeries(const Partition&)>;
  const Fn Psi = [&](const Partition& p) { return H.Psi(p); };
  // vec(b, p, r, f) = (f(lambda_{b,q}))_{q=p..b} followed by r zeros
  auto vec = [&](int b, int p, int r, const Fn& f) {
    SeriesVec v;
    for (int q = p; q <= b; ++q) v.push_back(f(Partition::hook(b, q)));
    v.insert(v.end(), r, zero);
    return v;
  };
  const Fn op1f = [&](const Partition& p) { return H.d1(p) * (-halfN) + H.Psi(p) * halfN; };
  auto op1 = [&](int b, int p, int r) { return vec(b, p, r, op1f); };
  auto dhf = [&](int h) { return Fn([&, h](const Partition& p) { return H.dh(p, h); }); };
  auto diff = [&](int p, int q) { return H.t(p) * Rational(p) - H.t(q) * Rational(q); };
  auto scalar = [&](const Rational& c) { return H.constant(c); };

  const TruncSeries tk = H.t(k);
  const TruncSeries den = (H.t(1) + H.t(2)) * Rational(2);

  SeriesVec lhs = vec(l, 1, 0, Psi);
  for (auto& x : lhs) x = x * den;

  SeriesVec rhs(l, zero);
  add_scaled(rhs, mat_vec(B, op1(l + k - 2, k, 1), zero), tk * (Rational(k) * signed_unit(k + 1)));

  SeriesVec inner(l, zero);
  add_scaled(inner, op1(l - 1, 1, 1), den * Rational(-1));
  for (int m = 3; m <= k; ++m) add_scaled(inner, vec(l - 1, 1, 1, dhf(m - 1)), diff(m - 1, m) * Rational(N));
  add_scaled(inner, vec(l - 1, 1, 1, dhf(k)), tk * Rational(N * k));
  add_scaled(rhs, mat_vec(B, inner, zero), scalar(1));

  for (int m = 1; m <= k - 2; ++m)
    add_scaled(rhs, mat_vec(A.Q[m + 2], vec(l + m, 1, 0, Psi), zero), diff(m + 1, m + 2) * signed_unit(m));

  add_scaled(rhs, mat_vec(A.Q[1], vec(l - 1, 1, 0, Psi), zero), scalar(2 * t0));
  add_scaled(rhs, mat_vec(A.Q[0], vec(l - 1, 1, 0, Psi), zero), scalar(N));
  add_scaled(rhs, mat_vec(A.Q[2], vec(l - 2, 1, 0, Psi), zero), scalar(N));

  for (int m = 0; m <= k - 3; ++m)
    add_scaled(rhs, mat_vec(B, op1(l + m, m + 2, 1), zero), diff(m + 2, m + 3) * (-signed_unit(m)));

  add_scaled(rhs, mat_vec(A.Q[k + 1], vec(l + k - 1, 1, 0, Psi), zero), tk * (signed_unit(k - 1) * k));

  for (int h = 2; h <= k - 1; ++h)
    add_scaled(rhs, mat_vec(B, vec(l + k - 1 - h, k + 1 - h, 1, dhf(h)), zero),
               tk * (Rational(N * k) * signed_unit(k + h)));

  for (int m = 4; m <= k; ++m)
    for (int h = 2; h <= m - 2; ++h)
      add_scaled(rhs, mat_vec(B, vec(l + m - 2 - h, m - h, 1, dhf(h)), zero),
                 diff(m - 1, m) * (Rational(N) * signed_unit(m - 1 + h)));

  // Terms of total degree D are incomplete (t_q-derivatives lower the degree), so compare below D.
  Rational worst(0);
  for (int i = 0; i < l; ++i) {
    TruncSeries r = lhs[i] - rhs[i];
    for (const auto& [key, c] : r.poly().terms()) {
      int d = 0;
      for (int v = 0; v < H.vars(); ++v) d += SymPoly::exponent(key, v);
      if (d <= D - 1) worst = std::max(worst, abs_q(c));
    }
  }
  return worst;
}

IdentityCheck check_vector_recursion(int l, int k, int N, int s, const Rational& t0, const RecursionOptions& options) {
  IdentityCheck c;
  c.name = options.perturb ? "vector_recursion_perturbed" : "vector_recursion";
  c.residual = verify_vector_recursion(l, k, N, s, t0, options);
  c.pass = c.residual == 0;
  std::ostringstream os;
  os << params(N, s) << " l=" << l << " k=" << k << " t=" << to_string(t0) << " degree=" << options.degree;
  c.detail = os.str();
  return c;
}

namespace {

// Poly parts of E(t) = Psi(t)/Psi(0) and its derivatives (the common e^{-t} dropped).
struct NormalizedMgf {
  RationalFunction E, dE, d2E;
  Rational P0;
  ExpPolyFunction P;
};

NormalizedMgf normalized_mgf(int N, int s) {
  NormalizedMgf m;
  m.P = bold(hankel_det(N, s, Partition()).value, N);
  m.P0 = m.P.poly_value(0);
  const RationalFunction inv(Rational(1) / m.P0);
  m.E = RationalFunction(m.P.poly()) * inv;
  m.dE = RationalFunction(m.P.derivative().poly()) * inv;
  m.d2E = RationalFunction(m.P.derivative(2).poly()) * inv;
  return m;
}

RationalFunction insertion(int N, int s, const std::map<int, int>& ell, const Rational& P0) {
  return RationalFunction(bold(mixed_derivative(N, s, ell), N).poly()) * RationalFunction(Rational(1) / P0);
}

}  // namespace

IdentityCheck check_second_insertion_relation(int N, int s) {
  const NormalizedMgf m = normalized_mgf(N, s);
  const RationalFunction t(Poly::x());
  // (-2i)^2 = -4
  RationalFunction lhs = insertion(N, s, {{2, 1}}, m.P0) * RationalFunction(-4);
  RationalFunction coef = RationalFunction(Poly::linear(Rational(-4 * N * N * s), Rational(4 * N))) /
                          RationalFunction(Poly::linear(0, 2));
  RationalFunction rhs = coef * m.dE - RationalFunction(2 * N) * m.E;
  return ratfun_check("insertion_relation", lhs - rhs, params(N, s));
}

IdentityCheck check_power_sum_square_relation(int N, int s, bool as_printed) {
  const NormalizedMgf m = normalized_mgf(N, s);
  auto ins = [&](const std::map<int, int>& ell) { return insertion(N, s, ell, m.P0); };
  // p_2^2 expanded in insertions of (x-i)^q with the (-2i)^{sum q} factors applied.
  RationalFunction p22 = ins({{2, 2}}) * RationalFunction(16) - ins({{1, 1}, {2, 1}}) * RationalFunction(32) +
                         ins({{2, 1}}) * RationalFunction(8 * N) + ins({{1, 2}}) * RationalFunction(16) -
                         ins({{1, 1}}) * RationalFunction(8 * N) + m.E * RationalFunction(N * N);
  RationalFunction lhs = p22 * RationalFunction(ratio(1, N * N * N * N));

  const RationalFunction t(Poly::x());
  const RationalFunction NN{Rational(N)};
  RationalFunction c2 = RationalFunction(Rational(4 * s * s + 2)) / t.pow(2);
  RationalFunction c1 = RationalFunction(Rational(4 * s)) / (NN * t) - RationalFunction(Rational(12 * s * s)) / t.pow(3);
  Rational last = as_printed ? ratio(4 * s, N * N) : ratio(4 * s, N);
  RationalFunction c0 = RationalFunction(ratio(1, N * N)) - RationalFunction(2) / t.pow(2) -
                        RationalFunction(last) / t.pow(2);
  RationalFunction rhs = c2 * m.d2E + c1 * m.dE + c0 * m.E;
  return ratfun_check(as_printed ? "power_sum_square_relation_as_printed" : "power_sum_square_relation", lhs - rhs,
                      params(N, s));
}

std::vector<IdentityCheck> hankel_verify_suite(const VerifyConfig& c) {
  std::vector<IdentityCheck> out;
  out.push_back(check_theta_recurrences(c.N, c.s, c.theta_m_max));
  out.push_back(check_column_rule(c.N, c.s, Partition()));
  for (int l = 1; l <= std::max(c.l, 1); ++l) out.push_back(check_hook_identity(c.N, c.s, l));
  for (int l = 1; l <= std::max(c.l, 1); ++l) out.push_back(check_weighted_hook_identity(c.N, c.s, l, 0));
  out.push_back(check_t1_trace(c.N, c.s, Partition()));
  for (int q = 2; q <= std::max(c.k, 2); ++q) out.push_back(check_tq_derivative(c.N, c.s, Partition(), q, c.t0));
  out.push_back(check_initial_conditions(c.N, c.s));
  RecursionOptions opt;
  opt.perturb = c.perturb;
  out.push_back(check_vector_recursion(c.l, c.k, c.N, c.s, c.t0, opt));
  out.push_back(check_second_insertion_relation(c.N, c.s));
  out.push_back(check_power_sum_square_relation(c.N, c.s));
  return out;
}

}  // namespace cuem
