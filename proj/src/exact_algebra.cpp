#include "cuemoments/exact_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace cuem {

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  if (text.empty()) throw Error("parse-error", "empty rational");
  auto slash = text.find('/');
  auto dot = text.find('.');
  try {
    if (slash != std::string::npos) {
      Rational q(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
      if (q.get_den() == 0) throw Error("parse-error", "zero denominator in '" + raw + "'");
      q.canonicalize();
      return q;
    }
    if (dot != std::string::npos) {
      std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
      bool neg = !ip.empty() && ip[0] == '-';
      if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip = ip.substr(1);
      if (ip.empty()) ip = "0";
      Integer scale = 1;
      for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
      Rational q(Integer(ip + fp), scale);
      q.canonicalize();
      return neg ? Rational(-q) : q;
    }
    if (text[0] == '+') text = text.substr(1);
    return Rational(Integer(text));
  } catch (const std::invalid_argument&) {
    throw Error("parse-error", "cannot parse rational '" + raw + "'");
  }
}

Rational ratio(long num, long den) {
  if (den == 0) throw Error("invalid-argument", "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return Rational(r);
}

Rational binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return Rational(0);
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const Rational& c) {
  if (c != 0) c_.push_back(c);
}

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::x() { return Poly(std::vector<Rational>{0, 1}); }

Poly Poly::monomial(const Rational& c, std::size_t degree) {
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(v));
}

Poly Poly::linear(const Rational& c0, const Rational& c1) { return Poly(std::vector<Rational>{c0, c1}); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::eval(const Rational& x) const {
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

double Poly::eval(double x) const {
  double r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->get_d();
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return Poly(std::move(d));
}

Poly Poly::scale_arg(const Rational& a) const {
  std::vector<Rational> d(c_);
  Rational p = 1;
  for (auto& v : d) {
    v *= p;
    p *= a;
  }
  return Poly(std::move(d));
}

Poly Poly::compose(const Poly& q) const {
  Poly r;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * q + Poly(*it);
  return r;
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  Rational inv = 1 / c_.back();
  return *this * inv;
}

Poly Poly::pow(unsigned e) const {
  Poly r(Rational(1)), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Rational Poly::content() const {
  Integer g = 0, l = 1;
  for (const auto& v : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  if (g == 0) return Rational(0);
  Rational r(g, l);
  r.canonicalize();
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    c_.clear();
    return *this;
  }
  for (auto& v : c_) v *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
  Rational tmp;
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      mpq_mul(tmp.get_mpq_t(), a.c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
      r[i + j] += tmp;
    }
  }
  return Poly(std::move(r));
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error("division-by-zero-function", "polynomial division by zero");
  std::vector<Rational> rem = a.c_;
  int db = b.degree();
  if (a.degree() < db) return {Poly(), a};
  std::vector<Rational> q(a.degree() - db + 1);
  Rational lead_inv = 1 / b.c_.back();
  for (int i = a.degree(); i >= db; --i) {
    if (rem[i] == 0) continue;
    Rational f = rem[i] * lead_inv;
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.c_[j];
  }
  rem.resize(db);
  return {Poly(std::move(q)), Poly(std::move(rem))};
}

Poly Poly::exact_div(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw Error("inexact-division", "polynomial division left a remainder");
  return q;
}

Poly Poly::gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

static std::string term_string(const Rational& c, std::size_t i, const std::string& var, bool first) {
  std::string out;
  Rational a = abs(c);
  if (!first) out += (c < 0 ? " - " : " + ");
  else if (c < 0) out += "-";
  bool unit = (a == 1);
  if (i == 0 || !unit) out += a.get_str();
  if (i >= 1) {
    if (!unit) out += "*";
    out += var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    out += term_string(c_[i], i, var, first);
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw Error("division-by-zero-function", "rational function with zero denominator");
  if (num.is_zero()) {
    num_ = Poly();
    den_ = Poly(Rational(1));
    return;
  }
  Poly g = Poly::gcd(num, den);
  if (g.degree() > 0) {
    num_ = Poly::exact_div(num, g);
    den_ = Poly::exact_div(den, g);
  } else {
    num_ = num;
    den_ = den;
  }
  Rational inv = 1 / den_.leading();
  num_ *= inv;
  den_ *= inv;
}

Rational RationalFunction::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (d == 0) throw Error("pole-at-evaluation-point", "denominator vanishes at " + cuem::to_string(x));
  return num_.eval(x) / d;
}

double RationalFunction::eval(double x) const { return num_.eval(x) / den_.eval(x); }

RationalFunction RationalFunction::derivative() const {
  return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalFunction RationalFunction::scale_arg(const Rational& a) const {
  return RationalFunction(num_.scale_arg(a), den_.scale_arg(a));
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (den_ == o.den_) return *this = RationalFunction(num_ + o.num_, den_);
  return *this = RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
  if (den_ == o.den_) return *this = RationalFunction(num_ - o.num_, den_);
  return *this = RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  return *this = RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero()) throw Error("division-by-zero-function", "division by the zero rational function");
  return *this = RationalFunction(num_ * o.den_, den_ * o.num_);
}

RationalFunction RationalFunction::pow(unsigned e) const {
  return RationalFunction(num_.pow(e), den_.pow(e));
}

static std::vector<Integer> scaled_integers(const Poly& p, const Rational& scale) {
  std::vector<Integer> out;
  for (const auto& c : p.coeffs()) {
    Rational v = c * scale;
    out.push_back(v.get_num());
  }
  return out;
}

std::pair<std::vector<Integer>, std::vector<Integer>> RationalFunction::integer_form() const {
  // Common scale making every coefficient integral, then remove the joint content.
  Integer l = 1, g = 0;
  for (const Poly* p : {&num_, &den_})
    for (const auto& c : p->coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  for (const Poly* p : {&num_, &den_})
    for (const auto& c : p->coeffs()) {
      Rational v = c * l;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
    }
  Rational scale(l, g == 0 ? Integer(1) : g);
  scale.canonicalize();
  return {scaled_integers(num_, scale), scaled_integers(den_, scale)};
}

std::string RationalFunction::to_string(const std::string& var) const {
  if (den_.degree() == 0) return num_.to_string(var);
  auto wrap = [&](const Poly& p) {
    std::string s = p.to_string(var);
    int nonzero = 0;
    for (const auto& c : p.coeffs()) nonzero += (c != 0);
    return nonzero > 1 ? "(" + s + ")" : s;
  };
  return wrap(num_) + "/" + wrap(den_);
}

// ---------------------------------------------------------------- SymPoly

SymPoly::SymPoly(int arity) : arity_(arity) {
  if (arity < 0 || arity > kMaxArity)
    throw Error("arity-too-large", "SymPoly arity must be in [0, 8], got " + std::to_string(arity));
}

SymPoly SymPoly::constant(int arity, const Rational& c) {
  SymPoly p(arity);
  p.add_term(0, c);
  return p;
}

SymPoly SymPoly::variable(int arity, int index) {
  std::vector<int> e(arity, 0);
  e.at(index) = 1;
  return monomial(arity, e, 1);
}

SymPoly SymPoly::monomial(int arity, const std::vector<int>& exps, const Rational& c) {
  SymPoly p(arity);
  if (static_cast<int>(exps.size()) != arity) throw Error("arity-mismatch", "exponent vector length differs from arity");
  p.add_term(key(exps), c);
  return p;
}

SymPoly::Key SymPoly::key(const std::vector<int>& exps) {
  Key k = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0 || exps[i] > kMaxExponent) throw Error("exponent-overflow", "exponent out of range");
    k |= static_cast<Key>(exps[i]) << (8 * i);
  }
  return k;
}

std::vector<int> SymPoly::exponents(Key k, int arity) {
  std::vector<int> e(arity);
  for (int i = 0; i < arity; ++i) e[i] = exponent(k, i);
  return e;
}

int SymPoly::total_degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) {
    int s = 0;
    for (int i = 0; i < arity_; ++i) s += exponent(k, i);
    d = std::max(d, s);
  }
  return d;
}

int SymPoly::degree_in(int i) const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, exponent(k, i));
  return d;
}

int SymPoly::max_degree() const {
  int d = -1;
  for (int i = 0; i < arity_; ++i) d = std::max(d, degree_in(i));
  return arity_ == 0 ? (terms_.empty() ? -1 : 0) : d;
}

Rational SymPoly::coeff(const std::vector<int>& exps) const {
  auto it = terms_.find(key(exps));
  return it == terms_.end() ? Rational(0) : it->second;
}

void SymPoly::add_term(Key k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational SymPoly::eval(const std::vector<Rational>& x) const {
  Rational total = 0;
  for (const auto& [k, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < arity_; ++i) {
      int e = exponent(k, i);
      for (int r = 0; r < e; ++r) t *= x[i];
    }
    total += t;
  }
  return total;
}

double SymPoly::eval(const std::vector<double>& x) const {
  double total = 0;
  for (const auto& [k, c] : terms_) {
    double t = c.get_d();
    for (int i = 0; i < arity_; ++i) {
      int e = exponent(k, i);
      if (e) t *= std::pow(x[i], e);
    }
    total += t;
  }
  return total;
}

SymPoly SymPoly::permuted(const std::vector<int>& perm) const {
  SymPoly out(arity_);
  for (const auto& [k, c] : terms_) {
    std::vector<int> e(arity_, 0);
    for (int i = 0; i < arity_; ++i) e[perm[i]] = exponent(k, i);
    out.add_term(key(e), c);
  }
  return out;
}

SymPoly SymPoly::negated_args() const {
  SymPoly out(arity_);
  for (const auto& [k, c] : terms_) {
    int s = 0;
    for (int i = 0; i < arity_; ++i) s += exponent(k, i);
    out.add_term(k, (s % 2) ? Rational(-c) : c);
  }
  return out;
}

bool SymPoly::is_symmetric() const {
  for (int i = 0; i + 1 < arity_; ++i) {
    std::vector<int> perm(arity_);
    for (int j = 0; j < arity_; ++j) perm[j] = j;
    std::swap(perm[i], perm[i + 1]);
    if (!(permuted(perm) == *this)) return false;
  }
  return true;
}

SymPoly SymPoly::pow(unsigned e) const {
  SymPoly r = constant(arity_, 1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

SymPoly& SymPoly::operator+=(const SymPoly& o) {
  if (o.arity_ != arity_) throw Error("arity-mismatch", "adding SymPoly of different arity");
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o) {
  if (o.arity_ != arity_) throw Error("arity-mismatch", "subtracting SymPoly of different arity");
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

SymPoly& SymPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

SymPoly operator*(const SymPoly& a, const SymPoly& b) {
  if (a.arity_ != b.arity_) throw Error("arity-mismatch", "multiplying SymPoly of different arity");
  if (a.max_degree() + b.max_degree() > SymPoly::kMaxExponent)
    throw Error("exponent-overflow", "product exponent exceeds 255");
  SymPoly out(a.arity_);
  Rational tmp;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      mpq_mul(tmp.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
      out.add_term(ka + kb, tmp);
    }
  return out;
}

SymPoly SymPoly::parse(const std::string& raw, int arity) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  SymPoly out(arity);
  if (text.empty()) throw Error("parse-error", "empty polynomial");
  std::size_t pos = 0;
  while (pos < text.size()) {
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
    }
    std::size_t end = pos;
    while (end < text.size() && text[end] != '+' && text[end] != '-') ++end;
    std::string term = text.substr(pos, end - pos);
    if (term.empty()) throw Error("parse-error", "malformed polynomial '" + raw + "'");
    Rational coef = sign;
    std::vector<int> e(arity, 0);
    std::stringstream ss(term);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
      if (factor.empty()) throw Error("parse-error", "malformed factor in '" + raw + "'");
      if (factor[0] == 'x') {
        auto caret = factor.find('^');
        int idx = std::stoi(factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
        int pw = caret == std::string::npos ? 1 : std::stoi(factor.substr(caret + 1));
        if (idx < 1 || idx > arity)
          throw Error("parse-error", "variable x" + std::to_string(idx) + " outside arity " + std::to_string(arity));
        e[idx - 1] += pw;
      } else {
        coef *= parse_rational(factor);
      }
    }
    out.add_term(key(e), coef);
    pos = end;
  }
  return out;
}

std::string SymPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    Rational a = abs(c);
    if (!first) out += (c < 0 ? " - " : " + ");
    else if (c < 0) out += "-";
    std::string mono;
    for (int i = 0; i < arity_; ++i) {
      int e = exponent(k, i);
      if (!e) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) out += a.get_str();
    else if (a == 1) out += mono;
    else out += a.get_str() + "*" + mono;
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------- PowerSeries

PowerSeries::PowerSeries(int order) : c_(std::max(order, 0) + 1) {}

PowerSeries::PowerSeries(int order, std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  c_.resize(std::max(order, 0) + 1);
}

PowerSeries PowerSeries::constant(int order, const Rational& c) {
  PowerSeries p(order);
  p.c_[0] = c;
  return p;
}

PowerSeries PowerSeries::variable(int order) {
  PowerSeries p(order);
  if (order >= 1) p.c_[1] = 1;
  return p;
}

PowerSeries PowerSeries::truncated(int order) const {
  return PowerSeries(order, std::vector<Rational>(c_.begin(), c_.begin() + std::min<std::size_t>(c_.size(), order + 1)));
}

PowerSeries PowerSeries::derivative() const {
  PowerSeries d(order() - 1);
  for (int i = 1; i <= order(); ++i) d.c_[i - 1] = c_[i] * i;
  return d;
}

PowerSeries PowerSeries::integral() const {
  PowerSeries d(order() + 1);
  for (int i = 0; i <= order(); ++i) d.c_[i + 1] = c_[i] / Rational(i + 1);
  return d;
}

PowerSeries PowerSeries::times_t() const {
  PowerSeries d(order() + 1);
  for (int i = 0; i <= order(); ++i) d.c_[i + 1] = c_[i];
  return d;
}

PowerSeries PowerSeries::scale_arg(const Rational& a) const {
  PowerSeries d(*this);
  Rational p = 1;
  for (auto& v : d.c_) {
    v *= p;
    p *= a;
  }
  return d;
}

PowerSeries PowerSeries::inverse() const {
  if (c_[0] == 0) throw Error("zero-constant-term", "series inverse needs a nonzero constant term");
  PowerSeries r(order());
  Rational inv0 = 1 / c_[0];
  r.c_[0] = inv0;
  for (int n = 1; n <= order(); ++n) {
    Rational acc = 0;
    for (int k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
    r.c_[n] = -acc * inv0;
  }
  return r;
}

PowerSeries PowerSeries::log() const {
  if (c_[0] != 1) throw Error("zero-constant-term", "series log needs constant term 1");
  PowerSeries q = derivative() * truncated(order() - 1).inverse();
  return q.integral();
}

PowerSeries PowerSeries::exp() const {
  if (c_[0] != 0) throw Error("nonzero-constant-term", "series exp needs zero constant term");
  PowerSeries f(order());
  f.c_[0] = 1;
  for (int n = 1; n <= order(); ++n) {
    Rational acc = 0;
    for (int k = 1; k <= n; ++k) acc += c_[k] * f.c_[n - k] * k;
    f.c_[n] = acc / Rational(n);
  }
  return f;
}

PowerSeries PowerSeries::logderiv() const {
  if (c_[0] == 0) throw Error("zero-constant-term", "log-derivative needs a nonzero constant term");
  if (order() == 0) return PowerSeries(0);
  PowerSeries q = derivative() * truncated(order() - 1).inverse();
  return q.times_t();
}

bool PowerSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& v) { return v == 0; });
}

int PowerSeries::valuation() const {
  for (int i = 0; i <= order(); ++i)
    if (c_[i] != 0) return i;
  return order() + 1;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
  if (o.order() < order()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
  if (o.order() < order()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

PowerSeries& PowerSeries::operator*=(const Rational& c) {
  for (auto& v : c_) v *= c;
  return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  int K = std::min(a.order(), b.order());
  PowerSeries r(K);
  Rational tmp;
  for (int i = 0; i <= K; ++i) {
    if (a.c_[i] == 0) continue;
    for (int j = 0; i + j <= K; ++j) {
      mpq_mul(tmp.get_mpq_t(), a.c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
      r.c_[i + j] += tmp;
    }
  }
  return r;
}

// ---------------------------------------------------------------- ExpPolyFunction

ExpPolyFunction ExpPolyFunction::derivative() const {
  return ExpPolyFunction(decay_, poly_.derivative() - poly_ * Rational(decay_));
}

ExpPolyFunction ExpPolyFunction::derivative(unsigned order) const {
  ExpPolyFunction r = *this;
  for (unsigned i = 0; i < order; ++i) r = r.derivative();
  return r;
}

double ExpPolyFunction::eval(double t) const { return std::exp(-decay_ * t) * poly_.eval(t); }

ExpPolyFunction& ExpPolyFunction::operator+=(const ExpPolyFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (o.decay_ != decay_) throw Error("decay-mismatch", "sum of ExpPolyFunctions with different decay");
  poly_ += o.poly_;
  return *this;
}

ExpPolyFunction& ExpPolyFunction::operator-=(const ExpPolyFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = ExpPolyFunction(o.decay_, -o.poly_);
  if (o.decay_ != decay_) throw Error("decay-mismatch", "difference of ExpPolyFunctions with different decay");
  poly_ -= o.poly_;
  return *this;
}

ExpPolyFunction& ExpPolyFunction::operator*=(const Rational& c) {
  poly_ *= c;
  return *this;
}

ExpPolyFunction operator*(const ExpPolyFunction& a, const ExpPolyFunction& b) {
  return ExpPolyFunction(a.decay_ + b.decay_, a.poly_ * b.poly_);
}

bool operator==(const ExpPolyFunction& a, const ExpPolyFunction& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.decay_ == b.decay_ && a.poly_ == b.poly_;
}

std::string ExpPolyFunction::to_string() const {
  std::string p = poly_.to_string("t");
  if (decay_ == 0) return p;
  std::string e = decay_ == 1 ? "e^(-t)" : "e^(-" + std::to_string(decay_) + "t)";
  return e + "*(" + p + ")";
}

// ---------------------------------------------------------------- determinants

Rational determinant(std::vector<std::vector<Rational>> m) {
  std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return Rational(0);
    if (p != k) {
      std::swap(m[p], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      Rational f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

Poly determinant(std::vector<std::vector<Poly>> m) {
  std::size_t n = m.size();
  if (n == 0) return Poly(Rational(1));
  bool negate = false;
  Poly prev(Rational(1));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k].is_zero()) ++p;
    if (p == n) return Poly();
    if (p != k) {
      std::swap(m[p], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = Poly::exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const Rational& q) { return to_string(q); }

nlohmann::json to_json(const RationalFunction& f) {
  auto [num, den] = f.integer_form();
  nlohmann::json j;
  j["num"] = nlohmann::json::array();
  j["den"] = nlohmann::json::array();
  for (const auto& v : num) j["num"].push_back(v.get_str());
  if (num.empty()) j["num"].push_back("0");
  for (const auto& v : den) j["den"].push_back(v.get_str());
  return j;
}

nlohmann::json to_json(const PowerSeries& f) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : f.coeffs()) j.push_back(to_string(c));
  return j;
}

Rational rational_from_json(const nlohmann::json& j) { return parse_rational(j.get<std::string>()); }

RationalFunction ratfun_from_json(const nlohmann::json& j) {
  auto read = [](const nlohmann::json& arr) {
    std::vector<Rational> c;
    for (const auto& v : arr) c.emplace_back(parse_rational(v.get<std::string>()));
    return Poly(std::move(c));
  };
  return RationalFunction(read(j.at("num")), read(j.at("den")));
}

}  // namespace cuem
