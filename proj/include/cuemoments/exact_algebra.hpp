#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace cuem {

using Integer = mpz_class;
using Rational = mpq_class;

// Error carrying a machine-readable code, e.g. "pole-at-evaluation-point".
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// "p/q" with q > 0 always present.
std::string to_string(const Rational& q);
// Accepts "p", "p/q" and plain decimals such as "-0.25".
Rational parse_rational(const std::string& text);
// num/den in lowest terms; mpq_class(num, den) does not canonicalize.
Rational ratio(long num, long den);
Rational factorial(unsigned n);
Rational binomial(long n, long k);

// Dense univariate polynomial, ascending coefficients, no trailing zeros.
class Poly {
public:
  Poly() = default;
  Poly(const Rational& c);
  Poly(long c) : Poly(Rational(c)) {}
  explicit Poly(std::vector<Rational> coeffs);

  static Poly x();
  static Poly monomial(const Rational& c, std::size_t degree);
  static Poly linear(const Rational& c0, const Rational& c1);

  const std::vector<Rational>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational eval(const Rational& x) const;
  double eval(double x) const;
  Poly derivative() const;
  Poly scale_arg(const Rational& a) const;  // p(a x)
  Poly compose(const Poly& q) const;        // p(q(x))
  Poly monic() const;
  Poly pow(unsigned e) const;
  Rational content() const;  // positive gcd of numerators over lcm of denominators

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  Poly operator-() const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
  // Exact quotient; throws if the remainder is nonzero.
  static Poly exact_div(const Poly& a, const Poly& b);
  static Poly gcd(Poly a, Poly b);  // monic, gcd(0,0) = 0

  std::string to_string(const std::string& var = "s") const;

private:
  void trim();
  std::vector<Rational> c_;
};

// Reduced quotient num/den with monic den; equal values have equal representations.
class RationalFunction {
public:
  RationalFunction() : num_(), den_(Rational(1)) {}
  RationalFunction(const Rational& c) : num_(c), den_(Rational(1)) {}
  RationalFunction(long c) : RationalFunction(Rational(c)) {}
  RationalFunction(const Poly& num) : num_(num), den_(Rational(1)) {}
  RationalFunction(const Poly& num, const Poly& den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  Rational eval(const Rational& x) const;
  double eval(double x) const;
  RationalFunction derivative() const;
  // Substitute x -> a x.
  RationalFunction scale_arg(const Rational& a) const;

  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  RationalFunction operator-() const { return RationalFunction(-num_, den_); }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  RationalFunction pow(unsigned e) const;

  // Primitive integer numerator/denominator with positive leading denominator coefficient.
  std::pair<std::vector<Integer>, std::vector<Integer>> integer_form() const;
  std::string to_string(const std::string& var = "s") const;

private:
  Poly num_, den_;
};

// Sparse multivariate polynomial over Q in a fixed number of variables (<= 8),
// exponent vectors packed 8 bits per variable.
class SymPoly {
public:
  using Key = std::uint64_t;
  static constexpr int kMaxArity = 8;
  static constexpr int kMaxExponent = 255;

  explicit SymPoly(int arity = 0);
  static SymPoly constant(int arity, const Rational& c);
  static SymPoly variable(int arity, int index);
  static SymPoly monomial(int arity, const std::vector<int>& exps, const Rational& c);

  static Key key(const std::vector<int>& exps);
  static std::vector<int> exponents(Key k, int arity);
  static int exponent(Key k, int i) { return static_cast<int>((k >> (8 * i)) & 0xFF); }

  int arity() const { return arity_; }
  const std::map<Key, Rational>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  int degree_in(int i) const;
  int max_degree() const;  // max over variables of degree_in

  Rational coeff(const std::vector<int>& exps) const;
  void add_term(Key k, const Rational& c);
  Rational eval(const std::vector<Rational>& x) const;
  double eval(const std::vector<double>& x) const;
  SymPoly permuted(const std::vector<int>& perm) const;  // x_i -> x_{perm[i]}
  SymPoly negated_args() const;                          // P(-x)
  bool is_symmetric() const;
  SymPoly pow(unsigned e) const;

  SymPoly& operator+=(const SymPoly& o);
  SymPoly& operator-=(const SymPoly& o);
  SymPoly& operator*=(const Rational& c);
  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend SymPoly operator*(const SymPoly& a, const SymPoly& b);
  friend SymPoly operator*(SymPoly a, const Rational& c) { return a *= c; }
  friend SymPoly operator*(const Rational& c, SymPoly a) { return a *= c; }
  friend bool operator==(const SymPoly& a, const SymPoly& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

  // Parses sums of terms like "3/2*x1^2*x2 - x3 + 1".
  static SymPoly parse(const std::string& text, int arity);
  std::string to_string() const;

private:
  int arity_;
  std::map<Key, Rational> terms_;
};

// Truncated power series c_0 + ... + c_K t^K.
class PowerSeries {
public:
  static constexpr int kDefaultOrder = 24;

  explicit PowerSeries(int order = kDefaultOrder);
  PowerSeries(int order, std::vector<Rational> coeffs);
  static PowerSeries constant(int order, const Rational& c);
  static PowerSeries variable(int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& operator[](int i) const { return c_.at(i); }
  Rational& operator[](int i) { return c_.at(i); }
  const std::vector<Rational>& coeffs() const { return c_; }
  PowerSeries truncated(int order) const;

  PowerSeries derivative() const;          // order K-1
  PowerSeries integral() const;            // order K+1, zero constant
  PowerSeries times_t() const;             // order K+1
  PowerSeries scale_arg(const Rational& a) const;
  PowerSeries inverse() const;             // needs c_0 != 0
  PowerSeries log() const;                 // needs c_0 == 1
  PowerSeries exp() const;                 // needs c_0 == 0
  // t f'(t) / f(t), same order.
  PowerSeries logderiv() const;
  bool is_zero() const;
  int valuation() const;  // index of first nonzero coefficient, order()+1 if none

  PowerSeries& operator+=(const PowerSeries& o);
  PowerSeries& operator-=(const PowerSeries& o);
  PowerSeries& operator*=(const Rational& c);
  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
  friend PowerSeries operator*(PowerSeries a, const Rational& c) { return a *= c; }
  friend PowerSeries operator*(const Rational& c, PowerSeries a) { return a *= c; }
  friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) { return a * b.inverse(); }
  friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.c_ == b.c_; }

private:
  std::vector<Rational> c_;
};

// t -> e^{-c t} p(t).
class ExpPolyFunction {
public:
  ExpPolyFunction() = default;
  ExpPolyFunction(int decay, Poly poly) : decay_(decay), poly_(std::move(poly)) {}

  int decay() const { return decay_; }
  const Poly& poly() const { return poly_; }
  bool is_zero() const { return poly_.is_zero(); }

  ExpPolyFunction derivative() const;
  ExpPolyFunction derivative(unsigned order) const;
  // Polynomial factor at t (the value is e^{-c t} times this).
  Rational poly_value(const Rational& t) const { return poly_.eval(t); }
  double eval(double t) const;

  ExpPolyFunction& operator+=(const ExpPolyFunction& o);
  ExpPolyFunction& operator-=(const ExpPolyFunction& o);
  ExpPolyFunction& operator*=(const Rational& c);
  friend ExpPolyFunction operator+(ExpPolyFunction a, const ExpPolyFunction& b) { return a += b; }
  friend ExpPolyFunction operator-(ExpPolyFunction a, const ExpPolyFunction& b) { return a -= b; }
  friend ExpPolyFunction operator*(const ExpPolyFunction& a, const ExpPolyFunction& b);
  friend ExpPolyFunction operator*(ExpPolyFunction a, const Rational& c) { return a *= c; }
  friend bool operator==(const ExpPolyFunction& a, const ExpPolyFunction& b);

  std::string to_string() const;

private:
  int decay_ = 0;
  Poly poly_;
};

// Exact determinant over Q by fraction-free elimination.
Rational determinant(std::vector<std::vector<Rational>> m);
// Exact determinant of a polynomial matrix (Bareiss with exact polynomial division).
Poly determinant(std::vector<std::vector<Poly>> m);

nlohmann::json to_json(const Rational& q);
nlohmann::json to_json(const RationalFunction& f);
nlohmann::json to_json(const PowerSeries& f);
RationalFunction ratfun_from_json(const nlohmann::json& j);
Rational rational_from_json(const nlohmann::json& j);

}  // namespace cuem
