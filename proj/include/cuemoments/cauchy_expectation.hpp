#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cuemoments/exact_algebra.hpp"

namespace cuem {

enum class Variant { V, Z };

// Joint-moment query. An exponent on an order-0 entry is carried by s and may be 0 ("_" on the CLI).
struct MomentSpec {
  std::vector<int> orders;          // strictly decreasing, >= 0
  std::vector<Rational> exponents;  // 2h_j
  Variant variant = Variant::Z;
  std::optional<int> N;             // empty means the N -> infinity limit

  void validate() const;
  bool exact_supported() const;  // every exponent on a nonzero order is a positive even integer
  std::vector<int> even_exponents() const;  // integer 2h_j; order-0 entries map to 0
};

// Normalized moment int x^r (1+x^2)^{-(s+m)} dx / int (1+x^2)^{-(s+m)} dx.
RationalFunction weight_moment(int r, int m);
// The integral defining weight_moment(r, m) converges for s > this bound.
Rational weight_moment_valid_above(int r, int m);

// E_m^{(s)}[P] as a rational function of s (analytic continuation outside the convergence half-plane).
RationalFunction hp_expectation(const SymPoly& P);

// E[prod_k Y_k^{v_k}] for the limiting variables, v maps k >= 1 to v_k >= 0.
RationalFunction limiting_mixed_moment(const std::map<int, int>& v);

// E[prod_j Y_{n_j}^{2h_j}].
RationalFunction limiting_moment(const std::vector<int>& orders, const std::vector<int>& exponents);

// E[prod_j |sum_m (-i)^m binom(n_j, m) Y_{n_j - m}|^{2h_j}].
RationalFunction limiting_moment_V(const std::vector<int>& orders, const std::vector<int>& exponents);

// Limit value without the Barnes constant: 2^{-sum 2h_j n_j} times the Z or V limiting moment.
RationalFunction leading_coefficient(const MomentSpec& spec);

// Ratio of the finite-N joint moment to its all-zero-order counterpart, 2^{-sum 2h_j n_j} E_N[...].
RationalFunction finite_joint_moment(const MomentSpec& spec);

// Finite-N normalized value 2^{-sum 2h_j n_j} E_N[prod |Xi_{n_j} / N^{n_j}|^{2h_j}] (or its V analogue).
RationalFunction finite_scaled_moment(const MomentSpec& spec);

RationalFunction oracle_second_moment_Y(int n);
RationalFunction oracle_second_moment_V(int n);
RationalFunction oracle_finiteN_F20(int N);

// Leading coefficient of the (n, m) mixed derivative of the two-sided product average.
Rational cauchy_det_leading_coeff(int n, int m, int s);
// det[1/(p_i+q_j+1)] through the Cauchy product formula.
Rational cauchy_determinant(const std::vector<Rational>& p, const std::vector<Rational>& q);

// G(s+1)^2 / G(2s+1).
Rational keating_snaith_constant_exact(int s);
double keating_snaith_constant(double s);

}  // namespace cuem
