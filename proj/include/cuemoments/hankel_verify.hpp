#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuemoments/hankel_engine.hpp"

namespace cuem {

// Outcome of one exact identity check; residual is the largest absolute residual coefficient.
struct IdentityCheck {
  std::string name;
  bool pass = false;
  Rational residual;
  std::string detail;
};

// Boldface rescaling t -> t/N of a decay-N function, giving decay 1.
ExpPolyFunction bold(const ExpPolyFunction& f, int N);

// d theta_m = theta_m - 2 theta_{m+1} and the three-term recurrence, m <= m_max.
IdentityCheck check_theta_recurrences(int N, int s, int m_max);
// Formal derivative of Psi_{N,lambda} against the column rule.
IdentityCheck check_column_rule(int N, int s, const Partition& lambda);
// Psi_{N,empty,l} = sum_j (-1)^{j-1} Psi_{N,lambda_{l,j}}.
IdentityCheck check_hook_identity(int N, int s, int l, TraceOrder order = TraceOrder::Corrected);
// Weighted trace against sum_j (-1)^{j-1} (2N-2j+l+alpha) Psi_{N,lambda_{l,j}}.
IdentityCheck check_weighted_hook_identity(int N, int s, int l, const Rational& alpha);
// Solves for alpha at l = 1 and l = 2; empty if the two fits disagree or are underdetermined.
std::optional<Rational> fit_hook_alpha(int N, int s);

// d Psi / d t_q = (1/N) Psi_{lambda,q} at t_1 = t0 (boldface, t_rest = 0), q >= 2.
IdentityCheck check_tq_derivative(int N, int s, const Partition& lambda, int q, const Rational& t0,
                                  TraceOrder order = TraceOrder::Corrected);
// Psi_{lambda,1} = -(N/2) Psi' + (N/2) Psi as functions of t_1.
IdentityCheck check_t1_trace(int N, int s, const Partition& lambda);
// Psi_{(2)} and Psi_{(1,1)} in terms of Psi, Psi', Psi'' and d Psi / d t_2.
IdentityCheck check_initial_conditions(int N, int s);

struct RecursionOptions {
  int degree = 2;  // total degree of the t_2..t_k series
  BPrecedence precedence = BPrecedence::LastColumn;
  bool perturb = false;  // adds 1 to one entry of Q_2 (negative control)
};

// Largest residual coefficient of the B/Q vector recursion, expanded as a truncated series in
// t_2..t_k at t_1 = t0; coefficients of total degree below options.degree are compared.
Rational verify_vector_recursion(int l, int k, int N, int s, const Rational& t0,
                                 const RecursionOptions& options = {});
IdentityCheck check_vector_recursion(int l, int k, int N, int s, const Rational& t0,
                                     const RecursionOptions& options = {});

// E[e^{-i t p_1/N} sum (x_j - i)^2] against the derivative form, as functions of t.
IdentityCheck check_second_insertion_relation(int N, int s);
// E[e^{-i t p_1/N} p_2^2] / N^4 against the derivative form. as_printed uses 4s/(N^2 t^2).
IdentityCheck check_power_sum_square_relation(int N, int s, bool as_printed = false);

struct VerifyConfig {
  int N = 2;
  int s = 2;
  int l = 3;
  int k = 2;
  Rational t0 = 1;
  int theta_m_max = 20;
  bool perturb = false;
};

// Full identity suite for one parameter tuple, in a fixed order.
std::vector<IdentityCheck> hankel_verify_suite(const VerifyConfig& config);

}  // namespace cuem
