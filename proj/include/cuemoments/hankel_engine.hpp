#pragma once

#include <map>
#include <utility>
#include <vector>

#include "cuemoments/exact_algebra.hpp"

namespace cuem {

using RMatrix = std::vector<std::vector<Rational>>;

// Weakly decreasing positive parts.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p);
  // lambda_{k,q} = (k-q+1, 1^{q-1}), 1 <= q <= k.
  static Partition hook(int k, int q);

  int length() const { return static_cast<int>(parts.size()); }
  int size() const;
  // lambda_i for 1-based i, zero past the length.
  int part(int i) const { return i >= 1 && i <= length() ? parts[i - 1] : 0; }
  std::string to_string() const;
};

// Polynomial factor of theta_m = e^{-t} U(1-N-s, 2-2N-2s+m; 2t), s a positive integer.
Poly theta_poly(int m, int N, int s);
ExpPolyFunction theta(int m, int N, int s);

class ThetaFamily {
public:
  ThetaFamily(int N, int s, int m_max);
  int N() const { return N_; }
  int s() const { return s_; }
  int m_max() const { return static_cast<int>(table_.size()) - 1; }
  // Precomputed for m <= m_max, computed on demand beyond.
  ExpPolyFunction at(int m) const;
  Poly poly(int m) const;

private:
  int N_, s_;
  std::vector<Poly> table_;
};

// Column j (0-based) of A_{N,lambda} starts at theta_{j + lambda_{N-j}}.
std::vector<int> column_offsets(int N, const Partition& lambda);

struct HankelValue {
  int N = 0;
  int s = 0;
  Partition lambda;
  int shift = 0;
  ExpPolyFunction value;  // decay N, or the zero function when length(lambda) > N
};

// det[theta_{i+j+lambda_{N-j}+h}]_{i,j=0}^{N-1}.
HankelValue hankel_det(int N, int s, const Partition& lambda, int h = 0);
// Determinant with individual column shifts added to the offsets of lambda.
ExpPolyFunction shifted_det(int N, int s, const Partition& lambda, const std::vector<int>& column_shift);

ExpPolyFunction hankel_derivative(const HankelValue& H, int order);
// d/dt through the column rule d theta_m = theta_m - 2 theta_{m+1}.
ExpPolyFunction hankel_derivative_column_rule(int N, int s, const Partition& lambda);

// Mixed derivative at t_rest = 0: each unit of ell[q] shifts one column by q.
// Keys q >= 1 are accepted (q = 1 is the plain shift, not the t_1 derivative).
ExpPolyFunction mixed_derivative(int N, int s, const std::map<int, int>& ell,
                                 const Partition& lambda = Partition());

// (-2i)^{sum q ell_q} times the mixed derivative over Psi_N, both at t0/N, as (re, im).
std::pair<Rational, Rational> normalized_L(int N, int s, const std::map<int, int>& ell, const Rational& t0);

enum class TraceOrder {
  Corrected,  // Tr[adj(A_lambda) A_{S_h lambda}]: sum of single-column h-shifts
  AsPrinted   // Tr[adj(A_{S_h lambda}) A_lambda]
};

// Psi_{N,lambda,h}; the weighted form multiplies each entry of A_{S_h lambda} by its index.
ExpPolyFunction trace_adjugate(int N, int s, const Partition& lambda, int h, bool weighted = false,
                               TraceOrder order = TraceOrder::Corrected);

// sum_{j=1}^{l} (-1)^{j-1} Psi_{N,lambda_{l,j}}.
ExpPolyFunction hook_alternating_sum(int N, int s, int l);
// sum_{j=1}^{l} (-1)^{j-1} (2N-2j+l+alpha) Psi_{N,lambda_{l,j}}.
ExpPolyFunction weighted_hook_sum(int N, int s, int l, const Rational& alpha);

enum class BPrecedence {
  LastColumn,  // the j = l clause overrides j >= i
  UpperFirst   // j >= i and j = i-1 take precedence, j = l only fills what remains
};

struct RecursionMatrices {
  int l = 0;
  int k = 0;
  RMatrix B;               // l x l
  std::vector<RMatrix> Q;  // Q[m] for m = 0..k+1; Q_0, Q_1: l x (l-1), Q_2: l x (l-2), Q_m: l x (l+m-2)
};

RecursionMatrices appendix_matrices(int l, int k, int N, int s, BPrecedence prec = BPrecedence::LastColumn);

// Coefficient multiplying the D-functions in the iterated t_q-derivative expansion.
// h = (h_2..h_k), hp = (h'_3..h'_{k-1}), k >= 3, sum h = i-1-j, 0 <= h'_n <= h_n.
Rational expansion_coeff(const std::vector<int>& h, const std::vector<int>& hp, int i, int j);
// Coefficient of prod_q a_q^{c_q-h'_q} b_q^{h'_q} in (sum_{q=3}^k (a_q - b_q))^{i-1-j},
// with a_q = (q-1)t_{q-1}, b_q = q t_q; equals expansion_coeff times prod_q binom(c_q, h'_q).
Rational expansion_coeff_collected(const std::vector<int>& h, const std::vector<int>& hp, int i, int j);
// Bracket counts c_3..c_k implied by (h, hp).
std::vector<int> expansion_bracket_counts(const std::vector<int>& h, const std::vector<int>& hp);

}  // namespace cuem
