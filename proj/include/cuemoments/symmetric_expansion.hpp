#pragma once

#include <vector>

#include "cuemoments/exact_algebra.hpp"

namespace cuem {

// e_k(x_1..x_m); zero polynomial when k > m.
SymPoly elementary(int k, int m);

// prod_{i<j} (x_i - x_j)^2, collected.
SymPoly vandermonde_squared(int m);

// Power sum p_k(x_1..x_m).
SymPoly power_sum(int k, int m);

// a_{n,l}(N) = (-1)^{(n+l)/2} n! [z^n] sinh(z)^l cosh(z)^{N-l}, zero when n-l is odd or l > N.
Integer a_coeff(int n, int l, int N);

struct ACoeffTable {
  int N = 0;
  std::vector<std::vector<Integer>> a;  // a[n][l], 0 <= l <= n <= n_max
};
ACoeffTable a_table(int n_max, int N);

struct XiPoly {
  int n = 0;
  int N = 0;
  SymPoly poly;
};
// Xi_n = sum_l a_{n,l} e_l in N variables.
XiPoly xi_poly(int n, int N);

enum class NewtonDirection { PowerToElementary, ElementaryToPower };

// values[0] holds index 1. Y_n = (1/n) sum_{j=1}^n (-1)^{j-1} Y_{n-j} q_j with Y_0 = 1, or its inverse.
template <class T>
std::vector<T> newton_convert(const std::vector<T>& values, NewtonDirection dir) {
  const std::size_t n = values.size();
  std::vector<T> out;
  out.reserve(n);
  if (dir == NewtonDirection::PowerToElementary) {
    std::vector<T> y{T(1)};
    for (std::size_t k = 1; k <= n; ++k) {
      T acc = T(0);
      for (std::size_t j = 1; j <= k; ++j) {
        T term = y[k - j] * values[j - 1];
        if (j % 2 == 1) acc = acc + term;
        else acc = acc - term;
      }
      y.push_back(acc / T(static_cast<long>(k)));
    }
    out.assign(y.begin() + 1, y.end());
  } else {
    // p_k = sum_{j=1}^{k-1} (-1)^{j-1} e_j p_{k-j} + (-1)^{k-1} k e_k
    for (std::size_t k = 1; k <= n; ++k) {
      T acc = values[k - 1] * T(static_cast<long>(k));
      if (k % 2 == 0) acc = T(0) - acc;
      for (std::size_t j = 1; j < k; ++j) {
        T term = values[j - 1] * out[k - j - 1];
        if (j % 2 == 1) acc = acc + term;
        else acc = acc - term;
      }
      out.push_back(acc);
    }
  }
  return out;
}

// prod_j |sum_{m=0}^{n_j} (-i)^m N^m binom(n_j, m) Xi_{n_j - m}|^{2h_j} as a real polynomial,
// via |z|^2 = (Re z)^2 + (Im z)^2. exponents holds the even integers 2h_j.
SymPoly v_variant_integrand(const std::vector<int>& orders, const std::vector<int>& exponents, int N);

// prod_j Xi_{n_j}^{2h_j}.
SymPoly z_variant_integrand(const std::vector<int>& orders, const std::vector<int>& exponents, int N);

}  // namespace cuem
