#pragma once

#include <optional>

#include "cuemoments/exact_algebra.hpp"

namespace cuem {

// sum_m (z/2)^{nu+2m} / (m! (m+nu)!) to relative precision 10^{-digits}, digits <= 45.
double bessel_I(int nu, double z, int digits = 16);

// G(n) = prod_{k=1}^{n-2} k! for integer n >= 1.
Rational barnes_G_integer(int n);
// Exact for integer z, otherwise the Weierstrass product reduced to (0, 2] by G(z+1) = Gamma(z) G(z).
double barnes_G(double z);
double log_barnes_G(double z);
// log G(z) from the Weierstrass product alone: K factors plus the tail
// sum_{j>=3} (-1)^{j+1} x^j/j * zeta(j-1, K+1), x = z-1, needs |x| < K+1.
double log_barnes_G_product(double z, int K = 50);

// phi_s(t) = E[e^{-i t q_1}] for t >= 0 as an exact series of order K.
PowerSeries phi_series(int s, int K);
// phi_s(t) at t >= 0 from the Bessel determinant, 50-digit working precision.
double phi_value(int s, double t);

struct TauFunction {
  enum class Kind { ExactRational, Series };
  Kind kind = Kind::Series;
  int s = 0;
  std::optional<int> N;  // empty for the limit
  RationalFunction exact;  // in t, when kind == ExactRational
  PowerSeries series;      // when kind == Series
};

// tau(t) = t d/dt log phi_s(t/2), order K.
TauFunction tau_limit(int s, int K);
// (t tau'')^2 + 4t tau'^3 - (4s^2 + 4tau) tau'^2 - t tau' + tau, truncated at order K-2.
PowerSeries sigma_p3_residual(const TauFunction& tau);

// tau_N(t) = t D'(t/2N) / (2N D(t/2N)) - t/2 with Psi_N(u) = e^{-N u} D(u).
TauFunction tau_finiteN(int N, int s);
// (t tau'')^2 + 4t tau'^3 - (4s^2 + 4tau + t^2/N^2) tau'^2 - t(1 + 2s/N - 2tau/N^2) tau'
//   + (1 + 2s/N - tau/N^2) tau.
RationalFunction painleve5_residual(const TauFunction& tau);

struct QuadConfig {
  double tolerance = 1e-10;
  int max_refinements = 15;
};

// int_0^infinity (1 - cos(y t)) / t^{p+1} dt by quadrature, 0 < p < 2.
double fractional_kernel_integral(double p, double y, const QuadConfig& config = {});
// C_p with |y|^p = C_p int_0^infinity (1 - cos(y t)) / t^{p+1} dt, normalized numerically at y = 1.
double fractional_constant(double p, const QuadConfig& config = {});
// E|q_1(s)|^p = C_p int_0^infinity (1 - phi_s(t)) / t^{p+1} dt.
double fractional_moment_q1(double p, int s, const QuadConfig& config = {});

}  // namespace cuem
