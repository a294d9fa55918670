#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cuemoments/cauchy_expectation.hpp"

namespace cuem {

// SplitMix64 finalizer applied to key + (counter+1) * 0x9E3779B97F4A7C15.
std::uint64_t splitmix64_at(std::uint64_t key, std::uint64_t counter);

class CounterRng {
public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  std::uint64_t next() { return splitmix64_at(key_, counter_++); }
  double uniform();  // (0, 1), 53 random bits
  double cauchy();   // standard Cauchy
  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct ChainConfig {
  int N = 1;
  double s = 1;
  int chains = 4;
  int burn_in = 2000;
  int samples = 20000;  // recorded sweeps per chain after thinning
  int thin = 1;
  double proposal_scale = 1.0;
  std::uint64_t seed = 0x5eed;

  void validate() const;
};

struct SampleBatch {
  ChainConfig config;
  int N = 0;
  std::vector<double> draws;  // row-major, N values per draw, chains concatenated in index order
  double acceptance_rate = 0;
  std::vector<double> chain_acceptance;
  std::vector<double> adapted_scale;
  bool flagged = false;  // some chain accepted outside [0.05, 0.95]

  std::size_t size() const { return N ? draws.size() / N : 0; }
  const double* draw(std::size_t i) const { return draws.data() + i * N; }
};

// Metropolis-within-Gibbs for the density prod (1+x_i^2)^{-(s+N)} prod_{i<j} (x_i-x_j)^2.
SampleBatch sample_hp(const ChainConfig& config);

struct Estimate {
  double estimate = 0;
  double stderr_ = 0;
  double ess = 0;
  int blocks = 0;
};

// Batch mean with non-overlapping block-mean standard error.
Estimate estimate_statistic(const SampleBatch& batch, const std::function<double(const double*)>& f,
                            int blocks = 25);
// 2^{-sum 2h_j n_j} E_N[prod_j |Xi_{n_j}|^{2h_j}] (or the V-variant integrand), real exponents allowed.
Estimate estimate_joint_moment(const SampleBatch& batch, const MomentSpec& spec, int blocks = 25);
// The integrand of estimate_joint_moment at one point, including the power of 2.
double joint_moment_integrand(const MomentSpec& spec, int N, const double* x);

struct QuadratureResult {
  double value = 0;
  double error = 0;  // difference between the last two node counts
  int nodes = 0;     // per half-interval per dimension at the accepted level
};

using RealIntegrand = std::function<double(const std::vector<double>&)>;
using ComplexIntegrand = std::function<std::complex<double>(const std::vector<double>&)>;

// E_N^{(s)}[f] by tensor Gauss-Legendre after x = tan(u), split at u = 0, N <= 3. Doubles the node
// count from `nodes` until successive values agree to `rel_tol`.
QuadratureResult quadrature_expectation(int N, double s, const RealIntegrand& f, int nodes = 16,
                                        double rel_tol = 1e-10, int max_nodes = 512);
// Fixed node count; oscillatory integrands such as e^{-itx} converge only algebraically in the node count.
std::complex<double> quadrature_expectation_complex(int N, double s, const ComplexIntegrand& f, int nodes = 64);
// Polynomial integrands; throws non-integrable-combination when some deg_i(P) >= 2s+1.
QuadratureResult quadrature_expectation(int N, double s, const SymPoly& P, int nodes = 16, double rel_tol = 1e-10,
                                        int max_nodes = 512);
bool quadrature_integrable(const SymPoly& P, double s);

enum class Engine { Exact, MonteCarlo };

struct AsymptoticsRow {
  std::optional<int> N;  // empty for the limit row
  double value = 0;
  double stderr_ = 0;
  std::optional<RationalFunction> exact;
};

// Finite-N normalized values 2^{-sum 2h_j n_j} E_N[prod |Xi_{n_j}/N^{n_j}|^{2h_j}] at s0, followed by the
// limit row from leading_coefficient.
std::vector<AsymptoticsRow> asymptotics_table(const MomentSpec& spec, const std::vector<int>& N_list, Engine engine,
                                              const Rational& s0, const ChainConfig& mc = {});

}  // namespace cuem
