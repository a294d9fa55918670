#include "cuemoments/monte_carlo.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "cuemoments/symmetric_expansion.hpp"

namespace cuem {

// ---------------------------------------------------------------- RNG

std::uint64_t splitmix64_at(std::uint64_t key, std::uint64_t counter) {
  std::uint64_t z = key + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

double CounterRng::cauchy() { return std::tan(boost::math::constants::pi<double>() * (uniform() - 0.5)); }

// ---------------------------------------------------------------- sampler

void ChainConfig::validate() const {
  if (N < 1) throw Error("invalid-config", "N must be at least 1");
  if (!(s > 0)) throw Error("invalid-config", "s must be positive");
  if (chains < 1) throw Error("invalid-config", "chains must be at least 1");
  if (samples < 1) throw Error("invalid-config", "samples must be at least 1");
  if (burn_in < 0) throw Error("invalid-config", "burn_in must be nonnegative");
  if (thin < 1) throw Error("invalid-config", "thin must be at least 1");
  if (!(proposal_scale > 0)) throw Error("invalid-config", "proposal_scale must be positive");
}

namespace {

constexpr double kCollision = 1e-300;
constexpr double kTargetAcceptance = 0.44;

// Log-density terms involving coordinate i at value v; -inf on a collision.
double coordinate_logp(const std::vector<double>& x, int i, double v, double a) {
  double lp = -a * std::log1p(v * v);
  for (int j = 0; j < static_cast<int>(x.size()); ++j) {
    if (j == i) continue;
    double d = std::fabs(v - x[j]);
    if (d < kCollision) return -INFINITY;
    lp += 2 * std::log(d);
  }
  return lp;
}

struct ChainResult {
  std::vector<double> draws;
  double acceptance = 0;
  double scale = 0;
};

ChainResult run_chain(const ChainConfig& c, int chain) {
  CounterRng rng(c.seed ^ static_cast<std::uint64_t>(chain));
  const int N = c.N;
  const double a = c.s + N;
  std::vector<double> x(N);
  for (int i = 0; i < N; ++i) x[i] = i - 0.5 * (N - 1);
  double log_scale = std::log(c.proposal_scale);

  auto update = [&](int i) {
    double v = x[i] + std::exp(log_scale) * rng.cauchy();
    double cur = coordinate_logp(x, i, x[i], a);
    double prop = coordinate_logp(x, i, v, a);
    double u = rng.uniform();
    if (std::isfinite(prop) && std::log(u) < prop - cur) {
      x[i] = v;
      return true;
    }
    return false;
  };

  // Robbins-Monro adaptation of the proposal scale during burn-in only.
  long step = 0;
  for (int sweep = 0; sweep < c.burn_in; ++sweep) {
    for (int i = 0; i < N; ++i) {
      bool acc = update(i);
      ++step;
      log_scale += ((acc ? 1.0 : 0.0) - kTargetAcceptance) / std::pow(1.0 + step / static_cast<double>(N), 0.6);
    }
  }

  ChainResult r;
  r.draws.reserve(static_cast<std::size_t>(c.samples) * N);
  long accepted = 0, proposed = 0;
  const long sweeps = static_cast<long>(c.samples) * c.thin;
  for (long sweep = 0; sweep < sweeps; ++sweep) {
    for (int i = 0; i < N; ++i) {
      accepted += update(i);
      ++proposed;
    }
    if ((sweep + 1) % c.thin == 0) r.draws.insert(r.draws.end(), x.begin(), x.end());
  }
  r.acceptance = static_cast<double>(accepted) / static_cast<double>(proposed);
  r.scale = std::exp(log_scale);
  return r;
}

}  // namespace

SampleBatch sample_hp(const ChainConfig& config) {
  config.validate();
  SampleBatch b;
  b.config = config;
  b.N = config.N;
  double acc_sum = 0;
  for (int ch = 0; ch < config.chains; ++ch) {
    ChainResult r = run_chain(config, ch);
    b.draws.insert(b.draws.end(), r.draws.begin(), r.draws.end());
    b.chain_acceptance.push_back(r.acceptance);
    b.adapted_scale.push_back(r.scale);
    acc_sum += r.acceptance;
    if (r.acceptance < 0.05 || r.acceptance > 0.95) b.flagged = true;
  }
  b.acceptance_rate = acc_sum / config.chains;
  return b;
}

// ---------------------------------------------------------------- estimators

Estimate estimate_statistic(const SampleBatch& batch, const std::function<double(const double*)>& f, int blocks) {
  if (blocks < 20) throw Error("too-few-samples-for-blocks", "at least 20 blocks are required");
  const std::size_t n = batch.size();
  const std::size_t bsize = n / static_cast<std::size_t>(blocks);
  if (bsize < 2) throw Error("too-few-samples-for-blocks", "need at least two draws per block");
  std::vector<double> means(blocks, 0.0);
  double sum = 0, sumsq = 0;
  const std::size_t used = bsize * blocks;
  for (std::size_t i = 0; i < used; ++i) {
    double v = f(batch.draw(i));
    means[i / bsize] += v;
    sum += v;
    sumsq += v * v;
  }
  Estimate e;
  e.blocks = blocks;
  e.estimate = sum / used;
  double var_iid = (sumsq - used * e.estimate * e.estimate) / (used - 1);
  double ssb = 0;
  for (double& m : means) {
    m /= bsize;
    ssb += (m - e.estimate) * (m - e.estimate);
  }
  double var_mean = ssb / (blocks - 1) / blocks;
  e.stderr_ = std::sqrt(var_mean);
  e.ess = var_mean > 0 ? var_iid / var_mean : static_cast<double>(used);
  return e;
}

namespace {

// Evaluates 2^{-sum 2h n} prod |Xi_n|^{2h} (or the V analogue) with a precomputed a_{n,l} table.
class JointIntegrand {
public:
  JointIntegrand(const MomentSpec& spec, int N) : spec_(spec), N_(N) {
    spec.validate();
    int nmax = spec.orders.front();
    const ACoeffTable t = a_table(nmax, N);
    a_.assign(nmax + 1, std::vector<double>(nmax + 1, 0.0));
    for (int n = 0; n <= nmax; ++n)
      for (int l = 0; l <= n; ++l) a_[n][l] = t.a[n][l].get_d();
    double weighted = 0;
    for (std::size_t j = 0; j < spec.orders.size(); ++j) {
      if (spec.orders[j] == 0) continue;
      exps_.push_back(spec.exponents[j].get_d());
      orders_.push_back(spec.orders[j]);
      weighted += exps_.back() * orders_.back();
    }
    scale_ = std::pow(2.0, -weighted);
  }

  double operator()(const double* x) const {
    if (orders_.empty()) return 1.0;
    const int nmax = static_cast<int>(a_.size()) - 1;
    std::vector<double> e(N_ + 1, 0.0);
    e[0] = 1;
    for (int i = 0; i < N_; ++i)
      for (int l = std::min(i + 1, N_); l >= 1; --l) e[l] += x[i] * e[l - 1];
    std::vector<double> xi(nmax + 1, 0.0);
    for (int n = 0; n <= nmax; ++n)
      for (int l = 0; l <= std::min(n, N_); ++l) xi[n] += a_[n][l] * e[l];
    double v = scale_;
    for (std::size_t j = 0; j < orders_.size(); ++j) {
      const int n = orders_[j];
      double mag;
      if (spec_.variant == Variant::Z) {
        mag = std::fabs(xi[n]);
      } else {
        // sum_m (-i)^m N^m binom(n, m) Xi_{n-m}
        std::complex<double> z = 0;
        std::complex<double> w = 1;
        for (int m = 0; m <= n; ++m) {
          z += w * binomial(n, m).get_d() * xi[n - m];
          w *= std::complex<double>(0, -static_cast<double>(N_));
        }
        mag = std::abs(z);
      }
      v *= std::pow(mag, exps_[j]);
    }
    return v;
  }

private:
  MomentSpec spec_;
  int N_;
  std::vector<std::vector<double>> a_;
  std::vector<int> orders_;
  std::vector<double> exps_;
  double scale_ = 1;
};

}  // namespace

double joint_moment_integrand(const MomentSpec& spec, int N, const double* x) { return JointIntegrand(spec, N)(x); }

Estimate estimate_joint_moment(const SampleBatch& batch, const MomentSpec& spec, int blocks) {
  if (spec.N && *spec.N != batch.N) throw Error("invalid-spec", "spec arity differs from the batch arity");
  JointIntegrand f(spec, batch.N);
  return estimate_statistic(batch, [&](const double* x) { return f(x); }, blocks);
}

// ---------------------------------------------------------------- quadrature

namespace {

struct Rule {
  std::vector<double> x, w;  // on [-1, 1]
};

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Rule r;
  for (double z : boost::math::legendre_p_zeros<double>(n)) {
    double d = boost::math::legendre_p_prime(n, z);
    double w = 2.0 / ((1 - z * z) * d * d);
    r.x.push_back(z);
    r.w.push_back(w);
    if (z != 0) {
      r.x.push_back(-z);
      r.w.push_back(w);
    }
  }
  return cache.emplace(n, std::move(r)).first->second;
}

// 1-D nodes in x = tan(u) on both halves of (-pi/2, pi/2), weights include cos(u)^{2(s+N)-2}.
void line_nodes(int n, double s, int N, std::vector<double>& xs, std::vector<double>& ws) {
  const Rule& r = gauss_legendre(n);
  const double h = boost::math::constants::half_pi<double>() / 2;  // half-width of each half-interval
  xs.clear();
  ws.clear();
  for (int side = -1; side <= 1; side += 2) {
    const double mid = side * h;
    for (std::size_t k = 0; k < r.x.size(); ++k) {
      double u = mid + h * r.x[k];
      xs.push_back(std::tan(u));
      ws.push_back(h * r.w[k] * std::pow(std::cos(u), 2 * (s + N) - 2));
    }
  }
}

// E[f] on the tensor grid; `abs_scale`, when given, receives E|f| on the same grid.
template <class T, class F>
T tensor_ratio(int N, double s, int n, const F& f, double* abs_scale = nullptr) {
  if (N < 1 || N > 3) throw Error("arity-too-large", "quadrature supports N <= 3");
  std::vector<double> xs, ws;
  line_nodes(n, s, N, xs, ws);
  const std::size_t m = xs.size();
  std::vector<std::size_t> idx(N, 0);
  std::vector<double> pt(N);
  T num = T(0);
  double den = 0, abs_num = 0;
  while (true) {
    double w = 1;
    for (int i = 0; i < N; ++i) {
      pt[i] = xs[idx[i]];
      w *= ws[idx[i]];
    }
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) w *= (pt[i] - pt[j]) * (pt[i] - pt[j]);
    T v = f(pt);
    num += w * v;
    abs_num += w * std::abs(v);
    den += w;
    int d = 0;
    while (d < N && ++idx[d] == m) idx[d++] = 0;
    if (d == N) break;
  }
  if (abs_scale) *abs_scale = abs_num / den;
  return num / den;
}

}  // namespace

QuadratureResult quadrature_expectation(int N, double s, const RealIntegrand& f, int nodes, double rel_tol,
                                        int max_nodes) {
  if (!(s > 0)) throw Error("invalid-argument", "quadrature needs s > 0");
  QuadratureResult r;
  double prev = tensor_ratio<double>(N, s, nodes, f);
  for (int n = 2 * nodes; n <= max_nodes; n *= 2) {
    double scale = 0;
    double cur = tensor_ratio<double>(N, s, n, f, &scale);
    double diff = std::fabs(cur - prev);
    // Integrands with exact value 0 cancel large terms; accept differences at roundoff level of E|f|.
    if (diff <= rel_tol * std::fabs(cur) || diff <= 1e-13 * scale) {
      r.value = cur;
      r.error = diff;
      r.nodes = n;
      return r;
    }
    prev = cur;
  }
  throw Error("quadrature-tolerance-not-met", "node doubling did not reach the requested tolerance");
}

std::complex<double> quadrature_expectation_complex(int N, double s, const ComplexIntegrand& f, int nodes) {
  return tensor_ratio<std::complex<double>>(N, s, nodes, f);
}

bool quadrature_integrable(const SymPoly& P, double s) {
  for (int i = 0; i < P.arity(); ++i)
    if (P.degree_in(i) >= 2 * s + 1) return false;
  return true;
}

QuadratureResult quadrature_expectation(int N, double s, const SymPoly& P, int nodes, double rel_tol, int max_nodes) {
  if (P.arity() != N) throw Error("invalid-argument", "polynomial arity differs from N");
  if (!quadrature_integrable(P, s))
    throw Error("non-integrable-combination", "some coordinate degree reaches 2s+1; the integral diverges");
  return quadrature_expectation(
      N, s, [&](const std::vector<double>& x) { return P.eval(x); }, nodes, rel_tol, max_nodes);
}

// ---------------------------------------------------------------- asymptotics

std::vector<AsymptoticsRow> asymptotics_table(const MomentSpec& spec, const std::vector<int>& N_list, Engine engine,
                                              const Rational& s0, const ChainConfig& mc) {
  std::vector<AsymptoticsRow> rows;
  double weighted = 0;
  for (std::size_t j = 0; j < spec.orders.size(); ++j) weighted += spec.orders[j] * spec.exponents[j].get_d();
  for (int N : N_list) {
    MomentSpec sp = spec;
    sp.N = N;
    AsymptoticsRow row;
    row.N = N;
    if (engine == Engine::Exact) {
      RationalFunction f = finite_scaled_moment(sp);
      row.exact = f;
      row.value = f.eval(s0).get_d();
    } else {
      ChainConfig c = mc;
      c.N = N;
      c.s = s0.get_d();
      SampleBatch b = sample_hp(c);
      Estimate e = estimate_joint_moment(b, sp);
      double scale = std::pow(static_cast<double>(N), -weighted);
      row.value = e.estimate * scale;
      row.stderr_ = e.stderr_ * scale;
    }
    rows.push_back(std::move(row));
  }
  MomentSpec lim = spec;
  lim.N.reset();
  AsymptoticsRow last;
  if (lim.exact_supported()) {
    RationalFunction f = leading_coefficient(lim);
    last.exact = f;
    last.value = f.eval(s0).get_d();
  } else {
    last.value = NAN;
  }
  rows.push_back(std::move(last));
  return rows;
}

}  // namespace cuem
