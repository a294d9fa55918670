#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cuemoments/cauchy_expectation.hpp"
#include "cuemoments/hankel_verify.hpp"
#include "cuemoments/monte_carlo.hpp"
#include "cuemoments/painleve.hpp"

using namespace cuem;
using nlohmann::json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitDiagnostics = 3;
constexpr int kExitIdentity = 4;

// Result of one command: JSON payload, exit code and a one-line human summary.
struct Outcome {
  json result;
  int exit_code = 0;
  std::string summary;
};

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CUEMOMENTS_SEED")) {
    try {
      return std::stoull(env, nullptr, 0);
    } catch (const std::exception&) {
      throw Error("invalid-argument", "CUEMOMENTS_SEED is not an unsigned integer");
    }
  }
  return ChainConfig().seed;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text)) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error("parse-error", "order '" + item + "' is not an integer");
    }
  }
  return out;
}

// "_" stands for an exponent carried by s on an order-0 entry.
std::vector<Rational> parse_exponents(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& item : split(text)) out.push_back(item == "_" ? Rational(0) : parse_rational(item));
  return out;
}

Variant parse_variant(const std::string& v) {
  if (v == "Z") return Variant::Z;
  if (v == "V") return Variant::V;
  throw Error("invalid-spec", "variant must be Z or V");
}

std::string variant_name(Variant v) { return v == Variant::Z ? "Z" : "V"; }

// Flags shared by the moment commands.
struct SpecFlags {
  std::string orders, exponents, variant = "Z";

  void add(CLI::App* app) {
    app->add_option("--orders", orders, "derivative orders n1,n2,... (strictly decreasing)")->required();
    app->add_option("--exponents", exponents, "exponents 2h1,2h2,...; '_' marks an order-0 entry")->required();
    app->add_option("--variant", variant, "Z (real-valued Z_A) or V (characteristic polynomial)")
        ->check(CLI::IsMember({"Z", "V"}));
  }
  MomentSpec build(std::optional<int> N) const {
    MomentSpec sp;
    sp.orders = parse_orders(orders);
    sp.exponents = parse_exponents(exponents);
    sp.variant = parse_variant(variant);
    sp.N = N;
    sp.validate();
    return sp;
  }
};

json spec_json(const MomentSpec& sp) {
  json e = json::array();
  for (const auto& x : sp.exponents) e.push_back(to_json(x));
  json j{{"orders", sp.orders}, {"exponents", e}, {"variant", variant_name(sp.variant)}};
  if (sp.N) j["N"] = *sp.N;
  return j;
}

// Integer coefficients in ascending powers, e.g. "4 + 2*t".
std::string poly_text(const std::vector<Integer>& c, const std::string& var) {
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    Integer a = abs(c[k]);
    if (out.empty()) out = c[k] < 0 ? "-" : "";
    else out += c[k] < 0 ? " - " : " + ";
    std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    if (k == 0) out += a.get_str();
    else if (a == 1) out += mono;
    else out += a.get_str() + "*" + mono;
  }
  return out.empty() ? "0" : out;
}

// Human form with integer coefficients, e.g. "-t^2/(4 + 2*t)".
std::string function_text(const RationalFunction& f, const std::string& var) {
  auto [num, den] = f.integer_form();
  if (den.size() == 1 && den[0] < 0) {
    for (auto& c : num) c = -c;
    den[0] = -den[0];
  }
  std::string n = poly_text(num, var);
  if (den.size() == 1 && den[0] == 1) return n;
  std::size_t terms = 0;
  for (const auto& c : num) terms += c != 0;
  if (terms > 1) n = "(" + n + ")";
  std::string d = poly_text(den, var);
  std::size_t dterms = 0;
  for (const auto& c : den) dterms += c != 0;
  bool bare = dterms == 1 && (den.size() == 1 || (den.back() == 1 && den.size() == 2));
  return n + "/" + (bare ? d : "(" + d + ")");
}

json value_json(const RationalFunction& f, const std::optional<Rational>& s) {
  json j{{"rational_function", to_json(f)}, {"text", function_text(f, "s")}};
  if (s) {
    Rational v = f.eval(*s);
    j["s"] = to_json(*s);
    j["value"] = to_json(v);
    j["float"] = v.get_d();
  }
  return j;
}

std::string rational_text(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : to_string(q);
}

// ------------------------------------------------------------------ commands

struct LeadingCoeff {
  SpecFlags spec;
  std::string eval_s;
  bool with_constant = false;

  void add(CLI::App* app) {
    spec.add(app);
    app->add_option("--eval-s", eval_s, "evaluate at this rational s");
    app->add_flag("--with-constant", with_constant,
                  "also report the full limit: times 2^{-sum 2h n} and G(s+1)^2/G(2s+1); needs --eval-s. "
                  "The base value is the limiting moment itself, e.g. n=(1), 2h=(2) gives 1/(4s^2-1) for Z "
                  "and 4s^2/(4s^2-1) for V");
  }
  Outcome run() const {
    MomentSpec sp = spec.build(std::nullopt);
    std::optional<Rational> s;
    if (!eval_s.empty()) s = parse_rational(eval_s);
    long weight = 0;
    std::vector<int> even = sp.even_exponents();
    for (std::size_t j = 0; j < sp.orders.size(); ++j) weight += static_cast<long>(sp.orders[j]) * even[j];
    const Rational two_power = Rational(1) / Rational(Integer(1) << static_cast<unsigned>(weight));
    const RationalFunction scaled = leading_coefficient(sp);
    const RationalFunction f = scaled / RationalFunction(two_power);
    Outcome o;
    o.result = {{"spec", spec_json(sp)}, {"limiting_moment", value_json(f, s)}, {"two_power", to_json(two_power)}};
    o.summary = "limiting moment " + function_text(f, "s");
    if (with_constant) {
      if (!s) throw Error("invalid-argument", "--with-constant needs --eval-s");
      Rational v = scaled.eval(*s);
      json c;
      if (s->get_den() == 1 && *s >= 1) {
        Rational ks = keating_snaith_constant_exact(static_cast<int>(s->get_num().get_si()));
        c = {{"barnes_constant", to_json(ks)}, {"value", to_json(v * ks)}, {"float", Rational(v * ks).get_d()}};
      } else {
        double ks = keating_snaith_constant(s->get_d());
        c = {{"barnes_constant_float", ks}, {"float", v.get_d() * ks}};
      }
      o.result["with_constant"] = c;
    }
    if (s) o.summary += " = " + rational_text(f.eval(*s)) + " at s = " + rational_text(*s);
    return o;
  }
};

struct FiniteMoment {
  SpecFlags spec;
  int N = 1;
  std::string eval_s;
  bool scaled = false;

  void add(CLI::App* app) {
    spec.add(app);
    app->add_option("--N", N, "matrix size (<= 7)")->required();
    app->add_option("--eval-s", eval_s, "evaluate at this rational s");
    app->add_flag("--scaled", scaled, "divide by N^{sum 2h n} (the asymptotics normalization)");
  }
  Outcome run() const {
    MomentSpec sp = spec.build(N);
    std::optional<Rational> s;
    if (!eval_s.empty()) s = parse_rational(eval_s);
    RationalFunction f = scaled ? finite_scaled_moment(sp) : finite_joint_moment(sp);
    Outcome o;
    o.result = {{"spec", spec_json(sp)}, {"scaled", scaled}, {"moment", value_json(f, s)}};
    o.summary = "finite moment " + function_text(f, "s");
    return o;
  }
};

struct McEstimate {
  SpecFlags spec;
  int N = 1;
  std::string s = "2";
  ChainConfig chain;
  int blocks = 25;

  void add(CLI::App* app) {
    spec.add(app);
    app->add_option("--N", N, "matrix size")->required();
    app->add_option("--s", s, "real s > 0 (rational text accepted)");
    app->add_option("--seed", chain.seed, "64-bit seed (default: CUEMOMENTS_SEED or built-in)");
    app->add_option("--chains", chain.chains, "independent chains");
    app->add_option("--samples", chain.samples, "recorded sweeps per chain");
    app->add_option("--burn-in", chain.burn_in, "adaptation sweeps per chain");
    app->add_option("--thin", chain.thin, "sweeps between recorded draws");
    app->add_option("--blocks", blocks, "blocks for the standard error");
  }
  Outcome run() const {
    MomentSpec sp = spec.build(N);
    ChainConfig c = chain;
    c.N = N;
    c.s = parse_rational(s).get_d();
    SampleBatch b = sample_hp(c);
    Estimate e = estimate_joint_moment(b, sp, blocks);
    Outcome o;
    o.result = {{"spec", spec_json(sp)},
                {"s", s},
                {"seed", c.seed},
                {"estimate", e.estimate},
                {"stderr", e.stderr_},
                {"ess", e.ess},
                {"blocks", e.blocks},
                {"draws", b.size()},
                {"acceptance_rate", b.acceptance_rate},
                {"flagged", b.flagged}};
    char buf[128];
    std::snprintf(buf, sizeof buf, "estimate %.6g +- %.2g (acceptance %.2f)", e.estimate, e.stderr_, b.acceptance_rate);
    o.summary = buf;
    if (b.flagged) {
      o.exit_code = kExitDiagnostics;
      o.summary += "; a chain left the acceptance window [0.05, 0.95]";
    }
    return o;
  }
};

struct Quadrature {
  int N = 1;
  std::string s = "2", poly, orders, exponents, variant = "Z";
  int nodes = 16;
  double tol = 1e-10;

  void add(CLI::App* app) {
    app->add_option("--N", N, "matrix size (<= 3)")->required();
    app->add_option("--s", s, "real s > 0 (rational text accepted)");
    app->add_option("--poly", poly, "polynomial integrand such as \"x1^2*x2 + 3/2*x1\"");
    app->add_option("--orders", orders, "moment integrand orders (instead of --poly)");
    app->add_option("--exponents", exponents, "moment integrand exponents; '_' marks an order-0 entry");
    app->add_option("--variant", variant, "Z or V")->check(CLI::IsMember({"Z", "V"}));
    app->add_option("--nodes", nodes, "starting Gauss-Legendre nodes per half-interval");
    app->add_option("--tol", tol, "relative tolerance for node doubling");
  }
  Outcome run() const {
    double sv = parse_rational(s).get_d();
    Outcome o;
    QuadratureResult r;
    if (!poly.empty()) {
      SymPoly P = SymPoly::parse(poly, N);
      r = quadrature_expectation(N, sv, P, nodes, tol);
      o.result["poly"] = P.to_string();
    } else {
      if (orders.empty() || exponents.empty()) throw Error("invalid-argument", "give --poly or --orders/--exponents");
      SpecFlags f{orders, exponents, variant};
      MomentSpec sp = f.build(N);
      r = quadrature_expectation(
          N, sv, [&](const std::vector<double>& x) { return joint_moment_integrand(sp, N, x.data()); }, nodes, tol);
      o.result["spec"] = spec_json(sp);
    }
    o.result["N"] = N;
    o.result["s"] = s;
    o.result["value"] = r.value;
    o.result["error"] = r.error;
    o.result["nodes"] = r.nodes;
    char buf[96];
    std::snprintf(buf, sizeof buf, "quadrature %.12g (nodes %d)", r.value, r.nodes);
    o.summary = buf;
    return o;
  }
};

struct Painleve {
  std::string mode = "p5-finite";
  int N = 1, s = 1, series_order = 12;

  void add(CLI::App* app) {
    app->add_option("--mode", mode, "p5-finite or p3-limit")->check(CLI::IsMember({"p5-finite", "p3-limit"}));
    app->add_option("--N", N, "matrix size for p5-finite");
    app->add_option("--s", s, "integer s >= 1");
    app->add_option("--series-order", series_order, "residual order checked for p3-limit");
  }
  Outcome run() const {
    if (s < 1) throw Error("unsupported", "the Painleve checks need integer s >= 1");
    Outcome o;
    if (mode == "p5-finite") {
      if (N < 1) throw Error("invalid-argument", "N must be positive");
      TauFunction tau = tau_finiteN(N, s);
      RationalFunction r = painleve5_residual(tau);
      o.result = {{"mode", mode},
                  {"N", N},
                  {"s", s},
                  {"residual_zero", r.is_zero()},
                  {"tau", function_text(tau.exact, "t")},
                  {"tau_rational_function", to_json(tau.exact)},
                  {"residual", to_json(r)}};
      o.summary = std::string("Painleve V residual ") + (r.is_zero() ? "is identically zero" : "is NONZERO");
      if (!r.is_zero()) o.exit_code = kExitIdentity;
    } else {
      if (series_order < 1) throw Error("invalid-argument", "series order must be positive");
      TauFunction tau = tau_limit(s, series_order + 2);
      PowerSeries r = sigma_p3_residual(tau);
      int first_nonzero = -1;
      json coeffs = json::array();
      for (int k = 0; k <= r.order(); ++k) {
        coeffs.push_back(to_string(r[k]));
        if (first_nonzero < 0 && r[k] != 0) first_nonzero = k;
      }
      json tau_coeffs = json::array();
      for (int k = 0; k <= tau.series.order(); ++k) tau_coeffs.push_back(to_string(tau.series[k]));
      o.result = {{"mode", mode},
                  {"s", s},
                  {"series_order", r.order()},
                  {"residual_zero", first_nonzero < 0},
                  {"vanishes_through_order", first_nonzero < 0 ? r.order() : first_nonzero - 1},
                  {"residual_coefficients", coeffs},
                  {"tau_coefficients", tau_coeffs}};
      o.summary = "sigma-Painleve III' residual vanishes through order " +
                  std::to_string(first_nonzero < 0 ? r.order() : first_nonzero - 1);
      if (first_nonzero >= 0) o.exit_code = kExitIdentity;
    }
    return o;
  }
};

struct HankelVerify {
  VerifyConfig cfg;
  std::string t = "1";

  void add(CLI::App* app) {
    app->add_option("--l", cfg.l, "vector recursion size l >= 3");
    app->add_option("--k", cfg.k, "number of times t_2..t_k, k >= 2");
    app->add_option("--N", cfg.N, "matrix size");
    app->add_option("--s", cfg.s, "integer s");
    app->add_option("--t", t, "rational evaluation point t_1");
    app->add_option("--theta-m-max", cfg.theta_m_max, "largest theta index in the recurrence checks");
    app->add_flag("--perturb", cfg.perturb, "negative control: perturb one entry of Q_2");
  }
  Outcome run() const {
    VerifyConfig c = cfg;
    c.t0 = parse_rational(t);
    Outcome o;
    json checks = json::array();
    std::vector<std::string> failed;
    for (const auto& r : hankel_verify_suite(c)) {
      checks.push_back({{"name", r.name}, {"pass", r.pass}, {"residual", to_json(r.residual)}, {"detail", r.detail}});
      if (!r.pass) failed.push_back(r.name);
    }
    o.result = {{"N", c.N},      {"s", c.s},     {"l", c.l}, {"k", c.k}, {"t", to_json(c.t0)}, {"perturb", c.perturb},
                {"checks", checks}, {"failed", failed}};
    o.summary = std::to_string(checks.size() - failed.size()) + "/" + std::to_string(checks.size()) + " identities hold";
    if (!failed.empty()) {
      o.exit_code = kExitIdentity;
      o.summary += "; failed:";
      for (const auto& f : failed) o.summary += " " + f;
    }
    return o;
  }
};

struct Asymptotics {
  SpecFlags spec;
  std::string N_list = "1,2,3", s = "2", engine = "exact", format = "json";
  ChainConfig chain;

  void add(CLI::App* app) {
    spec.add(app);
    app->add_option("--N-list", N_list, "comma-separated matrix sizes");
    app->add_option("--s", s, "rational s");
    app->add_option("--engine", engine, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--seed", chain.seed, "seed for the mc engine");
    app->add_option("--samples", chain.samples, "recorded sweeps per chain for the mc engine");
  }
  Outcome run() const {
    MomentSpec sp = spec.build(std::nullopt);
    Rational s0 = parse_rational(s);
    std::vector<AsymptoticsRow> rows =
        asymptotics_table(sp, parse_orders(N_list), engine == "exact" ? Engine::Exact : Engine::MonteCarlo, s0, chain);
    json table = json::array();
    for (const auto& r : rows) {
      json row{{"N", r.N ? json(*r.N) : json("limit")}, {"value", std::isfinite(r.value) ? json(r.value) : json(nullptr)},
               {"stderr", r.stderr_}};
      if (r.exact) row["exact"] = to_json(r.exact->eval(s0));
      table.push_back(row);
    }
    Outcome o;
    o.result = {{"spec", spec_json(sp)}, {"s", to_json(s0)}, {"engine", engine}, {"rows", table}};
    if (engine == "mc") o.result["seed"] = chain.seed;
    o.summary = std::to_string(rows.size()) + " rows";
    return o;
  }
};

std::string csv_of(const json& result) {
  std::string out = "N,value,stderr,exact\n";
  for (const auto& r : result["rows"]) {
    out += r["N"].is_string() ? r["N"].get<std::string>() : std::to_string(r["N"].get<int>());
    out += ",";
    if (!r["value"].is_null()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", r["value"].get<double>());
      out += buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, ",%.17g,", r["stderr"].get<double>());
    out += buf;
    if (r.contains("exact")) out += r["exact"].get<std::string>();
    out += "\n";
  }
  return out;
}

struct Commands {
  LeadingCoeff leading;
  FiniteMoment finite;
  McEstimate mc;
  Quadrature quad;
  Painleve painleve;
  HankelVerify verify;
  Asymptotics asym;
  std::string replay_path;
  std::string manifest_out;
};

json error_json(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

// Parses argv and runs the selected command. `args` excludes the program name.
int execute(std::vector<std::string> args, bool emit, json* result_out, std::string* digest_out);

int run_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cout << error_json("invalid-argument", "cannot read manifest " + path).dump() << "\n";
    return kExitInvalid;
  }
  json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    std::cout << error_json("parse-error", e.what()).dump() << "\n";
    return kExitInvalid;
  }
  if (manifest.contains("manifest")) manifest = manifest["manifest"];
  if (!manifest.contains("argv") || !manifest.contains("output_digest")) {
    std::cout << error_json("invalid-argument", "manifest lacks argv or output_digest").dump() << "\n";
    return kExitInvalid;
  }
  std::vector<std::string> args = manifest["argv"].get<std::vector<std::string>>();
  json result;
  std::string digest;
  int code = execute(args, false, &result, &digest);
  bool match = digest == manifest["output_digest"].get<std::string>();
  json out{{"command", "replay"},
           {"result",
            {{"replayed_command", manifest.value("command", "")},
             {"expected_digest", manifest["output_digest"]},
             {"digest", digest},
             {"match", match},
             {"exit_code", code}}}};
  std::cout << out.dump(2) << "\n";
  std::cerr << "replay " << (match ? "reproduced" : "DID NOT reproduce") << " digest " << digest << "\n";
  return match ? 0 : kExitIdentity;
}

int execute(std::vector<std::string> args, bool emit, json* result_out, std::string* digest_out) {
  const auto t0 = std::chrono::steady_clock::now();
  Commands cmd;
  cmd.mc.chain.seed = cmd.asym.chain.seed = default_seed();

  CLI::App app{"Joint moments of derivatives of characteristic polynomials of random unitary matrices"};
  app.set_version_flag("--version", std::string(CUEMOMENTS_VERSION));
  app.require_subcommand(1);
  auto* leading = app.add_subcommand("leading_coeff", "limiting leading coefficient as a rational function of s");
  cmd.leading.add(leading);
  auto* finite = app.add_subcommand("finite_moment", "exact finite-N joint moment ratio");
  cmd.finite.add(finite);
  auto* mc = app.add_subcommand("mc_estimate", "Monte Carlo joint moment estimate");
  cmd.mc.add(mc);
  auto* quad = app.add_subcommand("quadrature", "tensor quadrature expectation for N <= 3");
  cmd.quad.add(quad);
  auto* pl = app.add_subcommand("painleve", "Painleve V and sigma-Painleve III' residual checks");
  cmd.painleve.add(pl);
  auto* hv = app.add_subcommand("hankel_verify", "exact Hankel-determinant identity suite");
  cmd.verify.add(hv);
  auto* as = app.add_subcommand("asymptotics", "finite-N scaled values and the limit row");
  cmd.asym.add(as);
  for (CLI::App* sub : {leading, finite, mc, quad, pl, hv, as})
    sub->add_option("--manifest-out", cmd.manifest_out, "also write the run manifest to this file");
  auto* rp = app.add_subcommand("replay", "re-run a manifest and compare the output digest");
  rp->add_option("manifest", cmd.replay_path, "manifest JSON file (or a full command output)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    if (emit) std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    if (emit) std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    if (emit) std::cout << CUEMOMENTS_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (emit) {
      std::cout << error_json("parse-error", e.what()).dump() << "\n";
      std::cerr << "error: " << e.what() << "\n";
    }
    return kExitInvalid;
  }

  if (rp->parsed()) return run_replay(cmd.replay_path);

  std::string name;
  Outcome o;
  std::uint64_t seed_used = 0;
  bool seeded = false;
  try {
    if (leading->parsed()) {
      name = "leading_coeff";
      o = cmd.leading.run();
    } else if (finite->parsed()) {
      name = "finite_moment";
      o = cmd.finite.run();
    } else if (mc->parsed()) {
      name = "mc_estimate";
      seeded = true;
      seed_used = cmd.mc.chain.seed;
      o = cmd.mc.run();
    } else if (quad->parsed()) {
      name = "quadrature";
      o = cmd.quad.run();
    } else if (pl->parsed()) {
      name = "painleve";
      o = cmd.painleve.run();
    } else if (hv->parsed()) {
      name = "hankel_verify";
      o = cmd.verify.run();
    } else {
      name = "asymptotics";
      seeded = cmd.asym.engine == "mc";
      seed_used = cmd.asym.chain.seed;
      o = cmd.asym.run();
    }
  } catch (const Error& e) {
    if (emit) {
      std::cout << error_json(e.code(), e.what()).dump() << "\n";
      std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    }
    return kExitInvalid;
  }

  const std::string digest = hex64(fnv1a64(o.result.dump()));
  if (result_out) *result_out = o.result;
  if (digest_out) *digest_out = digest;
  if (!emit) return o.exit_code;

  // Record the seed explicitly so the manifest does not depend on the environment.
  std::vector<std::string> argv_record = args;
  if (seeded && std::find(args.begin(), args.end(), "--seed") == args.end()) {
    argv_record.push_back("--seed");
    argv_record.push_back(std::to_string(seed_used));
  }
  for (std::size_t i = 0; i + 1 < argv_record.size(); ++i)
    if (argv_record[i] == "--manifest-out") {
      argv_record.erase(argv_record.begin() + i, argv_record.begin() + i + 2);
      break;
    }
  json manifest{{"command", name},
                {"argv", argv_record},
                {"version", CUEMOMENTS_VERSION},
                {"wall_time_s",
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                {"output_digest", digest},
                {"exit_code", o.exit_code}};
  if (seeded) manifest["seed"] = seed_used;

  if (name == "asymptotics" && cmd.asym.format == "csv") {
    std::cout << csv_of(o.result);
  } else {
    json out{{"command", name}, {"result", o.result}, {"manifest", manifest}};
    std::cout << out.dump(2) << "\n";
  }
  if (!cmd.manifest_out.empty()) {
    std::ofstream mf(cmd.manifest_out);
    if (!mf) {
      std::cerr << "error: cannot write " << cmd.manifest_out << "\n";
      return kExitInvalid;
    }
    mf << manifest.dump(2) << "\n";
  }
  std::cerr << name << ": " << o.summary << "\n";
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return execute(args, true, nullptr, nullptr);
  } catch (const std::exception& e) {
    std::cout << error_json("internal", e.what()).dump() << "\n";
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
