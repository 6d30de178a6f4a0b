#include "narrow/cli/experiments.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "narrow/arith.hpp"
#include "narrow/counter_rng.hpp"
#include "narrow/cyclic.hpp"
#include "narrow/envelope.hpp"
#include "narrow/errors.hpp"
#include "narrow/gowers.hpp"
#include "narrow/progsearch.hpp"
#include "narrow/singular.hpp"
#include "narrow/uniformity.hpp"

#ifndef NARROW_VERSION
#define NARROW_VERSION "dev"
#endif

namespace narrow::cli {

namespace {

using Clock = std::chrono::steady_clock;

class Context {
 public:
  explicit Context(const ExperimentConfig& cfg) : cfg_(cfg), start_(Clock::now()) {}

  const ExperimentConfig& cfg() const { return cfg_; }
  const Json& p(const char* key) const { return cfg_.params.at(key); }
  std::int64_t i(const char* key) const { return p(key).get<std::int64_t>(); }
  double d(const char* key) const { return p(key).get<double>(); }
  std::string s(const char* key) const { return p(key).get<std::string>(); }
  bool b(const char* key) const { return p(key).get<bool>(); }
  double tolerance(double fallback) const { return cfg_.tolerance.value_or(fallback); }

  bool out_of_time() const {
    if (!cfg_.time_budget) return false;
    return std::chrono::duration<double>(Clock::now() - start_).count() > *cfg_.time_budget;
  }

  // Positive integer parameter.
  std::int64_t positive(const char* key) const {
    const std::int64_t v = i(key);
    if (v < 1) throw ConfigError(std::string("key '") + key + "': must be positive");
    return v;
  }

  std::vector<std::string> strings(const char* key) const {
    if (!p(key).is_array()) throw ConfigError(std::string("key '") + key + "': expected an array of strings");
    std::vector<std::string> out;
    for (const auto& v : p(key)) {
      if (!v.is_string()) throw ConfigError(std::string("key '") + key + "': expected an array of strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }

  std::vector<std::int64_t> integers(const char* key) const {
    if (!p(key).is_array()) throw ConfigError(std::string("key '") + key + "': expected an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& v : p(key)) {
      if (!v.is_number_integer()) throw ConfigError(std::string("key '") + key + "': expected an array of integers");
      out.push_back(v.get<std::int64_t>());
    }
    return out;
  }

  Sampling sampling() const {
    Sampling s = cfg_.sampled() ? Sampling::sampled(cfg_.budget, cfg_.seed) : Sampling::exact();
    s.seed = cfg_.seed;
    return s;
  }

 private:
  const ExperimentConfig& cfg_;
  Clock::time_point start_;
};

// Uniform values in [-1, 1], one counter stream per function index.
CyclicFnd random_function(std::int64_t N, std::uint64_t seed, std::uint64_t index) {
  const CounterRng rng = CounterRng(seed, /*stream=*/0x52414e44ULL).substream(index);
  CyclicFnd f(N, 0.0);
  for (std::int64_t x = 0; x < N; ++x) f[x] = 2.0 * rng.sample(std::uint64_t(x)).uniform() - 1.0;
  return f;
}

struct SieveSetup {
  SieveConfig cfg;
  MobiusTable mobius;
  EnvelopeSieve sv;
};

SieveSetup build_from(const Context& c, std::int64_t n_prime) {
  SieveSetup s;
  s.cfg = make_sieve_config(n_prime, c.i("w"), c.d("eps0"), c.i("b"));
  s.mobius = mobius_table(std::uint64_t(s.cfg.R));
  s.sv = build_sieve(s.cfg, cutoff_by_name(c.s("chi")), s.mobius);
  return s;
}

Json sieve_json(const EnvelopeSieve& sv) {
  return Json{{"n_prime", sv.cfg.n_prime}, {"w", sv.cfg.w}, {"W", sv.cfg.W},     {"b", sv.cfg.b},
              {"N", sv.cfg.N},             {"eps0", sv.cfg.eps0}, {"R", sv.cfg.R}, {"chi", sv.chi.name},
              {"chi_at_zero", sv.chi.value_at_zero()}, {"normalizer", sv.normalizer}};
}

template <typename Scalar>
Json norm_json(const NormEstimate<Scalar>& e) {
  Json j{{"norm", e.norm},
         {"power_raw", e.power_raw},
         {"power", e.power},
         {"stderr", e.standard_error},
         {"samples", e.samples},
         {"exact", e.exact},
         {"h_sampled", e.h_sampled},
         {"degenerate_fraction", e.degenerate_fraction}};
  if (e.seminorm_only) j["warning"] = "d = 1: the quantity is only a seminorm";
  return j;
}

QTuple qtuple_from(const Context& c) {
  const auto polys = c.strings("polys");
  return make_qtuple(std::size_t(c.positive("t")), polys, c.positive("H"), c.positive("W"), c.positive("S"));
}

std::vector<Polynomial> pattern_from(const Context& c, int k) {
  if (c.p("polys").is_null()) return linear_pattern(k);
  const std::vector<std::string> vars = {"r"};
  std::vector<Polynomial> out;
  for (const auto& text : c.strings("polys")) out.push_back(Polynomial::parse(text, vars));
  return out;
}

IntSet set_from(const Context& c) {
  const std::int64_t N = c.positive("N");
  const Json& s = c.p("set");
  if (s.is_string()) {
    if (s.get<std::string>() != "primes") throw ConfigError("key 'set': expected \"primes\" or an array of integers");
    return primes_as_set(sieve_primes(std::uint64_t(std::max<std::int64_t>(N, 2))), N);
  }
  std::vector<std::int64_t> members;
  for (const auto& v : s) {
    if (!v.is_number_integer()) throw ConfigError("key 'set': expected \"primes\" or an array of integers");
    members.push_back(v.get<std::int64_t>());
    if (members.back() < 1 || members.back() > N) throw ConfigError("key 'set': members must lie in [1, N]");
  }
  return IntSet(N, members);
}

Json hit_json(const ProgressionHit& h) { return Json{{"a", h.a}, {"r", h.r}, {"witnesses", h.witnesses}}; }

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Primes below 100 dividing x.
Json small_prime_divisors(std::int64_t x) {
  Json out = Json::array();
  for (std::int64_t p = 2; p < 100; ++p) {
    if (is_prime_trial(p) && x % p == 0) out.push_back(p);
  }
  return out;
}

// --- experiments ----------------------------------------------------------

void sieve_mean(const Context& c, Report& rep) {
  const auto main = build_from(c, c.positive("n_prime"));
  const double m = mean(main.sv.values);
  const double dev = std::abs(m - 1.0);
  const std::int64_t zero[2] = {0, 0};
  rep.results["sieve"] = sieve_json(main.sv);
  rep.results["mean"] = m;
  rep.results["deviation"] = dev;
  rep.results["second_moment"] = shifted_product_mean(main.sv, zero);
  const double tol = c.tolerance(0.25);
  rep.check("mean within tolerance of 1", dev <= tol, dev, tol);

  if (const std::int64_t ref = c.i("reference_n_prime"); ref > 0) {
    const auto other = build_from(c, ref);
    const double ref_mean = mean(other.sv.values);
    const double ref_dev = std::abs(ref_mean - 1.0);
    rep.results["reference"] = {{"sieve", sieve_json(other.sv)}, {"mean", ref_mean}, {"deviation", ref_dev}};
    rep.check("deviation no larger than at the reference scale", dev <= ref_dev, dev, ref_dev);
  }

  if (const std::int64_t points = c.i("oracle_points"); points > 0) {
    const CounterRng rng(c.cfg().seed, /*stream=*/0x4f52434cULL);
    std::int64_t mismatches = 0;
    for (std::int64_t j = 0; j < points; ++j) {
      const std::int64_t n = rng.sample(std::uint64_t(j)).in_range(1, main.cfg.N);
      const double direct = nu_direct(main.sv, main.mobius, n);
      const double swept = main.sv.values[n % main.cfg.N];
      if (std::bit_cast<std::uint64_t>(direct) != std::bit_cast<std::uint64_t>(swept)) ++mismatches;
    }
    rep.results["oracle_points"] = points;
    rep.results["oracle_mismatches"] = mismatches;
    rep.check("sieve pass equals direct divisor enumeration bitwise", mismatches == 0, mismatches, 0);
  }

  if (c.b("domination")) {
    const auto& cfg = main.cfg;
    const std::int64_t top = cfg.W * cfg.N + cfg.b;
    const IntSet primes = primes_as_set(sieve_primes(std::uint64_t(top)), top);
    const CyclicFnd f = build_f(primes, cfg);
    std::int64_t violations = 0, support = 0;
    for (std::int64_t x = 0; x < cfg.N; ++x) {
      if (f[x] < 0 || f[x] > main.sv.values[x]) ++violations;
      if (f[x] > 0) ++support;
    }
    rep.results["domination"] = {{"violations", violations}, {"support", support}, {"mean_f", mean(f)}};
    rep.check("0 <= f <= nu at every point", violations == 0, violations, 0);
  }

  if (c.b("export")) {
    std::ostringstream csv;
    csv << "n,Wn+b,nu\n";
    for (std::int64_t n = 1; n <= main.cfg.N; ++n) {
      csv << n << ',' << main.cfg.W * n + main.cfg.b << ',' << fmt(main.sv.values[n % main.cfg.N]) << '\n';
    }
    rep.artifacts["sieve.csv"] = csv.str();
    std::ostringstream bin;
    write_binary(main.sv.values, bin);
    rep.artifacts["sieve.bin"] = bin.str();
  }
}

void shifted_product(const Context& c, Report& rep) {
  const auto s = build_from(c, c.positive("n_prime"));
  const auto shifts = c.integers("shifts");
  const double v = shifted_product_mean(s.sv, shifts);
  rep.results["sieve"] = sieve_json(s.sv);
  rep.results["shifts"] = shifts;
  rep.results["value"] = v;
  rep.results["deviation"] = v - 1.0;
  Json pairs = Json::array();
  for (std::size_t a = 0; a < shifts.size(); ++a) {
    for (std::size_t b = a + 1; b < shifts.size(); ++b) {
      const std::int64_t diff = shifts[a] - shifts[b];
      pairs.push_back({{"pair", {a, b}}, {"difference", diff}, {"small_prime_divisors", small_prime_divisors(diff)}});
    }
  }
  rep.results["differences"] = pairs;
  if (c.b("assert")) {
    const double tol = c.tolerance(0.3);
    rep.check("shifted product within tolerance of 1", std::abs(v - 1.0) <= tol, std::abs(v - 1.0), tol);
  }
}

void forms_condition(const Context& c, Report& rep) {
  const auto s = build_from(c, c.positive("n_prime"));
  const std::size_t t = std::size_t(c.positive("t"));
  const std::vector<std::string> vars = [&] {
    std::vector<std::string> v;
    for (std::size_t j = 1; j <= t; ++j) v.push_back("h" + std::to_string(j));
    return v;
  }();
  std::vector<Polynomial> polys;
  for (const auto& text : c.strings("polys")) polys.push_back(Polynomial::parse(text, vars));
  const double L = c.d("L");
  const double log_N = std::log(double(s.cfg.N));
  FormsScales scales{std::floor(std::pow(log_N, L)), std::floor(std::pow(log_N, std::sqrt(L)))};
  IntBox box;
  if (c.p("box_lo").is_null() != c.p("box_hi").is_null()) throw ConfigError("box_lo and box_hi go together");
  if (c.p("box_lo").is_null()) {
    box.lo.assign(t, 1);
    box.hi.assign(t, std::int64_t(scales.M));
  } else {
    box.lo = c.integers("box_lo");
    box.hi = c.integers("box_hi");
    if (box.lo.size() != t || box.hi.size() != t) throw ConfigError("box_lo/box_hi: need one bound per variable");
  }
  const std::uint64_t samples = c.cfg().sampled() ? c.cfg().budget : std::uint64_t(c.positive("samples"));
  const auto est = forms_condition_estimate(s.sv, polys, box, scales, samples, c.cfg().seed);
  rep.results["sieve"] = sieve_json(s.sv);
  rep.results["scales"] = {{"M", scales.M}, {"H", scales.H}};
  rep.results["box"] = {{"lo", box.lo}, {"hi", box.hi}};
  rep.results["estimate"] = est.estimate;
  rep.results["stderr"] = est.standard_error;
  rep.results["samples"] = est.samples;
  rep.results["seed"] = est.seed;
  rep.results["exhaustive"] = est.exhaustive;
  const double tol = c.tolerance(0.3);
  rep.check("estimate within tolerance of 1", std::abs(est.estimate - 1) <= tol, std::abs(est.estimate - 1), tol);
  rep.check("standard error below bound", est.standard_error < c.d("max_stderr"), est.standard_error,
            c.d("max_stderr"));
}

CyclicFnd norm_function(const Context& c, Report& rep) {
  const std::string kind = c.s("function");
  if (kind == "random") return random_function(c.positive("N"), c.cfg().seed, 0);
  if (kind == "nu") {
    const auto s = build_from(c, c.positive("n_prime"));
    rep.results["sieve"] = sieve_json(s.sv);
    return s.sv.values - CyclicFnd::constant(s.cfg.N, 1.0);
  }
  throw ConfigError("key 'function': expected random or nu, got '" + kind + "'");
}

void gowers_norm(const Context& c, Report& rep) {
  const CyclicFnd f = norm_function(c, rep);
  GowersSpec spec{c.integers("directions"), c.positive("S"), c.sampling()};
  rep.results["N"] = f.modulus();
  rep.results["norm"] = norm_json(local_gowers(f, spec));
}

void avg_gowers_norm(const Context& c, Report& rep) {
  const CyclicFnd f = norm_function(c, rep);
  const QTuple q = qtuple_from(c);
  rep.results["N"] = f.modulus();
  rep.results["norm"] = norm_json(averaged_gowers(f, q, c.sampling()));
}

void dual(const Context& c, Report& rep) {
  const QTuple q = qtuple_from(c);
  const CyclicFnd f = random_function(c.positive("N"), c.cfg().seed, 0);
  const CyclicFnd D = dual_function(f, q, c.sampling());
  rep.results["mean"] = mean(D);
  rep.results["pairing"] = mean(f * D);
  double mx = 0;
  for (std::int64_t x = 0; x < D.modulus(); ++x) mx = std::max(mx, std::abs(D[x]));
  rep.results["max_abs"] = mx;
  std::ostringstream csv;
  write_csv(D, csv);
  rep.artifacts["dual.csv"] = csv.str();
}

void require_exact(const Context& c) {
  if (c.cfg().sampled()) throw ConfigError("key 'mode': " + c.cfg().subcommand + " runs in exact mode only");
}

void duality_check(const Context& c, Report& rep) {
  require_exact(c);
  const QTuple q = qtuple_from(c);
  const std::int64_t N = c.positive("N"), trials = c.positive("trials");
  double worst = 0;
  std::int64_t done = 0;
  for (; done < trials; ++done) {
    if (c.out_of_time()) {
      rep.complete = false;
      break;
    }
    const CyclicFnd f = random_function(N, c.cfg().seed, std::uint64_t(done));
    const double lhs = mean(f * dual_function(f, q));
    const double rhs = averaged_gowers(f, q, Sampling::exact()).power_raw;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  rep.results["trials"] = done;
  rep.results["max_relative_deviation"] = worst;
  const double tol = c.tolerance(1e-12);
  rep.check("int f Df equals the 2^d-th power", worst <= tol, worst, tol);
}

void dual_square_check(const Context& c, Report& rep) {
  require_exact(c);
  const QTuple q = qtuple_from(c);
  const QTuple q2 = direct_sum(q);
  const int d = q.dim();
  const std::int64_t N = c.positive("N"), trials = c.positive("trials");
  double worst = 0;
  std::int64_t done = 0;
  for (; done < trials; ++done) {
    if (c.out_of_time()) {
      rep.complete = false;
      break;
    }
    std::vector<CyclicFnd> F;
    for (int w = 1; w < (1 << d); ++w) {
      F.push_back(random_function(N, c.cfg().seed, std::uint64_t(done) * 4096 + std::uint64_t(w)));
    }
    const CyclicFnd D = dual_function<double>(F, q);
    const auto F2 = dual_square_tuple<double>(F, d);
    const CyclicFnd D2 = dual_function<double>(F2, q2);
    for (std::int64_t x = 0; x < N; ++x) worst = std::max(worst, std::abs(D[x] * D[x] - D2[x]));
  }
  rep.results["trials"] = done;
  rep.results["max_abs_deviation"] = worst;
  const double tol = c.tolerance(1e-12);
  rep.check("(DF)^2 equals the dual of the doubled tuple pointwise", worst <= tol, worst, tol);
}

void gcs_suite(const Context& c, Report& rep) {
  require_exact(c);
  const std::int64_t N_max = c.positive("N"), S_max = c.positive("S_max"), trials = c.positive("trials");
  const int d = int(c.positive("d"));
  if (N_max < 8) throw ConfigError("key 'N': must be at least 8");
  if (d > kMaxExactDim) throw ConfigError("key 'd': exact mode allows d <= 4");
  const CounterRng rng(c.cfg().seed, /*stream=*/0x474353ULL);
  std::int64_t violations = 0, done = 0;
  double worst_ratio = 0, worst_excess = -1e300;
  for (; done < trials; ++done) {
    if (c.out_of_time()) {
      rep.complete = false;
      break;
    }
    auto st = rng.sample(std::uint64_t(done));
    const std::int64_t N = st.in_range(8, N_max);
    GowersSpec spec;
    spec.scale = st.in_range(1, S_max);
    for (int i = 0; i < d; ++i) spec.directions.push_back(st.in_range(1, N - 1));
    std::vector<CyclicFnd> F;
    for (int w = 0; w < (1 << d); ++w) {
      F.push_back(random_function(N, c.cfg().seed ^ 0x9e3779b97f4a7c15ULL, std::uint64_t(done) * 64 + std::uint64_t(w)));
    }
    const auto r = gcs_check<double>(F, spec);
    if (!r.holds) ++violations;
    if (r.rhs > 0) worst_ratio = std::max(worst_ratio, r.lhs / r.rhs);
    worst_excess = std::max(worst_excess, r.lhs - r.rhs);
  }
  rep.results["trials"] = done;
  rep.results["violations"] = violations;
  rep.results["max_lhs_over_rhs"] = worst_ratio;
  rep.results["max_lhs_minus_rhs"] = worst_excess;
  rep.results["slack"] = kGcsSlack;
  rep.check("no Gowers-Cauchy-Schwarz violations", violations == 0, violations, 0);
}

void lambda(const Context& c, Report& rep) {
  const std::int64_t N = c.positive("N"), M = c.positive("M"), W = c.positive("W");
  const int k = int(c.positive("k"));
  ProgressionSystem sys;
  sys.W = W;
  sys.M = M;
  if (c.p("polys").is_null()) {
    sys = linear_system(k, W, M);
  } else {
    const std::vector<std::string> vars = {"m"};
    for (const auto& text : c.strings("polys")) sys.polys.push_back(Polynomial::parse(text, vars));
    if (sys.k() != k) throw ConfigError("key 'polys': need exactly k polynomials");
  }
  std::vector<CyclicFnd> fs, ones;
  for (int i = 0; i < k; ++i) {
    fs.push_back(random_function(N, c.cfg().seed, std::uint64_t(i)));
    ones.push_back(CyclicFnd::constant(N, 1.0));
  }
  const double value = lambda_form<double>(fs, sys);
  const double unit = lambda_form<double>(ones, sys);
  rep.results["value"] = value;
  rep.results["lambda_of_ones"] = unit;
  rep.check("Lambda(1, .., 1) = 1 exactly", unit == 1.0, unit, 1.0);

  // m over all of Z/NZ: Lambda(f, g) factors into the means.
  const std::vector<CyclicFnd> pair = {fs[0], random_function(N, c.cfg().seed, std::uint64_t(k))};
  const double factored = lambda_form<double>(pair, linear_system(2, 1, N));
  const double product = mean(pair[0]) * mean(pair[1]);
  const double tol = c.tolerance(1e-12);
  rep.results["factorization"] = {{"lambda", factored}, {"mean_product", product}};
  rep.check("W = 1, M = N case equals mean(f) mean(g)", std::abs(factored - product) <= tol,
            std::abs(factored - product), tol);
}

Json singular_json(const SingularValue& v) {
  return Json{{"value", v.value}, {"terms", v.terms}, {"tail_estimate", v.tail_estimate}, {"vanishes", v.vanishes}};
}

void singular(const Context& c, Report& rep) {
  const SingularQuery q{int(c.positive("k")), c.i("r"), std::uint64_t(c.positive("cutoff"))};
  const auto v = singular_series(q);
  rep.results["k"] = q.k;
  rep.results["r"] = q.r;
  rep.results["cutoff"] = q.cutoff;
  rep.results["series"] = singular_json(v);
  if (const std::int64_t other = c.i("compare_cutoff"); other > 0) {
    const auto w = singular_series({q.k, q.r, std::uint64_t(other)});
    const double rel = w.value == 0 ? std::abs(v.value) : std::abs(v.value - w.value) / std::abs(w.value);
    rep.results["comparison"] = {{"cutoff", other}, {"series", singular_json(w)}, {"relative_difference", rel}};
    // agreement to 4 significant digits
    const double tol = c.tolerance(5e-5);
    rep.check("truncations agree", rel <= tol, rel, tol);
  }
}

void singular_sum(const Context& c, Report& rep) {
  const int k = int(c.positive("k"));
  const auto s = singular_partial_sum(k, c.positive("M"), std::uint64_t(c.positive("cutoff")));
  rep.results["k"] = k;
  rep.results["M"] = s.bound;
  rep.results["cutoff"] = s.cutoff;
  rep.results["sum"] = s.sum;
  rep.results["ratio"] = s.ratio;
  std::ostringstream csv;
  csv << "r,value\n";
  for (std::size_t j = 0; j < s.values.size(); ++j) csv << j + 1 << ',' << fmt(s.values[j]) << '\n';
  rep.artifacts["singular_sum.csv"] = csv.str();
  if (const std::int64_t other = c.i("compare_M"); other > 0) {
    const auto t = singular_partial_sum(k, other, s.cutoff);
    const double rel = std::abs(s.ratio - t.ratio) / std::abs(t.ratio);
    rep.results["comparison"] = {{"M", other}, {"sum", t.sum}, {"ratio", t.ratio}, {"relative_difference", rel}};
    const double tol = c.tolerance(0.1);
    rep.check("partial-sum ratios agree", rel <= tol, rel, tol);
  }
}

void narrowless(const Context& c, Report& rep) {
  const std::int64_t N = c.positive("N");
  const int k = int(c.positive("k"));
  const auto table = sieve_primes(std::uint64_t(std::max<std::int64_t>(N, 2)));
  const auto res = narrowless_subset(N, k, c.d("eps"), table);
  const std::int64_t r_max = std::int64_t(std::ceil(res.r_bound)) - 1;
  rep.results["prime_count"] = res.prime_count;
  rep.results["survivors"] = res.set.size();
  rep.results["survivor_fraction"] = res.survivor_fraction;
  rep.results["r_bound"] = res.r_bound;
  rep.results["progression_total"] = res.progression_total;
  rep.results["union_bound_target"] = res.union_bound_target;
  const auto pattern = linear_pattern(k);
  const std::size_t left = r_max >= 1 ? find_progressions(res.set, pattern, r_max, 1).size() : 0;
  rep.check("no narrow progression survives", left == 0, left, 0);
  const auto again = remove_narrow_bases(res.set, k, res.r_bound);
  rep.check("removal is a fixed point", again.size() == res.set.size(), res.set.size() - again.size(), 0);
  if (!c.p("expected_fraction").is_null()) {
    const double want = c.p("expected_fraction").get<double>();
    const double tol = c.tolerance(1e-12);
    rep.check("survivor fraction matches the regression value", std::abs(res.survivor_fraction - want) <= tol,
              res.survivor_fraction, want);
  }
}

void cramer(const Context& c, Report& rep) {
  CramerOptions base;
  base.N = c.positive("N");
  base.k = int(c.positive("k"));
  base.C = c.d("C");
  base.delta = c.d("delta");
  base.adversaries.clear();
  for (const auto& name : c.strings("adversaries")) base.adversaries.push_back(adversary_from_string(name));
  if (!c.p("inclusion_probability").is_null()) base.inclusion_probability = c.d("inclusion_probability");
  const std::int64_t trials = c.positive("trials");
  const CounterRng seeds(c.cfg().seed, /*stream=*/0x545249414cULL);

  std::vector<std::int64_t> found(base.adversaries.size(), 0), eligible(base.adversaries.size(), 0);
  std::int64_t degenerate = 0, done = 0;
  double bad_sum = 0, size_sum = 0;
  std::ostringstream csv;
  csv << "trial,seed,P_size,bad_intervals,intervals,degenerate";
  for (Adversary a : base.adversaries) csv << ',' << to_string(a);
  csv << '\n';
  Json last;
  for (; done < trials; ++done) {
    if (c.out_of_time()) {
      rep.complete = false;
      break;
    }
    CramerOptions o = base;
    o.seed = seeds.sample(std::uint64_t(done)).bits();
    const auto r = cramer_trial(o);
    degenerate += r.degenerate;
    bad_sum += double(r.bad_intervals);
    size_sum += double(r.random_set_size);
    csv << done << ',' << o.seed << ',' << r.random_set_size << ',' << r.bad_intervals << ',' << r.intervals << ','
        << r.degenerate;
    for (std::size_t j = 0; j < r.outcomes.size(); ++j) {
      if (!r.degenerate) {
        ++eligible[j];
        found[j] += r.outcomes[j].found;
      }
      csv << ',' << r.outcomes[j].found;
    }
    csv << '\n';
    last = {{"step_limit", r.step_limit},
            {"intervals", r.intervals},
            {"interval_min", r.interval_min},
            {"interval_max", r.interval_max},
            {"inclusion_probability", r.inclusion_probability}};
  }
  rep.artifacts["cramer.csv"] = csv.str();
  rep.results["trials"] = done;
  rep.results["degenerate_trials"] = degenerate;
  rep.results["mean_P_size"] = done ? size_sum / double(done) : 0.0;
  rep.results["mean_bad_intervals"] = done ? bad_sum / double(done) : 0.0;
  rep.results["geometry"] = last;
  Json per = Json::object();
  for (std::size_t j = 0; j < base.adversaries.size(); ++j) {
    const double rate = eligible[j] ? double(found[j]) / double(eligible[j]) : 0.0;
    per[to_string(base.adversaries[j])] = {{"found", found[j]}, {"eligible", eligible[j]}, {"found_rate", rate}};
    if (!c.p("min_found_rate").is_null()) {
      const double want = c.d("min_found_rate");
      rep.check(to_string(base.adversaries[j]) + " found rate", eligible[j] > 0 && rate >= want, rate, want);
    }
  }
  rep.results["adversaries"] = per;
}

void find_prog(const Context& c, Report& rep) {
  const IntSet A = set_from(c);
  const auto pattern = pattern_from(c, int(c.positive("k")));
  const auto hits = find_progressions(A, pattern, c.positive("r_max"), std::size_t(c.positive("limit")));
  rep.results["set_size"] = A.size();
  rep.results["count"] = hits.size();
  Json first = Json::array();
  std::ostringstream csv;
  csv << "a,r";
  for (std::size_t i = 1; i <= pattern.size(); ++i) csv << ",w" << i;
  csv << '\n';
  for (const auto& h : hits) {
    if (first.size() < 20) first.push_back(hit_json(h));
    csv << h.a << ',' << h.r;
    for (std::int64_t w : h.witnesses) csv << ',' << w;
    csv << '\n';
  }
  rep.results["first_hits"] = first;
  rep.artifacts["hits.csv"] = csv.str();
  if (!c.p("expected_count").is_null()) {
    const auto want = c.p("expected_count").get<std::int64_t>();
    rep.check("hit count", std::int64_t(hits.size()) == want, hits.size(), want);
  }
}

void min_step_cmd(const Context& c, Report& rep) {
  const IntSet A = set_from(c);
  const auto pattern = pattern_from(c, int(c.positive("k")));
  const auto hit = min_step(A, pattern, c.positive("r_max"));
  rep.results["set_size"] = A.size();
  rep.results["step"] = hit ? Json(hit->r) : Json(nullptr);
  rep.results["witness"] = hit ? hit_json(*hit) : Json(nullptr);
  if (!c.p("expected").is_null()) {
    const Json want = c.p("expected");
    rep.check("minimal step", rep.results["step"] == want, rep.results["step"], want);
  }
}

void preset_cmd(const Context& c, Report& rep) {
  const auto v = preset(c.s("name"), c.positive("n_prime"), c.d("L"), c.d("eps0"));
  rep.results["preset"] = to_json(v);
  if (v.scales_coincide) rep.results["warning"] = "M equals H: coarse and fine scales coincide";
}

const std::map<std::string, std::function<void(const Context&, Report&)>>& table() {
  static const std::map<std::string, std::function<void(const Context&, Report&)>> t = {
      {"sieve-mean", sieve_mean},
      {"shifted-product", shifted_product},
      {"forms-condition", forms_condition},
      {"gowers-norm", gowers_norm},
      {"avg-gowers-norm", avg_gowers_norm},
      {"dual", dual},
      {"duality-check", duality_check},
      {"dual-square-check", dual_square_check},
      {"gcs-suite", gcs_suite},
      {"lambda", lambda},
      {"singular", singular},
      {"singular-sum", singular_sum},
      {"narrowless", narrowless},
      {"cramer", cramer},
      {"find-prog", find_prog},
      {"min-step", min_step_cmd},
      {"preset", preset_cmd},
  };
  return t;
}

}  // namespace

Report run(const ExperimentConfig& cfg) {
  validate(cfg);
  Report rep;
  rep.config = cfg;
  rep.version = NARROW_VERSION;
  rep.timestamp = utc_timestamp();
  const Context ctx(cfg);
  try {
    table().at(cfg.subcommand)(ctx, rep);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad parameter type: ") + e.what());
  }
  return rep;
}

}  // namespace narrow::cli
