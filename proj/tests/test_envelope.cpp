#include <doctest.h>

#include <cmath>
#include <numbers>

#include "narrow/arith.hpp"
#include "narrow/counter_rng.hpp"
#include "narrow/envelope.hpp"
#include "narrow/errors.hpp"
#include "narrow/parallel.hpp"
#include "narrow/progsearch.hpp"
#include "oracles.hpp"

using namespace narrow;

namespace {

EnvelopeSieve sieve(std::int64_t n_prime, std::int64_t w, double eps0, std::int64_t b = 1,
                    const CutoffFn& chi = default_chi()) {
  const auto cfg = make_sieve_config(n_prime, w, eps0, b);
  return build_sieve(cfg, chi, mobius_table(std::uint64_t(cfg.R)));
}

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

}  // namespace

TEST_CASE("default cutoff") {
  const auto chi = default_chi();
  CHECK(chi(0) == doctest::Approx(2 * std::numbers::sqrt2 / std::numbers::pi).epsilon(1e-15));
  CHECK(chi(0) == doctest::Approx(0.90032).epsilon(1e-5));
  CHECK(chi(1) == 0.0);
  CHECK(chi(-1) == 0.0);
  CHECK(chi(1.5) == 0.0);
  for (double t : {0.1, 0.3, 0.77}) CHECK(chi(t) == chi(-t));
  CHECK(std::abs(derivative_sq_integral(chi) - 1) <= 1e-6);
  CHECK_NOTHROW(validate_cutoff(chi));
  CHECK_NOTHROW(validate_cutoff(selberg_chi()));
  CHECK(selberg_chi()(0.25) == 0.75);
  CHECK(cutoff_by_name("cosine").name == "cosine");
  CHECK_THROWS_AS(cutoff_by_name("bump"), ConfigError);
}

TEST_CASE("cutoffs with the wrong normalization are rejected") {
  const CutoffFn half{"half", [](double t) { return 0.5 * (1 - t); }, [](double) { return -0.5; }};
  CHECK_THROWS_AS(validate_cutoff(half), ConfigError);
}

TEST_CASE("sieve pass equals direct enumeration bitwise") {
  struct Case {
    std::int64_t n_prime, w;
    double eps0;
    std::int64_t b;
  };
  for (const Case c : {Case{10000, 5, 0.1, 1}, Case{10000, 5, 0.9, 5}, Case{1000000, 7, 0.5, 7},
                       Case{300000, 11, 0.6, 1}}) {
    const auto sv = sieve(c.n_prime, c.w, c.eps0, c.b);
    const auto mobius = mobius_table(std::uint64_t(sv.cfg.R));
    const CounterRng rng(c.n_prime);
    for (std::uint64_t j = 0; j < 100; ++j) {
      const std::int64_t n = rng.sample(j).in_range(1, sv.cfg.N);
      const double swept = sv.values[n % sv.cfg.N];
      CHECK(bits(swept) == bits(oracle::nu(sv.cfg, sv.chi, n)));
      CHECK(bits(swept) == bits(nu_direct(sv, mobius, n)));
    }
  }
}

TEST_CASE("nu is nonnegative and equals the d = 1 term at large primes") {
  const auto sv = sieve(200000, 7, 0.4);
  const double top = sv.normalizer * sv.chi(0) * sv.chi(0);
  for (std::int64_t n = 1; n <= sv.cfg.N; ++n) {
    CHECK(sv.values[n % sv.cfg.N] >= 0);
    const std::int64_t m = sv.cfg.W * n + sv.cfg.b;
    if (m > sv.cfg.R && oracle::is_prime(m)) CHECK(sv.values[n % sv.cfg.N] == doctest::Approx(top).epsilon(1e-15));
  }
}

TEST_CASE("sieve is independent of the thread count") {
  set_thread_count(1);
  const auto a = sieve(2000000, 7, 0.5);
  set_thread_count(4);
  const auto b = sieve(2000000, 7, 0.5);
  set_thread_count(1);
  for (std::int64_t x = 0; x < a.cfg.N; ++x) REQUIRE(bits(a.values[x]) == bits(b.values[x]));
}

TEST_CASE("mobius table too small") {
  const auto cfg = make_sieve_config(100000, 5, 0.5);
  CHECK_THROWS_AS(build_sieve(cfg, default_chi(), mobius_table(10)), ConfigError);
}

TEST_CASE("0 <= f <= nu for the primes") {
  for (double eps0 : {0.1, 0.5}) {
    const auto sv = sieve(100000, 5, eps0);
    const std::int64_t top = sv.cfg.W * sv.cfg.N + sv.cfg.b;
    const auto f = build_f(primes_as_set(sieve_primes(std::uint64_t(top)), top), sv.cfg);
    std::int64_t support = 0;
    for (std::int64_t x = 0; x < sv.cfg.N; ++x) {
      CHECK(f[x] >= 0);
      CHECK(f[x] <= sv.values[x]);
      support += f[x] > 0;
    }
    CHECK(support > 0);
  }
}

TEST_CASE("shifted products") {
  const auto sv = sieve(100000, 5, 0.5);
  const std::int64_t zero[] = {0};
  CHECK(shifted_product_mean(sv, zero) == doctest::Approx(mean(sv.values)).epsilon(1e-14));
  const std::int64_t two[] = {3, 3};
  CHECK(shifted_product_mean(sv, two) == doctest::Approx(mean(sv.values * sv.values)).epsilon(1e-13));
  const std::vector<std::int64_t> nine(9, 0);
  CHECK_THROWS_AS(shifted_product_mean(sv, nine), PreconditionError);
  const std::int64_t far[] = {0, floor_sqrt(sv.cfg.N) + 1};
  CHECK_THROWS_AS(shifted_product_mean(sv, far), PreconditionError);
}

TEST_CASE("second moment grows with the scale") {
  std::vector<double> m2;
  for (std::int64_t n_prime : {10000, 100000, 1000000}) {
    const auto sv = sieve(n_prime, 5, 0.5);
    const std::int64_t zero[] = {0, 0};
    m2.push_back(shifted_product_mean(sv, zero));
  }
  CHECK(m2[0] < m2[1]);
  CHECK(m2[1] < m2[2]);
}

TEST_CASE("forms condition: one polynomial gives the mean") {
  const auto sv = sieve(100000, 5, 0.5);
  const std::vector<std::string> vars = {"h1"};
  const std::vector<Polynomial> q = {Polynomial::parse("h1", vars)};
  const IntBox box{{1}, {200}};
  const FormsScales sc{200, 100};
  const auto exact = forms_condition_estimate(sv, q, box, sc, 1000, 1);
  CHECK(exact.exhaustive);
  CHECK(exact.estimate == doctest::Approx(mean(sv.values)).epsilon(1e-12));
}

TEST_CASE("forms condition: exhaustive enumeration matches the box oracle") {
  const auto sv = sieve(30000, 5, 0.5);
  const std::vector<std::string> vars = {"h1", "h2"};
  const std::vector<Polynomial> q = {Polynomial::parse("h1", vars), Polynomial::parse("2*h1 + h2", vars),
                                     Polynomial::parse("h2", vars)};
  const IntBox box{{-8, 3}, {8, 20}};
  const FormsScales sc{30, 9};
  const double want = oracle::forms_box_average(sv.values, {{1, 0}, {2, 1}, {0, 1}}, box.lo, box.hi);
  const auto all = forms_condition_estimate(sv, q, box, sc, std::uint64_t(box.volume()), 7);
  CHECK(all.exhaustive);
  CHECK(std::abs(all.estimate - want) <= 1e-12);

  // genuine sampling: deterministic and near the exact value
  const auto s1 = forms_condition_estimate(sv, q, box, sc, 200, 7);
  const auto s2 = forms_condition_estimate(sv, q, box, sc, 200, 7);
  CHECK_FALSE(s1.exhaustive);
  CHECK(bits(s1.estimate) == bits(s2.estimate));
  CHECK(s1.standard_error > 0);
  CHECK(std::abs(s1.estimate - want) <= 5 * s1.standard_error);
}

TEST_CASE("forms condition preconditions") {
  const auto sv = sieve(30000, 5, 0.5);
  const std::vector<std::string> vars = {"h1"};
  const std::vector<Polynomial> same = {Polynomial::parse("h1", vars), Polynomial::parse("h1 + 4", vars)};
  const std::vector<Polynomial> ok = {Polynomial::parse("h1", vars), Polynomial::parse("2*h1", vars)};
  CHECK_THROWS_AS(forms_condition_estimate(sv, same, {{1}, {100}}, {100, 16}, 1000, 1), PreconditionError);
  CHECK_THROWS_AS(forms_condition_estimate(sv, ok, {{1}, {200}}, {10, 16}, 1000, 1), PreconditionError);
  CHECK_THROWS_AS(forms_condition_estimate(sv, ok, {{1}, {6}}, {100, 16}, 1000, 1), PreconditionError);
  CHECK_NOTHROW(forms_condition_estimate(sv, ok, {{1}, {9}}, {100, 16}, 1000, 1));
}
