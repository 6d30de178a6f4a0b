#include <doctest.h>

#include "narrow/arith.hpp"
#include "narrow/compensated.hpp"
#include "narrow/counter_rng.hpp"
#include "narrow/errors.hpp"
#include "narrow/polynomial.hpp"
#include "oracles.hpp"

using namespace narrow;

TEST_CASE("prime counts match trial division") {
  const auto t = sieve_primes(20000);
  for (std::uint64_t x : {2u, 3u, 10u, 100u, 997u, 1000u, 4096u, 12345u, 20000u}) {
    CHECK(t.count_upto(x) == oracle::prime_pi(std::int64_t(x)));
  }
  for (std::uint64_t n = 0; n <= 3000; ++n) CHECK(t.is_prime(n) == oracle::is_prime(std::int64_t(n)));
}

TEST_CASE("known prime counts") {
  const auto t = sieve_primes(10000000);
  CHECK(prime_count(t, 100) == 25);
  CHECK(prime_count(t, 1000000) == 78498);
  CHECK(prime_count(t, 10000000) == 664579);
  CHECK_THROWS_AS(t.count_upto(10000001), RangeError);
}

TEST_CASE("segmented and simple sieves agree word for word") {
  for (std::uint64_t limit : {2u, 3u, 64u, 127u, 128u, 129u, 262143u, 262145u, 1000003u}) {
    const auto a = sieve_primes(limit), b = sieve_primes_simple(limit);
    REQUIRE(a.words().size() == b.words().size());
    CHECK(std::equal(a.words().begin(), a.words().end(), b.words().begin()));
    CHECK(a.count_upto(limit) == b.count_upto(limit));
  }
}

TEST_CASE("sieve rejects bad limits") {
  CHECK_THROWS_AS(sieve_primes(1), ConfigError);
  CHECK_THROWS_AS(sieve_primes(1000000, 1000), ConfigError);
}

TEST_CASE("primes_upto lists ascending primes") {
  const auto t = sieve_primes(50);
  CHECK(t.primes_upto(30) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(t.primes().back() == 47);
}

TEST_CASE("mobius table matches factorization") {
  const auto mu = mobius_table(5000);
  for (std::uint64_t n = 1; n <= 5000; ++n) CHECK(mu(n) == oracle::mobius(std::int64_t(n)));
  CHECK_THROWS_AS(mu(5001), RangeError);
}

TEST_CASE("primorial and totient") {
  CHECK(primorial(2) == 1);
  CHECK(primorial(3) == 2);
  CHECK(primorial(5) == 6);
  CHECK(primorial(6) == 30);
  CHECK(primorial(20) == 9699690);
  CHECK_THROWS_AS(primorial(200), OverflowError);
  for (std::int64_t n = 1; n <= 300; ++n) CHECK(euler_phi(n) == oracle::phi(n));
}

TEST_CASE("factorize and modular helpers") {
  CHECK(factorize(360) == std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 2}, {5, 1}});
  CHECK(factorize(1).empty());
  CHECK(mod_floor(-7, 5) == 3);
  for (std::int64_t m : {7, 30, 97, 1001}) {
    for (std::int64_t a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      CHECK(mod_floor(a * inverse_mod(a, m), m) == 1 % m);
    }
  }
  CHECK_THROWS_AS(checked_mul(std::int64_t(1) << 40, std::int64_t(1) << 40), OverflowError);
  CHECK(checked_add(2, 3) == 5);
}

TEST_CASE("compensated sum beats naive summation") {
  CompensatedSum<double> s;
  double naive = 0;
  s += 1.0;
  naive += 1.0;
  for (int i = 0; i < 1000000; ++i) {
    s += 1e-16;
    naive += 1e-16;
  }
  CHECK(naive == 1.0);
  CHECK(s.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-15));
}

TEST_CASE("counter rng is a pure function of its counters") {
  const CounterRng a(42, 7), b(42, 7), c(43, 7);
  auto s1 = a.sample(1000), s2 = b.sample(1000);
  for (int i = 0; i < 10; ++i) CHECK(s1.bits() == s2.bits());
  CHECK(a.sample(5).bits() != c.sample(5).bits());
  CHECK(a.substream(1).sample(0).bits() != a.substream(2).sample(0).bits());
  auto s = a.sample(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(s.below(7) < 7);
  }
}

TEST_CASE("polynomial parsing and evaluation") {
  const std::vector<std::string> vars = {"h1", "h2", "W"};
  const auto p = Polynomial::parse("3*h1^2 - h1*h2 + 2*W + 5", vars);
  const std::int64_t pt[] = {2, 3, 7};
  CHECK(p.evaluate(pt) == 12 - 6 + 14 + 5);
  CHECK(p.evaluate_mod(pt, 11) == (12 - 6 + 14 + 5) % 11);
  CHECK(p.degree() == 2);
  CHECK(p.constant_term() == 5);
  CHECK(Polynomial::parse("h1 - h1", vars).is_zero());
  CHECK(Polynomial::parse(p.to_string(vars), vars) == p);
  CHECK_THROWS(Polynomial::parse("h1 + x", vars));
  const std::int64_t neg[] = {-4, 1, 1};
  CHECK(Polynomial::parse("h1^3", vars).evaluate_mod(neg, 10) == 6);
}
