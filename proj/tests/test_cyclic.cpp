#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "narrow/arith.hpp"
#include "narrow/counter_rng.hpp"
#include "narrow/cyclic.hpp"
#include "narrow/errors.hpp"
#include "narrow/progsearch.hpp"

using namespace narrow;

namespace {

CyclicFnd random_fn(std::int64_t N, std::uint64_t seed) {
  const CounterRng rng(seed);
  CyclicFnd f(N);
  for (std::int64_t x = 0; x < N; ++x) f[x] = 2 * rng.sample(std::uint64_t(x)).uniform() - 1;
  return f;
}

}  // namespace

TEST_CASE("shift rotates indices") {
  const auto f = random_fn(37, 1);
  for (std::int64_t h : {0, 1, 5, 36, 37, -1, -40, 1000}) {
    const auto g = shift(f, h);
    for (std::int64_t x = 0; x < 37; ++x) CHECK(g[x] == f[mod_floor(x + h, 37)]);
  }
  CHECK(shift(shift(f, 7), -7).values().isApprox(f.values(), 0.0));
  CHECK(shift(shift(f, 3), 4).values().cwiseEqual(shift(f, 7).values()).all());
}

TEST_CASE("mean is the normalized sum and shift invariant") {
  const auto f = random_fn(101, 2);
  double s = 0;
  for (std::int64_t x = 0; x < 101; ++x) s += f[x];
  CHECK(mean(f) == doctest::Approx(s / 101).epsilon(1e-14));
  CHECK(mean(shift(f, 17)) == doctest::Approx(mean(f)).epsilon(1e-14));
  CHECK(mean(CyclicFnd::constant(9, 2.5)) == 2.5);
}

TEST_CASE("arithmetic needs equal moduli") {
  const auto f = random_fn(10, 3), g = random_fn(11, 4);
  CHECK_THROWS_AS(f * g, ArgumentError);
  CHECK_THROWS_AS(f + g, ArgumentError);
  CHECK_THROWS_AS(CyclicFnd(0), ArgumentError);
  const auto h = f * f - 2.0 * f;
  for (std::int64_t x = 0; x < 10; ++x) CHECK(h[x] == doctest::Approx(f[x] * f[x] - 2 * f[x]));
  CHECK(f(-1) == f[9]);
}

TEST_CASE("binary and csv round trip") {
  const auto f = random_fn(50, 5);
  std::stringstream bin;
  write_binary(f, bin);
  CHECK(bin.str().size() == 8 + 50 * 8);
  CHECK(static_cast<unsigned char>(bin.str()[0]) == 50);
  const auto g = read_binary(bin);
  CHECK(g.modulus() == 50);
  for (std::int64_t x = 0; x < 50; ++x) CHECK(g[x] == f[x]);
  std::stringstream truncated(bin.str().substr(0, 20));
  CHECK_THROWS_AS(read_binary(truncated), ArgumentError);

  std::stringstream csv;
  write_csv(f, csv);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "index,value");
  std::getline(csv, line);
  CHECK(std::stod(line.substr(line.find(',') + 1)) == f[0]);
}

TEST_CASE("sieve config derives W, N and R") {
  const auto cfg = make_sieve_config(1000000, 5, 0.1);
  CHECK(cfg.W == 6);
  CHECK(cfg.N == 166666);
  CHECK(cfg.R == 3);
  const auto c2 = make_sieve_config(1000000, 7, 0.5, 7);
  CHECK(c2.W == 30);
  CHECK(c2.N == 33333);
  CHECK(c2.R == 182);
  CHECK_THROWS_AS(make_sieve_config(1000000, 7, 0.5, 6), ConfigError);
  CHECK_THROWS_AS(make_sieve_config(1000000, 7, 1.0), ConfigError);
  CHECK_THROWS_AS(make_sieve_config(1000000, 1, 0.5), ConfigError);
  CHECK_THROWS_AS(make_sieve_config(40, 5, 0.5), ConfigError);
  CHECK_THROWS_AS(make_sieve_config(10000, 5, 0.01), ConfigError);
}

TEST_CASE("build_f is the truncated, scaled indicator") {
  const auto cfg = make_sieve_config(100000, 7, 0.5, 1);
  const auto table = sieve_primes(std::uint64_t(cfg.W * cfg.N + cfg.W));
  const IntSet primes = primes_as_set(table, std::int64_t(table.limit()));
  const auto f = build_f(primes, cfg);
  const double height = cfg.eps0 / 10 * 8.0 * std::log(double(cfg.N)) / 30.0;
  const std::int64_t s = floor_sqrt(cfg.N);
  for (std::int64_t n = 1; n <= cfg.N; ++n) {
    const bool inside = n > s && n <= cfg.N - s && table.is_prime(std::uint64_t(30 * n + 1));
    CHECK(f[n % cfg.N] == (inside ? height : 0.0));
  }
}

TEST_CASE("residue selection picks the fullest class") {
  const auto table = sieve_primes(10000);
  const IntSet primes = primes_as_set(table, 10000);
  const std::int64_t b = select_residue(primes, 10000, 7);
  CHECK(std::gcd(b, std::int64_t(30)) == 1);
  std::vector<std::int64_t> only_seven;
  for (std::int64_t p : primes.members()) {
    if (p % 30 == 7) only_seven.push_back(p);
  }
  CHECK(select_residue(IntSet(10000, only_seven), 10000, 7) == 7);
  const std::vector<std::int64_t> evens = {2, 4, 6};
  CHECK_THROWS_AS(select_residue(IntSet(100, evens), 100, 3), DegenerateInputError);
}

TEST_CASE("floor_sqrt is exact") {
  for (std::int64_t n : {0LL, 1LL, 3LL, 4LL, 99LL, 100LL, 999999999999LL, 1000000000000LL}) {
    const std::int64_t s = floor_sqrt(n);
    CHECK(s * s <= n);
    CHECK((s + 1) * (s + 1) > n);
  }
}
