#include <doctest.h>

#include <cmath>

#include "narrow/counter_rng.hpp"
#include "narrow/errors.hpp"
#include "narrow/parallel.hpp"
#include "narrow/progsearch.hpp"
#include "oracles.hpp"

using namespace narrow;

namespace {

IntSet primes_upto(std::int64_t N) { return primes_as_set(sieve_primes(std::uint64_t(std::max<std::int64_t>(N, 2))), N); }

IntSet random_set(std::int64_t N, double density, std::uint64_t seed) {
  const CounterRng rng(seed, 3);
  IntSet s(N);
  for (std::int64_t n = 1; n <= N; ++n) {
    if (rng.sample(std::uint64_t(n)).uniform() < density) s.push_back(n);
  }
  return s;
}

std::vector<std::pair<std::int64_t, std::int64_t>> as_pairs(const std::vector<ProgressionHit>& hits) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& h : hits) out.emplace_back(h.r, h.a);
  return out;
}

}  // namespace

TEST_CASE("small examples") {
  const auto p = linear_pattern(3);
  const auto hits = find_progressions(primes_upto(30), p, 4);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].a == 3);
  CHECK(hits[0].r == 2);
  CHECK(hits[0].witnesses == std::vector<std::int64_t>{3, 5, 7});
  CHECK(hits[1].witnesses == std::vector<std::int64_t>{3, 7, 11});
  CHECK(find_progressions(IntSet(100), p, 50).empty());

  IntSet all(40);
  for (std::int64_t n = 1; n <= 40; ++n) all.push_back(n);
  const auto full = find_progressions(all, linear_pattern(4), 1);
  REQUIRE(full.size() == 37);
  for (std::size_t i = 0; i < full.size(); ++i) CHECK(full[i].a == std::int64_t(i) + 1);
}

TEST_CASE("matches the naive scan on random sets") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const double density = 0.02 + 0.03 * double(s % 5);
    const IntSet A = random_set(10000, density, s);
    const int k = 3 + int(s % 2);
    const std::int64_t r_max = 50 + std::int64_t(s) * 20;
    const auto got = as_pairs(find_progressions(A, linear_pattern(k), r_max));
    CHECK(got == oracle::progressions(A.members(), k, r_max));
  }
}

TEST_CASE("hits re-validate and respect the limit") {
  const IntSet A = random_set(5000, 0.2, 77);
  const auto all = find_progressions(A, linear_pattern(3), 40);
  for (const auto& h : all) {
    CHECK(h.r >= 1);
    for (std::int64_t w : h.witnesses) CHECK(A.contains(w));
  }
  const auto some = find_progressions(A, linear_pattern(3), 40, 25);
  REQUIRE(some.size() == 25);
  const auto all_pairs = as_pairs(all);
  CHECK(as_pairs(some) == std::vector(all_pairs.begin(), all_pairs.begin() + 25));
}

TEST_CASE("search is thread independent") {
  const IntSet A = random_set(20000, 0.1, 5);
  set_thread_count(1);
  const auto a = as_pairs(find_progressions(A, linear_pattern(3), 500, 3000));
  set_thread_count(4);
  const auto b = as_pairs(find_progressions(A, linear_pattern(3), 500, 3000));
  set_thread_count(1);
  CHECK(a == b);
}

TEST_CASE("polynomial patterns") {
  const std::vector<std::string> vars = {"r"};
  const std::vector<Polynomial> p = {Polynomial::parse("0", vars), Polynomial::parse("r", vars),
                                     Polynomial::parse("r^2", vars)};
  const IntSet A = primes_upto(2000);
  const auto hits = find_progressions(A, p, 30);
  std::vector<std::pair<std::int64_t, std::int64_t>> want;
  for (std::int64_t r = 1; r <= 30; ++r) {
    for (std::int64_t a : A.members()) {
      if (A.contains(a + r) && A.contains(a + r * r)) want.emplace_back(r, a);
    }
  }
  CHECK(as_pairs(hits) == want);
}

TEST_CASE("min_step") {
  const auto four = min_step(primes_upto(100), linear_pattern(4), 100);
  REQUIRE(four.has_value());
  CHECK(four->r == 6);
  CHECK(four->witnesses == std::vector<std::int64_t>{5, 11, 17, 23});
  const auto three = min_step(primes_upto(10), linear_pattern(3), 100);
  REQUIRE(three.has_value());
  CHECK(three->r == 2);
  CHECK(three->witnesses == std::vector<std::int64_t>{3, 5, 7});
  const std::vector<std::int64_t> one = {1};
  CHECK_FALSE(min_step(IntSet(10, one), linear_pattern(2), 9).has_value());
}

TEST_CASE("min_step is monotone under inclusion") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const IntSet small = random_set(3000, 0.05, 1000 + s);
    std::vector<std::int64_t> more = small.members();
    const IntSet extra = random_set(3000, 0.03, 2000 + s);
    more.insert(more.end(), extra.members().begin(), extra.members().end());
    const IntSet big(3000, more);
    const auto a = min_step(small, linear_pattern(3), 400);
    const auto b = min_step(big, linear_pattern(3), 400);
    if (a) {
      REQUIRE(b.has_value());
      CHECK(b->r <= a->r);
    }
  }
}

TEST_CASE("greedy progression-free subsets are progression free") {
  const IntSet A = random_set(4000, 0.3, 9);
  for (int k : {3, 4}) {
    const auto g = greedy_progression_free(A.members(), k, 100, 4000);
    CHECK(find_progressions(IntSet(4000, g), linear_pattern(k), 100).empty());
    CHECK(g.size() > 0);
  }
}

TEST_CASE("narrowless construction") {
  const auto table = sieve_primes(100000);
  const auto res = narrowless_subset(100000, 3, 0.05, table);
  CHECK(res.prime_count == 9592);
  CHECK(res.survivor_fraction >= 0.5);
  // regression value from the first run
  CHECK(res.set.size() == 9061);
  CHECK(res.r_bound == doctest::Approx(0.05 * std::pow(std::log(1e5), 2)));
  const std::int64_t r_max = std::int64_t(std::ceil(res.r_bound)) - 1;
  CHECK(find_progressions(res.set, linear_pattern(3), r_max).empty());
  CHECK(remove_narrow_bases(res.set, 3, res.r_bound).size() == res.set.size());
  const auto naive = oracle::progressions(primes_as_set(table, 100000).members(), 3, r_max);
  CHECK(res.progression_total == std::int64_t(naive.size()));
  CHECK(res.union_bound_target == doctest::Approx(0.5 * 1e5 / std::log(1e5)));

  const auto none = narrowless_subset(100000, 3, 1e-4, table);
  CHECK(none.set.size() == none.prime_count);
  CHECK(none.survivor_fraction == 1.0);
}

TEST_CASE("cramer trial geometry and adversaries") {
  CramerOptions o;
  o.N = 100000;
  o.seed = 3;
  const auto r = cramer_trial(o);
  const double scale = o.C * std::pow(std::log(1e5), 2);
  CHECK(double(r.interval_min) >= scale / 2);
  CHECK(double(r.interval_max) <= scale);
  CHECK(r.outcomes.size() == 3);
  for (const auto& out : r.outcomes) {
    CHECK(double(out.set_size) >= o.delta * double(r.random_set_size));
    if (out.found) {
      CHECK(out.witness->r <= r.step_limit);
    }
  }
  CHECK_FALSE(r.degenerate);
  CHECK(r.inclusion_probability == doctest::Approx(1 / std::log(1e5)));
}

TEST_CASE("empty random set is degenerate") {
  CramerOptions o;
  o.N = 1000;
  o.inclusion_probability = 0.0;
  const auto r = cramer_trial(o);
  CHECK(r.random_set_size == 0);
  CHECK(r.degenerate);
  for (const auto& out : r.outcomes) CHECK_FALSE(out.found);
  o.N = 999;
  CHECK_THROWS_AS(cramer_trial(o), ArgumentError);
  o.N = 1000;
  o.delta = 0;
  CHECK_THROWS_AS(cramer_trial(o), ArgumentError);
}

TEST_CASE("cramer baselines over 100 seeded trials") {
  int full_found = 0, greedy_found = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    CramerOptions all;
    all.seed = s;
    all.delta = 1.0;
    all.adversaries = {Adversary::random};
    full_found += cramer_trial(all).outcomes[0].found;
    CramerOptions greedy;
    greedy.seed = s;
    greedy.adversaries = {Adversary::greedy};
    greedy_found += cramer_trial(greedy).outcomes[0].found;
  }
  CHECK(full_found >= 95);
  // regression value
  CHECK(greedy_found == 100);
}

TEST_CASE("adversary names") {
  for (Adversary a : {Adversary::greedy, Adversary::random, Adversary::interval}) {
    CHECK(adversary_from_string(to_string(a)) == a);
  }
  CHECK_THROWS_AS(adversary_from_string("clever"), ConfigError);
}
