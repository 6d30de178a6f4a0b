#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "narrow/arith.hpp"
#include "narrow/intset.hpp"
#include "narrow/polynomial.hpp"

namespace narrow {

struct ProgressionHit {
  std::int64_t a = 0;
  std::int64_t r = 0;
  std::vector<std::int64_t> witnesses;  // a + P_i(r)
};

// P_i(r) = (i - 1) r for i = 1..k.
std::vector<Polynomial> linear_pattern(int k);

// Every (a, r) with 0 < r <= r_max and all a + P_i(r) in A, ordered by r then
// a, truncated to `limit` hits.
std::vector<ProgressionHit> find_progressions(const IntSet& A, std::span<const Polynomial> pattern, std::int64_t r_max,
                                              std::size_t limit = std::numeric_limits<std::size_t>::max());

// Least r in (0, r_max] admitting a progression, with its first witness.
std::optional<ProgressionHit> min_step(const IntSet& A, std::span<const Polynomial> pattern, std::int64_t r_max);

IntSet primes_as_set(const PrimeTable& table, std::int64_t N);

// Removes every a in A that starts a k-term progression a, a+r, .. inside A
// with 0 < r < r_bound. per_r_counts[r] receives the number of progressions
// found with step r (index 0 unused).
IntSet remove_narrow_bases(const IntSet& A, int k, double r_bound, std::vector<std::int64_t>* per_r_counts = nullptr);

struct NarrowlessResult {
  IntSet set;
  std::uint64_t prime_count = 0;  // pi(N)
  double survivor_fraction = 0;
  double r_bound = 0;             // eps log^{k-1} N
  std::vector<std::int64_t> progressions_per_step;
  std::int64_t progression_total = 0;  // sum_r N_r (progressions inside [N])
  double union_bound_target = 0;       // N / (2 log N)
};

// Primes up to N with every base point of a narrow k-progression removed.
NarrowlessResult narrowless_subset(std::int64_t N, int k, double eps, const PrimeTable& table);

enum class Adversary { greedy, random, interval };

std::string to_string(Adversary a);
Adversary adversary_from_string(const std::string& name);

// Greedy progression-free subset of ascending candidates: keeps x unless it
// completes a k-term progression of step <= step_limit among kept elements.
std::vector<std::int64_t> greedy_progression_free(std::span<const std::int64_t> candidates, int k,
                                                  std::int64_t step_limit, std::int64_t universe);

struct CramerOptions {
  std::int64_t N = 100000;
  int k = 3;
  double C = 20;
  double delta = 0.5;
  std::vector<Adversary> adversaries{Adversary::greedy, Adversary::random, Adversary::interval};
  std::uint64_t seed = 0;
  std::optional<double> inclusion_probability;  // defaults to 1 / log N
};

struct AdversaryOutcome {
  Adversary strategy = Adversary::greedy;
  std::size_t set_size = 0;
  bool found = false;
  std::optional<ProgressionHit> witness;
};

struct CramerReport {
  std::int64_t N = 0;
  int k = 0;
  double C = 0;
  double delta = 0;
  std::uint64_t seed = 0;
  double inclusion_probability = 0;
  std::size_t random_set_size = 0;  // |P|
  std::size_t target_size = 0;      // ceil(delta |P|)
  std::int64_t step_limit = 0;      // floor(C log^{k-1} N)
  std::size_t intervals = 0;
  std::int64_t interval_min = 0;
  std::int64_t interval_max = 0;
  std::size_t bad_intervals = 0;    // certified by a greedy progression-free subset
  std::size_t empty_intervals = 0;
  bool degenerate = false;          // delta |P| < k
  std::vector<AdversaryOutcome> outcomes;
};

CramerReport cramer_trial(const CramerOptions& opts);

}  // namespace narrow
