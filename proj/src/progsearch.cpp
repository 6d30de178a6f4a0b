#include "narrow/progsearch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "narrow/counter_rng.hpp"
#include "narrow/errors.hpp"
#include "narrow/parallel.hpp"

namespace narrow {

std::vector<Polynomial> linear_pattern(int k) {
  if (k < 1) throw ArgumentError("linear_pattern: k must be at least 1");
  std::vector<Polynomial> out;
  for (int i = 0; i < k; ++i) out.push_back(Polynomial::variable(1, 0, i));
  return out;
}

namespace {

constexpr std::int64_t kStepChunk = 16;

std::vector<ProgressionHit> scan_step(const IntSet& A, std::span<const Polynomial> pattern, std::int64_t r,
                                      std::size_t limit) {
  std::vector<ProgressionHit> hits;
  std::vector<std::int64_t> offsets;
  const std::int64_t rr[1] = {r};
  for (const auto& p : pattern) offsets.push_back(p.evaluate(rr));
  const std::int64_t first = offsets[0];
  for (std::int64_t x : A.members()) {
    const std::int64_t a = x - first;
    bool all = true;
    for (std::size_t i = 1; i < offsets.size() && all; ++i) all = A.contains(a + offsets[i]);
    if (!all) continue;
    ProgressionHit h{a, r, {}};
    for (std::int64_t o : offsets) h.witnesses.push_back(a + o);
    for (std::int64_t wv : h.witnesses) {
      if (!A.contains(wv)) throw std::logic_error("find_progressions: emitted witness outside the set");
    }
    hits.push_back(std::move(h));
    if (hits.size() >= limit) break;
  }
  return hits;
}

}  // namespace

std::vector<ProgressionHit> find_progressions(const IntSet& A, std::span<const Polynomial> pattern, std::int64_t r_max,
                                              std::size_t limit) {
  if (pattern.empty()) throw ArgumentError("find_progressions: empty pattern");
  if (r_max < 1 || limit == 0 || A.empty()) return {};
  for (const auto& p : pattern) {
    if (p.num_vars() != 1) throw ArgumentError("find_progressions: pattern polynomials must be univariate");
  }
  std::vector<ProgressionHit> out;
  // chunks of steps scanned in parallel, merged in step order
  const std::int64_t wave = std::int64_t(std::max(1u, thread_count())) * kStepChunk;
  for (std::int64_t base = 1; base <= r_max && out.size() < limit; base += wave) {
    const std::int64_t top = std::min(r_max, base + wave - 1);
    const std::size_t chunks = std::size_t((top - base) / kStepChunk + 1);
    std::vector<std::vector<ProgressionHit>> partial(chunks);
    const std::size_t remaining = limit - out.size();
    for_each_chunk(chunks, [&](std::size_t c) {
      const std::int64_t lo = base + std::int64_t(c) * kStepChunk;
      const std::int64_t hi = std::min(top, lo + kStepChunk - 1);
      for (std::int64_t r = lo; r <= hi && partial[c].size() < remaining; ++r) {
        auto h = scan_step(A, pattern, r, remaining - partial[c].size());
        partial[c].insert(partial[c].end(), std::make_move_iterator(h.begin()), std::make_move_iterator(h.end()));
      }
    });
    for (auto& p : partial) {
      for (auto& h : p) {
        if (out.size() >= limit) break;
        out.push_back(std::move(h));
      }
    }
  }
  return out;
}

std::optional<ProgressionHit> min_step(const IntSet& A, std::span<const Polynomial> pattern, std::int64_t r_max) {
  for (std::int64_t r = 1; r <= r_max; ++r) {
    auto hits = scan_step(A, pattern, r, 1);
    if (!hits.empty()) return hits.front();
  }
  return std::nullopt;
}

IntSet primes_as_set(const PrimeTable& table, std::int64_t N) {
  if (std::uint64_t(N) > table.limit()) throw RangeError("primes_as_set: N exceeds the prime table");
  IntSet s(N);
  for (std::uint64_t p : table.primes_upto(std::uint64_t(N))) s.push_back(std::int64_t(p));
  return s;
}

IntSet remove_narrow_bases(const IntSet& A, int k, double r_bound, std::vector<std::int64_t>* per_r_counts) {
  if (k < 2) throw ArgumentError("remove_narrow_bases: k must be at least 2");
  // integer steps with 0 < r < r_bound
  const std::int64_t r_max = std::int64_t(std::ceil(r_bound)) - 1;
  std::vector<bool> removed(std::size_t(A.universe()) + 1, false);
  if (per_r_counts) per_r_counts->assign(std::size_t(std::max<std::int64_t>(r_max, 0)) + 1, 0);
  const auto pattern = linear_pattern(k);
  if (r_max >= 1) {
    for (const auto& h : find_progressions(A, pattern, r_max)) {
      removed[std::size_t(h.a)] = true;
      if (per_r_counts) ++(*per_r_counts)[std::size_t(h.r)];
    }
  }
  IntSet out(A.universe());
  for (std::int64_t x : A.members()) {
    if (!removed[std::size_t(x)]) out.push_back(x);
  }
  return out;
}

NarrowlessResult narrowless_subset(std::int64_t N, int k, double eps, const PrimeTable& table) {
  if (!(eps > 0)) throw ArgumentError("narrowless_subset: eps must be positive");
  if (k < 2) throw ArgumentError("narrowless_subset: k must be at least 2");
  if (N < 2) throw ArgumentError("narrowless_subset: N must be at least 2");
  const IntSet primes = primes_as_set(table, N);
  NarrowlessResult res;
  res.prime_count = primes.size();
  res.r_bound = eps * std::pow(std::log(double(N)), k - 1);
  res.set = remove_narrow_bases(primes, k, res.r_bound, &res.progressions_per_step);
  res.progression_total = std::accumulate(res.progressions_per_step.begin(), res.progressions_per_step.end(),
                                          std::int64_t(0));
  res.survivor_fraction = res.prime_count ? double(res.set.size()) / double(res.prime_count) : 0.0;
  res.union_bound_target = 0.5 * double(N) / std::log(double(N));
  return res;
}

std::string to_string(Adversary a) {
  switch (a) {
    case Adversary::greedy: return "greedy";
    case Adversary::random: return "random";
    case Adversary::interval: return "interval";
  }
  return "?";
}

Adversary adversary_from_string(const std::string& name) {
  if (name == "greedy") return Adversary::greedy;
  if (name == "random") return Adversary::random;
  if (name == "interval") return Adversary::interval;
  throw ConfigError("unknown adversary '" + name + "' (expected greedy, random or interval)");
}

std::vector<std::int64_t> greedy_progression_free(std::span<const std::int64_t> candidates, int k,
                                                  std::int64_t step_limit, std::int64_t universe) {
  IntSet kept(universe);
  for (std::int64_t x : candidates) {
    bool closes = false;
    const auto& m = kept.members();
    // y = x - r for the kept elements in the step window
    auto it = std::lower_bound(m.begin(), m.end(), x - step_limit);
    for (; it != m.end() && *it < x && !closes; ++it) {
      const std::int64_t r = x - *it;
      bool all = true;
      for (int j = 2; j < k && all; ++j) all = kept.contains(x - j * r);
      closes = all;
    }
    if (!closes) kept.push_back(x);
  }
  return kept.members();
}

namespace {

struct Interval {
  std::int64_t lo, hi;
};

std::vector<Interval> partition(std::int64_t N, std::int64_t length) {
  const std::int64_t m = std::max<std::int64_t>(1, (N + length - 1) / length);
  const std::int64_t base = N / m, extra = N % m;
  std::vector<Interval> out;
  std::int64_t lo = 1;
  for (std::int64_t i = 0; i < m; ++i) {
    const std::int64_t len = base + (i < extra ? 1 : 0);
    out.push_back({lo, lo + len - 1});
    lo += len;
  }
  return out;
}

}  // namespace

CramerReport cramer_trial(const CramerOptions& opts) {
  if (opts.N < 1000) throw ArgumentError("cramer_trial: N must be at least 1000");
  if (!(opts.delta > 0 && opts.delta <= 1)) throw ArgumentError("cramer_trial: delta must lie in (0, 1]");
  if (opts.k < 2) throw ArgumentError("cramer_trial: k must be at least 2");
  if (!(opts.C > 0)) throw ArgumentError("cramer_trial: C must be positive");

  CramerReport rep;
  rep.N = opts.N;
  rep.k = opts.k;
  rep.C = opts.C;
  rep.delta = opts.delta;
  rep.seed = opts.seed;
  const double logN = std::log(double(opts.N));
  rep.inclusion_probability = opts.inclusion_probability.value_or(1.0 / logN);
  const double scale = opts.C * std::pow(logN, opts.k - 1);
  rep.step_limit = std::max<std::int64_t>(1, std::int64_t(std::floor(scale)));

  const CounterRng rng(opts.seed, /*stream=*/0x4352414dULL);
  const CounterRng membership = rng.substream(0);
  IntSet P(opts.N);
  for (std::int64_t n = 1; n <= opts.N; ++n) {
    if (membership.sample(std::uint64_t(n)).uniform() < rep.inclusion_probability) P.push_back(n);
  }
  rep.random_set_size = P.size();
  rep.target_size = std::size_t(std::ceil(opts.delta * double(P.size())));
  rep.degenerate = opts.delta * double(P.size()) < double(opts.k);

  // intervals of length in [C/2 log^{k-1} N, C log^{k-1} N]
  const auto intervals = partition(opts.N, rep.step_limit);
  rep.intervals = intervals.size();
  rep.interval_min = opts.N;
  std::vector<std::vector<std::int64_t>> in_interval(intervals.size()), free_subset(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& I = intervals[i];
    rep.interval_min = std::min(rep.interval_min, I.hi - I.lo + 1);
    rep.interval_max = std::max(rep.interval_max, I.hi - I.lo + 1);
    const auto& m = P.members();
    auto lo = std::lower_bound(m.begin(), m.end(), I.lo), hi = std::upper_bound(m.begin(), m.end(), I.hi);
    in_interval[i].assign(lo, hi);
    free_subset[i] = greedy_progression_free(in_interval[i], opts.k, rep.step_limit, opts.N);
    if (in_interval[i].empty()) ++rep.empty_intervals;
    if (double(free_subset[i].size()) >= opts.delta / 2 * double(in_interval[i].size())) ++rep.bad_intervals;
  }

  const auto pattern = linear_pattern(opts.k);
  for (Adversary adv : opts.adversaries) {
    std::vector<std::int64_t> chosen;
    const std::size_t target = rep.target_size;
    switch (adv) {
      case Adversary::greedy: {
        chosen = greedy_progression_free(P.members(), opts.k, rep.step_limit, opts.N);
        if (chosen.size() < target) {
          IntSet have(opts.N, chosen);
          for (std::int64_t x : P.members()) {
            if (chosen.size() >= target) break;
            if (!have.contains(x)) chosen.push_back(x);
          }
        }
        break;
      }
      case Adversary::random: {
        std::vector<std::int64_t> pool = P.members();
        const CounterRng shuffle = rng.substream(1);
        for (std::size_t i = 0; i < target && i < pool.size(); ++i) {
          const std::size_t j = i + std::size_t(shuffle.sample(i).below(pool.size() - i));
          std::swap(pool[i], pool[j]);
        }
        pool.resize(std::min(target, pool.size()));
        chosen = std::move(pool);
        break;
      }
      case Adversary::interval: {
        // most avoidable intervals first
        std::vector<std::size_t> order(intervals.size());
        std::iota(order.begin(), order.end(), 0);
        auto ratio = [&](std::size_t i) {
          return in_interval[i].empty() ? 0.0 : double(free_subset[i].size()) / double(in_interval[i].size());
        };
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ratio(a) > ratio(b); });
        for (std::size_t i : order) {
          if (chosen.size() >= target) break;
          chosen.insert(chosen.end(), free_subset[i].begin(), free_subset[i].end());
        }
        IntSet have(opts.N, chosen);
        for (std::size_t i : order) {
          for (std::int64_t x : in_interval[i]) {
            if (chosen.size() >= target) break;
            if (!have.contains(x)) chosen.push_back(x);
          }
        }
        break;
      }
    }
    const IntSet A(opts.N, chosen);
    AdversaryOutcome out;
    out.strategy = adv;
    out.set_size = A.size();
    auto hits = find_progressions(A, pattern, rep.step_limit, 1);
    out.found = !hits.empty();
    if (out.found) out.witness = hits.front();
    rep.outcomes.push_back(std::move(out));
  }
  return rep;
}

}  // namespace narrow
