#include "narrow/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "narrow/errors.hpp"

namespace narrow {

namespace {

constexpr std::uint64_t kWordsPerBlock = 8;
constexpr std::uint64_t kSegmentWords = 4096;  // 256K odd numbers per segment

std::uint64_t isqrt(std::uint64_t n) {
  auto r = std::uint64_t(std::sqrt(double(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Index i stands for 2i + 1; indices 0 .. (limit+1)/2 - 1 are in range.
std::uint64_t odd_count(std::uint64_t limit) { return (limit + 1) / 2; }

std::vector<std::uint64_t> allocate_words(std::uint64_t limit) {
  const std::uint64_t bits = odd_count(limit);
  std::vector<std::uint64_t> words((bits + 63) / 64, ~std::uint64_t(0));
  if (bits % 64) words.back() &= (std::uint64_t(1) << (bits % 64)) - 1;
  words[0] &= ~std::uint64_t(1);  // 1 is not prime
  return words;
}

inline void clear_bit(std::uint64_t* words, std::uint64_t i) {
  words[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
}

}  // namespace

void PrimeTable::finalize() {
  block_prefix_.assign(words_.size() / kWordsPerBlock + 1, 0);
  std::uint32_t running = limit_ >= 2 ? 1 : 0;  // the prime 2
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (w % kWordsPerBlock == 0) block_prefix_[w / kWordsPerBlock] = running;
    running += std::popcount(words_[w]);
  }
}

std::uint64_t PrimeTable::count_upto(std::uint64_t x) const {
  if (x > limit_) {
    throw RangeError("prime_count: x = " + std::to_string(x) + " exceeds table limit " +
                     std::to_string(limit_));
  }
  if (x < 2) return 0;
  const std::uint64_t bits = odd_count(x);
  const std::uint64_t full = bits >> 6;
  std::uint64_t count = block_prefix_[full / kWordsPerBlock];
  for (std::uint64_t w = full - full % kWordsPerBlock; w < full; ++w) count += std::popcount(words_[w]);
  if (bits & 63) count += std::popcount(words_[full] & ((std::uint64_t(1) << (bits & 63)) - 1));
  return count;
}

std::vector<std::uint64_t> PrimeTable::primes_upto(std::uint64_t x) const {
  x = std::min(x, limit_);
  std::vector<std::uint64_t> out;
  if (x < 2) return out;
  out.push_back(2);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      const std::uint64_t n = 2 * (w * 64 + std::countr_zero(bits)) + 1;
      if (n > x) return out;
      out.push_back(n);
      bits &= bits - 1;
    }
  }
  return out;
}

std::vector<std::uint64_t> PrimeTable::primes() const { return primes_upto(limit_); }

PrimeTable sieve_primes_simple(std::uint64_t limit) {
  if (limit < 2) throw ConfigError("sieve_primes: limit must be at least 2");
  PrimeTable t;
  t.limit_ = limit;
  t.words_ = allocate_words(limit);
  for (std::uint64_t p = 3; p * p <= limit; p += 2) {
    if (!t.is_prime(p)) continue;
    for (std::uint64_t m = p * p; m <= limit; m += 2 * p) clear_bit(t.words_.data(), m >> 1);
  }
  t.finalize();
  return t;
}

PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t budget_bytes) {
  if (limit < 2) throw ConfigError("sieve_primes: limit must be at least 2");
  const std::uint64_t bytes = (odd_count(limit) + 63) / 64 * 8 * 17 / 16;
  if (bytes > budget_bytes) {
    throw ConfigError("sieve_primes: limit " + std::to_string(limit) + " needs " +
                      std::to_string(bytes) + " bytes, over the budget of " +
                      std::to_string(budget_bytes));
  }
  const std::uint64_t root = isqrt(limit);
  std::vector<std::uint64_t> base;
  if (root >= 3) {
    const PrimeTable small = sieve_primes_simple(std::max<std::uint64_t>(root, 2));
    base = small.primes();
    base.erase(base.begin());  // drop 2
  }

  PrimeTable t;
  t.limit_ = limit;
  t.words_ = allocate_words(limit);
  const std::uint64_t total_words = t.words_.size();
  // next odd multiple index per base prime, carried across segments
  std::vector<std::uint64_t> next(base.size());
  for (std::size_t j = 0; j < base.size(); ++j) next[j] = (base[j] * base[j]) >> 1;

  for (std::uint64_t seg = 0; seg < total_words; seg += kSegmentWords) {
    const std::uint64_t end_bit = std::min(total_words, seg + kSegmentWords) * 64;
    std::uint64_t* words = t.words_.data();
    for (std::size_t j = 0; j < base.size(); ++j) {
      const std::uint64_t p = base[j];
      std::uint64_t i = next[j];
      for (; i < end_bit; i += p) clear_bit(words, i);
      next[j] = i;
    }
  }
  // bits past the limit may have been cleared or not; the mask from
  // allocate_words already zeroed them
  t.finalize();
  return t;
}

std::uint64_t prime_count(const PrimeTable& table, std::uint64_t x) { return table.count_upto(x); }

int MobiusTable::operator()(std::uint64_t d) const {
  if (d == 0 || d > limit()) {
    throw RangeError("mobius: d = " + std::to_string(d) + " outside [1, " + std::to_string(limit()) + "]");
  }
  return mu_[d];
}

MobiusTable mobius_table(std::uint64_t limit) {
  if (limit < 1) throw ConfigError("mobius_table: limit must be at least 1");
  // linear sieve
  std::vector<std::int8_t> mu(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  std::vector<bool> composite(limit + 1, false);
  mu[1] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(std::uint32_t(i));
      mu[i] = -1;
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t ip = i * p;
      if (ip > limit) break;
      composite[ip] = true;
      if (i % p == 0) {
        mu[ip] = 0;
        break;
      }
      mu[ip] = std::int8_t(-mu[i]);
    }
  }
  return MobiusTable(std::move(mu));
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer addition overflows int64");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer multiplication overflows int64");
  return r;
}

bool is_prime_trial(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::int64_t d = 5; d <= n / d; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

std::int64_t primorial(std::int64_t w) {
  if (w < 2) throw ArgumentError("primorial: w must be at least 2");
  std::int64_t product = 1;
  for (std::int64_t p = 2; p < w; ++p) {
    if (!is_prime_trial(p)) continue;
    std::int64_t next;
    if (__builtin_mul_overflow(product, p, &next)) {
      throw OverflowError("primorial: product of primes below " + std::to_string(w) +
                          " exceeds the int64 range");
    }
    product = next;
  }
  return product;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 0) n = -n;
  std::vector<std::pair<std::int64_t, int>> out;
  if (n < 2) return out;
  auto strip = [&](std::int64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (std::int64_t d = 5; d <= n / d; d += 6) {
    strip(d);
    strip(d + 2);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw ArgumentError("euler_phi: n must be positive");
  std::int64_t phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t r0 = mod_floor(a, m), r1 = m, s0 = 1, s1 = 0;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  if (r0 != 1) throw ArgumentError("inverse_mod: arguments are not coprime");
  return mod_floor(s0, m);
}

}  // namespace narrow
