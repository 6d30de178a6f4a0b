#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace narrow {

// Primality bitset over [2, limit]. Only odd numbers are stored: bit i stands
// for 2i + 1. Block prefix counts make prime_count cheap.
class PrimeTable {
 public:
  PrimeTable() = default;

  std::uint64_t limit() const { return limit_; }

  bool is_prime(std::uint64_t n) const {
    if (n > limit_) return false;
    if (n < 3) return n == 2;
    if ((n & 1) == 0) return false;
    const std::uint64_t i = n >> 1;
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  // pi(x); throws RangeError when x exceeds the table limit.
  std::uint64_t count_upto(std::uint64_t x) const;

  std::vector<std::uint64_t> primes() const;
  std::vector<std::uint64_t> primes_upto(std::uint64_t x) const;

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  friend PrimeTable sieve_primes(std::uint64_t, std::uint64_t);
  friend PrimeTable sieve_primes_simple(std::uint64_t);

  void finalize();

  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint32_t> block_prefix_;  // primes below each 8-word block
};

inline constexpr std::uint64_t kDefaultSieveBudgetBytes = std::uint64_t(1) << 30;

// Segmented sieve of Eratosthenes. Throws ConfigError for limit < 2 or when
// the table would exceed budget_bytes.
PrimeTable sieve_primes(std::uint64_t limit,
                        std::uint64_t budget_bytes = kDefaultSieveBudgetBytes);

// Single-pass sieve over the whole range; kept as a cross-check of the
// segmented construction.
PrimeTable sieve_primes_simple(std::uint64_t limit);

std::uint64_t prime_count(const PrimeTable& table, std::uint64_t x);

class MobiusTable {
 public:
  MobiusTable() = default;
  explicit MobiusTable(std::vector<std::int8_t> mu) : mu_(std::move(mu)) {}

  std::uint64_t limit() const { return mu_.empty() ? 0 : mu_.size() - 1; }
  int operator()(std::uint64_t d) const;

 private:
  std::vector<std::int8_t> mu_;  // index 0 unused
};

MobiusTable mobius_table(std::uint64_t limit);

// Product of the primes strictly below w. Throws OverflowError past 2^63.
std::int64_t primorial(std::int64_t w);

std::int64_t euler_phi(std::int64_t n);

// Prime factorization by trial division, ascending (prime, exponent) pairs.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

bool is_prime_trial(std::int64_t n);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

// Non-negative residue of a modulo m (m > 0).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Inverse of a modulo m; requires gcd(a, m) = 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

}  // namespace narrow
