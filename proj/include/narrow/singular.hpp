#pragma once

#include <cstdint>
#include <vector>

#include "narrow/arith.hpp"

namespace narrow {

struct SingularQuery {
  int k = 2;
  std::int64_t r = 2;
  std::uint64_t cutoff = 1000000;  // largest prime in the truncated product
};

struct SingularValue {
  double value = 0;
  std::size_t terms = 0;     // primes in the truncated product
  double tail_estimate = 0;  // bound on |log G(full) - log G(truncated)|
  bool vanishes = false;     // some p <= cutoff has nu_p(r) = p
};

// Residues a mod p for which one of a, a + r, ..., a + (k-1) r is 0 mod p.
// Throws ArgumentError if p is not prime or r == 0.
std::int64_t local_roots(int k, std::int64_t r, std::int64_t p);

// Truncated Hardy-Littlewood product
//   prod_{p <= cutoff} (1 - 1/p)^{-k} (1 - nu_p(r)/p)
// for a fixed k, evaluated in log space. The r-independent part is summed once
// so many steps can be evaluated cheaply.
class SingularSeries {
 public:
  SingularSeries(int k, std::uint64_t cutoff);

  int k() const { return k_; }
  std::uint64_t cutoff() const { return cutoff_; }

  SingularValue operator()(std::int64_t r) const;

 private:
  double log_factor(std::int64_t p, std::int64_t roots) const;

  int k_;
  std::uint64_t cutoff_;
  std::vector<std::uint64_t> primes_;
  double base_log_ = 0;  // sum over primes p > k of the log factor with nu_p = k
};

SingularValue singular_series(const SingularQuery& q);

struct SingularPartialSum {
  int k = 0;
  std::int64_t bound = 0;  // M; the sum runs over 0 < r < M
  std::uint64_t cutoff = 0;
  double sum = 0;
  double ratio = 0;  // sum / M
  std::vector<double> values;  // G(k, r) for r = 1 .. M-1
};

SingularPartialSum singular_partial_sum(int k, std::int64_t bound, std::uint64_t cutoff);

// e^x - 1 without cancellation near 0.
double exp_minus_one(double x);

}  // namespace narrow
