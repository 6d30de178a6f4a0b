#include "narrow/singular.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "narrow/compensated.hpp"
#include "narrow/errors.hpp"

namespace narrow {

std::int64_t local_roots(int k, std::int64_t r, std::int64_t p) {
  if (k < 1) throw ArgumentError("local_roots: k must be at least 1");
  if (r == 0) throw ArgumentError("local_roots: step r must be nonzero");
  if (!is_prime_trial(p)) throw ArgumentError("local_roots: " + std::to_string(p) + " is not prime");
  if (r % p == 0) return 1;
  // i * r are distinct mod p for 0 <= i < p
  return std::min<std::int64_t>(k, p);
}

SingularSeries::SingularSeries(int k, std::uint64_t cutoff) : k_(k), cutoff_(cutoff) {
  if (k < 1) throw ArgumentError("SingularSeries: k must be at least 1");
  if (cutoff < 2) throw ArgumentError("SingularSeries: cutoff must be at least 2");
  primes_ = sieve_primes(cutoff).primes();
  CompensatedSum<double> base;
  for (std::uint64_t p : primes_) {
    if (p > std::uint64_t(k)) base += log_factor(std::int64_t(p), k);
  }
  base_log_ = base.value();
}

double SingularSeries::log_factor(std::int64_t p, std::int64_t roots) const {
  const double inv = 1.0 / double(p);
  return -double(k_) * std::log1p(-inv) + std::log1p(-double(roots) * inv);
}

SingularValue SingularSeries::operator()(std::int64_t r) const {
  if (r == 0) throw ArgumentError("singular series: step r must be nonzero");
  SingularValue out;
  out.terms = primes_.size();

  // small primes p <= k: nu_p = p unless p | r
  CompensatedSum<double> log_value(base_log_);
  for (std::uint64_t p : primes_) {
    if (p > std::uint64_t(k_)) break;
    if (r % std::int64_t(p) != 0) {
      out.vanishes = true;  // nu_p(r) = p exactly
    } else {
      log_value += log_factor(std::int64_t(p), 1);
    }
  }

  // primes p > k dividing r switch from nu_p = k to nu_p = 1
  double tail_from_r = 0;
  for (auto [p, e] : factorize(r)) {
    if (p <= k_) continue;
    if (std::uint64_t(p) <= cutoff_) {
      log_value += log_factor(p, 1) - log_factor(p, k_);
    } else {
      tail_from_r += -double(k_ - 1) * std::log1p(-1.0 / double(p));
    }
  }

  if (k_ == 1) {
    out.tail_estimate = 0;
  } else if (cutoff_ >= 2 * std::uint64_t(k_)) {
    // |log(1 - k/p) - k log(1 - 1/p)| <= (k/p)^2 once k/p <= 1/2
    out.tail_estimate = double(k_) * double(k_) / double(cutoff_) + tail_from_r;
  } else {
    out.tail_estimate = std::numeric_limits<double>::infinity();
  }

  out.value = out.vanishes ? 0.0 : std::exp(log_value.value());
  return out;
}

SingularValue singular_series(const SingularQuery& q) {
  return SingularSeries(q.k, q.cutoff)(q.r);
}

SingularPartialSum singular_partial_sum(int k, std::int64_t bound, std::uint64_t cutoff) {
  if (bound < 2) throw ArgumentError("singular_partial_sum: bound M must be at least 2");
  const SingularSeries series(k, cutoff);
  SingularPartialSum out;
  out.k = k;
  out.bound = bound;
  out.cutoff = cutoff;
  out.values.reserve(std::size_t(bound - 1));
  CompensatedSum<double> sum;
  for (std::int64_t r = 1; r < bound; ++r) {
    const double v = series(r).value;
    out.values.push_back(v);
    sum += v;
  }
  out.sum = sum.value();
  out.ratio = out.sum / double(bound);
  return out;
}

double exp_minus_one(double x) { return std::expm1(x); }

}  // namespace narrow
