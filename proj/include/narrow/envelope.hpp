#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "narrow/arith.hpp"
#include "narrow/cyclic.hpp"
#include "narrow/polynomial.hpp"

namespace narrow {

// Even cutoff supported on [-1, 1] with int_0^1 chi'(t)^2 dt = 1 and
// chi(0) >= 1/2. The derivative is carried alongside so the normalization can
// be checked by quadrature.
struct CutoffFn {
  std::string name;
  std::function<double(double)> value;       // evaluated for |t| <= 1 only
  std::function<double(double)> derivative;  // on (0, 1)

  double operator()(double t) const { return std::abs(t) >= 1.0 ? 0.0 : value(std::abs(t)); }
  double value_at_zero() const { return value(0.0); }
};

// (2 sqrt 2 / pi) cos(pi t / 2).
CutoffFn default_chi();

// Selberg's linear weight 1 - |t|, for sensitivity studies.
CutoffFn selberg_chi();

// By name: "cosine" or "selberg".
CutoffFn cutoff_by_name(const std::string& name);

// Composite Gauss-Legendre quadrature of chi'^2 over [0, 1].
double derivative_sq_integral(const CutoffFn& chi, int panels = 256);

// Throws ConfigError unless chi is normalized to 1e-6 and chi(0) >= 1/2.
void validate_cutoff(const CutoffFn& chi);

struct EnvelopeSieve {
  SieveConfig cfg;
  CutoffFn chi;
  double normalizer = 0;  // phi(W) log R / W
  CyclicFnd values;       // nu at index n mod N
};

// mu(d) chi(log d / log R); shared by the sieve pass and any direct evaluation
// so both produce identical doubles.
double divisor_weight(int mu, std::int64_t d, double log_R, const CutoffFn& chi);

// nu(n) = (phi(W) log R / W) (sum_{d | Wn+b, d <= R} mu(d) chi(log d / log R))^2
// for every n in [N]. Divisor weights are accumulated per n in increasing d.
EnvelopeSieve build_sieve(const SieveConfig& cfg, const CutoffFn& chi, const MobiusTable& mobius);

// int_X prod_j T^{h_j} nu. Requires J <= 8 and |h_j| <= sqrt(N).
double shifted_product_mean(const EnvelopeSieve& sv, std::span<const std::int64_t> shifts);

// nu at a single n in [1, N], enumerating the divisors of Wn + b directly
// and summing them in increasing order.
double nu_direct(const EnvelopeSieve& sv, const MobiusTable& mobius, std::int64_t n);

// Unrestricted form of the above for any function.
double shifted_product_mean(const CyclicFnd& f, std::span<const std::int64_t> shifts);

// Axis-aligned integer box prod_i [lo_i, hi_i].
struct IntBox {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;

  std::size_t dim() const { return lo.size(); }
  double volume() const;
  double min_half_side() const;
};

struct FormsScales {
  double M = 0;  // coarse scale; the box must sit inside [-M^2, M^2]^d
  double H = 0;  // fine scale; the box inradius must be at least sqrt(H)
};

struct FormsEstimate {
  double estimate = 0;
  double standard_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  double box_points = 0;
};

// Monte-Carlo estimate of E_{h in box} int_X prod_j T^{Q_j(h)} nu. Each sample
// draws (h, x) jointly from a counter-based stream, so the result depends
// only on (seed, samples). When samples >= box volume the box is enumerated
// and the inner integral computed exactly.
FormsEstimate forms_condition_estimate(const CyclicFnd& nu, std::span<const Polynomial> polys, const IntBox& box,
                                       const FormsScales& scales, std::uint64_t samples, std::uint64_t seed);

FormsEstimate forms_condition_estimate(const EnvelopeSieve& sv, std::span<const Polynomial> polys,
                                       const IntBox& box, const FormsScales& scales, std::uint64_t samples,
                                       std::uint64_t seed);

}  // namespace narrow
