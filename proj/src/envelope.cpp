#include "narrow/envelope.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "narrow/compensated.hpp"
#include "narrow/counter_rng.hpp"
#include "narrow/errors.hpp"
#include "narrow/parallel.hpp"

namespace narrow {

CutoffFn default_chi() {
  using std::numbers::pi;
  const double amp = 2.0 * std::numbers::sqrt2 / pi;
  return CutoffFn{
      "cosine",
      [amp](double t) { return amp * std::cos(pi * t / 2.0); },
      [amp](double t) { return -amp * pi / 2.0 * std::sin(pi * t / 2.0); },
  };
}

CutoffFn selberg_chi() {
  return CutoffFn{"selberg", [](double t) { return 1.0 - t; }, [](double) { return -1.0; }};
}

CutoffFn cutoff_by_name(const std::string& name) {
  if (name == "cosine") return default_chi();
  if (name == "selberg") return selberg_chi();
  throw ConfigError("unknown cutoff '" + name + "' (expected cosine or selberg)");
}

double derivative_sq_integral(const CutoffFn& chi, int panels) {
  // 5-point Gauss-Legendre on each panel
  static constexpr std::array<double, 5> nodes = {0.0, -0.5384693101056831, 0.5384693101056831,
                                                  -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                    0.2369268850561891, 0.2369268850561891};
  CompensatedSum<double> total;
  const double h = 1.0 / panels;
  for (int i = 0; i < panels; ++i) {
    const double mid = (i + 0.5) * h;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double d = chi.derivative(mid + 0.5 * h * nodes[j]);
      total += 0.5 * h * weights[j] * d * d;
    }
  }
  return total.value();
}

void validate_cutoff(const CutoffFn& chi) {
  const double integral = derivative_sq_integral(chi);
  if (std::abs(integral - 1.0) > 1e-6) {
    throw ConfigError("cutoff '" + chi.name + "': int_0^1 chi'^2 = " + std::to_string(integral) + ", expected 1");
  }
  if (chi.value_at_zero() < 0.5) throw ConfigError("cutoff '" + chi.name + "': chi(0) < 1/2");
  if (std::abs(chi.value(1.0)) > 1e-12) throw ConfigError("cutoff '" + chi.name + "': chi(1) != 0");
}

double divisor_weight(int mu, std::int64_t d, double log_R, const CutoffFn& chi) {
  return double(mu) * chi(std::log(double(d)) / log_R);
}

namespace {

struct DivisorTerm {
  std::int64_t d;
  std::int64_t start;  // least n >= 1 with d | Wn + b
  double weight;
};

constexpr std::int64_t kSieveBlock = 1 << 15;

}  // namespace

EnvelopeSieve build_sieve(const SieveConfig& cfg, const CutoffFn& chi, const MobiusTable& mobius) {
  if (mobius.limit() < std::uint64_t(cfg.R)) {
    throw ConfigError("build_sieve: Mobius table limit " + std::to_string(mobius.limit()) + " is below R = " +
                      std::to_string(cfg.R));
  }
  validate_cutoff(chi);
  const std::int64_t N = cfg.N;
  const double log_R = std::log(double(cfg.R));

  std::vector<DivisorTerm> terms;
  for (std::int64_t d = 1; d <= cfg.R; ++d) {
    const int mu = mobius(std::uint64_t(d));
    if (mu == 0) continue;
    if (std::gcd(d, cfg.W) != 1) continue;  // Wn + b is coprime to W
    // Wn + b = 0 mod d  <=>  n = -b W^{-1} mod d
    std::int64_t start = mod_floor(-mod_floor(cfg.b, d) * inverse_mod(cfg.W, d), d);
    if (start == 0) start = d;
    terms.push_back({d, start, divisor_weight(mu, d, log_R, chi)});
  }

  EnvelopeSieve sv;
  sv.cfg = cfg;
  sv.chi = chi;
  sv.normalizer = double(euler_phi(cfg.W)) * log_R / double(cfg.W);
  sv.values = CyclicFnd(N, 0.0);

  // Blocks over n keep the per-n accumulation order (increasing d) fixed.
  const std::int64_t blocks = (N + kSieveBlock - 1) / kSieveBlock;
  for_each_chunk(std::size_t(blocks), [&](std::size_t blk) {
    const std::int64_t lo = 1 + std::int64_t(blk) * kSieveBlock;
    const std::int64_t hi = std::min(N, lo + kSieveBlock - 1);
    std::vector<double> acc(std::size_t(hi - lo + 1), 0.0);
    for (const DivisorTerm& t : terms) {
      std::int64_t n = t.start;
      if (n < lo) n += (lo - n + t.d - 1) / t.d * t.d;
      for (; n <= hi; n += t.d) acc[std::size_t(n - lo)] += t.weight;
    }
    for (std::int64_t n = lo; n <= hi; ++n) {
      const double s = acc[std::size_t(n - lo)];
      sv.values[n % N] = sv.normalizer * (s * s);
    }
  });
  return sv;
}

double nu_direct(const EnvelopeSieve& sv, const MobiusTable& mobius, std::int64_t n) {
  const SieveConfig& cfg = sv.cfg;
  if (n < 1 || n > cfg.N) throw RangeError("nu_direct: n outside [1, N]");
  const std::int64_t m = cfg.W * n + cfg.b;
  std::vector<std::int64_t> divisors;
  for (std::int64_t d = 1; d <= cfg.R; ++d) {
    if (m % d == 0) divisors.push_back(d);
  }
  const double log_R = std::log(double(cfg.R));
  double s = 0.0;
  for (std::int64_t d : divisors) {
    const int mu = mobius(std::uint64_t(d));
    if (mu == 0 || std::gcd(d, cfg.W) != 1) continue;
    s += divisor_weight(mu, d, log_R, sv.chi);
  }
  return sv.normalizer * (s * s);
}

double shifted_product_mean(const CyclicFnd& f, std::span<const std::int64_t> shifts) {
  const std::int64_t N = f.modulus();
  std::vector<std::int64_t> offs;
  for (std::int64_t h : shifts) offs.push_back(mod_floor(h, N));
  CompensatedSum<double> sum;
  for (std::int64_t x = 0; x < N; ++x) {
    double prod = 1.0;
    for (std::int64_t o : offs) {
      std::int64_t i = x + o;
      if (i >= N) i -= N;
      prod *= f[i];
    }
    sum += prod;
  }
  return sum.value() / double(N);
}

double shifted_product_mean(const EnvelopeSieve& sv, std::span<const std::int64_t> shifts) {
  if (shifts.size() > 8) throw PreconditionError("shifted_product_mean: at most 8 shifts");
  const std::int64_t root = floor_sqrt(sv.cfg.N);
  for (std::int64_t h : shifts) {
    if (h > root || h < -root) {
      throw PreconditionError("shifted_product_mean: |h| = " + std::to_string(h < 0 ? -h : h) +
                              " exceeds sqrt(N) = " + std::to_string(root));
    }
  }
  return shifted_product_mean(sv.values, shifts);
}

double IntBox::volume() const {
  double v = 1;
  for (std::size_t i = 0; i < dim(); ++i) v *= double(hi[i] - lo[i] + 1);
  return v;
}

double IntBox::min_half_side() const {
  double m = INFINITY;
  for (std::size_t i = 0; i < dim(); ++i) m = std::min(m, 0.5 * double(hi[i] - lo[i]));
  return m;
}

namespace {

constexpr std::uint64_t kSampleChunk = 4096;

void check_forms_inputs(std::span<const Polynomial> polys, const IntBox& box, const FormsScales& scales) {
  if (polys.empty()) throw PreconditionError("forms condition: need at least one polynomial");
  if (box.lo.size() != box.hi.size() || box.dim() == 0) throw PreconditionError("forms condition: malformed box");
  for (const auto& q : polys) {
    if (q.num_vars() != box.dim()) throw PreconditionError("forms condition: polynomial arity != box dimension");
  }
  const double bound = scales.M * scales.M;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (box.lo[i] > box.hi[i]) throw PreconditionError("forms condition: empty box");
    if (double(box.lo[i]) < -bound || double(box.hi[i]) > bound) {
      throw PreconditionError("forms condition: box leaves [-M^2, M^2]^d");
    }
  }
  if (box.min_half_side() < std::sqrt(scales.H)) {
    throw PreconditionError("forms condition: box inradius " + std::to_string(box.min_half_side()) +
                            " is below sqrt(H) = " + std::to_string(std::sqrt(scales.H)));
  }
  for (std::size_t j = 0; j < polys.size(); ++j) {
    for (std::size_t k = j + 1; k < polys.size(); ++k) {
      if ((polys[j] - polys[k]).is_constant()) {
        throw PreconditionError("forms condition: Q_" + std::to_string(j + 1) + " - Q_" + std::to_string(k + 1) +
                                " is constant");
      }
    }
  }
}

}  // namespace

FormsEstimate forms_condition_estimate(const CyclicFnd& nu, std::span<const Polynomial> polys, const IntBox& box,
                                       const FormsScales& scales, std::uint64_t samples, std::uint64_t seed) {
  check_forms_inputs(polys, box, scales);
  const std::int64_t N = nu.modulus();
  const std::size_t J = polys.size();
  const std::size_t d = box.dim();

  FormsEstimate out;
  out.seed = seed;
  out.box_points = box.volume();

  std::vector<std::int64_t> h(d), offs(J);
  if (double(samples) >= out.box_points) {
    out.exhaustive = true;
    out.samples = std::uint64_t(out.box_points);
    std::vector<std::int64_t> shifts(J);
    CompensatedSum<double> total;
    h = box.lo;
    for (;;) {
      for (std::size_t j = 0; j < J; ++j) shifts[j] = polys[j].evaluate_mod(h, N);
      total += shifted_product_mean(nu, shifts);
      std::size_t i = 0;
      while (i < d && h[i] == box.hi[i]) {
        h[i] = box.lo[i];
        ++i;
      }
      if (i == d) break;
      ++h[i];
    }
    out.estimate = total.value() / out.box_points;
    return out;
  }

  if (samples < 2) throw PreconditionError("forms condition: need at least two samples");
  const CounterRng rng(seed, /*stream=*/0x464f524d53ULL);
  const std::uint64_t chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<SampleMoments> partial(chunks);
  for_each_chunk(chunks, [&](std::size_t c) {
    std::vector<std::int64_t> hh(d);
    SampleMoments m;
    const std::uint64_t end = std::min(samples, (c + 1) * kSampleChunk);
    for (std::uint64_t s = c * kSampleChunk; s < end; ++s) {
      auto stream = rng.sample(s);
      for (std::size_t i = 0; i < d; ++i) hh[i] = stream.in_range(box.lo[i], box.hi[i]);
      const std::int64_t x = std::int64_t(stream.below(std::uint64_t(N)));
      double prod = 1.0;
      for (const auto& q : polys) prod *= nu(x + q.evaluate_mod(hh, N));
      m.add(prod);
    }
    partial[c] = m;
  });
  SampleMoments total;
  for (const auto& m : partial) total.merge(m);
  out.samples = samples;
  out.estimate = total.mean();
  out.standard_error = total.stderr_of_mean();
  return out;
}

FormsEstimate forms_condition_estimate(const EnvelopeSieve& sv, std::span<const Polynomial> polys,
                                       const IntBox& box, const FormsScales& scales, std::uint64_t samples,
                                       std::uint64_t seed) {
  return forms_condition_estimate(sv.values, polys, box, scales, samples, seed);
}

}  // namespace narrow
