#pragma once

// Local and averaged Gowers uniformity norms on Z/NZ, their dual functions,
// the Gowers-Cauchy-Schwarz comparison and the polynomial counting form.
//
// Conventions shared by every routine here:
//  * A cube vertex omega in {0,1}^d is a bitmask; bit i is omega_i.
//  * Cube parameters m^(0), m^(1) range over [S]^d = {1..S}^d.
//  * Tuples "indexed by omega != 0" are stored at position omega - 1.
//  * Exact mode enumerates every parameter; sampled mode draws parameters
//    (and the base point x) from a counter-based stream keyed by the seed, with
//    chunked reductions so results do not depend on the thread count.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "narrow/compensated.hpp"
#include "narrow/counter_rng.hpp"
#include "narrow/cyclic.hpp"
#include "narrow/errors.hpp"
#include "narrow/parallel.hpp"
#include "narrow/polynomial.hpp"

namespace narrow {

struct Sampling {
  enum class Mode { exact, sampled };
  Mode mode = Mode::exact;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;

  static Sampling exact() { return {}; }
  static Sampling sampled(std::uint64_t budget, std::uint64_t seed) { return {Mode::sampled, budget, seed}; }
  bool is_exact() const { return mode == Mode::exact; }
};

inline constexpr int kMaxExactDim = 4;
inline constexpr std::uint64_t kMinSampleBudget = 1000;
inline constexpr std::uint64_t kExactHLimit = 10000;

struct GowersSpec {
  std::vector<std::int64_t> directions;  // a_1 .. a_d
  std::int64_t scale = 1;                // S
  Sampling sampling;

  int dim() const { return int(directions.size()); }
};

// Directions Q_i(h_1..h_t, W), averaged over h in [H]^t.
struct QTuple {
  std::size_t t = 0;
  std::vector<Polynomial> polys;  // each in t + 1 variables: h_1..h_t, W
  std::int64_t H = 1;
  std::int64_t W = 1;
  std::int64_t S = 1;

  int dim() const { return int(polys.size()); }
};

// Parses polynomials written in h1..ht and W.
QTuple make_qtuple(std::size_t t, std::span<const std::string> polys, std::int64_t H, std::int64_t W,
                   std::int64_t S);

// Q_1 = ... = Q_d = 1 with no h-averaging; the plain U^{1,...,1}_S norm.
QTuple linear_qtuple(int d, std::int64_t S);

// (Q_1(h), .., Q_d(h), Q_1(h'), .., Q_d(h')) with h, h' independent copies of
// the t variables, so that squaring a dual function is again a dual function.
QTuple direct_sum(const QTuple& q);

void validate(const GowersSpec& spec);
void validate(const QTuple& q);

// Patterns P_1..P_k in one variable m, with common constant term.
struct ProgressionSystem {
  std::vector<Polynomial> polys;
  std::int64_t W = 1;
  std::int64_t M = 1;

  int k() const { return int(polys.size()); }
};

// P_i = (i - 1) m.
ProgressionSystem linear_system(int k, std::int64_t W, std::int64_t M);

// Shift P(Wm)/W mod N for P with zero constant term: sum_j c_j W^{j-1} m^j.
std::int64_t progression_shift(const Polynomial& p, std::int64_t W, std::int64_t m, std::int64_t N);

template <typename Scalar>
struct NormEstimate {
  Scalar norm = 0;        // 2^d-th root of the clamped power
  Scalar power_raw = 0;   // estimate of ||f||^{2^d}; may dip below 0 when sampled
  Scalar power = 0;       // max(power_raw, 0)
  Scalar standard_error = 0;
  std::uint64_t samples = 0;
  bool exact = true;
  bool h_sampled = false;
  bool seminorm_only = false;  // d = 1
  double degenerate_fraction = 0;
};

namespace detail {

inline std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) throw BudgetError("parameter grid too large");
    r *= base;
  }
  return r;
}

// Decodes combo index c into m0[i], m1[i] in [1, S].
inline void decode_cube(std::uint64_t c, std::int64_t S, int d, std::int64_t* m0, std::int64_t* m1) {
  for (int i = 0; i < d; ++i) {
    m0[i] = std::int64_t(c % std::uint64_t(S)) + 1;
    c /= std::uint64_t(S);
  }
  for (int i = 0; i < d; ++i) {
    m1[i] = std::int64_t(c % std::uint64_t(S)) + 1;
    c /= std::uint64_t(S);
  }
}

// Vertex offsets sum_i m_i^{(omega_i)} a_i mod N; with `relative` each m_i is
// replaced by m_i - m_i^{(0)}, as in the dual function.
inline void vertex_offsets(int d, const std::int64_t* a, const std::int64_t* m0, const std::int64_t* m1,
                           bool relative, std::int64_t N, std::int64_t* out) {
  const int vertices = 1 << d;
  for (int w = 0; w < vertices; ++w) {
    __int128 s = 0;
    for (int i = 0; i < d; ++i) {
      const std::int64_t m = (w >> i) & 1 ? m1[i] : m0[i];
      s += __int128(relative ? m - m0[i] : m) * a[i];
    }
    std::int64_t r = std::int64_t(s % N);
    out[w] = r < 0 ? r + N : r;
  }
}

template <typename Scalar>
Scalar product_integral(std::span<const CyclicFn<Scalar>* const> fs, const std::int64_t* offs, std::int64_t N) {
  CompensatedSum<Scalar> sum;
  const std::size_t n_f = fs.size();
  for (std::int64_t x = 0; x < N; ++x) {
    Scalar p = 1;
    for (std::size_t j = 0; j < n_f; ++j) {
      std::int64_t i = x + offs[j];
      if (i >= N) i -= N;
      p *= (*fs[j])[i];
    }
    sum += p;
  }
  return sum.value() / Scalar(N);
}

template <typename Scalar>
std::int64_t common_modulus(std::span<const CyclicFn<Scalar>* const> fs) {
  if (fs.empty()) throw ArgumentError("empty function tuple");
  const std::int64_t N = fs[0]->modulus();
  for (const auto* f : fs) {
    if (f->modulus() != N) throw ArgumentError("function tuple: modulus mismatch");
  }
  return N;
}

constexpr std::uint64_t kCubeChunk = 64;
constexpr std::uint64_t kSampleChunk = 4096;

// E_{m0, m1 in [S]^d} int_X prod_omega T^{sum_i m_i^{(omega_i)} a_i} f_omega, exact.
template <typename Scalar>
Scalar cube_average_exact(std::span<const CyclicFn<Scalar>* const> fs, std::span<const std::int64_t> dirs,
                          std::int64_t S) {
  const int d = int(dirs.size());
  const std::int64_t N = common_modulus(fs);
  const std::uint64_t combos = ipow(std::uint64_t(S), 2 * d);
  const std::uint64_t chunks = (combos + kCubeChunk - 1) / kCubeChunk;
  std::vector<CompensatedSum<Scalar>> partial(chunks);
  for_each_chunk(chunks, [&](std::size_t c) {
    std::vector<std::int64_t> m0(static_cast<std::size_t>(d)), m1(static_cast<std::size_t>(d)), offs(std::size_t(1) << d);
    std::vector<std::int64_t> a(dirs.begin(), dirs.end());
    const std::uint64_t end = std::min(combos, (c + 1) * kCubeChunk);
    for (std::uint64_t k = c * kCubeChunk; k < end; ++k) {
      decode_cube(k, S, d, m0.data(), m1.data());
      vertex_offsets(d, a.data(), m0.data(), m1.data(), false, N, offs.data());
      partial[c] += product_integral<Scalar>(fs, offs.data(), N);
    }
  });
  CompensatedSum<Scalar> total;
  for (const auto& p : partial) total += p;
  return total.value() / Scalar(combos);
}

// Reduces a direction tuple modulo N.
inline std::vector<std::int64_t> reduce_directions(std::span<const std::int64_t> dirs, std::int64_t N) {
  std::vector<std::int64_t> out;
  for (std::int64_t a : dirs) out.push_back(mod_floor(a, N));
  return out;
}

template <typename Scalar>
NormEstimate<Scalar> finish(NormEstimate<Scalar> est, int d) {
  est.power = est.power_raw > Scalar(0) ? est.power_raw : Scalar(0);
  est.norm = std::pow(est.power, Scalar(1) / Scalar(1 << d));
  est.seminorm_only = d == 1;
  return est;
}

inline std::vector<std::int64_t> h_point(std::uint64_t index, std::size_t t, std::int64_t H, std::int64_t W) {
  std::vector<std::int64_t> pt(t + 1);
  for (std::size_t j = 0; j < t; ++j) {
    pt[j] = std::int64_t(index % std::uint64_t(H)) + 1;
    index /= std::uint64_t(H);
  }
  pt[t] = W;
  return pt;
}

inline std::vector<std::int64_t> q_directions(const QTuple& q, std::span<const std::int64_t> pt, std::int64_t N) {
  std::vector<std::int64_t> a;
  for (const auto& p : q.polys) a.push_back(p.evaluate_mod(pt, N));
  return a;
}

inline bool degenerate(std::span<const std::int64_t> dirs) {
  for (std::int64_t a : dirs) {
    if (a == 0) return true;
  }
  return false;
}

}  // namespace detail

// ||f||^{2^d} for the local norm U^{a_1..a_d}_S and its root.
template <typename Scalar>
NormEstimate<Scalar> local_gowers(const CyclicFn<Scalar>& f, const GowersSpec& spec) {
  validate(spec);
  const int d = spec.dim();
  const std::int64_t N = f.modulus();
  const auto dirs = detail::reduce_directions(spec.directions, N);
  NormEstimate<Scalar> est;
  if (spec.sampling.is_exact()) {
    std::vector<const CyclicFn<Scalar>*> fs(std::size_t(1) << d, &f);
    est.power_raw = detail::cube_average_exact<Scalar>(fs, dirs, spec.scale);
    est.samples = detail::ipow(std::uint64_t(spec.scale), 2 * d);
    return detail::finish(est, d);
  }
  const std::uint64_t budget = spec.sampling.budget;
  const CounterRng rng(spec.sampling.seed, /*stream=*/0x474f574552ULL);
  const std::uint64_t chunks = (budget + detail::kSampleChunk - 1) / detail::kSampleChunk;
  std::vector<SampleMoments> partial(chunks);
  for_each_chunk(chunks, [&](std::size_t c) {
    std::vector<std::int64_t> m0v(static_cast<std::size_t>(d)), m1v(static_cast<std::size_t>(d)), offv(std::size_t(1) << d);
    std::int64_t *m0 = m0v.data(), *m1 = m1v.data(), *offs = offv.data();
    SampleMoments mom;
    const std::uint64_t end = std::min(budget, (c + 1) * detail::kSampleChunk);
    for (std::uint64_t s = c * detail::kSampleChunk; s < end; ++s) {
      auto st = rng.sample(s);
      for (int i = 0; i < d; ++i) m0[i] = std::int64_t(st.below(std::uint64_t(spec.scale))) + 1;
      for (int i = 0; i < d; ++i) m1[i] = std::int64_t(st.below(std::uint64_t(spec.scale))) + 1;
      const std::int64_t x = std::int64_t(st.below(std::uint64_t(N)));
      detail::vertex_offsets(d, dirs.data(), m0, m1, false, N, offs);
      double p = 1;
      for (int w = 0; w < (1 << d); ++w) p *= double(f(x + offs[w]));
      mom.add(p);
    }
    partial[c] = mom;
  });
  SampleMoments total;
  for (const auto& m : partial) total.merge(m);
  est.exact = false;
  est.power_raw = Scalar(total.mean());
  est.standard_error = Scalar(total.stderr_of_mean());
  est.samples = budget;
  return detail::finish(est, d);
}

template <typename Scalar>
Scalar local_gowers_norm(const CyclicFn<Scalar>& f, const GowersSpec& spec) {
  return local_gowers(f, spec).norm;
}

// Averaged norm: E_{h in [H]^t} ||f||^{2^d}_{U^{Q(h,W)}_S}. The h-average is
// exhaustive when H^t <= 10^4; beyond that h is drawn from the stream.
template <typename Scalar>
NormEstimate<Scalar> averaged_gowers(const CyclicFn<Scalar>& f, const QTuple& q, const Sampling& sampling) {
  validate(q);
  const int d = q.dim();
  const std::int64_t N = f.modulus();
  const std::uint64_t h_count = detail::ipow(std::uint64_t(q.H), int(q.t));
  NormEstimate<Scalar> est;

  if (sampling.is_exact()) {
    if (d > kMaxExactDim) throw BudgetError("exact Gowers norm limited to d <= 4");
    std::vector<const CyclicFn<Scalar>*> fs(std::size_t(1) << d, &f);
    const bool sample_h = h_count > kExactHLimit;
    const std::uint64_t n_h = sample_h ? kExactHLimit : h_count;
    const CounterRng rng(sampling.seed, /*stream=*/0x48415645ULL);
    SampleMoments mom;
    std::uint64_t degenerate = 0;
    for (std::uint64_t j = 0; j < n_h; ++j) {
      std::vector<std::int64_t> pt;
      if (sample_h) {
        auto st = rng.sample(j);
        pt.assign(q.t + 1, q.W);
        for (std::size_t v = 0; v < q.t; ++v) pt[v] = std::int64_t(st.below(std::uint64_t(q.H))) + 1;
      } else {
        pt = detail::h_point(j, q.t, q.H, q.W);
      }
      const auto dirs = detail::q_directions(q, pt, N);
      if (detail::degenerate(dirs)) ++degenerate;
      mom.add(double(detail::cube_average_exact<Scalar>(fs, dirs, q.S)));
    }
    est.power_raw = Scalar(mom.mean());
    est.h_sampled = sample_h;
    est.standard_error = sample_h ? Scalar(mom.stderr_of_mean()) : Scalar(0);
    est.samples = n_h;
    est.degenerate_fraction = double(degenerate) / double(n_h);
    return detail::finish(est, d);
  }

  if (sampling.budget < kMinSampleBudget) throw BudgetError("sampled mode needs a budget of at least 1000");
  const std::uint64_t budget = sampling.budget;
  const CounterRng rng(sampling.seed, /*stream=*/0x4156474f57ULL);
  const std::uint64_t chunks = (budget + detail::kSampleChunk - 1) / detail::kSampleChunk;
  std::vector<SampleMoments> partial(chunks);
  std::vector<std::uint64_t> degenerate(chunks, 0);
  for_each_chunk(chunks, [&](std::size_t c) {
    std::vector<std::int64_t> m0v(static_cast<std::size_t>(d)), m1v(static_cast<std::size_t>(d)), offv(std::size_t(1) << d);
    std::int64_t *m0 = m0v.data(), *m1 = m1v.data(), *offs = offv.data();
    std::vector<std::int64_t> pt(q.t + 1, q.W);
    SampleMoments mom;
    const std::uint64_t end = std::min(budget, (c + 1) * detail::kSampleChunk);
    for (std::uint64_t s = c * detail::kSampleChunk; s < end; ++s) {
      auto st = rng.sample(s);
      for (std::size_t v = 0; v < q.t; ++v) pt[v] = std::int64_t(st.below(std::uint64_t(q.H))) + 1;
      const auto dirs = detail::q_directions(q, pt, N);
      if (detail::degenerate(dirs)) ++degenerate[c];
      for (int i = 0; i < d; ++i) m0[i] = std::int64_t(st.below(std::uint64_t(q.S))) + 1;
      for (int i = 0; i < d; ++i) m1[i] = std::int64_t(st.below(std::uint64_t(q.S))) + 1;
      const std::int64_t x = std::int64_t(st.below(std::uint64_t(N)));
      detail::vertex_offsets(d, dirs.data(), m0, m1, false, N, offs);
      double p = 1;
      for (int w = 0; w < (1 << d); ++w) p *= double(f(x + offs[w]));
      mom.add(p);
    }
    partial[c] = mom;
  });
  SampleMoments total;
  std::uint64_t deg = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    total.merge(partial[c]);
    deg += degenerate[c];
  }
  est.exact = false;
  est.h_sampled = true;
  est.power_raw = Scalar(total.mean());
  est.standard_error = Scalar(total.stderr_of_mean());
  est.samples = budget;
  est.degenerate_fraction = double(deg) / double(budget);
  return detail::finish(est, d);
}

template <typename Scalar>
Scalar averaged_gowers_norm(const CyclicFn<Scalar>& f, const QTuple& q, const Sampling& sampling = Sampling::exact()) {
  return averaged_gowers(f, q, sampling).norm;
}

// Dual function
//   D(F)(x) = E_h E_{m0, m1} prod_{omega != 0} F_omega(x + sum_i (m_i^{(omega_i)} - m_i^{(0)}) Q_i(h)).
// F holds 2^d - 1 functions, F[omega - 1]. Sampled mode averages over
// `budget` draws of (h, m0, m1) and evaluates every x exactly.
template <typename Scalar>
CyclicFn<Scalar> dual_function(std::span<const CyclicFn<Scalar>> F, const QTuple& q,
                               const Sampling& sampling = Sampling::exact()) {
  validate(q);
  const int d = q.dim();
  if (F.size() != (std::size_t(1) << d) - 1) {
    throw ArgumentError("dual_function: expected " + std::to_string((1 << d) - 1) + " functions, got " +
                        std::to_string(F.size()));
  }
  const std::int64_t N = F[0].modulus();
  for (const auto& g : F) {
    if (g.modulus() != N) throw ArgumentError("dual_function: modulus mismatch");
  }
  const std::uint64_t h_count = detail::ipow(std::uint64_t(q.H), int(q.t));
  const std::uint64_t cube = detail::ipow(std::uint64_t(q.S), 2 * d);
  const bool exact = sampling.is_exact();
  if (exact && d > kMaxExactDim * 2) throw BudgetError("exact dual function limited to d <= 8");
  if (exact && h_count > kExactHLimit) throw BudgetError("exact dual function needs H^t <= 10^4");
  if (!exact && sampling.budget < kMinSampleBudget) throw BudgetError("sampled mode needs a budget of at least 1000");
  const std::uint64_t terms = exact ? h_count * cube : sampling.budget;
  const CounterRng rng(sampling.seed, /*stream=*/0x4455414cULL);

  // Offsets per term are shared by every x; precompute them once.
  const int vertices = 1 << d;
  std::vector<std::int64_t> offsets(std::size_t(terms) * std::size_t(vertices));
  {
    std::vector<std::int64_t> m0(static_cast<std::size_t>(d)), m1(static_cast<std::size_t>(d)), pt(q.t + 1, q.W);
    for (std::uint64_t k = 0; k < terms; ++k) {
      std::vector<std::int64_t> dirs;
      if (exact) {
        pt = detail::h_point(k / cube, q.t, q.H, q.W);
        dirs = detail::q_directions(q, pt, N);
        detail::decode_cube(k % cube, q.S, d, m0.data(), m1.data());
      } else {
        auto st = rng.sample(k);
        for (std::size_t v = 0; v < q.t; ++v) pt[v] = std::int64_t(st.below(std::uint64_t(q.H))) + 1;
        dirs = detail::q_directions(q, pt, N);
        for (int i = 0; i < d; ++i) m0[std::size_t(i)] = std::int64_t(st.below(std::uint64_t(q.S))) + 1;
        for (int i = 0; i < d; ++i) m1[std::size_t(i)] = std::int64_t(st.below(std::uint64_t(q.S))) + 1;
      }
      detail::vertex_offsets(d, dirs.data(), m0.data(), m1.data(), true, N, &offsets[k * std::size_t(vertices)]);
    }
  }

  CyclicFn<Scalar> out(N, Scalar(0));
  constexpr std::int64_t kBlock = 256;
  const std::int64_t blocks = (N + kBlock - 1) / kBlock;
  for_each_chunk(std::size_t(blocks), [&](std::size_t b) {
    const std::int64_t lo = std::int64_t(b) * kBlock;
    const std::int64_t hi = std::min(N, lo + kBlock);
    std::vector<CompensatedSum<Scalar>> acc(std::size_t(hi - lo));
    for (std::uint64_t k = 0; k < terms; ++k) {
      const std::int64_t* offs = &offsets[k * std::size_t(vertices)];
      for (std::int64_t x = lo; x < hi; ++x) {
        Scalar p = 1;
        for (int w = 1; w < vertices; ++w) {
          std::int64_t i = x + offs[w];
          if (i >= N) i -= N;
          p *= F[std::size_t(w - 1)][i];
        }
        acc[std::size_t(x - lo)] += p;
      }
    }
    for (std::int64_t x = lo; x < hi; ++x) out[x] = acc[std::size_t(x - lo)].value() / Scalar(terms);
  });
  return out;
}

// The diagonal case F_omega = f for every omega != 0.
template <typename Scalar>
CyclicFn<Scalar> dual_function(const CyclicFn<Scalar>& f, const QTuple& q, const Sampling& sampling = Sampling::exact()) {
  std::vector<CyclicFn<Scalar>> F((std::size_t(1) << q.dim()) - 1, f);
  return dual_function<Scalar>(F, q, sampling);
}

// Tuple on the 2d-cube whose dual function under direct_sum(q) is the square
// of the dual of F under q: F_omega on either half, 1 where both halves are
// nonzero.
template <typename Scalar>
std::vector<CyclicFn<Scalar>> dual_square_tuple(std::span<const CyclicFn<Scalar>> F, int d) {
  if (F.size() != (std::size_t(1) << d) - 1) throw ArgumentError("dual_square_tuple: wrong tuple size");
  const std::int64_t N = F[0].modulus();
  const std::size_t half = std::size_t(1) << d;
  std::vector<CyclicFn<Scalar>> out;
  out.reserve(half * half - 1);
  for (std::size_t w2 = 1; w2 < half * half; ++w2) {
    const std::size_t lo = w2 & (half - 1), hi = w2 >> d;
    if (hi == 0) {
      out.push_back(F[lo - 1]);
    } else if (lo == 0) {
      out.push_back(F[hi - 1]);
    } else {
      out.push_back(CyclicFn<Scalar>::constant(N, Scalar(1)));
    }
  }
  return out;
}

template <typename Scalar>
struct GcsResult {
  Scalar lhs = 0;
  Scalar rhs = 0;
  bool holds = false;
};

inline constexpr double kGcsSlack = 1e-9;

// |cube average of (F_omega)| against prod_omega ||F_omega||. F has 2^d
// functions indexed by omega. Exact mode only.
template <typename Scalar>
GcsResult<Scalar> gcs_check(std::span<const CyclicFn<Scalar>> F, const GowersSpec& spec) {
  validate(spec);
  if (!spec.sampling.is_exact()) throw ArgumentError("gcs_check: only exact mode is supported");
  const int d = spec.dim();
  if (F.size() != (std::size_t(1) << d)) throw ArgumentError("gcs_check: expected 2^d functions");
  std::vector<const CyclicFn<Scalar>*> fs;
  for (const auto& g : F) fs.push_back(&g);
  const std::int64_t N = detail::common_modulus<Scalar>(fs);
  const auto dirs = detail::reduce_directions(spec.directions, N);
  GcsResult<Scalar> r;
  r.lhs = std::abs(detail::cube_average_exact<Scalar>(fs, dirs, spec.scale));
  r.rhs = 1;
  for (const auto& g : F) r.rhs *= local_gowers_norm(g, spec);
  r.holds = r.lhs <= r.rhs + Scalar(kGcsSlack);
  return r;
}

// Lambda(f_1..f_k) = E_{m in [M]} int_X prod_i T^{P_i(Wm)/W} f_i, after
// translating the patterns so that P_i(0) = 0.
template <typename Scalar>
Scalar lambda_form(std::span<const CyclicFn<Scalar>> fs, const ProgressionSystem& sys) {
  if (int(fs.size()) != sys.k()) throw ArgumentError("lambda_form: need one function per pattern");
  if (sys.M < 1 || sys.W < 1) throw ArgumentError("lambda_form: M and W must be positive");
  std::vector<const CyclicFn<Scalar>*> ptrs;
  for (const auto& g : fs) ptrs.push_back(&g);
  const std::int64_t N = detail::common_modulus<Scalar>(ptrs);
  const std::int64_t c0 = sys.polys.at(0).constant_term();
  std::vector<Polynomial> translated;
  for (const auto& p : sys.polys) {
    if (p.num_vars() != 1) throw ArgumentError("lambda_form: patterns must be univariate");
    if (p.constant_term() != c0) throw ArgumentError("lambda_form: patterns must share P_i(0)");
    translated.push_back(p - Polynomial::constant(1, c0));
  }
  const std::int64_t M = sys.M;
  std::vector<CompensatedSum<Scalar>> partial(static_cast<std::size_t>(M));
  for_each_chunk(std::size_t(M), [&](std::size_t j) {
    const std::int64_t m = std::int64_t(j) + 1;
    std::vector<std::int64_t> offs;
    for (const auto& p : translated) offs.push_back(progression_shift(p, sys.W, m, N));
    partial[j] += detail::product_integral<Scalar>(ptrs, offs.data(), N);
  });
  CompensatedSum<Scalar> total;
  for (const auto& p : partial) total += p;
  return total.value() / Scalar(M);
}

}  // namespace narrow
