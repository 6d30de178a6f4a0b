#pragma once

#include <cstdint>

namespace narrow {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: every draw is a pure function of
// (seed, stream, sample index, draw index), so results never depend on the
// order in which samples are evaluated.
class CounterRng {
 public:
  class Stream {
   public:
    explicit Stream(std::uint64_t key) : key_(key) {}

    std::uint64_t bits() { return splitmix64(key_ ^ splitmix64(++draw_)); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return double(bits() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n); multiply-shift, bias below n / 2^64.
    std::uint64_t below(std::uint64_t n) {
      return std::uint64_t((unsigned __int128)bits() * n >> 64);
    }

    std::int64_t in_range(std::int64_t lo, std::int64_t hi) {
      return lo + std::int64_t(below(std::uint64_t(hi - lo) + 1));
    }

   private:
    std::uint64_t key_;
    std::uint64_t draw_ = 0;
  };

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64(seed ^ splitmix64(stream + 0x5851f42d4c957f2dULL))) {}

  Stream sample(std::uint64_t index) const { return Stream(splitmix64(key_ + index)); }

  // Named sub-streams, e.g. one per experiment or per trial.
  CounterRng substream(std::uint64_t id) const {
    CounterRng r(0);
    r.key_ = splitmix64(key_ ^ splitmix64(id * 0xd1342543de82ef95ULL + 1));
    return r;
  }

 private:
  std::uint64_t key_;
};

}  // namespace narrow
