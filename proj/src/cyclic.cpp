#include "narrow/cyclic.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

namespace narrow {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw ArgumentError("read_binary: truncated record");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_binary(const CyclicFnd& f, std::ostream& out) {
  put_u64(out, std::uint64_t(f.modulus()));
  for (Eigen::Index i = 0; i < f.modulus(); ++i) put_u64(out, std::bit_cast<std::uint64_t>(f[i]));
}

CyclicFnd read_binary(std::istream& in) {
  const std::uint64_t n = get_u64(in);
  if (n == 0 || n > (std::uint64_t(1) << 40)) throw ArgumentError("read_binary: bad modulus");
  CyclicFnd f(std::int64_t(n), 0.0);
  for (std::uint64_t i = 0; i < n; ++i) f[std::int64_t(i)] = std::bit_cast<double>(get_u64(in));
  return f;
}

void write_csv(const CyclicFnd& f, std::ostream& out) {
  out << "index,value\n";
  char buf[64];
  for (Eigen::Index i = 0; i < f.modulus(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", f[i]);
    out << i << ',' << buf << '\n';
  }
}

std::int64_t floor_sqrt(std::int64_t n) {
  if (n < 0) throw ArgumentError("floor_sqrt: negative argument");
  auto r = std::int64_t(std::sqrt(double(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

SieveConfig make_sieve_config(std::int64_t n_prime, std::int64_t w, double eps0, std::int64_t b) {
  if (!(eps0 > 0 && eps0 < 1)) throw ConfigError("sieve config: eps0 must lie in (0, 1)");
  if (w < 2) throw ConfigError("sieve config: w must be at least 2");
  SieveConfig cfg;
  cfg.n_prime = n_prime;
  cfg.w = w;
  cfg.W = primorial(w);
  cfg.b = b;
  cfg.eps0 = eps0;
  cfg.N = n_prime / cfg.W;
  if (b < 1 || b > cfg.W) throw ConfigError("sieve config: b must lie in [1, W]");
  if (std::gcd(b, cfg.W) != 1) throw ConfigError("sieve config: b must be coprime to W");
  if (cfg.N < 16) throw ConfigError("sieve config: N = floor(N'/W) must be at least 16");
  cfg.R = std::int64_t(std::floor(std::pow(double(cfg.N), eps0)));
  if (cfg.R < 2) throw ConfigError("sieve config: R = floor(N^eps0) must be at least 2");
  return cfg;
}

std::int64_t select_residue(const IntSet& A, std::int64_t n_prime, std::int64_t w) {
  const std::int64_t W = primorial(w);
  const std::int64_t N = n_prime / W;
  std::vector<std::int64_t> counts(std::size_t(W) + 1, 0);
  bool any_coprime = false;
  for (std::int64_t a : A.members()) {
    if (std::gcd(a, W) != 1) continue;
    any_coprime = true;
    // a = nW + b with b in [1, W]
    const std::int64_t b = mod_floor(a - 1, W) + 1;
    const std::int64_t n = (a - b) / W;
    if (n >= 1 && n <= N) ++counts[std::size_t(b)];
  }
  if (!any_coprime) throw DegenerateInputError("select_residue: no element of A is coprime to W");
  std::int64_t best = -1;
  for (std::int64_t b = 1; b <= W; ++b) {
    if (std::gcd(b, W) != 1) continue;
    if (best < 0 || counts[std::size_t(b)] > counts[std::size_t(best)]) best = b;
  }
  return best;
}

CyclicFnd build_f(const IntSet& A, const SieveConfig& cfg) {
  if (std::gcd(cfg.b, cfg.W) != 1) throw ArgumentError("build_f: b must be coprime to W");
  const std::int64_t N = cfg.N;
  const std::int64_t s = floor_sqrt(N);
  const double height = cfg.eps0 / 10.0 * double(euler_phi(cfg.W)) * std::log(double(N)) / double(cfg.W);
  CyclicFnd f(N, 0.0);
  for (std::int64_t n = s + 1; n <= N - s; ++n) {
    if (A.contains(n * cfg.W + cfg.b)) f[n % N] = height;
  }
  return f;
}

}  // namespace narrow
