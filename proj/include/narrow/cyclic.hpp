#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "narrow/arith.hpp"
#include "narrow/compensated.hpp"
#include "narrow/errors.hpp"
#include "narrow/intset.hpp"

namespace narrow {

// A real-valued function on Z/NZ. Index x holds f(x); shifts act by rotation.
template <typename Scalar>
class CyclicFn {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  CyclicFn() = default;

  explicit CyclicFn(std::int64_t modulus, Scalar fill = Scalar(0)) : values_(Values::Constant(check(modulus), fill)) {}

  explicit CyclicFn(Values values) : values_(std::move(values)) { check(values_.size()); }

  static CyclicFn constant(std::int64_t modulus, Scalar c) { return CyclicFn(modulus, c); }

  std::int64_t modulus() const { return values_.size(); }

  const Values& values() const { return values_; }
  Values& values() { return values_; }

  // f(x) for any integer x, reduced mod N.
  Scalar operator()(std::int64_t x) const { return values_(mod_floor(x, modulus())); }

  Scalar& operator[](std::int64_t i) { return values_(i); }
  Scalar operator[](std::int64_t i) const { return values_(i); }

 private:
  static Eigen::Index check(Eigen::Index modulus) {
    if (modulus < 1) throw ArgumentError("CyclicFn: modulus must be positive");
    return modulus;
  }

  Values values_;
};

template <typename Scalar>
void require_same_modulus(const CyclicFn<Scalar>& a, const CyclicFn<Scalar>& b) {
  if (a.modulus() != b.modulus()) {
    throw ArgumentError("CyclicFn: modulus mismatch (" + std::to_string(a.modulus()) + " vs " +
                        std::to_string(b.modulus()) + ")");
  }
}

// (T^h f)(x) = f(x + h).
template <typename Scalar>
CyclicFn<Scalar> shift(const CyclicFn<Scalar>& f, std::int64_t h) {
  const Eigen::Index n = f.modulus();
  const Eigen::Index s = mod_floor(h, n);
  typename CyclicFn<Scalar>::Values out(n);
  out.head(n - s) = f.values().tail(n - s);
  out.tail(s) = f.values().head(s);
  return CyclicFn<Scalar>(std::move(out));
}

// Normalized Haar mean (1/N) sum_x f(x), compensated.
template <typename Scalar>
Scalar mean(const CyclicFn<Scalar>& f) {
  CompensatedSum<Scalar> sum;
  for (Eigen::Index i = 0; i < f.modulus(); ++i) sum += f.values()(i);
  return sum.value() / Scalar(f.modulus());
}

template <typename Scalar>
CyclicFn<Scalar> operator*(const CyclicFn<Scalar>& a, const CyclicFn<Scalar>& b) {
  require_same_modulus(a, b);
  return CyclicFn<Scalar>(typename CyclicFn<Scalar>::Values(a.values() * b.values()));
}

template <typename Scalar>
CyclicFn<Scalar> operator+(const CyclicFn<Scalar>& a, const CyclicFn<Scalar>& b) {
  require_same_modulus(a, b);
  return CyclicFn<Scalar>(typename CyclicFn<Scalar>::Values(a.values() + b.values()));
}

template <typename Scalar>
CyclicFn<Scalar> operator-(const CyclicFn<Scalar>& a, const CyclicFn<Scalar>& b) {
  require_same_modulus(a, b);
  return CyclicFn<Scalar>(typename CyclicFn<Scalar>::Values(a.values() - b.values()));
}

template <typename Scalar>
CyclicFn<Scalar> operator*(Scalar c, const CyclicFn<Scalar>& a) {
  return CyclicFn<Scalar>(typename CyclicFn<Scalar>::Values(c * a.values()));
}

using CyclicFnd = CyclicFn<double>;

// Flat binary record: modulus as uint64 little-endian, then N doubles.
void write_binary(const CyclicFnd& f, std::ostream& out);
CyclicFnd read_binary(std::istream& in);

// "index,value" rows with a header line.
void write_csv(const CyclicFnd& f, std::ostream& out);

// Parameters of the W-tricked problem on Z/NZ.
struct SieveConfig {
  std::int64_t n_prime = 0;  // ambient scale N'
  std::int64_t w = 0;        // small-prime cutoff
  std::int64_t W = 0;        // product of primes below w
  std::int64_t b = 1;        // residue class, coprime to W
  std::int64_t N = 0;        // floor(N' / W)
  double eps0 = 0.1;
  std::int64_t R = 0;        // floor(N^eps0)
};

// Validates and fills the derived fields. Throws ConfigError when
// gcd(b, W) != 1, R < 2 or N < 16.
SieveConfig make_sieve_config(std::int64_t n_prime, std::int64_t w, double eps0, std::int64_t b = 1);

// The b in [W], coprime to W, maximizing #{n in [N] : nW + b in A}; ties go
// to the smallest b. Throws DegenerateInputError when no element of A is
// coprime to W.
std::int64_t select_residue(const IntSet& A, std::int64_t n_prime, std::int64_t w);

// f(n) = (eps0/10) (phi(W) log N / W) 1[floor(sqrt N) < n <= N - floor(sqrt N)] 1_A(nW + b),
// stored at index n mod N.
CyclicFnd build_f(const IntSet& A, const SieveConfig& cfg);

std::int64_t floor_sqrt(std::int64_t n);

}  // namespace narrow
