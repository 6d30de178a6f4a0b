#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "narrow/counter_rng.hpp"
#include "narrow/errors.hpp"
#include "narrow/gowers.hpp"
#include "narrow/parallel.hpp"
#include "oracles.hpp"

using namespace narrow;

namespace {

CyclicFnd random_fn(std::int64_t N, std::uint64_t seed) {
  const CounterRng rng(seed, 99);
  CyclicFnd f(N);
  for (std::int64_t x = 0; x < N; ++x) f[x] = 2 * rng.sample(std::uint64_t(x)).uniform() - 1;
  return f;
}

std::vector<CyclicFnd> random_tuple(std::size_t count, std::int64_t N, std::uint64_t seed) {
  std::vector<CyclicFnd> F;
  for (std::size_t i = 0; i < count; ++i) F.push_back(random_fn(N, seed * 1000 + i));
  return F;
}

GowersSpec exact_spec(std::vector<std::int64_t> dirs, std::int64_t S) { return {std::move(dirs), S, Sampling::exact()}; }

}  // namespace

TEST_CASE("exact local norm matches the naive cube sum") {
  const auto f = random_fn(23, 1);
  for (auto dirs : {std::vector<std::int64_t>{1}, {1, 2}, {3, 7}, {1, 2, 5}, {2, 2, 2, 9}}) {
    for (std::int64_t S : {1, 2, 3}) {
      const auto est = local_gowers(f, exact_spec(dirs, S));
      CHECK(std::abs(est.power_raw - oracle::gowers_power(f, dirs, S)) <= 1e-12);
      CHECK(est.exact);
      CHECK(est.norm >= 0);
    }
  }
}

TEST_CASE("norm of zero is zero; d = 1 is flagged") {
  CHECK(local_gowers_norm(CyclicFnd(16), exact_spec({1, 3}, 2)) == 0.0);
  CHECK(local_gowers(random_fn(16, 2), exact_spec({1}, 3)).seminorm_only);
  CHECK_FALSE(local_gowers(random_fn(16, 2), exact_spec({1, 1}, 3)).seminorm_only);
}

TEST_CASE("norm is symmetric in the directions") {
  const auto f = random_fn(31, 3);
  const double base2 = local_gowers_norm(f, exact_spec({2, 5}, 3));
  CHECK(local_gowers_norm(f, exact_spec({5, 2}, 3)) == doctest::Approx(base2).epsilon(1e-12));
  const double base3 = local_gowers_norm(f, exact_spec({1, 4, 6}, 2));
  CHECK(local_gowers_norm(f, exact_spec({6, 1, 4}, 2)) == doctest::Approx(base3).epsilon(1e-12));
  CHECK(local_gowers_norm(f, exact_spec({4, 6, 1}, 2)) == doctest::Approx(base3).epsilon(1e-12));
  // negating a_i reindexes m_i -> S + 1 - m_i up to a global shift
  CHECK(local_gowers_norm(f, exact_spec({-2, 5}, 3)) == doctest::Approx(base2).epsilon(1e-12));
  CHECK(local_gowers_norm(f, exact_spec({1, -4, -6}, 2)) == doctest::Approx(base3).epsilon(1e-12));
}

TEST_CASE("triangle inequality") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto f = random_fn(20, 10 + s), g = random_fn(20, 100 + s);
    const auto spec = exact_spec({1, std::int64_t(s % 7) + 1}, 2);
    CHECK(local_gowers_norm<double>(f + g, spec) <=
          local_gowers_norm(f, spec) + local_gowers_norm(g, spec) + 1e-9);
  }
}

TEST_CASE("sampled norm is deterministic, thread independent and unbiased") {
  const auto f = random_fn(40, 4) + CyclicFnd::constant(40, 0.5);
  const auto exact = local_gowers(f, exact_spec({1, 3}, 3));
  GowersSpec spec{{1, 3}, 3, Sampling::sampled(200000, 11)};
  set_thread_count(1);
  const auto a = local_gowers(f, spec);
  set_thread_count(4);
  const auto b = local_gowers(f, spec);
  set_thread_count(1);
  CHECK_FALSE(a.exact);
  CHECK(std::bit_cast<std::uint64_t>(a.power_raw) == std::bit_cast<std::uint64_t>(b.power_raw));
  CHECK(std::bit_cast<std::uint64_t>(a.standard_error) == std::bit_cast<std::uint64_t>(b.standard_error));
  CHECK(std::abs(a.power_raw - exact.power_raw) <= 5 * a.standard_error);
}

TEST_CASE("mode limits") {
  const auto f = random_fn(8, 5);
  CHECK_THROWS_AS(local_gowers(f, exact_spec({1, 1, 1, 1, 1}, 2)), BudgetError);
  CHECK_THROWS_AS(local_gowers(f, GowersSpec{{1, 1}, 2, Sampling::sampled(999, 1)}), BudgetError);
  CHECK_NOTHROW(local_gowers(f, GowersSpec{{1, 1, 1, 1, 1, 1}, 2, Sampling::sampled(1000, 1)}));
  CHECK_THROWS_AS(local_gowers(f, exact_spec({}, 2)), ArgumentError);
  CHECK_THROWS_AS(make_qtuple(1, std::vector<std::string>{"h1 - h1"}, 2, 1, 2), ArgumentError);
}

TEST_CASE("averaged norm averages the local norms over h") {
  const auto f = random_fn(29, 6);
  const std::vector<std::string> polys = {"h1", "h1^2 + W"};
  const auto q = make_qtuple(1, polys, 4, 3, 2);
  double want = 0;
  for (std::int64_t h = 1; h <= 4; ++h) want += oracle::gowers_power(f, {h, h * h + 3}, 2);
  want /= 4;
  const auto est = averaged_gowers(f, q, Sampling::exact());
  CHECK(std::abs(est.power_raw - want) <= 1e-12);
  CHECK_FALSE(est.h_sampled);
}

TEST_CASE("degenerate directions are counted") {
  const auto f = random_fn(8, 7);
  const std::vector<std::string> polys = {"h1", "1"};
  const auto est = averaged_gowers(f, make_qtuple(1, polys, 16, 1, 2), Sampling::exact());
  CHECK(est.degenerate_fraction == doctest::Approx(2.0 / 16));
}

TEST_CASE("large h grids are sampled in exact mode") {
  const auto f = random_fn(8, 8);
  const std::vector<std::string> polys = {"h1 + h2", "h2"};
  const auto est = averaged_gowers(f, make_qtuple(2, polys, 101, 1, 1), Sampling::exact());
  CHECK(est.h_sampled);
  CHECK(est.samples == kExactHLimit);
}

TEST_CASE("duality identity") {
  const std::vector<std::string> polys = {"h1", "2*h1 + 1"};
  const auto q = make_qtuple(1, polys, 3, 1, 2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::int64_t N = 16 + std::int64_t(s) * 3;
    const auto f = random_fn(N, 200 + s);
    const double lhs = mean(f * dual_function(f, q));
    const double rhs = averaged_gowers(f, q, Sampling::exact()).power_raw;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("dual of a tuple pairs to the cube average") {
  const auto F = random_tuple(8, 19, 9);
  const auto q = linear_qtuple(3, 2);
  const std::vector<CyclicFnd> rest(F.begin() + 1, F.end());
  const double lhs = mean(F[0] * dual_function<double>(rest, q));
  CHECK(std::abs(lhs - oracle::cube_average(F, {1, 1, 1}, 2)) <= 1e-12);
}

TEST_CASE("Gowers-Cauchy-Schwarz") {
  const CounterRng rng(5);
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto st = rng.sample(s);
    const std::int64_t N = st.in_range(8, 40);
    const auto spec = exact_spec({st.in_range(1, N - 1), st.in_range(1, N - 1)}, st.in_range(1, 4));
    const auto F = random_tuple(4, N, 300 + s);
    const auto r = gcs_check<double>(F, spec);
    CHECK(r.holds);
    CHECK(std::abs(r.lhs - std::abs(oracle::cube_average(F, spec.directions, spec.scale))) <= 1e-12);
  }
  // equality for equal functions
  const std::vector<CyclicFnd> same(4, random_fn(12, 1));
  const auto r = gcs_check<double>(same, exact_spec({1, 2}, 2));
  CHECK(r.lhs == doctest::Approx(r.rhs).epsilon(1e-10));
  CHECK_THROWS_AS(gcs_check<double>(same, GowersSpec{{1, 2}, 2, Sampling::sampled(1000, 1)}), ArgumentError);
}

TEST_CASE("direct sum uses independent h copies") {
  const std::vector<std::string> polys = {"h1", "h1 + W"};
  const auto q = make_qtuple(1, polys, 3, 5, 2);
  const auto q2 = direct_sum(q);
  CHECK(q2.t == 2);
  CHECK(q2.dim() == 4);
  const std::int64_t pt[] = {2, 3, 5};
  CHECK(q2.polys[0].evaluate(pt) == 2);
  CHECK(q2.polys[1].evaluate(pt) == 7);
  CHECK(q2.polys[2].evaluate(pt) == 3);
  CHECK(q2.polys[3].evaluate(pt) == 8);
}

TEST_CASE("dual-square identity") {
  const std::vector<std::string> polys = {"h1", "h1 + 1"};
  const auto q = make_qtuple(1, polys, 2, 1, 2);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto F = random_tuple(3, 17, 400 + s);
    const auto D = dual_function<double>(F, q);
    const auto D2 = dual_function<double>(dual_square_tuple<double>(F, 2), direct_sum(q));
    for (std::int64_t x = 0; x < 17; ++x) CHECK(std::abs(D[x] * D[x] - D2[x]) <= 1e-12);
  }
}

TEST_CASE("sampled dual function is thread independent") {
  const auto f = random_fn(30, 12);
  const std::vector<std::string> polys = {"h1", "h1 + 2"};
  const auto q = make_qtuple(1, polys, 50, 1, 3);
  set_thread_count(1);
  const auto a = dual_function(f, q, Sampling::sampled(3000, 4));
  set_thread_count(3);
  const auto b = dual_function(f, q, Sampling::sampled(3000, 4));
  set_thread_count(1);
  for (std::int64_t x = 0; x < 30; ++x) CHECK(std::bit_cast<std::uint64_t>(a[x]) == std::bit_cast<std::uint64_t>(b[x]));
}

TEST_CASE("Lambda matches the double loop") {
  const auto fs = random_tuple(3, 64, 13);
  CHECK(std::abs(lambda_form<double>(fs, linear_system(3, 1, 16)) -
                 oracle::lambda(fs, {{0}, {0, 1}, {0, 2}}, 1, 16)) <= 1e-12);
  ProgressionSystem sys;
  sys.W = 6;
  sys.M = 10;
  const std::vector<std::string> vars = {"m"};
  for (const char* p : {"0", "m", "m^2 + 3*m"}) sys.polys.push_back(Polynomial::parse(p, vars));
  CHECK(std::abs(lambda_form<double>(fs, sys) - oracle::lambda(fs, {{0}, {0, 1}, {0, 3, 1}}, 6, 10)) <= 1e-12);
}

TEST_CASE("Lambda: unit, translation, factorization, multilinearity") {
  const std::vector<CyclicFnd> ones(3, CyclicFnd::constant(64, 1.0));
  CHECK(lambda_form<double>(ones, linear_system(3, 1, 16)) == 1.0);

  const auto fs = random_tuple(3, 64, 14);
  ProgressionSystem shifted;
  shifted.W = 1;
  shifted.M = 16;
  const std::vector<std::string> vars = {"m"};
  for (const char* p : {"5", "5 + m", "5 + 2*m"}) shifted.polys.push_back(Polynomial::parse(p, vars));
  CHECK(lambda_form<double>(fs, shifted) == doctest::Approx(lambda_form<double>(fs, linear_system(3, 1, 16))));
  shifted.polys[2] = Polynomial::parse("4 + 2*m", vars);
  CHECK_THROWS_AS(lambda_form<double>(fs, shifted), ArgumentError);

  const std::vector<CyclicFnd> pair = {fs[0], fs[1]};
  CHECK(std::abs(lambda_form<double>(pair, linear_system(2, 1, 64)) - mean(fs[0]) * mean(fs[1])) <= 1e-12);

  const auto g = random_fn(64, 15);
  const auto sys = linear_system(3, 1, 16);
  std::vector<CyclicFnd> mix = fs, only_g = fs;
  mix[1] = 2.0 * fs[1] + (-3.0) * g;
  only_g[1] = g;
  const double lhs = lambda_form<double>(mix, sys);
  const double rhs = 2 * lambda_form<double>(fs, sys) - 3 * lambda_form<double>(only_g, sys);
  CHECK(std::abs(lhs - rhs) <= 1e-12);
}

TEST_CASE("progression shift") {
  const std::vector<std::string> vars = {"m"};
  const auto p = Polynomial::parse("2*m^3 - m", vars);
  // (2 (Wm)^3 - Wm) / W = 2 W^2 m^3 - m
  CHECK(progression_shift(p, 5, 3, 1000) == mod_floor(2 * 25 * 27 - 3, 1000));
  CHECK_THROWS_AS(progression_shift(Polynomial::parse("m + 1", vars), 5, 3, 100), std::logic_error);
}
