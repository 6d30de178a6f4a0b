#include "narrow/gowers.hpp"

#include <numeric>

namespace narrow {

QTuple make_qtuple(std::size_t t, std::span<const std::string> polys, std::int64_t H, std::int64_t W,
                   std::int64_t S) {
  const auto vars = direction_variables(t);
  QTuple q;
  q.t = t;
  q.H = H;
  q.W = W;
  q.S = S;
  for (const auto& text : polys) q.polys.push_back(Polynomial::parse(text, vars));
  validate(q);
  return q;
}

QTuple linear_qtuple(int d, std::int64_t S) {
  QTuple q;
  q.t = 0;
  q.S = S;
  for (int i = 0; i < d; ++i) q.polys.push_back(Polynomial::constant(1, 1));
  validate(q);
  return q;
}

QTuple direct_sum(const QTuple& q) {
  QTuple out = q;
  out.t = 2 * q.t;
  out.polys.clear();
  std::vector<std::size_t> first(q.t + 1), second(q.t + 1);
  for (std::size_t j = 0; j < q.t; ++j) {
    first[j] = j;
    second[j] = q.t + j;
  }
  first[q.t] = second[q.t] = 2 * q.t;  // W
  for (const auto& p : q.polys) out.polys.push_back(p.relabel(2 * q.t + 1, first));
  for (const auto& p : q.polys) out.polys.push_back(p.relabel(2 * q.t + 1, second));
  return out;
}

void validate(const GowersSpec& spec) {
  const int d = spec.dim();
  if (d < 1) throw ArgumentError("Gowers spec: need at least one direction");
  if (spec.scale < 1) throw ArgumentError("Gowers spec: scale S must be at least 1");
  if (spec.sampling.is_exact()) {
    if (d > kMaxExactDim) throw BudgetError("exact Gowers norm limited to d <= 4 (cost S^{2d} N)");
  } else {
    if (d > 12) throw BudgetError("sampled Gowers norm limited to d <= 12");
    if (spec.sampling.budget < kMinSampleBudget) throw BudgetError("sampled mode needs a budget of at least 1000");
  }
}

void validate(const QTuple& q) {
  if (q.polys.empty()) throw ArgumentError("Q tuple: need at least one polynomial");
  if (q.dim() > 12) throw BudgetError("Q tuple: at most 12 directions");
  if (q.H < 1 || q.S < 1) throw ArgumentError("Q tuple: H and S must be at least 1");
  for (const auto& p : q.polys) {
    if (p.num_vars() != q.t + 1) throw ArgumentError("Q tuple: polynomials must use t + 1 variables (h..., W)");
    if (p.is_zero()) throw ArgumentError("Q tuple: a polynomial is identically zero");
  }
}

ProgressionSystem linear_system(int k, std::int64_t W, std::int64_t M) {
  ProgressionSystem sys;
  sys.W = W;
  sys.M = M;
  for (int i = 0; i < k; ++i) sys.polys.push_back(Polynomial::variable(1, 0, i));
  return sys;
}

std::int64_t progression_shift(const Polynomial& p, std::int64_t W, std::int64_t m, std::int64_t N) {
  using i128 = __int128;
  i128 total = 0;
  const i128 Wm = mod_floor(W, N), mm = mod_floor(m, N);
  for (const auto& [e, c] : p.terms()) {
    // P(Wm)/W is an integer only because every term has degree >= 1
    if (e[0] == 0) throw std::logic_error("progression_shift: pattern has a nonzero constant term");
    i128 term = mod_floor(c, N);
    for (int j = 1; j < e[0]; ++j) term = term * Wm % N;
    for (int j = 0; j < e[0]; ++j) term = term * mm % N;
    total = (total + term) % N;
  }
  return std::int64_t(total);
}

}  // namespace narrow
