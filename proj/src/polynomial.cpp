#include "narrow/polynomial.hpp"

#include <algorithm>
#include <cctype>

#include "narrow/arith.hpp"
#include "narrow/errors.hpp"

namespace narrow {

Polynomial Polynomial::constant(std::size_t num_vars, std::int64_t c) {
  Polynomial p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index, std::int64_t coeff) {
  if (index >= num_vars) throw ArgumentError("Polynomial::variable: index out of range");
  Exponents e(num_vars, 0);
  e[index] = 1;
  Polynomial p(num_vars);
  p.add_term(e, coeff);
  return p;
}

void Polynomial::add_term(const Exponents& exponents, std::int64_t coeff) {
  if (exponents.size() != num_vars_) throw ArgumentError("Polynomial: exponent arity mismatch");
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, coeff);
  if (!inserted) {
    it->second = checked_add(it->second, coeff);
    if (it->second == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
    return std::all_of(t.first.begin(), t.first.end(), [](int e) { return e == 0; });
  });
}

std::int64_t Polynomial::constant_term() const {
  auto it = terms_.find(Exponents(num_vars_, 0));
  return it == terms_.end() ? 0 : it->second;
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    int sum = 0;
    for (int x : e) sum += x;
    deg = std::max(deg, sum);
  }
  return deg;
}

std::int64_t Polynomial::evaluate(std::span<const std::int64_t> point) const {
  if (point.size() != num_vars_) throw ArgumentError("Polynomial::evaluate: arity mismatch");
  std::int64_t total = 0;
  for (const auto& [e, c] : terms_) {
    std::int64_t term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term = checked_mul(term, point[i]);
    }
    total = checked_add(total, term);
  }
  return total;
}

std::int64_t Polynomial::evaluate_mod(std::span<const std::int64_t> point, std::int64_t modulus) const {
  if (point.size() != num_vars_) throw ArgumentError("Polynomial::evaluate_mod: arity mismatch");
  if (modulus <= 0) throw ArgumentError("Polynomial::evaluate_mod: modulus must be positive");
  using i128 = __int128;
  i128 total = 0;
  for (const auto& [e, c] : terms_) {
    i128 term = mod_floor(c, modulus);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      const i128 x = mod_floor(point[i], modulus);
      for (int k = 0; k < e[i]; ++k) term = term * x % modulus;
    }
    total = (total + term) % modulus;
  }
  return std::int64_t(total);
}

Polynomial Polynomial::relabel(std::size_t new_num_vars, std::span<const std::size_t> var_map) const {
  if (var_map.size() != num_vars_) throw ArgumentError("Polynomial::relabel: map arity mismatch");
  Polynomial out(new_num_vars);
  for (const auto& [e, c] : terms_) {
    Exponents ne(new_num_vars, 0);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (var_map[i] >= new_num_vars) throw ArgumentError("Polynomial::relabel: target out of range");
      ne[var_map[i]] += e[i];
    }
    out.add_term(ne, c);
  }
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw ArgumentError("Polynomial: arity mismatch");
  Polynomial out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other * -1; }

Polynomial Polynomial::operator*(std::int64_t scalar) const {
  Polynomial out(num_vars_);
  for (const auto& [e, c] : terms_) out.add_term(e, checked_mul(c, scalar));
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> vars) : text_(text), vars_(vars) {}

  Polynomial run() {
    Polynomial out(vars_.size());
    skip_ws();
    if (pos_ == text_.size()) fail("empty polynomial");
    bool first = true;
    while (pos_ < text_.size()) {
      std::int64_t sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      auto [exps, coeff] = term();
      out.add_term(exps, checked_mul(sign, coeff));
      first = false;
      skip_ws();
    }
    return out;
  }

 private:
  std::pair<Polynomial::Exponents, std::int64_t> term() {
    Polynomial::Exponents exps(vars_.size(), 0);
    std::int64_t coeff = 1;
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
        coeff = checked_mul(coeff, integer());
      } else if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) fail("unknown variable '" + name + "'");
        int power = 1;
        skip_ws();
        if (pos_ < text_.size() && peek() == '^') {
          ++pos_;
          skip_ws();
          power = int(integer());
        }
        exps[std::size_t(it - vars_.begin())] += power;
      } else {
        fail("expected a number or variable");
      }
      skip_ws();
      if (pos_ < text_.size() && peek() == '*') {
        ++pos_;
        continue;
      }
      return {exps, coeff};
    }
  }

  std::int64_t integer() {
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected digits");
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = checked_add(checked_mul(v, 10), peek() - '0');
      ++pos_;
    }
    return v;
  }

  char peek() const { return text_[pos_]; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ArgumentError("polynomial parse error at offset " + std::to_string(pos_) + " in '" +
                        std::string(text_) + "': " + what);
  }

  std::string_view text_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, std::span<const std::string> variables) {
  return Parser(text, variables).run();
}

std::string Polynomial::to_string(std::span<const std::string> variables) const {
  if (terms_.empty()) return "0";
  std::string out;
  // highest-degree terms first for readability
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::int64_t mag = c < 0 ? -c : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::string mono;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += i < variables.size() ? variables[i] : "x" + std::to_string(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += std::to_string(mag);
    } else {
      if (mag != 1) out += std::to_string(mag) + "*";
      out += mono;
    }
  }
  return out;
}

std::vector<std::string> direction_variables(std::size_t t) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= t; ++i) names.push_back("h" + std::to_string(i));
  names.push_back("W");
  return names;
}

}  // namespace narrow
