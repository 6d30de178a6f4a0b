#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace narrow {

// Multivariate polynomial with int64 coefficients. Variables are positional;
// names only matter for parsing and printing.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(std::size_t num_vars = 1) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, std::int64_t c);
  static Polynomial variable(std::size_t num_vars, std::size_t index, std::int64_t coeff = 1);

  // Accepts sums of monomials such as "3*h1^2*W - h2 + 5". No parentheses.
  static Polynomial parse(std::string_view text, std::span<const std::string> variables);

  std::size_t num_vars() const { return num_vars_; }
  const std::map<Exponents, std::int64_t>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::int64_t constant_term() const;
  int degree() const;

  // Exact value; throws OverflowError outside the int64 range.
  std::int64_t evaluate(std::span<const std::int64_t> point) const;

  // Value reduced into [0, modulus).
  std::int64_t evaluate_mod(std::span<const std::int64_t> point, std::int64_t modulus) const;

  // Moves variable i to position var_map[i] in a polynomial of new_num_vars.
  Polynomial relabel(std::size_t new_num_vars, std::span<const std::size_t> var_map) const;

  std::string to_string(std::span<const std::string> variables) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(std::int64_t scalar) const;

  bool operator==(const Polynomial& other) const = default;

  void add_term(const Exponents& exponents, std::int64_t coeff);

 private:
  std::size_t num_vars_;
  std::map<Exponents, std::int64_t> terms_;
};

// Variable names h1..ht followed by W, the convention for direction
// polynomials Q(h, W).
std::vector<std::string> direction_variables(std::size_t t);

}  // namespace narrow
