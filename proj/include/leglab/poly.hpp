#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "leglab/errors.hpp"
#include "leglab/scalar.hpp"

namespace leglab {

using Exponent = std::vector<std::uint32_t>;

// Descending graded-lex order: higher total degree first, ties broken
// lexicographically with the first variable most significant.
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

// Sparse multivariate polynomial over Q on an ordered variable list.
class MultiPoly {
 public:
  using TermMap = std::map<Exponent, Rational, GrlexGreater>;

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> vars);

  static MultiPoly constant(std::vector<std::string> vars, const Rational& c);
  static MultiPoly variable(std::vector<std::string> vars, const std::string& name);

  const std::vector<std::string>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t var_index(const std::string& name) const;
  bool has_var(const std::string& name) const;

  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;  // -1 for the zero polynomial
  int degree_in(std::size_t var) const;
  bool is_homogeneous() const;
  Rational coefficient(const Exponent& e) const;

  void add_term(const Exponent& e, const Rational& c);

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);
  MultiPoly operator-() const;
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.vars_ == b.vars_ && a.terms_ == b.terms_; }

  MultiPoly pow(unsigned k) const;

  // Canonical text: terms in descending grlex order, e.g. "3*x^2*y - 1/2*t + 7".
  std::string to_string() const;

 private:
  void require_same_vars(const MultiPoly& o) const;

  std::vector<std::string> vars_;
  TermMap terms_;
};

// poly := ['+'|'-'] term (('+'|'-') term)*
// term := factor ('*' factor)*
// factor := rational | var ['^' uint] | '(' poly ')' ['^' uint]
// rational := int ['/' uint]
MultiPoly parse_poly(std::string_view text, const std::vector<std::string>& vars);

template <class Field>
typename Field::value_type evaluate(const MultiPoly& p, std::span<const typename Field::value_type> values,
                                    const Field& field) {
  if (values.size() != p.vars().size()) throw DimensionMismatch("evaluate: assignment size does not match variable list");
  auto acc = field.zero();
  for (const auto& [e, c] : p.terms()) {
    auto t = field.from(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::uint32_t k = 0; k < e[i]; ++k) t *= values[i];
    acc += t;
  }
  return acc;
}

Rational evaluate(const MultiPoly& p, const std::map<std::string, Rational>& assignment);

MultiPoly partial(const MultiPoly& p, const std::string& var);
MultiPoly partial(const MultiPoly& p, std::size_t var);

using Binding = std::variant<Rational, MultiPoly>;

// Replaces bound variables; unbound variables of `p` must appear in
// `result_vars`, and polynomial bindings must live on `result_vars`.
MultiPoly substitute(const MultiPoly& p, const std::map<std::string, Binding>& bindings,
                     const std::vector<std::string>& result_vars);

// Same polynomial on a different variable list containing all used variables.
MultiPoly rebase(const MultiPoly& p, const std::vector<std::string>& vars);

}  // namespace leglab
