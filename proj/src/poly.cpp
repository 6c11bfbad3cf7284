#include "leglab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace leglab {

bool GrlexGreater::operator()(const Exponent& a, const Exponent& b) const {
  const auto da = std::accumulate(a.begin(), a.end(), 0ULL);
  const auto db = std::accumulate(b.begin(), b.end(), 0ULL);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

MultiPoly::MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (std::size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i] == vars_[j]) throw std::invalid_argument("duplicate variable '" + vars_[i] + "'");
}

MultiPoly MultiPoly::constant(std::vector<std::string> vars, const Rational& c) {
  MultiPoly p(std::move(vars));
  p.add_term(Exponent(p.vars_.size(), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(std::vector<std::string> vars, const std::string& name) {
  MultiPoly p(std::move(vars));
  Exponent e(p.vars_.size(), 0);
  e[p.var_index(name)] = 1;
  p.add_term(e, 1);
  return p;
}

std::size_t MultiPoly::var_index(const std::string& name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) throw UnknownVariable("unknown variable '" + name + "'");
  return static_cast<std::size_t>(it - vars_.begin());
}

bool MultiPoly::has_var(const std::string& name) const {
  return std::find(vars_.begin(), vars_.end(), name) != vars_.end();
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  const auto& e = terms_.begin()->first;
  return static_cast<int>(std::accumulate(e.begin(), e.end(), 0ULL));
}

int MultiPoly::degree_in(std::size_t var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
  return d;
}

bool MultiPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = total_degree();
  return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) {
    return static_cast<int>(std::accumulate(t.first.begin(), t.first.end(), 0ULL)) == d;
  });
}

Rational MultiPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void MultiPoly::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != vars_.size()) throw DimensionMismatch("add_term: exponent length does not match variable list");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void MultiPoly::require_same_vars(const MultiPoly& o) const {
  if (vars_ != o.vars_) throw DimensionMismatch("polynomials live on different variable lists");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.require_same_vars(b);
  MultiPoly r(a.vars_);
  Exponent e(a.vars_.size());
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

MultiPoly MultiPoly::pow(unsigned k) const {
  MultiPoly result = constant(vars_, 1);
  MultiPoly base = *this;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool negative = sgn(c) < 0;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    const Rational mag = abs(c);
    const bool is_const = std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
    bool need_star = false;
    if (mag != 1 || is_const) {
      os << mag.get_str();
      need_star = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << '*';
      os << vars_[i];
      if (e[i] > 1) os << '^' << e[i];
      need_star = true;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  MultiPoly parse() {
    MultiPoly p = poly();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  MultiPoly poly() {
    MultiPoly acc(vars_);
    bool negate = false;
    if (peek('-') || peek('+')) {
      negate = text_[pos_] == '-';
      ++pos_;
    }
    MultiPoly t = term();
    acc += negate ? -t : t;
    while (peek('+') || peek('-')) {
      const bool minus = text_[pos_] == '-';
      ++pos_;
      t = term();
      if (minus)
        acc -= t;
      else
        acc += t;
    }
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    while (peek('*')) {
      ++pos_;
      acc = acc * factor();
    }
    return acc;
  }

  MultiPoly factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return MultiPoly::constant(vars_, rational());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (std::find(vars_.begin(), vars_.end(), name) == vars_.end())
        throw UnknownVariable("unknown variable '" + name + "' at offset " + std::to_string(start));
      MultiPoly v = MultiPoly::variable(vars_, name);
      return maybe_power(v);
    }
    if (c == '(') {
      ++pos_;
      MultiPoly inner = poly();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return maybe_power(inner);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  MultiPoly maybe_power(const MultiPoly& base) {
    if (!peek('^')) return base;
    ++pos_;
    return base.pow(static_cast<unsigned>(uint_literal().get_ui()));
  }

  Integer uint_literal() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected unsigned integer");
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  Rational rational() {
    Integer num = uint_literal();
    if (!peek('/')) return Rational(num);
    ++pos_;
    skip_ws();
    const std::size_t den_pos = pos_;
    Integer den = uint_literal();
    if (den == 0) throw ParseError("syntax error: zero denominator", den_pos);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(std::string_view text, const std::vector<std::string>& vars) {
  return Parser(text, vars).parse();
}

Rational evaluate(const MultiPoly& p, const std::map<std::string, Rational>& assignment) {
  std::vector<Rational> values;
  values.reserve(p.vars().size());
  for (const auto& v : p.vars()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw UnknownVariable("missing value for variable '" + v + "'");
    values.push_back(it->second);
  }
  return evaluate(p, std::span<const Rational>(values), ExactField{});
}

MultiPoly partial(const MultiPoly& p, std::size_t var) {
  if (var >= p.vars().size()) throw UnknownVariable("partial: variable index out of range");
  MultiPoly r(p.vars());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponent d = e;
    --d[var];
    r.add_term(d, c * e[var]);
  }
  return r;
}

MultiPoly partial(const MultiPoly& p, const std::string& var) { return partial(p, p.var_index(var)); }

MultiPoly substitute(const MultiPoly& p, const std::map<std::string, Binding>& bindings,
                     const std::vector<std::string>& result_vars) {
  for (const auto& [name, b] : bindings) {
    if (!p.has_var(name)) throw UnknownVariable("substitute: '" + name + "' is not a variable of the polynomial");
    if (auto* q = std::get_if<MultiPoly>(&b); q && q->vars() != result_vars)
      throw DimensionMismatch("substitute: binding for '" + name + "' does not live on the result variable list");
  }
  // Image of each source variable on the result variable list.
  std::vector<MultiPoly> image;
  for (const auto& v : p.vars()) {
    auto it = bindings.find(v);
    if (it == bindings.end()) {
      if (std::find(result_vars.begin(), result_vars.end(), v) == result_vars.end())
        throw DimensionMismatch("substitute: unbound variable '" + v + "' missing from result variables");
      image.push_back(MultiPoly::variable(result_vars, v));
    } else if (auto* q = std::get_if<Rational>(&it->second)) {
      image.push_back(MultiPoly::constant(result_vars, *q));
    } else {
      image.push_back(std::get<MultiPoly>(it->second));
    }
  }
  std::vector<std::map<std::uint32_t, MultiPoly>> powers(image.size());
  auto power = [&](std::size_t i, std::uint32_t k) -> const MultiPoly& {
    auto it = powers[i].find(k);
    if (it == powers[i].end()) it = powers[i].emplace(k, image[i].pow(k)).first;
    return it->second;
  };
  MultiPoly out(result_vars);
  for (const auto& [e, c] : p.terms()) {
    MultiPoly t = MultiPoly::constant(result_vars, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t = t * power(i, e[i]);
    out += t;
  }
  return out;
}

MultiPoly rebase(const MultiPoly& p, const std::vector<std::string>& vars) {
  MultiPoly out(vars);
  std::vector<std::size_t> map;
  for (std::size_t i = 0; i < p.vars().size(); ++i) {
    auto it = std::find(vars.begin(), vars.end(), p.vars()[i]);
    map.push_back(it == vars.end() ? vars.size() : static_cast<std::size_t>(it - vars.begin()));
  }
  for (const auto& [e, c] : p.terms()) {
    Exponent ne(vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (map[i] == vars.size()) throw UnknownVariable("rebase: variable '" + p.vars()[i] + "' not in target list");
      ne[map[i]] = e[i];
    }
    out.add_term(ne, c);
  }
  return out;
}

}  // namespace leglab
