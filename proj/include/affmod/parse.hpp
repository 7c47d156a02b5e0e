#pragma once

#include <cctype>
#include <string>

#include "affmod/poly.hpp"

namespace affmod {

// Grammar:
//   expr     := term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := base ('^' nat)?
//   base     := rational | ident | '(' expr ')'
//   rational := int ('/' posint)
// Implicit multiplication is not allowed. Syntax errors carry the byte
// offset of the offending position.
template <class F>
class Parser {
public:
  Parser(const std::string& text, Ctx ctx) : s_(text), ctx_(std::move(ctx)) {}

  Poly<F> parse() {
    Poly<F> p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail(ErrKind::SyntaxError, err("trailing input"), (long)pos_);
    return p;
  }

private:
  std::string err(const std::string& what) const {
    return "syntax error at offset " + std::to_string(pos_) + ": " + what;
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Poly<F> expr() {
    Poly<F> acc = term();
    for (;;) {
      skip_ws();
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }
  Poly<F> term() {
    Poly<F> acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }
  Poly<F> factor() {
    Poly<F> b = base();
    if (eat('^')) {
      long n = nat();
      return b.pow(n);
    }
    return b;
  }
  Poly<F> base() {
    skip_ws();
    if (pos_ >= s_.size()) fail(ErrKind::SyntaxError, err("unexpected end of input"), (long)pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly<F> p = expr();
      if (!eat(')')) fail(ErrKind::SyntaxError, err("expected ')'"), (long)pos_);
      return p;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      long idx = ctx_->index_of(name);
      if (idx < 0)
        fail(ErrKind::SyntaxError, "unknown variable '" + name + "' at offset " +
             std::to_string(start), (long)start);
      return Poly<F>::variable(ctx_, (size_t)idx);
    }
    if (c == '-' || std::isdigit((unsigned char)c)) return rational();
    fail(ErrKind::SyntaxError, err("expected a term"), (long)pos_);
  }
  long nat() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    if (pos_ == start) fail(ErrKind::SyntaxError, err("expected an exponent"), (long)pos_);
    return std::stol(s_.substr(start, pos_ - start));
  }
  Poly<F> rational() {
    skip_ws();
    size_t start = pos_;
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    size_t dstart = pos_;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    if (pos_ == dstart) fail(ErrKind::SyntaxError, err("expected a number"), (long)start);
    BigInt num(s_.substr(dstart, pos_ - dstart));
    if (neg) num = -num;
    BigInt den(1);
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      size_t p2 = pos_;
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
      if (pos_ == p2) fail(ErrKind::SyntaxError, err("expected a denominator"), (long)pos_);
      den = BigInt(s_.substr(p2, pos_ - p2));
      if (den == 0) fail(ErrKind::SyntaxError, err("zero denominator"), (long)p2);
    }
    return Poly<F>::constant(ctx_, F::from_literal(num, den));
  }

  const std::string& s_;
  Ctx ctx_;
  size_t pos_ = 0;
};

template <class F = RationalField>
Poly<F> parse_poly(const std::string& text, const Ctx& ctx) {
  return Parser<F>(text, ctx).parse();
}

// Canonical printing: monomials in graded lex descending; variables in
// context order joined by '*'; '^' only for exponents > 1; the leading
// term carries its sign inside the coefficient ("-1*x - 2" style) so that
// the output re-parses under the grammar above.
template <class F>
std::string print_poly(const Poly<F>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    typename F::Elem coeff = c;
    if (first) {
      first = false;
    } else {
      // Negative coefficients fold into the separator.
      std::string cs = F::str(coeff);
      if (!cs.empty() && cs[0] == '-') {
        out += " - ";
        coeff = F::neg(coeff);
      } else {
        out += " + ";
      }
    }
    std::string cs = F::str(coeff);
    bool has_vars = total_degree(e) > 0;
    bool unit = cs == "1";
    if (!has_vars || !unit) out += cs;
    if (has_vars) {
      bool started = !has_vars || !unit;
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (started) out += "*";
        started = true;
        out += p.ctx()->name(i);
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
      }
    }
  }
  return out;
}

inline QPoly qparse(const std::string& text, const Ctx& ctx) {
  return parse_poly<RationalField>(text, ctx);
}

Rational parse_rational_str(const std::string& s);

} // namespace affmod
