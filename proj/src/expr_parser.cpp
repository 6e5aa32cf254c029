#include "kd/expr_parser.hpp"

#include <cctype>

#include "kd/errors.hpp"

namespace kd {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::map<std::string, int>& slots, int nvars, int line, int column)
      : text_(text), slots_(slots), nvars_(nvars), line_(line), column_(column) {}

  MultiPoly parse() {
    MultiPoly e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, column_ + static_cast<int>(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MultiPoly expression() {
    skip_space();
    MultiPoly acc(nvars_);
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    acc = term();
    if (negate) acc = -acc;
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = unary();
    while (true) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '/') fail("division is only allowed inside a p/q literal");
      if (!accept('*')) break;
      acc = acc * unary();
    }
    return acc;
  }

  MultiPoly unary() {
    if (accept('-')) return -unary();
    return power();
  }

  MultiPoly power() {
    MultiPoly base = primary();
    if (accept('^')) {
      skip_space();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      std::string digits(text_.substr(start, pos_ - start));
      if (digits.size() > 3 || std::stoi(digits) > Monomial::kMaxDegree) {
        pos_ = start;
        fail("exponent too large");
      }
      base = base.pow(std::stoi(digits));
    }
    return base;
  }

  Integer integer_literal() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Integer(std::string(text_.substr(start, pos_ - start)), 10);
  }

  MultiPoly primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer num = integer_literal();
      Integer den = 1;
      std::size_t save = pos_;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        skip_space();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          fail("division is only allowed inside a p/q literal");
        }
        den = integer_literal();
        if (den == 0) fail("zero denominator");
      } else {
        pos_ = save;
      }
      Rational q(num, den);
      q.canonicalize();
      expect_operator_follows();
      return MultiPoly::constant(nvars_, q);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      auto it = slots_.find(name);
      if (it == slots_.end()) {
        throw UnknownVariable("unknown variable '" + name + "'", line_, column_ + static_cast<int>(start));
      }
      expect_operator_follows();
      return MultiPoly::variable(nvars_, it->second);
    }
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expression();
      if (!accept(')')) fail("expected ')'");
      expect_operator_follows();
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  // Rejects juxtaposition such as "2x" or "(x)(y)".
  void expect_operator_follows() {
    std::size_t save = pos_;
    skip_space();
    if (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(') {
        fail("implicit multiplication is not allowed; use '*'");
      }
    }
    pos_ = save;
  }

  std::string_view text_;
  const std::map<std::string, int>& slots_;
  int nvars_;
  int line_;
  int column_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_polynomial(std::string_view text, const std::map<std::string, int>& slots, int nvars, int line,
                           int column) {
  return Parser(text, slots, nvars, line, column).parse();
}

MultiPoly parse_canonical(std::string_view text, int nvars) {
  std::map<std::string, int> slots;
  auto names = MultiPoly::default_names(nvars);
  for (int i = 0; i < static_cast<int>(names.size()); ++i) slots[names[i]] = i;
  return parse_polynomial(text, slots, nvars);
}

}  // namespace kd
