#include "pothenot/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pothenot {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  double parse() {
    const double v = expr();
    skip();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  [[noreturn]] void fail() const {
    throw std::invalid_argument("cannot parse number '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  double expr() {
    double v = term();
    for (;;) {
      if (eat("+")) v += term();
      else if (eat("-")) v -= term();
      else return v;
    }
  }
  double term() {
    double v = unary();
    for (;;) {
      if (eat("*")) v *= unary();
      else if (eat("/")) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (eat("-")) return -unary();
    if (eat("+")) return unary();
    const double base = primary();
    if (eat("^")) return std::pow(base, unary());
    return base;
  }
  double primary() {
    if (eat("(")) {
      const double v = expr();
      if (!eat(")")) fail();
      return v;
    }
    if (eat("\xE2\x88\x9A") || eat("sqrt")) return std::sqrt(primary());
    if (eat("pi") || eat("\xCF\x80")) return std::numbers::pi;
    skip();
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    double v = 0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr == begin) fail();
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

double parse_number(std::string_view text) { return Parser(text).parse(); }

}  // namespace pothenot
