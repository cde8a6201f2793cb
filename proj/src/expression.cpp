#include "cqc/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "cqc/errors.hpp"

namespace cqc {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Polynomial parse() {
    Polynomial result;
    skip_ws();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    result = result + parse_term(sign);
    while (true) {
      skip_ws();
      if (at_end()) break;
      const char c = peek();
      if (c != '+' && c != '-') throw ParseError(pos_, "'+', '-' or end of input");
      ++pos_;
      result = result + parse_term(c == '-' ? -1.0 : 1.0);
    }
    return result;
  }

 private:
  Polynomial parse_term(double sign) {
    skip_ws();
    double coeff = 1.0;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      coeff = parse_number();
      have_coeff = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
        if (peek() != 'x' && peek() != 'p') throw ParseError(pos_, "'x' or 'p'");
      } else {
        return Polynomial::constant(sign * coeff);
      }
    }
    int i = 0, j = 0;
    if (peek() == 'x') {
      ++pos_;
      i = parse_power();
      skip_ws();
      std::size_t save = pos_;
      if (peek() == '*') {
        ++pos_;
        skip_ws();
        if (peek() != 'p') throw ParseError(pos_, "'p'");
      }
      if (peek() == 'p') {
        ++pos_;
        j = parse_power();
      } else {
        pos_ = save;
      }
    } else if (peek() == 'p') {
      ++pos_;
      j = parse_power();
    } else if (!have_coeff) {
      throw ParseError(pos_, "number, 'x' or 'p'");
    }
    return Polynomial::monomial(i, j, sign * coeff);
  }

  int parse_power() {
    skip_ws();
    if (peek() != '^') return 1;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) throw ParseError(pos_, "unsigned integer exponent");
    int value = 0;
    std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (value > kMaxExponent || pos_ - start > 3) {
      throw ParseError(start, "exponent <= " + std::to_string(kMaxExponent));
    }
    return value;
  }

  double parse_number() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = save;
      } else {
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      throw ParseError(start, "real number");
    }
    return value;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text) { return Parser(text).parse(); }

ClassicalObservable parse_observable(std::string_view text) {
  return ClassicalObservable(parse_polynomial(text));
}

std::string format_polynomial(const Polynomial& poly) {
  if (poly.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : poly.terms()) {
    const auto [i, j] = e;
    double mag = c;
    if (first) {
      if (c < 0) {
        out += "-";
        mag = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      mag = std::abs(c);
    }
    first = false;
    const bool unit = mag == 1.0 && (i > 0 || j > 0);
    if (!unit) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", mag);
      out += buf;
      if (i > 0 || j > 0) out += "*";
    }
    if (i > 0) {
      out += "x";
      if (i > 1) out += "^" + std::to_string(i);
    }
    if (j > 0) {
      if (i > 0) out += "*";
      out += "p";
      if (j > 1) out += "^" + std::to_string(j);
    }
  }
  return out;
}

}  // namespace cqc
