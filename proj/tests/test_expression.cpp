#include <doctest.h>

#include <random>

#include "cqc/errors.hpp"
#include "cqc/expression.hpp"

using namespace cqc;

TEST_CASE("parse simple expressions") {
  CHECK(parse_polynomial("x") == Polynomial::monomial(1, 0));
  const auto a = parse_polynomial("3*x^2*p - p^3");
  CHECK(a.coefficient(2, 1) == 3.0);
  CHECK(a.coefficient(0, 3) == -1.0);
  CHECK(a.terms().size() == 2);
  CHECK(parse_polynomial("x^2 + 2*p")(0.7, -0.3) == doctest::Approx(-0.11));
  CHECK(parse_polynomial(" - 1.5e-1 * x p ^2 ") == Polynomial::monomial(1, 2, -0.15));
  CHECK(parse_polynomial("1") == Polynomial::constant(1.0));
  CHECK(parse_polynomial("x*p + x p - 2*x*p").is_zero());
}

TEST_CASE("parse errors carry byte offsets") {
  auto offset_of = [](const char* text) -> std::size_t {
    try {
      parse_polynomial(text);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return std::size_t(-1);
  };
  CHECK(offset_of("x + ") == 4);
  CHECK(offset_of("x ^") == 3);
  CHECK(offset_of("3*q") == 2);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("x ** p") == 3);
  CHECK_THROWS_AS(parse_polynomial("x^17"), ParseError);
  CHECK_NOTHROW(parse_polynomial("x^16"));
}

TEST_CASE("format then parse is the identity") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-5, 5);
  std::uniform_int_distribution<int> ex(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial a;
    for (int t = 0; t < 5; ++t) a = a + Polynomial::monomial(ex(rng), ex(rng), coef(rng));
    CHECK(parse_polynomial(format_polynomial(a)) == a);
  }
  CHECK(parse_polynomial(format_polynomial(Polynomial())) == Polynomial());
}
