#pragma once

#include <string>
#include <string_view>

#include "cqc/classical.hpp"

namespace cqc {

inline constexpr int kMaxExponent = 16;

// Grammar (whitespace ignored):
//   expr  := ["+"|"-"] term { ("+"|"-") term }
//   term  := coeff ["*" vars] | vars
//   vars  := "x" ["^" uint] [["*"] "p" ["^" uint]] | "p" ["^" uint]
// e.g. "3*x^2*p - p^3". Errors carry the byte offset of the offending token.
Polynomial parse_polynomial(std::string_view text);
ClassicalObservable parse_observable(std::string_view text);

// Inverse of parse_polynomial up to term order; coefficients printed with
// 17 significant digits so the round trip is exact.
std::string format_polynomial(const Polynomial& poly);

}  // namespace cqc
