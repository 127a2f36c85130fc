#pragma once

// Tiny expression language for user-supplied surfaces z = f(x, y).
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?            right associative
//   atom   := number | 'x' | 'y' | 'r' | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | sqrt | abs
//
// `r` is sqrt(x^2 + y^2). Evaluation never throws: division by zero and
// domain errors yield inf/nan, which sampling reports as non-finite samples.

#include <string_view>

#include "penplot/surface3d.hpp"

namespace penplot {

// Throws syntax_error carrying the 1-based column of the offending token.
ScalarFunction parse_expression(std::string_view text);

}  // namespace penplot
