#pragma once

#include <string_view>

#include "flatfix/formula.hpp"
#include "flatfix/signature.hpp"

namespace flatfix {

// Surface grammar:
//   or    := and ('|' and)*
//   and   := unary ('&' unary)*
//   unary := '~' unary | '<' id '>' unary | '[' id ']' unary
//          | 'nab' id '{' [or (',' or)*] '}'
//          | 'sharp' id '(' [or (',' or)*] ')'
//          | 'T' | 'F' | id | '(' or ')'
// The result is canonicalized. Sharp connectives are resolved against the
// given table; unknown names and arity mismatches raise ParseError.
Formula parse_formula(std::string_view text, const SignatureTable& sigs);
Formula parse_formula(std::string_view text);

}  // namespace flatfix
