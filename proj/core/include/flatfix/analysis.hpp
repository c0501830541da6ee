#pragma once

#include <set>
#include <string>

#include "flatfix/formula.hpp"

namespace flatfix {

enum class Polarity { Absent, Positive, Negative, Both };

const char* to_string(Polarity p);

// Occurrence polarity of x in f. Negation flips; a sharp argument composes
// the argument's polarity with the polarity of the matching parameter in the
// connective body.
Polarity polarity(const Formula& f, const std::string& x);

// True iff every free occurrence of x lies under at least one modality
// (Dia/Box/Nabla). An occurrence inside a sharp argument counts as guarded
// when it is guarded within the argument, or when the matching parameter is
// guarded in the connective body.
bool is_guarded(const Formula& f, const std::string& x);

// Nesting depth of Dia/Box/Nabla. A sharp node contributes the depth of its
// body plus the maximal depth of its arguments.
int modal_depth(const Formula& f);

std::set<std::string> free_vars(const Formula& f);

struct Analysis {
  std::set<std::string> free_vars;
  Polarity polarity = Polarity::Absent;
  bool guarded = true;
  int modal_depth = 0;
};

Analysis analyze(const Formula& f, const std::string& x);

}  // namespace flatfix
