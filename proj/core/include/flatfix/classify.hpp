#pragma once

#include <string>

#include "flatfix/formula.hpp"

namespace flatfix {

// Grammar recognizer for formulas untied in x:
//   phi ::= x | T | phi | phi | psi & /\_{j in J} nab_j Phi_j
// with x not in psi, the actions in J pairwise distinct, and every member of
// every Phi_j untied. A formula counts as untied if any parse succeeds.
// Input must be in the nabla fragment.
bool is_untied(const Formula& f, const std::string& x);

// Grammar recognizer for formulas harmless with respect to x (classical
// diamond/box syntax):
//   phi ::= x | T | phi | phi | psi & phi | <i>phi | [i]phi | /\_{j} phi_j
// where the final conjunction groups, per action, either one box conjunct or
// only diamond conjuncts.
bool is_harmless(const Formula& f, const std::string& x);

// Equivalent nabla formula for a harmless input, merging each harmless
// conjunction into one nabla per action. The output is untied whenever no
// conjunction of the input keeps a bare x conjunct next to an x-free part.
Formula harmless_to_untied(const Formula& f, const std::string& x);

}  // namespace flatfix
