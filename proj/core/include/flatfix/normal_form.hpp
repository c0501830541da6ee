#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "flatfix/formula.hpp"

namespace flatfix {

using ActionSet = std::set<std::string>;
using VarSet = std::set<std::string>;

// Actions occurring in f, including those of sharp connective bodies.
ActionSet actions_of(const Formula& f);

// A conjunction of literals and at most one nabla per action,
// representing  /\Lambda  /\_{a in J} nab_a Phi_a.
struct SpecialConjunction {
  // Variable name -> sign mask (1 positive, 2 negative, 3 both).
  std::map<std::string, int> literals;
  // Action -> canonically ordered element list.
  std::map<std::string, std::vector<Formula>> boxed;

  bool trivial() const { return literals.empty() && boxed.empty(); }
  Formula to_formula() const;
};

// Fragment recognizers.
bool is_nabla_fragment(const Formula& f);   // negation on variables only, no Dia/Box/Sharp
bool is_disjunctive(const Formula& f);      // conjunction only inside special conjunctions
// Disjunction of special conjunctions (or T) whose nabla map covers every
// declared action, with disjunction-free arguments.
bool is_pure_disjunction(const Formula& f, const ActionSet& actions);
// Disjunction of pure nabla/x formulas: T | x | SC | x & SC, where SC carries
// parameter literals only and one nabla per declared action, with arguments
// again of this shape.
bool is_pure_nbx(const Formula& f, const std::string& x,
                 const ActionSet& actions);

// Semi-simple / simple term shape over the system variables `vars`:
// disjunctions of special conjunctions whose literals avoid `vars` and whose
// nabla arguments are conjunctions of `vars` (semi-simple), respectively
// single variables or T (simple).
bool is_semisimple_term(const Formula& f, const VarSet& vars);
bool is_simple_term(const Formula& f, const VarSet& vars);

// Rewrites a Dia/Box formula into the nabla fragment; negations are pushed to
// the variables. Throws on sharp nodes.
Formula to_nabla(const Formula& f);

// Pushes conjunctions into special conjunctions (classical distribution plus
// the nabla product law). Input must be in the nabla fragment.
Formula to_disjunctive(const Formula& f);

// Disjunction of special conjunctions covering every declared action at the
// top level, with all nested disjunctions lifted to the root.
Formula to_pure_disjunction(const Formula& f, const ActionSet& actions);

// Removes unguarded occurrences of x: rewrites to a disjunctive normal form
// over {x, literals, modal subterms} and drops every disjunct with a bare x
// conjunct. The result has the same prefixpoints as the input on every
// model. Requires x positive.
Formula guard_split(const Formula& f, const std::string& x);

// Full preprocessing target: an equivalent guarded disjunction of pure
// nabla/x formulas. Requires x positive and guarded (guard_split first).
Formula to_pure_nbx(const Formula& f, const std::string& x,
                    const ActionSet& actions);

// Fixed simplification on disjunctive shapes: bottom elements kill their
// nabla, complementary literals kill their disjunct, bottom disjuncts are
// dropped, duplicates merge, and a disjunct that implies a sibling (by the
// refinement test on variable-conjunction arguments) is absorbed into it.
// Equivalence-preserving and idempotent.
Formula nabla_simplify(const Formula& f);

// Equivalent semi-simple term for the conjunction of semi-simple terms over
// `vars` (nabla product law per action, literal union, then simplification;
// pass simplify = false to keep every product disjunct).
Formula merge_semisimple(const std::vector<Formula>& terms,
                         const std::vector<std::string>& vars,
                         bool simplify = true);

}  // namespace flatfix
