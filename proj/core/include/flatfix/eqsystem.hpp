#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "flatfix/formula.hpp"
#include "flatfix/normal_form.hpp"

namespace flatfix {

using Json = nlohmann::ordered_json;

enum class SystemKind { General, SemiSimple, Simple };

const char* to_string(SystemKind k);

// A finite system of equations: one term per variable, terms over the system
// variables plus parameters, optionally pointed.
struct ModalSystem {
  std::vector<std::string> vars;
  std::map<std::string, Formula> terms;
  std::optional<std::string> point;

  const Formula& term(const std::string& var) const;
};

// Strongest applicable label, per the term shape recognizers.
SystemKind classify_system(const ModalSystem& system);

struct RelevantSubformulas {
  std::vector<Formula> special;   // all special conjunction subformulas
  std::vector<Formula> nested;    // those under the scope of some nabla
  std::vector<Formula> relevant;  // the formula itself plus the nested ones
};

// Input must be a guarded disjunction of pure nabla/x formulas.
RelevantSubformulas relevant_subformulas(const Formula& gamma,
                                         const std::string& x);

// System representation of a preprocessed formula. Variables: "z_g" for the
// formula itself, then "z1", "z2", ... for the nested special conjunctions in
// canonical order. `subformula` maps each variable back to its formula over
// x, and the system is pointed at z_g.
struct SystemRepresentation {
  ModalSystem system;
  std::map<std::string, Formula> subformula;
  std::string x;
};

SystemRepresentation build_system(const Formula& gamma, const std::string& x);

// Nonempty subsets of {0..n-1} ordered by cardinality, then lexicographically.
std::vector<std::vector<int>> proper_subsets(int n);

// Subset variable name: "y_" plus the member suffixes in system order, where
// a member suffix strips a leading "z"/"z_" from the variable name.
std::string subset_var_name(const std::vector<std::string>& vars,
                            const std::vector<int>& subset);

// Subset construction: simulates a semi-simple system by a simple one over
// one variable per nonempty subset of the original variables. When
// `simplify` is set (the default) each merged term is simplified before the
// subset variables are substituted; the raw merge is kept otherwise.
// When `reachable_only` is set and the input is pointed, only subsets
// reachable from the point's singleton are emitted.
ModalSystem simulate(const ModalSystem& system, bool simplify = true,
                     bool reachable_only = false);

std::string to_text(const ModalSystem& system);
Json to_json(const ModalSystem& system);
ModalSystem system_from_json(const Json& j);

}  // namespace flatfix
