#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace flatfix {

struct SharpSignature;

// Constructor tags, in canonical comparison order.
enum class Kind : unsigned char {
  Top,
  Bot,
  Var,
  Neg,
  And,
  Or,
  Dia,
  Box,
  Nabla,
  Sharp,
};

// Immutable formula term. Copies share structure; all operations below are
// pure. Nabla arguments are kept as a canonically ordered, duplicate-free
// sequence, so formulas that differ only in the order of a nabla argument
// set compare equal.
class Formula {
 public:
  Formula();  // Top

  static Formula top();
  static Formula bot();
  static Formula var(std::string name);
  static Formula lit(std::string name, bool negated);
  static Formula neg(Formula f);
  static Formula conj(std::vector<Formula> kids);
  static Formula disj(std::vector<Formula> kids);
  static Formula dia(std::string action, Formula f);
  static Formula box(std::string action, Formula f);
  static Formula nabla(std::string action, std::vector<Formula> elements);
  static Formula sharp(std::shared_ptr<const SharpSignature> sig,
                       std::vector<Formula> args);

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }

  // Var name.
  const std::string& name() const { return node_->str; }
  // Dia/Box/Nabla action.
  const std::string& action() const { return node_->str; }
  // Children: Neg/Dia/Box one child, And/Or/Nabla/Sharp a list.
  const std::vector<Formula>& kids() const { return node_->kids; }
  const Formula& child(std::size_t i = 0) const { return node_->kids[i]; }
  const std::shared_ptr<const SharpSignature>& sig() const {
    return node_->sig;
  }

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node {
    Kind kind;
    std::string str;
    std::vector<Formula> kids;
    std::shared_ptr<const SharpSignature> sig;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Node node);
  std::shared_ptr<const Node> node_;
};

// Total order: constructor tag, then action/name, then lexicographic on
// children. Negative, zero, positive like strcmp.
int compare(const Formula& a, const Formula& b);

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const {
    return compare(a, b) < 0;
  }
};

using FormulaSet = std::set<Formula, FormulaLess>;

// Flattens nested And/Or, removes duplicate children, sorts children by the
// total order, collapses singletons (And([f]) -> f, And([]) -> T,
// Or([]) -> F). No Boolean simplification beyond that; idempotent.
Formula canonicalize(const Formula& f);

// Simultaneous substitution of free variables. The language has no binders,
// so no capture can occur; sharp arguments are ordinary subterms.
Formula substitute(const Formula& f, const std::map<std::string, Formula>& map);

// Deterministic surface rendering; parse(render(f)) == canonicalize(f).
std::string render(const Formula& f);

// Like render, but sharp connectives named `implicit` print without the
// name, as in "sharp(p)". Used by the human-readable axiom output.
std::string render_implicit(const Formula& f, const std::string& implicit);

bool has_sharp(const Formula& f);

// Sorts and dedups; convenience for building canonical conjunction lists.
std::vector<Formula> sorted_unique(std::vector<Formula> fs);

}  // namespace flatfix
