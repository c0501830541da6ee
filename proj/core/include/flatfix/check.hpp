#pragma once

#include <cstdint>
#include <optional>

#include "flatfix/axioms.hpp"
#include "flatfix/kripke.hpp"

namespace flatfix {

// Valuation enumeration budget per item and model. When the full product
// 2^(states * variables) fits under max_exhaustive, every valuation is
// checked in numeric bitset order (the earlier variable in sorted order
// varies slowest); otherwise `samples` seeded random valuations are drawn.
// A reported counterexample is genuine either way; only a "valid" verdict
// from a sampled run is approximate.
struct Budget {
  std::uint64_t max_exhaustive = 1ull << 18;
  std::uint64_t samples = 2048;
};

// Reads FLATFIX_BUDGET (max exhaustive valuations) if set.
Budget budget_from_env();

struct Counterexample {
  Env valuation;
  long long state_id = 0;
};

struct CheckOutcome {
  bool ok = true;
  bool exhaustive = true;
  std::uint64_t cases = 0;
  std::optional<Counterexample> counterexample;
};

// Valid iff lhs is contained in rhs at every state under every valuation of
// the free variables over the powerset of the model's states.
CheckOutcome check_axiom(const KripkeModel& model, const Axiom& axiom,
                         const Budget& budget = {}, std::uint64_t seed = 0);

// Quasi-equation reading: whenever every premise holds at all states, the
// conclusion must hold at all states.
CheckOutcome check_rule(const KripkeModel& model, const Rule& rule,
                        const Budget& budget = {}, std::uint64_t seed = 0);

// Compile-once variants for checking one item against many models.
class CompiledAxiom {
 public:
  explicit CompiledAxiom(const Axiom& axiom);
  CheckOutcome run(const KripkeModel& model, const Budget& budget = {},
                   std::uint64_t seed = 0) const;

 private:
  std::vector<std::string> vars_;
  std::vector<CompiledFormula> sides_;
  std::size_t max_slots_ = 0;
};

class CompiledRule {
 public:
  explicit CompiledRule(const Rule& rule);
  CheckOutcome run(const KripkeModel& model, const Budget& budget = {},
                   std::uint64_t seed = 0) const;

 private:
  std::vector<std::string> vars_;
  std::vector<CompiledFormula> sides_;  // premise lhs/rhs pairs, conclusion last
  std::vector<std::size_t> premise_order_;  // cheap premises first
  std::size_t max_slots_ = 0;
};

}  // namespace flatfix
