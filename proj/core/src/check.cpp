#include "flatfix/check.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

#include "flatfix/analysis.hpp"
#include "flatfix/error.hpp"

namespace flatfix {

Budget budget_from_env() {
  Budget b;
  if (const char* env = std::getenv("FLATFIX_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) b.max_exhaustive = v;
  }
  return b;
}

namespace {

std::vector<std::string> collect_vars(const std::vector<Implication>& impls) {
  std::set<std::string> names;
  for (const Implication& impl : impls) {
    auto l = free_vars(impl.lhs);
    auto r = free_vars(impl.rhs);
    names.insert(l.begin(), l.end());
    names.insert(r.begin(), r.end());
  }
  return {names.begin(), names.end()};
}

// Drives `body` over valuations of the first `k` slots; body returns false
// to stop (a counterexample was found).
template <typename Body>
CheckOutcome enumerate_valuations(const KripkeModel& model, std::size_t k,
                                  std::vector<StateSet>& slots,
                                  const Budget& budget, std::uint64_t seed,
                                  const Body& body) {
  CheckOutcome out;
  const int n = model.size();
  const std::uint64_t bits = static_cast<std::uint64_t>(n) * k;
  const bool exhaustive =
      bits < 63 && (bits == 0 || (1ull << bits) <= budget.max_exhaustive);
  out.exhaustive = exhaustive;

  if (exhaustive) {
    const std::uint64_t total = bits == 0 ? 1 : 1ull << bits;
    const StateSet mask = n >= 64 ? ~0ull : (1ull << n) - 1;
    for (std::uint64_t c = 0; c < total; ++c) {
      // Sorted variable order, first variable in the most significant block.
      for (std::size_t i = 0; i < k; ++i)
        slots[i] = (c >> ((k - 1 - i) * n)) & mask;
      ++out.cases;
      if (!body()) {
        out.ok = false;
        return out;
      }
    }
    return out;
  }

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  const StateSet universe = model.universe();
  for (std::uint64_t s = 0; s < budget.samples; ++s) {
    for (std::size_t i = 0; i < k; ++i) slots[i] = rng() & universe;
    ++out.cases;
    if (!body()) {
      out.ok = false;
      return out;
    }
  }
  return out;
}

Counterexample make_cex(const KripkeModel& model,
                        const std::vector<std::string>& vars,
                        const std::vector<StateSet>& slots, StateSet bad) {
  Counterexample cex;
  for (std::size_t i = 0; i < vars.size(); ++i) cex.valuation[vars[i]] = slots[i];
  int state = 0;
  while (!(bad & (1ull << state))) ++state;
  cex.state_id = model.state_ids[state];
  return cex;
}

}  // namespace

CompiledAxiom::CompiledAxiom(const Axiom& axiom)
    : vars_(collect_vars({axiom.implication})) {
  sides_.emplace_back(axiom.implication.lhs, vars_);
  sides_.emplace_back(axiom.implication.rhs, vars_);
  max_slots_ = vars_.size();
  for (const CompiledFormula& c : sides_)
    max_slots_ = std::max(max_slots_, c.slot_count());
}

CheckOutcome CompiledAxiom::run(const KripkeModel& model, const Budget& budget,
                                std::uint64_t seed) const {
  auto lb = sides_[0].bind(model);
  auto rb = sides_[1].bind(model);
  std::vector<StateSet> slots(max_slots_, 0);
  const StateSet universe = model.universe();

  Counterexample cex;
  CheckOutcome out = enumerate_valuations(
      model, vars_.size(), slots, budget, seed, [&]() {
        StateSet bad =
            sides_[0].eval(lb, slots) & ~sides_[1].eval(rb, slots) & universe;
        if (bad == 0) return true;
        cex = make_cex(model, vars_, slots, bad);
        return false;
      });
  if (!out.ok) out.counterexample = std::move(cex);
  return out;
}

CompiledRule::CompiledRule(const Rule& rule) {
  std::vector<Implication> all = rule.premises;
  all.push_back(rule.conclusion);
  vars_ = collect_vars(all);
  for (const Implication& impl : all) {
    sides_.emplace_back(impl.lhs, vars_);
    sides_.emplace_back(impl.rhs, vars_);
  }
  max_slots_ = vars_.size();
  for (const CompiledFormula& c : sides_)
    max_slots_ = std::max(max_slots_, c.slot_count());
  // Cheap premises first so failing valuations exit early.
  for (std::size_t p = 0; p + 1 < all.size(); ++p) premise_order_.push_back(p);
  std::stable_sort(premise_order_.begin(), premise_order_.end(),
                   [&](std::size_t a, std::size_t b) {
                     return sides_[2 * a].slot_count() +
                                sides_[2 * a + 1].slot_count() <
                            sides_[2 * b].slot_count() +
                                sides_[2 * b + 1].slot_count();
                   });
}

CheckOutcome CompiledRule::run(const KripkeModel& model, const Budget& budget,
                               std::uint64_t seed) const {
  std::vector<CompiledFormula::Binding> bindings;
  bindings.reserve(sides_.size());
  for (const CompiledFormula& c : sides_) bindings.push_back(c.bind(model));
  std::vector<StateSet> slots(max_slots_, 0);
  const StateSet universe = model.universe();

  Counterexample cex;
  CheckOutcome out = enumerate_valuations(
      model, vars_.size(), slots, budget, seed, [&]() {
        for (std::size_t p : premise_order_) {
          StateSet lhs = sides_[2 * p].eval(bindings[2 * p], slots);
          StateSet rhs = sides_[2 * p + 1].eval(bindings[2 * p + 1], slots);
          if ((lhs & ~rhs & universe) != 0) return true;  // premise fails
        }
        std::size_t c = sides_.size() / 2 - 1;
        StateSet lhs = sides_[2 * c].eval(bindings[2 * c], slots);
        StateSet rhs = sides_[2 * c + 1].eval(bindings[2 * c + 1], slots);
        StateSet bad = lhs & ~rhs & universe;
        if (bad == 0) return true;
        cex = make_cex(model, vars_, slots, bad);
        return false;
      });
  if (!out.ok) out.counterexample = std::move(cex);
  return out;
}

CheckOutcome check_axiom(const KripkeModel& model, const Axiom& axiom,
                         const Budget& budget, std::uint64_t seed) {
  return CompiledAxiom(axiom).run(model, budget, seed);
}

CheckOutcome check_rule(const KripkeModel& model, const Rule& rule,
                        const Budget& budget, std::uint64_t seed) {
  return CompiledRule(rule).run(model, budget, seed);
}

}  // namespace flatfix
