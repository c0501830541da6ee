#include "flatfix/normal_form.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

#include "flatfix/analysis.hpp"
#include "flatfix/error.hpp"
#include "flatfix/signature.hpp"

namespace flatfix {

namespace {

constexpr int kPos = 1;
constexpr int kNeg = 2;

void collect_actions(const Formula& f, ActionSet& out) {
  switch (f.kind()) {
    case Kind::Dia:
    case Kind::Box:
    case Kind::Nabla:
      out.insert(f.action());
      break;
    case Kind::Sharp:
      collect_actions(f.sig()->body, out);
      break;
    default:
      break;
  }
  for (const Formula& k : f.kids()) collect_actions(k, out);
}

std::vector<Formula> or_parts(const Formula& f) {
  if (f.is(Kind::Bot)) return {};
  if (f.is(Kind::Or)) return f.kids();
  return {f};
}

std::vector<Formula> and_parts(const Formula& f) {
  if (f.is(Kind::Top)) return {};
  if (f.is(Kind::And)) return f.kids();
  return {f};
}

Formula disjunction_of(std::vector<Formula> parts) {
  return canonicalize(Formula::disj(std::move(parts)));
}

}  // namespace

ActionSet actions_of(const Formula& f) {
  ActionSet out;
  collect_actions(f, out);
  return out;
}

Formula SpecialConjunction::to_formula() const {
  std::vector<Formula> parts;
  for (const auto& [name, mask] : literals) {
    if (mask & kPos) parts.push_back(Formula::var(name));
    if (mask & kNeg) parts.push_back(Formula::neg(Formula::var(name)));
  }
  for (const auto& [action, elems] : boxed)
    parts.push_back(Formula::nabla(action, elems));
  return canonicalize(Formula::conj(std::move(parts)));
}

// ---------------------------------------------------------------------------
// Fragment recognizers

bool is_nabla_fragment(const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
    case Kind::Var:
      return true;
    case Kind::Neg:
      return f.child().is(Kind::Var);
    case Kind::And:
    case Kind::Or:
    case Kind::Nabla:
      return std::all_of(f.kids().begin(), f.kids().end(), is_nabla_fragment);
    case Kind::Dia:
    case Kind::Box:
    case Kind::Sharp:
      return false;
  }
  return false;
}

namespace {

std::optional<SpecialConjunction> decompose_sc(const Formula& f) {
  SpecialConjunction sc;
  for (const Formula& part : and_parts(f)) {
    switch (part.kind()) {
      case Kind::Var:
        sc.literals[part.name()] |= kPos;
        break;
      case Kind::Neg:
        if (!part.child().is(Kind::Var)) return std::nullopt;
        sc.literals[part.child().name()] |= kNeg;
        break;
      case Kind::Nabla: {
        auto [it, fresh] = sc.boxed.emplace(part.action(), part.kids());
        if (!fresh) return std::nullopt;  // two nablas on one action
        break;
      }
      default:
        return std::nullopt;
    }
  }
  return sc;
}

bool or_free_special(const Formula& f) {
  auto sc = decompose_sc(f);
  if (!sc) return false;
  for (const auto& [action, elems] : sc->boxed)
    for (const Formula& e : elems)
      if (!or_free_special(e)) return false;
  return true;
}

bool is_pure_nbx_single(const Formula& f, const std::string& x,
                        const ActionSet& actions) {
  if (f.is(Kind::Top)) return true;
  if (f.is(Kind::Var) && f.name() == x) return true;
  auto sc = decompose_sc(f);
  if (!sc) return false;
  for (const auto& [name, mask] : sc->literals)
    if (name == x && mask != kPos) return false;
  SpecialConjunction without_x = *sc;
  without_x.literals.erase(x);
  if (without_x.trivial()) return false;  // bare x handled above
  ActionSet keys;
  for (const auto& [action, elems] : without_x.boxed) keys.insert(action);
  if (keys != actions) return false;
  for (const auto& [action, elems] : without_x.boxed)
    for (const Formula& e : elems)
      if (!is_pure_nbx_single(e, x, actions)) return false;
  return true;
}

}  // namespace

bool is_disjunctive(const Formula& f) {
  for (const Formula& d : or_parts(f)) {
    auto sc = decompose_sc(d);
    if (!sc) return false;
    for (const auto& [action, elems] : sc->boxed)
      for (const Formula& e : elems)
        if (!is_disjunctive(e)) return false;
  }
  return true;
}

bool is_pure_disjunction(const Formula& f, const ActionSet& actions) {
  for (const Formula& d : or_parts(f)) {
    if (d.is(Kind::Top)) continue;
    auto sc = decompose_sc(d);
    if (!sc) return false;
    ActionSet keys;
    for (const auto& [action, elems] : sc->boxed) keys.insert(action);
    if (keys != actions) return false;
    for (const auto& [action, elems] : sc->boxed)
      for (const Formula& e : elems)
        if (!or_free_special(e)) return false;
  }
  return true;
}

bool is_pure_nbx(const Formula& f, const std::string& x,
                 const ActionSet& actions) {
  for (const Formula& d : or_parts(f))
    if (!is_pure_nbx_single(d, x, actions)) return false;
  return true;
}

bool is_semisimple_term(const Formula& f, const VarSet& vars) {
  for (const Formula& d : or_parts(f)) {
    auto sc = decompose_sc(d);
    if (!sc) return false;
    for (const auto& [name, mask] : sc->literals)
      if (vars.count(name)) return false;
    for (const auto& [action, elems] : sc->boxed)
      for (const Formula& e : elems) {
        if (e.is(Kind::Top)) continue;
        for (const Formula& v : and_parts(e))
          if (!v.is(Kind::Var) || !vars.count(v.name())) return false;
      }
  }
  return true;
}

bool is_simple_term(const Formula& f, const VarSet& vars) {
  if (!is_semisimple_term(f, vars)) return false;
  for (const Formula& d : or_parts(f)) {
    auto sc = decompose_sc(d);
    for (const auto& [action, elems] : sc->boxed)
      for (const Formula& e : elems)
        if (!e.is(Kind::Top) && !e.is(Kind::Var)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// to_nabla

namespace {

Formula nnf(const Formula& f, bool positive) {
  switch (f.kind()) {
    case Kind::Top:
      return positive ? Formula::top() : Formula::bot();
    case Kind::Bot:
      return positive ? Formula::bot() : Formula::top();
    case Kind::Var:
      return positive ? f : Formula::neg(f);
    case Kind::Neg:
      return nnf(f.child(), !positive);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (const Formula& k : f.kids()) kids.push_back(nnf(k, positive));
      bool conj = (f.kind() == Kind::And) == positive;
      return conj ? Formula::conj(std::move(kids))
                  : Formula::disj(std::move(kids));
    }
    case Kind::Dia:
      return positive ? Formula::dia(f.action(), nnf(f.child(), true))
                      : Formula::box(f.action(), nnf(f.child(), false));
    case Kind::Box:
      return positive ? Formula::box(f.action(), nnf(f.child(), true))
                      : Formula::dia(f.action(), nnf(f.child(), false));
    case Kind::Nabla: {
      if (positive) {
        std::vector<Formula> elems;
        for (const Formula& e : f.kids()) elems.push_back(nnf(e, true));
        return Formula::nabla(f.action(), std::move(elems));
      }
      // ~nab a Phi == <a>(/\ ~Phi) | \/ [a]~phi
      std::vector<Formula> negated;
      for (const Formula& e : f.kids()) negated.push_back(nnf(e, false));
      std::vector<Formula> parts;
      parts.push_back(Formula::dia(f.action(), Formula::conj(negated)));
      for (const Formula& n : negated)
        parts.push_back(Formula::box(f.action(), n));
      return Formula::disj(std::move(parts));
    }
    case Kind::Sharp:
      throw Error("to_nabla: sharp connectives must be expanded per signature");
  }
  throw Error("nnf: unreachable");
}

Formula cover_rewrite(const Formula& f) {
  switch (f.kind()) {
    case Kind::Dia:
      return Formula::nabla(f.action(),
                            {cover_rewrite(f.child()), Formula::top()});
    case Kind::Box:
      return Formula::disj(
          {Formula::nabla(f.action(), {}),
           Formula::nabla(f.action(), {cover_rewrite(f.child())})});
    case Kind::Top:
    case Kind::Bot:
    case Kind::Var:
    case Kind::Neg:
      return f;
    case Kind::And:
    case Kind::Or:
    case Kind::Nabla: {
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (const Formula& k : f.kids()) kids.push_back(cover_rewrite(k));
      if (f.kind() == Kind::And) return Formula::conj(std::move(kids));
      if (f.kind() == Kind::Or) return Formula::disj(std::move(kids));
      return Formula::nabla(f.action(), std::move(kids));
    }
    case Kind::Sharp:
      throw Error("to_nabla: sharp connectives must be expanded per signature");
  }
  throw Error("cover_rewrite: unreachable");
}

}  // namespace

Formula to_nabla(const Formula& f) {
  if (has_sharp(f))
    throw Error("to_nabla: sharp connectives must be expanded per signature");
  return canonicalize(cover_rewrite(nnf(f, true)));
}

// ---------------------------------------------------------------------------
// to_disjunctive

namespace {

using Disj = std::vector<SpecialConjunction>;

// Full relations R over [m] x [n]: every row and every column is covered.
const std::vector<std::vector<std::pair<int, int>>>& full_relations(int m,
                                                                    int n) {
  static std::map<std::pair<int, int>, std::vector<std::vector<std::pair<int, int>>>>
      memo;
  auto key = std::make_pair(m, n);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  if (m * n > 20)
    throw Error("nabla product law: argument sets too large (" +
                std::to_string(m) + "x" + std::to_string(n) + ")");
  std::vector<std::vector<std::pair<int, int>>> out;
  std::uint32_t total = 1u << (m * n);
  for (std::uint32_t rel = 0; rel < total; ++rel) {
    std::uint32_t rows = 0, cols = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (rel & (1u << (i * n + j))) {
          rows |= 1u << i;
          cols |= 1u << j;
        }
    if (rows != (m ? (1u << m) - 1 : 0u) || cols != (n ? (1u << n) - 1 : 0u))
      continue;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (rel & (1u << (i * n + j))) pairs.emplace_back(i, j);
    out.push_back(std::move(pairs));
  }
  return memo.emplace(key, std::move(out)).first->second;
}

Disj to_disj(const Formula& f);

Formula disj_formula(const Disj& d) {
  std::vector<Formula> parts;
  parts.reserve(d.size());
  for (const SpecialConjunction& sc : d) parts.push_back(sc.to_formula());
  return disjunction_of(std::move(parts));
}

Disj disj_and(const Disj& a, const Disj& b);

Disj sc_and(const SpecialConjunction& a, const SpecialConjunction& b) {
  SpecialConjunction base;
  base.literals = a.literals;
  for (const auto& [name, mask] : b.literals) base.literals[name] |= mask;
  std::vector<std::string> shared;
  for (const auto& [action, elems] : a.boxed) {
    if (b.boxed.count(action))
      shared.push_back(action);
    else
      base.boxed.emplace(action, elems);
  }
  for (const auto& [action, elems] : b.boxed)
    if (!a.boxed.count(action)) base.boxed.emplace(action, elems);

  Disj variants{base};
  for (const std::string& action : shared) {
    const auto& av = a.boxed.at(action);
    const auto& bv = b.boxed.at(action);
    const auto& rels = full_relations(static_cast<int>(av.size()),
                                      static_cast<int>(bv.size()));
    // Merged elements, computed once per pair of arguments.
    std::map<std::pair<int, int>, Formula> pair_memo;
    auto merged = [&](int i, int j) {
      auto key = std::make_pair(i, j);
      auto it = pair_memo.find(key);
      if (it != pair_memo.end()) return it->second;
      Formula m = disj_formula(disj_and(to_disj(av[i]), to_disj(bv[j])));
      return pair_memo.emplace(key, std::move(m)).first->second;
    };
    Disj next;
    for (const SpecialConjunction& v : variants) {
      for (const auto& rel : rels) {
        SpecialConjunction w = v;
        std::vector<Formula> elems;
        elems.reserve(rel.size());
        for (auto [i, j] : rel) elems.push_back(merged(i, j));
        w.boxed[action] = sorted_unique(std::move(elems));
        next.push_back(std::move(w));
      }
    }
    variants = std::move(next);
  }
  return variants;
}

Disj disj_and(const Disj& a, const Disj& b) {
  Disj out;
  for (const SpecialConjunction& x : a)
    for (const SpecialConjunction& y : b) {
      Disj merged = sc_and(x, y);
      out.insert(out.end(), merged.begin(), merged.end());
    }
  return out;
}

Disj to_disj(const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
      return {SpecialConjunction{}};
    case Kind::Bot:
      return {};
    case Kind::Var: {
      SpecialConjunction sc;
      sc.literals[f.name()] = kPos;
      return {sc};
    }
    case Kind::Neg: {
      if (!f.child().is(Kind::Var))
        throw Error("to_disjunctive: input not in the nabla fragment");
      SpecialConjunction sc;
      sc.literals[f.child().name()] = kNeg;
      return {sc};
    }
    case Kind::Or: {
      Disj out;
      for (const Formula& k : f.kids()) {
        Disj d = to_disj(k);
        out.insert(out.end(), d.begin(), d.end());
      }
      return out;
    }
    case Kind::And: {
      Disj out{SpecialConjunction{}};
      for (const Formula& k : f.kids()) out = disj_and(out, to_disj(k));
      return out;
    }
    case Kind::Nabla: {
      SpecialConjunction sc;
      std::vector<Formula> elems;
      for (const Formula& e : f.kids())
        elems.push_back(disj_formula(to_disj(e)));
      sc.boxed.emplace(f.action(), sorted_unique(std::move(elems)));
      return {sc};
    }
    case Kind::Dia:
    case Kind::Box:
    case Kind::Sharp:
      throw Error("to_disjunctive: input not in the nabla fragment");
  }
  throw Error("to_disj: unreachable");
}

}  // namespace

Formula to_disjunctive(const Formula& f) { return disj_formula(to_disj(f)); }

// ---------------------------------------------------------------------------
// to_pure_disjunction / to_pure_nbx

namespace {

// Boolean constant folding: units of And/Or, complementary literals, and
// bottom nabla arguments. Keeps the nabla fragment and the denotation.
Formula fold_constants(const Formula& f) {
  switch (f.kind()) {
    case Kind::And:
    case Kind::Or: {
      const bool conj = f.kind() == Kind::And;
      std::vector<Formula> kids;
      std::map<std::string, int> lits;
      for (const Formula& k : f.kids()) {
        Formula g = fold_constants(k);
        if (g.is(conj ? Kind::Top : Kind::Bot)) continue;
        if (g.is(conj ? Kind::Bot : Kind::Top))
          return conj ? Formula::bot() : Formula::top();
        if (g.is(Kind::Var))
          lits[g.name()] |= kPos;
        else if (g.is(Kind::Neg) && g.child().is(Kind::Var))
          lits[g.child().name()] |= kNeg;
        kids.push_back(std::move(g));
      }
      for (const auto& [name, mask] : lits)
        if (mask == (kPos | kNeg))
          return conj ? Formula::bot() : Formula::top();
      return canonicalize(conj ? Formula::conj(std::move(kids))
                                : Formula::disj(std::move(kids)));
    }
    case Kind::Neg: {
      Formula g = fold_constants(f.child());
      if (g.is(Kind::Top)) return Formula::bot();
      if (g.is(Kind::Bot)) return Formula::top();
      return Formula::neg(std::move(g));
    }
    case Kind::Nabla: {
      std::vector<Formula> elems;
      for (const Formula& e : f.kids()) {
        Formula g = fold_constants(e);
        if (g.is(Kind::Bot)) return Formula::bot();
        elems.push_back(std::move(g));
      }
      return Formula::nabla(f.action(), std::move(elems));
    }
    case Kind::Dia:
      return Formula::dia(f.action(), fold_constants(f.child()));
    case Kind::Box:
      return Formula::box(f.action(), fold_constants(f.child()));
    default:
      return f;
  }
}

// Nonempty subsets, each given as a sorted index list.
std::vector<std::vector<int>> nonempty_subsets(int n) {
  if (n > 16) throw Error("argument disjunction too large to lift");
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    out.push_back(std::move(subset));
  }
  return out;
}

// Rebuilds each special conjunction with element choices drawn from
// `options` (one option list per element), lifting the element disjunctions
// to the level of this conjunction.
template <typename Emit>
void lift_choices(const SpecialConjunction& sc,
                  const std::map<std::string, std::vector<std::vector<Formula>>>&
                      options,
                  const Emit& emit) {
  struct Slot {
    const std::string* action;
    const std::vector<Formula>* choices;
    std::vector<std::vector<int>> subsets;
  };
  std::vector<Slot> slots;
  std::uint64_t total = 1;
  for (const auto& [action, elem_opts] : options)
    for (const auto& opts : elem_opts) {
      slots.push_back(Slot{&action, &opts,
                           nonempty_subsets(static_cast<int>(opts.size()))});
      total *= slots.back().subsets.size();
      if (total > (1ull << 18))
        throw Error("argument disjunction too large to lift");
    }

  std::vector<int> pick(slots.size(), 0);
  for (;;) {
    SpecialConjunction variant;
    variant.literals = sc.literals;
    std::map<std::string, std::vector<Formula>> elems;
    for (std::size_t s = 0; s < slots.size(); ++s)
      for (int idx : slots[s].subsets[pick[s]])
        elems[*slots[s].action].push_back((*slots[s].choices)[idx]);
    for (auto& [action, list] : elems)
      variant.boxed[action] = sorted_unique(std::move(list));
    // Actions whose argument set was empty carry over unchanged.
    for (const auto& [action, list] : sc.boxed)
      if (!variant.boxed.count(action)) variant.boxed[action] = {};
    emit(std::move(variant));

    std::size_t s = 0;
    while (s < slots.size() &&
           ++pick[s] == static_cast<int>(slots[s].subsets.size())) {
      pick[s] = 0;
      ++s;
    }
    if (s == slots.size()) break;
    if (slots.empty()) break;
  }
}

// Disjunction-free choices for a disjunctive formula, all element
// disjunctions lifted out.
std::vector<Formula> hoist(const Formula& f) {
  std::vector<Formula> out;
  for (const SpecialConjunction& sc : to_disj(f)) {
    if (std::any_of(sc.literals.begin(), sc.literals.end(), [](const auto& kv) {
          return kv.second == (kPos | kNeg);
        }))
      continue;
    std::map<std::string, std::vector<std::vector<Formula>>> options;
    bool dead = false;
    for (const auto& [action, elems] : sc.boxed) {
      for (const Formula& e : elems) {
        std::vector<Formula> opts = sorted_unique(hoist(e));
        if (opts.empty()) {
          dead = true;  // bottom argument
          break;
        }
        options[action].push_back(std::move(opts));
      }
      if (dead) break;
    }
    if (dead) continue;
    lift_choices(sc, options, [&](SpecialConjunction variant) {
      out.push_back(variant.to_formula());
    });
  }
  return sorted_unique(std::move(out));
}

// All ways to extend the nabla map of `sc` to cover every declared action,
// using nab a {T} | nab a {} for the missing ones.
std::vector<SpecialConjunction> saturate_actions(const SpecialConjunction& sc,
                                                 const ActionSet& actions) {
  std::vector<std::string> missing;
  for (const std::string& a : actions)
    if (!sc.boxed.count(a)) missing.push_back(a);
  std::vector<SpecialConjunction> out{sc};
  for (const std::string& a : missing) {
    std::vector<SpecialConjunction> next;
    for (const SpecialConjunction& v : out) {
      SpecialConjunction with_top = v;
      with_top.boxed[a] = {Formula::top()};
      next.push_back(std::move(with_top));
      SpecialConjunction with_empty = v;
      with_empty.boxed[a] = {};
      next.push_back(std::move(with_empty));
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Formula to_pure_disjunction(const Formula& f, const ActionSet& actions) {
  std::vector<Formula> parts;
  for (const Formula& choice : hoist(fold_constants(canonicalize(f)))) {
    auto sc = decompose_sc(choice);
    if (!sc) throw Error("to_pure_disjunction: hoisting failed");
    if (sc->trivial()) {
      parts.push_back(Formula::top());
      continue;
    }
    for (const SpecialConjunction& v : saturate_actions(*sc, actions))
      parts.push_back(v.to_formula());
  }
  return disjunction_of(std::move(parts));
}

namespace {

// Pure nabla/x disjuncts of a nabla-fragment formula.
std::vector<Formula> purify_nbx(const Formula& f, const std::string& x,
                                const ActionSet& actions) {
  std::vector<Formula> out;
  for (const SpecialConjunction& sc : to_disj(f)) {
    auto xit = sc.literals.find(x);
    if (xit != sc.literals.end() && (xit->second & kNeg))
      throw Error("to_pure_nbx: " + x + " must occur only positively");
    if (std::any_of(sc.literals.begin(), sc.literals.end(), [](const auto& kv) {
          return kv.second == (kPos | kNeg);
        }))
      continue;
    bool has_x = xit != sc.literals.end();
    SpecialConjunction rest = sc;
    rest.literals.erase(x);

    std::map<std::string, std::vector<std::vector<Formula>>> options;
    bool dead = false;
    for (const auto& [action, elems] : rest.boxed) {
      for (const Formula& e : elems) {
        std::vector<Formula> opts = sorted_unique(purify_nbx(e, x, actions));
        if (opts.empty()) {
          dead = true;
          break;
        }
        options[action].push_back(std::move(opts));
      }
      if (dead) break;
    }
    if (dead) continue;

    lift_choices(rest, options, [&](SpecialConjunction variant) {
      if (variant.trivial()) {
        out.push_back(has_x ? Formula::var(x) : Formula::top());
        return;
      }
      for (const SpecialConjunction& v : saturate_actions(variant, actions)) {
        Formula body = v.to_formula();
        out.push_back(has_x
                          ? canonicalize(Formula::conj({Formula::var(x), body}))
                          : body);
      }
    });
  }
  return sorted_unique(std::move(out));
}

}  // namespace

Formula to_pure_nbx(const Formula& f, const std::string& x,
                    const ActionSet& actions) {
  Polarity p = polarity(f, x);
  if (p == Polarity::Negative || p == Polarity::Both)
    throw Error("to_pure_nbx: " + x + " must occur only positively");
  if (!is_guarded(f, x))
    throw Error("to_pure_nbx: " + x + " is unguarded; split off the unguarded part first");
  return disjunction_of(purify_nbx(fold_constants(to_nabla(f)), x, actions));
}

// ---------------------------------------------------------------------------
// guard_split

namespace {

// Negation normal form that keeps x-free subtrees intact and stops at modal
// subterms in positive position (x is guarded inside those).
Formula split_nnf(const Formula& f, const std::string& x, bool positive) {
  if (!free_vars(f).count(x))
    return positive ? f : canonicalize(Formula::neg(f));
  switch (f.kind()) {
    case Kind::Var:
      if (!positive)
        throw Error("guard_split: " + x + " must occur only positively");
      return f;
    case Kind::Neg:
      return split_nnf(f.child(), x, !positive);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (const Formula& k : f.kids())
        kids.push_back(split_nnf(k, x, positive));
      bool conj = (f.kind() == Kind::And) == positive;
      return conj ? Formula::conj(std::move(kids))
                  : Formula::disj(std::move(kids));
    }
    case Kind::Dia:
      return positive
                 ? f
                 : Formula::box(f.action(), split_nnf(f.child(), x, false));
    case Kind::Box:
      return positive
                 ? f
                 : Formula::dia(f.action(), split_nnf(f.child(), x, false));
    case Kind::Nabla: {
      if (positive) return f;
      std::vector<Formula> negated;
      for (const Formula& e : f.kids())
        negated.push_back(split_nnf(e, x, false));
      std::vector<Formula> parts;
      parts.push_back(Formula::dia(f.action(), Formula::conj(negated)));
      for (const Formula& n : negated)
        parts.push_back(Formula::box(f.action(), n));
      return Formula::disj(std::move(parts));
    }
    case Kind::Sharp:
      if (positive) return f;
      throw Error(
          "guard_split: cannot split below a negated fixpoint connective");
    default:
      throw Error("guard_split: unreachable");
  }
}

using Cube = std::vector<Formula>;  // conjunction of atoms

std::vector<Cube> atom_dnf(const Formula& f, const std::string& x) {
  auto atomic = [&](const Formula& g) {
    return !(g.is(Kind::And) || g.is(Kind::Or)) ||
           !free_vars(g).count(x);
  };
  if (f.is(Kind::Top)) return {{}};
  if (f.is(Kind::Bot)) return {};
  if (atomic(f)) return {{f}};
  if (f.is(Kind::Or)) {
    std::vector<Cube> out;
    for (const Formula& k : f.kids()) {
      auto d = atom_dnf(k, x);
      out.insert(out.end(), d.begin(), d.end());
    }
    return out;
  }
  std::vector<Cube> out{{}};
  for (const Formula& k : f.kids()) {
    std::vector<Cube> kd = atom_dnf(k, x);
    std::vector<Cube> next;
    for (const Cube& a : out)
      for (const Cube& b : kd) {
        Cube c = a;
        c.insert(c.end(), b.begin(), b.end());
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Formula guard_split(const Formula& f, const std::string& x) {
  Formula nf = split_nnf(canonicalize(f), x, true);
  Formula marker = Formula::var(x);
  std::vector<Formula> kept;
  for (const Cube& cube : atom_dnf(nf, x)) {
    bool bare_x = false;
    bool bottom = false;
    std::vector<Formula> atoms;
    for (const Formula& a : cube) {
      if (a == marker) {
        bare_x = true;
        break;
      }
      if (a.is(Kind::Bot)) {
        bottom = true;
        break;
      }
      if (!a.is(Kind::Top)) atoms.push_back(a);
    }
    if (bare_x || bottom) continue;
    kept.push_back(canonicalize(Formula::conj(std::move(atoms))));
  }
  return disjunction_of(std::move(kept));
}

// ---------------------------------------------------------------------------
// nabla_simplify / merge_semisimple

namespace {

// A special conjunction whose nabla arguments are conjunctions of variables,
// each argument kept as the set of its conjuncts (T is the empty set).
struct VarConjSC {
  std::map<std::string, int> literals;
  std::map<std::string, std::set<std::set<std::string>>> boxed;

  bool operator<(const VarConjSC& o) const {
    return std::tie(literals, boxed) < std::tie(o.literals, o.boxed);
  }
  bool operator==(const VarConjSC& o) const {
    return literals == o.literals && boxed == o.boxed;
  }
};

std::optional<std::set<std::string>> as_var_conj(const Formula& e) {
  std::set<std::string> names;
  for (const Formula& v : and_parts(e)) {
    if (!v.is(Kind::Var)) return std::nullopt;
    names.insert(v.name());
  }
  return names;
}

std::optional<VarConjSC> as_var_conj_sc(const SpecialConjunction& sc) {
  VarConjSC out;
  out.literals = sc.literals;
  for (const auto& [action, elems] : sc.boxed) {
    auto& args = out.boxed[action];
    for (const Formula& e : elems) {
      auto names = as_var_conj(e);
      if (!names) return std::nullopt;
      args.insert(std::move(*names));
    }
  }
  return out;
}

bool lits_subset(const std::map<std::string, int>& sub,
                 const std::map<std::string, int>& super) {
  for (const auto& [name, mask] : sub) {
    auto it = super.find(name);
    if (it == super.end() || (it->second & mask) != mask) return false;
  }
  return true;
}

// Syntactic implication a -> b: b's literals and nablas are weaker. For a
// shared action, every argument of a must contain some argument of b and
// every argument of b must be contained in some argument of a.
bool sc_implies(const VarConjSC& a, const VarConjSC& b) {
  if (!lits_subset(b.literals, a.literals)) return false;
  for (const auto& [action, bargs] : b.boxed) {
    auto it = a.boxed.find(action);
    if (it == a.boxed.end()) return false;
    const auto& aargs = it->second;
    for (const auto& phi : aargs) {
      bool ok = std::any_of(bargs.begin(), bargs.end(),
                            [&](const std::set<std::string>& psi) {
                              return std::includes(phi.begin(), phi.end(),
                                                   psi.begin(), psi.end());
                            });
      if (!ok) return false;
    }
    for (const auto& psi : bargs) {
      bool ok = std::any_of(aargs.begin(), aargs.end(),
                            [&](const std::set<std::string>& phi) {
                              return std::includes(phi.begin(), phi.end(),
                                                   psi.begin(), psi.end());
                            });
      if (!ok) return false;
    }
  }
  return true;
}

std::size_t arg_count(const VarConjSC& sc) {
  std::size_t n = 0;
  for (const auto& [action, args] : sc.boxed) n += args.size();
  return n;
}

Formula var_conj_formula(const std::set<std::string>& names) {
  std::vector<Formula> vars;
  for (const std::string& n : names) vars.push_back(Formula::var(n));
  return canonicalize(Formula::conj(std::move(vars)));
}

Formula var_conj_sc_formula(const VarConjSC& sc) {
  SpecialConjunction out;
  out.literals = sc.literals;
  for (const auto& [action, args] : sc.boxed) {
    std::vector<Formula> elems;
    for (const auto& names : args) elems.push_back(var_conj_formula(names));
    out.boxed.emplace(action, sorted_unique(std::move(elems)));
  }
  return out.to_formula();
}

// Keeps the maximal disjuncts of the implication preorder; within an
// equivalence class the argument-richest (then canonically largest)
// representative survives. Indices returned refer to the input order.
std::vector<bool> absorb_disjuncts(const std::vector<VarConjSC>& scs) {
  std::size_t n = scs.size();
  std::vector<bool> keep(n, true);
  std::vector<std::vector<bool>> imp(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) imp[i][j] = sc_implies(scs[i], scs[j]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n && keep[i]; ++j) {
      if (i == j || !imp[i][j]) continue;
      if (!imp[j][i]) {
        keep[i] = false;  // strictly stronger than a sibling
      } else {
        // Equivalent pair: prefer more arguments, then the later one.
        std::size_t ai = arg_count(scs[i]), aj = arg_count(scs[j]);
        if (ai < aj || (ai == aj && i < j)) keep[i] = false;
      }
    }
  }
  return keep;
}

bool has_contradictory_literal(const std::map<std::string, int>& lits) {
  return std::any_of(lits.begin(), lits.end(), [](const auto& kv) {
    return kv.second == (kPos | kNeg);
  });
}

}  // namespace

Formula nabla_simplify(const Formula& f) {
  std::vector<Formula> disjuncts;
  for (const Formula& d : or_parts(canonicalize(f))) {
    auto sc = decompose_sc(d);
    if (!sc) throw Error("nabla_simplify: input not in disjunctive shape");
    if (has_contradictory_literal(sc->literals)) continue;
    bool dead = false;
    SpecialConjunction out;
    out.literals = sc->literals;
    for (const auto& [action, elems] : sc->boxed) {
      std::vector<Formula> simplified;
      for (const Formula& e : elems) {
        Formula se = nabla_simplify(e);
        if (se.is(Kind::Bot)) {
          dead = true;
          break;
        }
        simplified.push_back(std::move(se));
      }
      if (dead) break;
      out.boxed.emplace(action, sorted_unique(std::move(simplified)));
    }
    if (dead) continue;
    disjuncts.push_back(out.to_formula());
  }
  disjuncts = sorted_unique(std::move(disjuncts));

  // Absorption among disjuncts with variable-conjunction arguments.
  std::vector<VarConjSC> vcs;
  std::vector<std::size_t> vcs_index;
  for (std::size_t i = 0; i < disjuncts.size(); ++i) {
    auto sc = decompose_sc(disjuncts[i]);
    if (!sc) continue;
    if (auto vc = as_var_conj_sc(*sc)) {
      vcs.push_back(std::move(*vc));
      vcs_index.push_back(i);
    }
  }
  if (vcs.size() > 1) {
    std::vector<bool> keep = absorb_disjuncts(vcs);
    std::vector<Formula> kept;
    std::set<std::size_t> dropped;
    for (std::size_t k = 0; k < vcs.size(); ++k)
      if (!keep[k]) dropped.insert(vcs_index[k]);
    for (std::size_t i = 0; i < disjuncts.size(); ++i)
      if (!dropped.count(i)) kept.push_back(disjuncts[i]);
    disjuncts = std::move(kept);
  }
  return disjunction_of(std::move(disjuncts));
}

Formula merge_semisimple(const std::vector<Formula>& terms,
                         const std::vector<std::string>& vars,
                         bool simplify) {
  VarSet zs(vars.begin(), vars.end());
  auto parse_term = [&](const Formula& t) {
    std::vector<VarConjSC> out;
    for (const Formula& d : or_parts(canonicalize(t))) {
      auto sc = decompose_sc(d);
      if (!sc) throw Error("merge_semisimple: input not semi-simple");
      for (const auto& [name, mask] : sc->literals)
        if (zs.count(name))
          throw Error("merge_semisimple: system variable " + name +
                      " outside a nabla argument");
      auto vc = as_var_conj_sc(*sc);
      if (!vc) throw Error("merge_semisimple: input not semi-simple");
      for (const auto& [action, args] : vc->boxed)
        for (const auto& arg : args)
          for (const std::string& v : arg)
            if (!zs.count(v))
              throw Error("merge_semisimple: argument variable " + v +
                          " is not a system variable");
      out.push_back(std::move(*vc));
    }
    return out;
  };

  auto pair_and = [](const VarConjSC& a, const VarConjSC& b) {
    std::vector<VarConjSC> variants;
    VarConjSC base;
    base.literals = a.literals;
    for (const auto& [name, mask] : b.literals) base.literals[name] |= mask;
    if (has_contradictory_literal(base.literals)) return variants;
    std::vector<std::string> shared;
    for (const auto& [action, args] : a.boxed) {
      if (b.boxed.count(action))
        shared.push_back(action);
      else
        base.boxed.emplace(action, args);
    }
    for (const auto& [action, args] : b.boxed)
      if (!a.boxed.count(action)) base.boxed.emplace(action, args);
    variants.push_back(std::move(base));
    for (const std::string& action : shared) {
      std::vector<std::set<std::string>> av(a.boxed.at(action).begin(),
                                            a.boxed.at(action).end());
      std::vector<std::set<std::string>> bv(b.boxed.at(action).begin(),
                                            b.boxed.at(action).end());
      const auto& rels = full_relations(static_cast<int>(av.size()),
                                        static_cast<int>(bv.size()));
      std::vector<VarConjSC> next;
      for (const VarConjSC& v : variants) {
        for (const auto& rel : rels) {
          VarConjSC w = v;
          auto& args = w.boxed[action];
          args.clear();
          for (auto [i, j] : rel) {
            std::set<std::string> u = av[i];
            u.insert(bv[j].begin(), bv[j].end());
            args.insert(std::move(u));
          }
          next.push_back(std::move(w));
        }
      }
      variants = std::move(next);
    }
    return variants;
  };

  std::vector<VarConjSC> acc{VarConjSC{}};
  for (const Formula& t : terms) {
    std::vector<VarConjSC> td = parse_term(t);
    std::vector<VarConjSC> next;
    for (const VarConjSC& l : acc)
      for (const VarConjSC& r : td) {
        auto merged = pair_and(l, r);
        next.insert(next.end(), merged.begin(), merged.end());
      }
    acc = std::move(next);
  }

  std::sort(acc.begin(), acc.end());
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  std::vector<bool> keep(acc.size(), true);
  if (simplify) keep = absorb_disjuncts(acc);
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (keep[i]) parts.push_back(var_conj_sc_formula(acc[i]));
  return disjunction_of(std::move(parts));
}

}  // namespace flatfix
