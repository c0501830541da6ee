#include "flatfix/classify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "flatfix/analysis.hpp"
#include "flatfix/error.hpp"
#include "flatfix/normal_form.hpp"

namespace flatfix {

namespace {

bool untied_rec(const Formula& f, const std::string& x,
                std::map<Formula, bool, FormulaLess>& memo) {
  if (!free_vars(f).count(x)) return true;  // goes into the psi part
  if (f.is(Kind::Var)) return true;         // f == x here
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  bool ok = false;
  switch (f.kind()) {
    case Kind::Or:
      ok = std::all_of(f.kids().begin(), f.kids().end(), [&](const Formula& k) {
        return untied_rec(k, x, memo);
      });
      break;
    case Kind::And: {
      // x-free conjuncts go into psi; the rest must be nablas on pairwise
      // distinct actions with untied arguments.
      std::set<std::string> used;
      ok = true;
      for (const Formula& k : f.kids()) {
        if (!free_vars(k).count(x)) continue;
        if (!k.is(Kind::Nabla) || !used.insert(k.action()).second) {
          ok = false;
          break;
        }
        for (const Formula& e : k.kids())
          if (!untied_rec(e, x, memo)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      break;
    }
    case Kind::Nabla:
      ok = std::all_of(f.kids().begin(), f.kids().end(), [&](const Formula& e) {
        return untied_rec(e, x, memo);
      });
      break;
    default:
      ok = false;
      break;
  }
  memo.emplace(f, ok);
  return ok;
}

}  // namespace

bool is_untied(const Formula& f, const std::string& x) {
  if (!is_nabla_fragment(f))
    throw Error("is_untied: input must be in the nabla fragment");
  std::map<Formula, bool, FormulaLess> memo;
  return untied_rec(canonicalize(f), x, memo);
}

namespace {

bool harmless_rec(const Formula& f, const std::string& x,
                  std::map<Formula, bool, FormulaLess>& memo);

// Valid grouping of x-relevant con juncts: per action either one box or only
// diamonds, children harmless.
bool harmless_conjunction(const std::vector<Formula>& conjuncts,
                          const std::string& x,
                          std::map<Formula, bool, FormulaLess>& memo) {
  std::map<std::string, int> boxes, dias;
  for (const Formula& k : conjuncts) {
    if (k.is(Kind::Box))
      ++boxes[k.action()];
    else if (k.is(Kind::Dia))
      ++dias[k.action()];
    else
      return false;
    if (!harmless_rec(k.child(), x, memo)) return false;
  }
  for (const auto& [action, n] : boxes)
    if (n > 1 || dias.count(action)) return false;
  return true;
}

bool harmless_rec(const Formula& f, const std::string& x,
                  std::map<Formula, bool, FormulaLess>& memo) {
  if (!free_vars(f).count(x)) return true;
  if (f.is(Kind::Var)) return true;  // f == x
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  bool ok = false;
  switch (f.kind()) {
    case Kind::Or:
      ok = std::all_of(f.kids().begin(), f.kids().end(), [&](const Formula& k) {
        return harmless_rec(k, x, memo);
      });
      break;
    case Kind::Dia:
    case Kind::Box:
      ok = harmless_rec(f.child(), x, memo);
      break;
    case Kind::And: {
      std::vector<Formula> relevant;
      for (const Formula& k : f.kids())
        if (free_vars(k).count(x)) relevant.push_back(k);
      if (relevant.size() == 1)
        ok = harmless_rec(relevant.front(), x, memo);
      else
        ok = harmless_conjunction(relevant, x, memo);
      break;
    }
    default:
      ok = false;
      break;
  }
  memo.emplace(f, ok);
  return ok;
}

}  // namespace

bool is_harmless(const Formula& f, const std::string& x) {
  std::map<Formula, bool, FormulaLess> memo;
  return harmless_rec(canonicalize(f), x, memo);
}

namespace {

std::vector<Formula> disjuncts_of(const Formula& f) {
  if (f.is(Kind::Bot)) return {};
  if (f.is(Kind::Or)) return f.kids();
  return {f};
}

Formula translate(const Formula& f, const std::string& x);

// One nabla per action: a diamond group <a>c1 & ... & <a>cn becomes
// nab a {c1,...,cn,T}; a box [a]c becomes nab a {} | nab a {c}.
std::vector<Formula> group_choices(const std::string& action,
                                   const std::vector<Formula>& dia_children,
                                   const std::vector<Formula>& box_children,
                                   const std::string& x) {
  if (!dia_children.empty()) {
    std::vector<Formula> elems;
    for (const Formula& c : dia_children) elems.push_back(translate(c, x));
    elems.push_back(Formula::top());
    return {Formula::nabla(action, std::move(elems))};
  }
  Formula c = translate(box_children.front(), x);
  return {Formula::nabla(action, {}), Formula::nabla(action, {c})};
}

Formula translate(const Formula& f, const std::string& x) {
  if (!free_vars(f).count(x)) return to_nabla(f);
  switch (f.kind()) {
    case Kind::Var:
      return f;
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const Formula& k : f.kids()) kids.push_back(translate(k, x));
      return canonicalize(Formula::disj(std::move(kids)));
    }
    case Kind::Dia:
      return Formula::nabla(f.action(), {translate(f.child(), x),
                                         Formula::top()});
    case Kind::Box:
      return canonicalize(Formula::disj(
          {Formula::nabla(f.action(), {}),
           Formula::nabla(f.action(), {translate(f.child(), x)})}));
    case Kind::And: {
      std::vector<Formula> psi;
      std::vector<Formula> relevant;
      for (const Formula& k : f.kids()) {
        if (free_vars(k).count(x))
          relevant.push_back(k);
        else
          psi.push_back(to_nabla(k));
      }
      // Choice lists: either the translation of the single x part, or one
      // merged nabla per action of the harmless conjunction (boxes
      // contribute a two-way choice).
      std::vector<std::vector<Formula>> choices;
      if (relevant.size() == 1) {
        for (const Formula& d : disjuncts_of(translate(relevant.front(), x)))
          choices.push_back({d});
        if (choices.empty()) return Formula::bot();
        // A single alternative whose options are the disjuncts.
        std::vector<Formula> opts;
        for (auto& c : choices) opts.push_back(c.front());
        choices.clear();
        choices.push_back(std::move(opts));
      } else {
        std::map<std::string, std::vector<Formula>> dia, box;
        for (const Formula& k : relevant) {
          if (k.is(Kind::Dia))
            dia[k.action()].push_back(k.child());
          else
            box[k.action()].push_back(k.child());
        }
        std::set<std::string> actions;
        for (const auto& [a, cs] : dia) actions.insert(a);
        for (const auto& [a, cs] : box) actions.insert(a);
        for (const std::string& a : actions) {
          auto di = dia.find(a);
          auto bi = box.find(a);
          choices.push_back(group_choices(
              a, di == dia.end() ? std::vector<Formula>{} : di->second,
              bi == box.end() ? std::vector<Formula>{} : bi->second, x));
        }
      }
      // Distribute the choices over the psi part.
      std::vector<Formula> out{canonicalize(Formula::conj(psi))};
      for (const auto& opts : choices) {
        std::vector<Formula> next;
        for (const Formula& base : out)
          for (const Formula& opt : opts)
            next.push_back(canonicalize(Formula::conj({base, opt})));
        out = std::move(next);
      }
      return canonicalize(Formula::disj(std::move(out)));
    }
    default:
      throw Error("harmless_to_untied: input is not harmless");
  }
}

}  // namespace

Formula harmless_to_untied(const Formula& f, const std::string& x) {
  if (!is_harmless(f, x))
    throw Error("harmless_to_untied: input is not harmless");
  return canonicalize(translate(canonicalize(f), x));
}

}  // namespace flatfix
