#include "flatfix/eqsystem.hpp"

#include <algorithm>

#include "flatfix/analysis.hpp"
#include "flatfix/error.hpp"
#include "flatfix/parser.hpp"

namespace flatfix {

const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::General:
      return "general";
    case SystemKind::SemiSimple:
      return "semi-simple";
    case SystemKind::Simple:
      return "simple";
  }
  return "?";
}

const Formula& ModalSystem::term(const std::string& var) const {
  auto it = terms.find(var);
  if (it == terms.end()) throw Error("no equation for variable " + var);
  return it->second;
}

SystemKind classify_system(const ModalSystem& system) {
  VarSet zs(system.vars.begin(), system.vars.end());
  bool semi = true, simple = true;
  for (const std::string& z : system.vars) {
    const Formula& t = system.term(z);
    semi = semi && is_semisimple_term(t, zs);
    simple = simple && is_simple_term(t, zs);
  }
  if (simple) return SystemKind::Simple;
  if (semi) return SystemKind::SemiSimple;
  return SystemKind::General;
}

namespace {

std::vector<Formula> disjuncts_of(const Formula& f) {
  if (f.is(Kind::Bot)) return {};
  if (f.is(Kind::Or)) return f.kids();
  return {f};
}

// Splits a pure nabla/x argument into its optional x conjunct and the
// remaining special conjunction, if any.
struct PureElement {
  bool has_x = false;
  std::optional<Formula> sc;  // the nabla-carrying part
};

PureElement split_pure_element(const Formula& e, const std::string& x) {
  PureElement out;
  if (e.is(Kind::Top)) return out;
  if (e.is(Kind::Var) && e.name() == x) {
    out.has_x = true;
    return out;
  }
  std::vector<Formula> rest;
  const std::vector<Formula> parts =
      e.is(Kind::And) ? e.kids() : std::vector<Formula>{e};
  for (const Formula& p : parts) {
    if (p.is(Kind::Var) && p.name() == x)
      out.has_x = true;
    else
      rest.push_back(p);
  }
  if (!rest.empty()) out.sc = canonicalize(Formula::conj(std::move(rest)));
  return out;
}

void collect_special(const Formula& f, const std::string& x, int depth,
                     FormulaSet& all, FormulaSet& nested) {
  PureElement e = split_pure_element(f, x);
  if (!e.sc) return;
  const Formula& sc = *e.sc;
  all.insert(sc);
  if (depth > 0) nested.insert(sc);
  for (const Formula& part : sc.is(Kind::And) ? sc.kids()
                                              : std::vector<Formula>{sc})
    if (part.is(Kind::Nabla))
      for (const Formula& arg : part.kids())
        collect_special(arg, x, depth + 1, all, nested);
}

}  // namespace

RelevantSubformulas relevant_subformulas(const Formula& gamma,
                                         const std::string& x) {
  ActionSet actions = actions_of(gamma);
  if (!is_pure_nbx(gamma, x, actions))
    throw Error("relevant_subformulas: input is not a disjunction of pure "
                "nabla/x formulas");
  FormulaSet all, nested;
  for (const Formula& d : disjuncts_of(canonicalize(gamma)))
    collect_special(d, x, 0, all, nested);
  RelevantSubformulas out;
  out.special.assign(all.begin(), all.end());
  out.nested.assign(nested.begin(), nested.end());
  out.relevant.push_back(canonicalize(gamma));
  for (const Formula& f : out.nested)
    if (f != out.relevant.front()) out.relevant.push_back(f);
  return out;
}

namespace {

// Replaces the special-conjunction arguments of sc by their system
// variables, leaving T and x arguments alone.
Formula hat_special(const Formula& sc, const std::string& x,
                    const std::map<Formula, std::string, FormulaLess>& var_of) {
  std::vector<Formula> parts;
  for (const Formula& part : sc.is(Kind::And) ? sc.kids()
                                              : std::vector<Formula>{sc}) {
    if (!part.is(Kind::Nabla)) {
      parts.push_back(part);
      continue;
    }
    std::vector<Formula> elems;
    for (const Formula& arg : part.kids()) {
      PureElement e = split_pure_element(arg, x);
      if (!e.sc) {
        elems.push_back(arg);  // T or bare x
        continue;
      }
      auto it = var_of.find(*e.sc);
      if (it == var_of.end())
        throw Error("build_system: nested conjunction not registered");
      Formula zvar = Formula::var(it->second);
      elems.push_back(e.has_x
                          ? canonicalize(Formula::conj(
                                {Formula::var(x), std::move(zvar)}))
                          : zvar);
    }
    parts.push_back(Formula::nabla(part.action(), std::move(elems)));
  }
  return canonicalize(Formula::conj(std::move(parts)));
}

}  // namespace

SystemRepresentation build_system(const Formula& gamma, const std::string& x) {
  if (!is_guarded(gamma, x))
    throw Error("build_system: " + x + " must be guarded");
  RelevantSubformulas rsf = relevant_subformulas(gamma, x);

  SystemRepresentation rep;
  rep.x = x;
  rep.system.point = "z_g";
  rep.system.vars.push_back("z_g");
  rep.subformula["z_g"] = rsf.relevant.front();
  std::map<Formula, std::string, FormulaLess> var_of;
  int counter = 0;
  for (const Formula& psi : rsf.nested) {
    std::string name = "z" + std::to_string(++counter);
    rep.system.vars.push_back(name);
    rep.subformula[name] = psi;
    var_of.emplace(psi, name);
  }

  const std::map<std::string, Formula> close_x{{x, Formula::var("z_g")}};
  for (const std::string& z : rep.system.vars) {
    const Formula& psi = rep.subformula.at(z);
    Formula rho;
    if (z == "z_g") {
      std::vector<Formula> parts;
      for (const Formula& d : disjuncts_of(psi))
        parts.push_back(d.is(Kind::Top) ? d : hat_special(d, x, var_of));
      rho = canonicalize(Formula::disj(std::move(parts)));
    } else {
      rho = hat_special(psi, x, var_of);
    }
    rep.system.terms[z] = canonicalize(substitute(rho, close_x));
  }
  return rep;
}

std::vector<std::vector<int>> proper_subsets(int n) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    out.push_back(std::move(subset));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) {
                     if (a.size() != b.size()) return a.size() < b.size();
                     return a < b;
                   });
  return out;
}

namespace {

std::string var_suffix(const std::string& var) {
  std::string s = var;
  if (s.size() > 1 && s[0] == 'z') s = s.substr(1);
  if (!s.empty() && s[0] == '_') s = s.substr(1);
  return s.empty() ? var : s;
}

}  // namespace

std::string subset_var_name(const std::vector<std::string>& vars,
                            const std::vector<int>& subset) {
  std::string name = "y_";
  for (int i : subset) name += var_suffix(vars[i]);
  return name;
}

ModalSystem simulate(const ModalSystem& system, bool simplify,
                     bool reachable_only) {
  if (classify_system(system) == SystemKind::General)
    throw Error("simulate: input system is not semi-simple");
  const std::vector<std::string>& zs = system.vars;
  std::map<std::set<std::string>, std::string> name_of;
  std::vector<std::vector<int>> subsets = proper_subsets(
      static_cast<int>(zs.size()));
  for (const auto& subset : subsets) {
    std::set<std::string> members;
    for (int i : subset) members.insert(zs[i]);
    name_of.emplace(std::move(members), subset_var_name(zs, subset));
  }

  // Replaces each variable-conjunction argument by its subset variable.
  auto to_simple = [&](const Formula& merged) {
    std::vector<Formula> out_disjuncts;
    for (const Formula& d : disjuncts_of(merged)) {
      std::vector<Formula> parts;
      for (const Formula& part : d.is(Kind::And) ? d.kids()
                                                 : std::vector<Formula>{d}) {
        if (!part.is(Kind::Nabla)) {
          parts.push_back(part);
          continue;
        }
        std::vector<Formula> elems;
        for (const Formula& arg : part.kids()) {
          if (arg.is(Kind::Top)) {
            elems.push_back(arg);
            continue;
          }
          std::set<std::string> members;
          for (const Formula& v :
               arg.is(Kind::And) ? arg.kids() : std::vector<Formula>{arg})
            members.insert(v.name());
          elems.push_back(Formula::var(name_of.at(members)));
        }
        parts.push_back(Formula::nabla(part.action(), std::move(elems)));
      }
      out_disjuncts.push_back(canonicalize(Formula::conj(std::move(parts))));
    }
    return canonicalize(Formula::disj(std::move(out_disjuncts)));
  };

  std::set<std::string> all_names;
  for (const auto& [members, name] : name_of) all_names.insert(name);

  ModalSystem out;
  std::map<std::string, std::set<std::string>> references;
  for (const auto& subset : subsets) {
    std::vector<Formula> terms;
    std::set<std::string> members;
    for (int i : subset) {
      terms.push_back(system.term(zs[i]));
      members.insert(zs[i]);
    }
    Formula sigma = to_simple(merge_semisimple(terms, zs, simplify));
    std::string name = name_of.at(members);
    out.vars.push_back(name);
    out.terms[name] = sigma;
    std::set<std::string>& refs = references[name];
    for (const std::string& v : free_vars(sigma))
      if (all_names.count(v)) refs.insert(v);
  }
  if (system.point) out.point = name_of.at({*system.point});

  if (reachable_only && out.point) {
    std::set<std::string> seen{*out.point};
    std::vector<std::string> todo{*out.point};
    while (!todo.empty()) {
      std::string cur = todo.back();
      todo.pop_back();
      for (const std::string& next : references[cur])
        if (seen.insert(next).second) todo.push_back(next);
    }
    ModalSystem pruned;
    pruned.point = out.point;
    for (const std::string& v : out.vars)
      if (seen.count(v)) {
        pruned.vars.push_back(v);
        pruned.terms[v] = out.terms[v];
      }
    out = std::move(pruned);
  }
  return out;
}

std::string to_text(const ModalSystem& system) {
  std::string out;
  for (const std::string& v : system.vars) {
    if (system.point && *system.point == v) out += '*';
    out += v + " = " + render(system.term(v)) + "\n";
  }
  return out;
}

Json to_json(const ModalSystem& system) {
  Json j;
  j["vars"] = system.vars;
  if (system.point) j["point"] = *system.point;
  j["kind"] = to_string(classify_system(system));
  Json eqs = Json::object();
  for (const std::string& v : system.vars) eqs[v] = render(system.term(v));
  j["terms"] = std::move(eqs);
  return j;
}

ModalSystem system_from_json(const Json& j) {
  ModalSystem out;
  out.vars = j.at("vars").get<std::vector<std::string>>();
  if (j.contains("point")) out.point = j.at("point").get<std::string>();
  for (const std::string& v : out.vars) {
    std::string text = j.at("terms").at(v).get<std::string>();
    out.terms[v] = parse_formula(text);
  }
  return out;
}

}  // namespace flatfix
