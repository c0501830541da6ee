#include "flatfix/axioms.hpp"

#include <algorithm>

#include "flatfix/analysis.hpp"
#include "flatfix/error.hpp"
#include "flatfix/normal_form.hpp"
#include "flatfix/parser.hpp"

namespace flatfix {

namespace {

Formula sharp_of_params(const SignaturePtr& sig) {
  std::vector<Formula> args;
  for (const std::string& p : sig->params) args.push_back(Formula::var(p));
  return Formula::sharp(sig, std::move(args));
}

// A rule variable not clashing with the parameters or the fixpoint variable.
std::string fresh_rule_var(const SharpSignature& sig) {
  std::string y = "y";
  auto taken = [&](const std::string& v) {
    return v == sig.x ||
           std::find(sig.params.begin(), sig.params.end(), v) != sig.params.end();
  };
  for (int i = 0; taken(y); ++i) y = "y" + std::to_string(i);
  return y;
}

}  // namespace

AxiomSet kozen_park(const SignaturePtr& sig) {
  AxiomSet out;
  out.system = "kff";
  out.connective = sig->name;
  out.signature_decl = render_signature(*sig);

  Formula sharp = sharp_of_params(sig);
  out.axioms.push_back(Axiom{
      "sharp-prefix",
      {canonicalize(substitute(sig->body, {{sig->x, sharp}})), sharp}});

  const std::string y = fresh_rule_var(*sig);
  Rule least;
  least.name = "sharp-least";
  least.premises.push_back(
      {canonicalize(substitute(sig->body, {{sig->x, Formula::var(y)}})),
       Formula::var(y)});
  least.conclusion = {sharp, Formula::var(y)};
  out.rules.push_back(std::move(least));
  return out;
}

ChiMap make_chi(const SystemRepresentation& rep, const SignaturePtr& sig) {
  if (!rep.system.point)
    throw Error("make_chi: system representation must be pointed");
  ChiMap out;
  for (const std::string& z : rep.system.vars)
    out.chi[z] = z == *rep.system.point ? Formula::var(rep.x)
                                        : rep.subformula.at(z);

  const std::map<std::string, Formula> close{{rep.x, sharp_of_params(sig)}};
  auto subsets = proper_subsets(static_cast<int>(rep.system.vars.size()));
  for (const auto& subset : subsets) {
    std::vector<Formula> parts;
    for (int i : subset)
      parts.push_back(substitute(out.chi.at(rep.system.vars[i]), close));
    out.chi_sharp[subset_var_name(rep.system.vars, subset)] =
        canonicalize(Formula::conj(std::move(parts)));
  }
  return out;
}

AxiomSet plus_axioms(const SignaturePtr& sig, const ModalSystem& tplus,
                     const ChiMap& chi, bool lean) {
  if (classify_system(tplus) != SystemKind::Simple)
    throw Error("plus_axioms: simulated system must be simple");
  AxiomSet out;
  if (!lean) {
    out = kozen_park(sig);
  } else {
    out.connective = sig->name;
    out.signature_decl = render_signature(*sig);
  }
  out.system = "kffplus";

  std::map<std::string, Formula> chi_subst(chi.chi_sharp.begin(),
                                           chi.chi_sharp.end());
  for (const std::string& y : tplus.vars) {
    if (!chi.chi_sharp.count(y))
      throw Error("plus_axioms: no chi for subset variable " + y);
    out.axioms.push_back(
        Axiom{"A_" + y.substr(2),
              {canonicalize(substitute(tplus.term(y), chi_subst)),
               chi.chi_sharp.at(y)}});
  }
  for (const std::string& y : tplus.vars) {
    Rule rule;
    rule.name = "R_" + y.substr(2);
    for (const std::string& q : tplus.vars)
      rule.premises.push_back({tplus.term(q), Formula::var(q)});
    rule.conclusion = {chi.chi_sharp.at(y), Formula::var(y)};
    out.rules.push_back(std::move(rule));
  }
  return out;
}

Pipeline run_pipeline(const SignaturePtr& sig, const ActionSet& actions) {
  Pipeline out;
  ActionSet all = actions;
  for (const std::string& a : actions_of(sig->body)) all.insert(a);
  if (all.empty()) all.insert("a");
  out.guarded = guard_split(sig->body, sig->x);
  out.preprocessed = to_pure_nbx(out.guarded, sig->x, all);
  out.rep = build_system(out.preprocessed, sig->x);
  out.tplus = simulate(out.rep.system);
  out.chi = make_chi(out.rep, sig);
  return out;
}

namespace {

std::string render_impl(const Implication& impl, const std::string* implicit) {
  auto side = [&](const Formula& f) {
    std::string s = implicit ? render_implicit(f, *implicit) : render(f);
    if (f.is(Kind::And) || f.is(Kind::Or)) return "(" + s + ")";
    return s;
  };
  return side(impl.lhs) + " -> " + side(impl.rhs);
}

}  // namespace

std::string render_axioms_text(const AxiomSet& set) {
  std::string out;
  out += "system " + set.system + " for " + set.signature_decl + "\n";
  out += "; axioms are implications; each rule derives its conclusion from\n";
  out += "; its premises, closed under uniform substitution (equivalently,\n";
  out += "; the quasi-equation reading: premises globally true force the\n";
  out += "; conclusion globally true)\n";
  for (const Axiom& a : set.axioms)
    out += a.name + ": " + render_impl(a.implication, &set.connective) + "\n";
  for (const Rule& r : set.rules) {
    out += r.name + ":";
    for (std::size_t i = 0; i < r.premises.size(); ++i)
      out += (i ? " ; " : " ") + render_impl(r.premises[i], &set.connective);
    out += " |- " + render_impl(r.conclusion, &set.connective) + "\n";
  }
  return out;
}

Json axioms_to_json(const AxiomSet& set, const ModalSystem* tplus) {
  auto impl = [](const Implication& i) {
    Json j;
    j["lhs"] = render(i.lhs);
    j["rhs"] = render(i.rhs);
    return j;
  };
  Json j;
  j["system"] = set.system;
  j["connective"] = set.connective;
  j["signature"] = set.signature_decl;
  j["axioms"] = Json::array();
  for (const Axiom& a : set.axioms) {
    Json aj = impl(a.implication);
    aj["name"] = a.name;
    j["axioms"].push_back(std::move(aj));
  }
  j["rules"] = Json::array();
  for (const Rule& r : set.rules) {
    Json rj;
    rj["name"] = r.name;
    rj["premises"] = Json::array();
    for (const Implication& p : r.premises)
      rj["premises"].push_back(impl(p));
    rj["conclusion"] = impl(r.conclusion);
    j["rules"].push_back(std::move(rj));
  }
  if (tplus) j["simulation"] = to_json(*tplus);
  return j;
}

AxiomSet axioms_from_json(const Json& j, const SignatureTable& sigs) {
  auto impl = [&](const Json& ij) {
    return Implication{parse_formula(ij.at("lhs").get<std::string>(), sigs),
                       parse_formula(ij.at("rhs").get<std::string>(), sigs)};
  };
  AxiomSet out;
  out.system = j.at("system").get<std::string>();
  out.connective = j.at("connective").get<std::string>();
  out.signature_decl = j.at("signature").get<std::string>();
  for (const Json& aj : j.at("axioms"))
    out.axioms.push_back(
        Axiom{aj.at("name").get<std::string>(), impl(aj)});
  for (const Json& rj : j.at("rules")) {
    Rule r;
    r.name = rj.at("name").get<std::string>();
    for (const Json& pj : rj.at("premises")) r.premises.push_back(impl(pj));
    r.conclusion = impl(rj.at("conclusion"));
    out.rules.push_back(std::move(r));
  }
  return out;
}

}  // namespace flatfix
