#pragma once

#include <string>
#include <vector>

#include "flatfix/eqsystem.hpp"
#include "flatfix/formula.hpp"
#include "flatfix/signature.hpp"

namespace flatfix {

struct Implication {
  Formula lhs, rhs;
};

struct Axiom {
  std::string name;
  Implication implication;
};

struct Rule {
  std::string name;
  std::vector<Implication> premises;
  Implication conclusion;
};

struct AxiomSet {
  std::string system;  // "kff" or "kffplus"
  std::string connective;
  std::string signature_decl;
  std::vector<Axiom> axioms;
  std::vector<Rule> rules;
};

// Kozen-Park axiomatization of one connective: the prefixpoint axiom
// gamma(#(p...), p...) -> #(p...) and the least-prefixpoint rule
// gamma(y, p...) -> y over #(p...) -> y.
AxiomSet kozen_park(const SignaturePtr& sig);

// chi maps each system variable to x (for the point) or to its subformula;
// chi_sharp maps each subset variable of the simulation to the conjunction
// of the chi's with the connective substituted for x.
struct ChiMap {
  std::map<std::string, Formula> chi;        // system variable -> formula
  std::map<std::string, Formula> chi_sharp;  // subset variable -> formula
};

ChiMap make_chi(const SystemRepresentation& rep, const SignaturePtr& sig);

// Axioms A_S: sigma_S with every subset variable replaced by its chi_sharp,
// implying chi_sharp_S. Rules R_S: one premise sigma_Q -> y_Q per subset Q,
// concluding chi_sharp_S -> y_S. Includes the Kozen-Park axiom and rule
// unless `lean` is set.
AxiomSet plus_axioms(const SignaturePtr& sig, const ModalSystem& tplus,
                     const ChiMap& chi, bool lean = false);

// Preprocess, represent, simulate, and read the axioms off, in one go.
struct Pipeline {
  Formula guarded;       // after the unguarded-part split
  Formula preprocessed;  // disjunction of pure nabla/x formulas
  SystemRepresentation rep;
  ModalSystem tplus;
  ChiMap chi;
};

Pipeline run_pipeline(const SignaturePtr& sig, const ActionSet& actions);

std::string render_axioms_text(const AxiomSet& set);
Json axioms_to_json(const AxiomSet& set, const ModalSystem* tplus = nullptr);
AxiomSet axioms_from_json(const Json& j, const SignatureTable& sigs);

}  // namespace flatfix
