#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flatfix/axioms.hpp"
#include "flatfix/check.hpp"
#include "flatfix/kripke.hpp"
#include "flatfix/signature.hpp"

namespace flatfix {

// Built-in connective corpus used by the invariant suite.
const char* builtin_corpus_text();
SignatureTable builtin_corpus();

Formula random_formula(std::mt19937_64& rng, int depth,
                       const std::vector<std::string>& vars,
                       const std::vector<std::string>& actions);

struct SuiteOptions {
  int random_models = 200;
  int max_states = 4;
  std::uint64_t seed = 1;
  bool exhaustive_two_state = false;
  int random_formulas = 200;
  Budget budget;
  // The exhaustive one/two-state corpus multiplies the model count by up to
  // three orders of magnitude, so its per-model budget is tighter; coverage
  // there comes from model diversity.
  Budget two_state_budget{1ull << 14, 32};
};

struct SuiteEntry {
  std::string name;
  bool ok = true;
  std::uint64_t cases = 0;
  std::string detail;
};

struct SuiteReport {
  std::vector<SuiteEntry> entries;
  bool ok() const;
  std::uint64_t total_cases() const;
};

// Model-checked invariants of the whole pipeline: pass-by-pass semantic
// preservation, prefixpoint preservation of the guardedness split, the
// system representation and simulation fixpoint identities, trace
// cofinality, soundness of every emitted axiom and rule over the corpus,
// and the classifier fixtures. Deterministic in the options.
SuiteReport run_suite(const SuiteOptions& options);

std::string report_text(const SuiteReport& report);
Json report_json(const SuiteReport& report);

}  // namespace flatfix
