#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "flatfix/eqsystem.hpp"
#include "flatfix/formula.hpp"

namespace flatfix {

// State sets are bitmasks over the (dense, internal) state indices.
using StateSet = std::uint64_t;

// Finite labeled transition system with a valuation. External state ids are
// preserved; internally states are 0..size()-1 in id order of appearance.
// At most 64 states.
struct KripkeModel {
  std::vector<long long> state_ids;
  // action -> per-state successor mask.
  std::map<std::string, std::vector<StateSet>> relations;
  // proposition -> state mask.
  std::map<std::string, StateSet> valuation;

  int size() const { return static_cast<int>(state_ids.size()); }
  StateSet universe() const {
    int n = size();
    return n >= 64 ? ~0ull : (1ull << n) - 1;
  }
  StateSet successors(const std::string& action, int state) const {
    auto it = relations.find(action);
    return it == relations.end() ? 0 : it->second[state];
  }
  void add_edge(const std::string& action, int from, int to);
};

using Env = std::map<std::string, StateSet>;

// Standard clauses; nab a Phi holds at s iff every successor satisfies some
// member of Phi and every member holds at some successor. Sharp connectives
// evaluate as least fixpoints by iteration. Free variables are looked up in
// env first, then in the model valuation; unassigned variables are an error.
StateSet eval(const KripkeModel& model, const Env& env, const Formula& f);

// Kleene iteration from the empty set; trace[0] is empty, the last entry is
// the fixpoint. Detects non-monotone steps and overrunning the bound
// |states|+1, both of which indicate a broken input.
struct LfpResult {
  StateSet fixpoint = 0;
  std::vector<StateSet> trace;
};

LfpResult lfp_formula(const KripkeModel& model, const Env& env,
                      const Formula& body, const std::string& x);

// Simultaneous iteration of a system from the bottom vector, in system
// variable order; bound |states| * |vars| + 1.
struct SystemLfpResult {
  std::vector<StateSet> fixpoint;
  std::vector<std::vector<StateSet>> trace;  // trace[step][var]
};

SystemLfpResult lfp_system(const KripkeModel& model, const Env& env,
                           const ModalSystem& system);

// Subset intersections: the component for subset S is the intersection of
// the components of S's members, in proper_subsets order.
std::vector<StateSet> iota(const std::vector<StateSet>& zvec);

// Deterministic in the seed: uniform state count in [1, max_states], each
// edge present with probability 1/2, each membership with probability 1/2.
KripkeModel random_model(std::uint64_t seed, int max_states,
                         const std::set<std::string>& actions,
                         const std::set<std::string>& props);

// All models with 1..max_states states over the given vocabulary.
std::vector<KripkeModel> all_models(int max_states,
                                    const std::set<std::string>& actions,
                                    const std::set<std::string>& props);

Json model_to_json(const KripkeModel& model);
KripkeModel model_from_json(const Json& j);

// "{id1,id2,...}" using external ids.
std::string format_state_set(const KripkeModel& model, StateSet set);

// Flattened evaluator for the inner loops of the checkers: variables become
// slots, actions become indices, sharp bodies are compiled into the same
// node pool with private slots. Denotation agrees with eval().
class CompiledFormula {
 public:
  // `variables` must cover all free variables of f; they occupy the first
  // slots in the given order.
  CompiledFormula(const Formula& f, const std::vector<std::string>& variables);

  struct Binding {
    const KripkeModel* model = nullptr;
    StateSet universe = 0;
    int states = 0;
    std::vector<const std::vector<StateSet>*> relations;  // per action index
  };

  Binding bind(const KripkeModel& model) const;

  std::size_t input_count() const { return inputs_; }
  // slots.size() must be slot_count(); the caller fills the first
  // input_count() entries.
  std::size_t slot_count() const { return slots_; }
  StateSet eval(const Binding& binding, std::vector<StateSet>& slots) const;

 private:
  struct Node {
    Kind kind;
    int slot = -1;    // Var
    int action = -1;  // Dia/Box/Nabla
    int body = -1;    // Sharp body root
    int xslot = -1;   // Sharp iteration slot
    std::vector<int> kids;
    std::vector<int> params;  // Sharp parameter slots
  };
  int compile(const Formula& f, const std::map<std::string, int>& scope);
  StateSet run(int node, const Binding& b, std::vector<StateSet>& slots) const;

  std::vector<Node> nodes_;
  std::vector<std::string> actions_;
  std::size_t inputs_ = 0;
  std::size_t slots_ = 0;
  int root_ = -1;
};

}  // namespace flatfix
