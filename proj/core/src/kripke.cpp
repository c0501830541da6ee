#include "flatfix/kripke.hpp"

#include <algorithm>
#include <random>

#include "flatfix/error.hpp"
#include "flatfix/signature.hpp"

namespace flatfix {

void KripkeModel::add_edge(const std::string& action, int from, int to) {
  auto& rel = relations[action];
  rel.resize(state_ids.size(), 0);
  rel[from] |= 1ull << to;
}

namespace {

StateSet eval_rec(const KripkeModel& m, const Env& env, const Formula& f);

StateSet lookup(const KripkeModel& m, const Env& env, const std::string& name) {
  if (auto it = env.find(name); it != env.end()) return it->second;
  if (auto it = m.valuation.find(name); it != m.valuation.end())
    return it->second;
  throw Error("eval: unassigned variable " + name);
}

StateSet eval_nabla(const KripkeModel& m, const Env& env, const Formula& f) {
  std::vector<StateSet> members;
  members.reserve(f.kids().size());
  for (const Formula& e : f.kids()) members.push_back(eval_rec(m, env, e));
  StateSet cover = 0;
  for (StateSet s : members) cover |= s;
  StateSet out = 0;
  for (int s = 0; s < m.size(); ++s) {
    StateSet succ = m.successors(f.action(), s);
    if ((succ & ~cover) != 0) continue;
    bool ok = true;
    for (StateSet mem : members)
      if ((succ & mem) == 0) {
        ok = false;
        break;
      }
    if (ok) out |= 1ull << s;
  }
  return out;
}

StateSet eval_sharp(const KripkeModel& m, const Env& env, const Formula& f) {
  const SharpSignature& sig = *f.sig();
  Env inner;
  for (std::size_t i = 0; i < sig.params.size(); ++i)
    inner[sig.params[i]] = eval_rec(m, env, f.kids()[i]);
  StateSet current = 0;
  for (int round = 0; round <= m.size(); ++round) {
    inner[sig.x] = current;
    StateSet next = eval_rec(m, inner, sig.body);
    if ((current & ~next) != 0)
      throw Error("eval: non-monotone sharp iteration (polarity bug)");
    if (next == current) return current;
    current = next;
  }
  throw Error("eval: sharp iteration exceeded its bound");
}

StateSet eval_rec(const KripkeModel& m, const Env& env, const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
      return m.universe();
    case Kind::Bot:
      return 0;
    case Kind::Var:
      return lookup(m, env, f.name());
    case Kind::Neg:
      return m.universe() & ~eval_rec(m, env, f.child());
    case Kind::And: {
      StateSet out = m.universe();
      for (const Formula& k : f.kids()) out &= eval_rec(m, env, k);
      return out;
    }
    case Kind::Or: {
      StateSet out = 0;
      for (const Formula& k : f.kids()) out |= eval_rec(m, env, k);
      return out;
    }
    case Kind::Dia: {
      StateSet target = eval_rec(m, env, f.child());
      StateSet out = 0;
      for (int s = 0; s < m.size(); ++s)
        if (m.successors(f.action(), s) & target) out |= 1ull << s;
      return out;
    }
    case Kind::Box: {
      StateSet target = eval_rec(m, env, f.child());
      StateSet out = 0;
      for (int s = 0; s < m.size(); ++s)
        if ((m.successors(f.action(), s) & ~target) == 0) out |= 1ull << s;
      return out;
    }
    case Kind::Nabla:
      return eval_nabla(m, env, f);
    case Kind::Sharp:
      return eval_sharp(m, env, f);
  }
  throw Error("eval: unreachable");
}

}  // namespace

StateSet eval(const KripkeModel& model, const Env& env, const Formula& f) {
  return eval_rec(model, env, f);
}

LfpResult lfp_formula(const KripkeModel& model, const Env& env,
                      const Formula& body, const std::string& x) {
  LfpResult out;
  Env local = env;
  StateSet current = 0;
  out.trace.push_back(current);
  for (int round = 0; round <= model.size(); ++round) {
    local[x] = current;
    StateSet next = eval(model, local, body);
    if ((current & ~next) != 0)
      throw Error("lfp_formula: decreasing iteration step (polarity bug)");
    if (next == current) {
      out.fixpoint = current;
      return out;
    }
    current = next;
    out.trace.push_back(current);
  }
  throw Error("lfp_formula: iteration exceeded its bound");
}

SystemLfpResult lfp_system(const KripkeModel& model, const Env& env,
                           const ModalSystem& system) {
  SystemLfpResult out;
  const int n = static_cast<int>(system.vars.size());
  std::vector<StateSet> current(n, 0);
  out.trace.push_back(current);
  Env local = env;
  int bound = model.size() * n + 1;
  for (int round = 0; round < bound; ++round) {
    for (int i = 0; i < n; ++i) local[system.vars[i]] = current[i];
    std::vector<StateSet> next(n);
    for (int i = 0; i < n; ++i)
      next[i] = eval(model, local, system.term(system.vars[i]));
    bool stable = true;
    for (int i = 0; i < n; ++i) {
      if ((current[i] & ~next[i]) != 0)
        throw Error("lfp_system: decreasing iteration step (polarity bug)");
      stable = stable && next[i] == current[i];
    }
    if (stable) {
      out.fixpoint = current;
      return out;
    }
    current = std::move(next);
    out.trace.push_back(current);
  }
  throw Error("lfp_system: iteration exceeded its bound");
}

std::vector<StateSet> iota(const std::vector<StateSet>& zvec) {
  std::vector<StateSet> out;
  for (const auto& subset : proper_subsets(static_cast<int>(zvec.size()))) {
    StateSet v = ~0ull;
    for (int i : subset) v &= zvec[i];
    out.push_back(v);
  }
  return out;
}

KripkeModel random_model(std::uint64_t seed, int max_states,
                         const std::set<std::string>& actions,
                         const std::set<std::string>& props) {
  if (max_states < 1 || max_states > 64)
    throw Error("random_model: state bound out of range");
  std::mt19937_64 rng(seed);
  int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_states));
  KripkeModel m;
  for (int i = 0; i < n; ++i) m.state_ids.push_back(i);
  for (const std::string& a : actions) {
    auto& rel = m.relations[a];
    rel.assign(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng() & 1) rel[i] |= 1ull << j;
  }
  for (const std::string& p : props) {
    StateSet v = 0;
    for (int i = 0; i < n; ++i)
      if (rng() & 1) v |= 1ull << i;
    m.valuation[p] = v;
  }
  return m;
}

std::vector<KripkeModel> all_models(int max_states,
                                    const std::set<std::string>& actions,
                                    const std::set<std::string>& props) {
  std::vector<KripkeModel> out;
  for (int n = 1; n <= max_states; ++n) {
    std::uint64_t rel_bits = static_cast<std::uint64_t>(n) * n;
    std::uint64_t rel_count = 1ull << (rel_bits * actions.size());
    std::uint64_t val_count = 1ull << (static_cast<std::uint64_t>(n) * props.size());
    if (rel_bits * actions.size() + n * props.size() > 24)
      throw Error("all_models: vocabulary too large to enumerate");
    for (std::uint64_t r = 0; r < rel_count; ++r) {
      KripkeModel base;
      for (int i = 0; i < n; ++i) base.state_ids.push_back(i);
      std::uint64_t bits = r;
      for (const std::string& a : actions) {
        auto& rel = base.relations[a];
        rel.assign(n, 0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (bits & 1) rel[i] |= 1ull << j;
            bits >>= 1;
          }
      }
      for (std::uint64_t v = 0; v < val_count; ++v) {
        KripkeModel m = base;
        std::uint64_t vb = v;
        for (const std::string& p : props) {
          StateSet mask = 0;
          for (int i = 0; i < n; ++i) {
            if (vb & 1) mask |= 1ull << i;
            vb >>= 1;
          }
          m.valuation[p] = mask;
        }
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

Json model_to_json(const KripkeModel& model) {
  Json j;
  j["states"] = model.state_ids;
  Json rels = Json::object();
  for (const auto& [action, rel] : model.relations) {
    Json pairs = Json::array();
    for (int i = 0; i < model.size(); ++i)
      for (int k = 0; k < model.size(); ++k)
        if (rel[i] & (1ull << k))
          pairs.push_back({model.state_ids[i], model.state_ids[k]});
    rels[action] = std::move(pairs);
  }
  j["relations"] = std::move(rels);
  Json val = Json::object();
  for (const auto& [prop, mask] : model.valuation) {
    Json ids = Json::array();
    for (int i = 0; i < model.size(); ++i)
      if (mask & (1ull << i)) ids.push_back(model.state_ids[i]);
    val[prop] = std::move(ids);
  }
  j["valuation"] = std::move(val);
  return j;
}

KripkeModel model_from_json(const Json& j) {
  KripkeModel m;
  m.state_ids = j.at("states").get<std::vector<long long>>();
  if (m.state_ids.size() > 64) throw Error("model: more than 64 states");
  std::map<long long, int> index;
  for (int i = 0; i < m.size(); ++i) {
    if (!index.emplace(m.state_ids[i], i).second)
      throw Error("model: duplicate state id");
  }
  auto state_index = [&](const Json& id) {
    auto it = index.find(id.get<long long>());
    if (it == index.end())
      throw Error("model: unknown state id " + id.dump());
    return it->second;
  };
  if (j.contains("relations"))
    for (const auto& [action, pairs] : j.at("relations").items()) {
      auto& rel = m.relations[action];
      rel.assign(m.size(), 0);
      for (const Json& pair : pairs) {
        if (!pair.is_array() || pair.size() != 2)
          throw Error("model: relation entries must be [from, to] pairs");
        rel[state_index(pair[0])] |= 1ull << state_index(pair[1]);
      }
    }
  if (j.contains("valuation"))
    for (const auto& [prop, ids] : j.at("valuation").items()) {
      StateSet mask = 0;
      for (const Json& id : ids) mask |= 1ull << state_index(id);
      m.valuation[prop] = mask;
    }
  return m;
}

CompiledFormula::CompiledFormula(const Formula& f,
                                 const std::vector<std::string>& variables) {
  inputs_ = variables.size();
  slots_ = inputs_;
  std::map<std::string, int> scope;
  for (std::size_t i = 0; i < variables.size(); ++i)
    scope[variables[i]] = static_cast<int>(i);
  root_ = compile(f, scope);
}

int CompiledFormula::compile(const Formula& f,
                             const std::map<std::string, int>& scope) {
  auto action_index = [&](const std::string& a) {
    for (std::size_t i = 0; i < actions_.size(); ++i)
      if (actions_[i] == a) return static_cast<int>(i);
    actions_.push_back(a);
    return static_cast<int>(actions_.size() - 1);
  };
  Node node;
  node.kind = f.kind();
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
      break;
    case Kind::Var: {
      auto it = scope.find(f.name());
      if (it == scope.end())
        throw Error("compile: unassigned variable " + f.name());
      node.slot = it->second;
      break;
    }
    case Kind::Dia:
    case Kind::Box:
    case Kind::Nabla:
      node.action = action_index(f.action());
      [[fallthrough]];
    case Kind::Neg:
    case Kind::And:
    case Kind::Or:
      for (const Formula& k : f.kids()) node.kids.push_back(compile(k, scope));
      break;
    case Kind::Sharp: {
      const SharpSignature& sig = *f.sig();
      for (const Formula& a : f.kids()) node.kids.push_back(compile(a, scope));
      std::map<std::string, int> inner;
      node.xslot = static_cast<int>(slots_++);
      inner[sig.x] = node.xslot;
      for (const std::string& p : sig.params) {
        int s = static_cast<int>(slots_++);
        node.params.push_back(s);
        inner[p] = s;
      }
      node.body = compile(sig.body, inner);
      break;
    }
  }
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size() - 1);
}

CompiledFormula::Binding CompiledFormula::bind(const KripkeModel& model) const {
  Binding b;
  b.model = &model;
  b.universe = model.universe();
  b.states = model.size();
  for (const std::string& a : actions_) {
    auto it = model.relations.find(a);
    b.relations.push_back(it == model.relations.end() ? nullptr : &it->second);
  }
  return b;
}

StateSet CompiledFormula::run(int index, const Binding& b,
                              std::vector<StateSet>& slots) const {
  const Node& node = nodes_[index];
  switch (node.kind) {
    case Kind::Top:
      return b.universe;
    case Kind::Bot:
      return 0;
    case Kind::Var:
      return slots[node.slot];
    case Kind::Neg:
      return b.universe & ~run(node.kids[0], b, slots);
    case Kind::And: {
      StateSet out = b.universe;
      for (int k : node.kids) out &= run(k, b, slots);
      return out;
    }
    case Kind::Or: {
      StateSet out = 0;
      for (int k : node.kids) out |= run(k, b, slots);
      return out;
    }
    case Kind::Dia: {
      StateSet target = run(node.kids[0], b, slots);
      const std::vector<StateSet>* rel = b.relations[node.action];
      if (!rel) return 0;
      StateSet out = 0;
      for (int s = 0; s < b.states; ++s)
        if ((*rel)[s] & target) out |= 1ull << s;
      return out;
    }
    case Kind::Box: {
      StateSet target = run(node.kids[0], b, slots);
      const std::vector<StateSet>* rel = b.relations[node.action];
      if (!rel) return b.universe;
      StateSet out = 0;
      for (int s = 0; s < b.states; ++s)
        if (((*rel)[s] & ~target) == 0) out |= 1ull << s;
      return out;
    }
    case Kind::Nabla: {
      StateSet members[64];
      StateSet cover = 0;
      std::size_t n = node.kids.size();
      if (n > 64) throw Error("eval: nabla argument set too large");
      for (std::size_t i = 0; i < n; ++i) {
        members[i] = run(node.kids[i], b, slots);
        cover |= members[i];
      }
      const std::vector<StateSet>* rel = b.relations[node.action];
      StateSet out = 0;
      for (int s = 0; s < b.states; ++s) {
        StateSet succ = rel ? (*rel)[s] : 0;
        if ((succ & ~cover) != 0) continue;
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i)
          if ((succ & members[i]) == 0) {
            ok = false;
            break;
          }
        if (ok) out |= 1ull << s;
      }
      return out;
    }
    case Kind::Sharp: {
      for (std::size_t i = 0; i < node.params.size(); ++i)
        slots[node.params[i]] = run(node.kids[i], b, slots);
      StateSet current = 0;
      for (int round = 0; round <= b.states; ++round) {
        slots[node.xslot] = current;
        StateSet next = run(node.body, b, slots);
        if ((current & ~next) != 0)
          throw Error("eval: non-monotone sharp iteration (polarity bug)");
        if (next == current) return current;
        current = next;
      }
      throw Error("eval: sharp iteration exceeded its bound");
    }
  }
  throw Error("compiled eval: unreachable");
}

StateSet CompiledFormula::eval(const Binding& binding,
                               std::vector<StateSet>& slots) const {
  return run(root_, binding, slots);
}

std::string format_state_set(const KripkeModel& model, StateSet set) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < model.size(); ++i)
    if (set & (1ull << i)) {
      if (!first) out += ",";
      first = false;
      out += std::to_string(model.state_ids[i]);
    }
  return out + "}";
}

}  // namespace flatfix
