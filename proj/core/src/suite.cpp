#include "flatfix/suite.hpp"

#include <algorithm>
#include <sstream>

#include "flatfix/analysis.hpp"
#include "flatfix/classify.hpp"
#include "flatfix/error.hpp"
#include "flatfix/normal_form.hpp"
#include "flatfix/parser.hpp"

namespace flatfix {

const char* builtin_corpus_text() {
  return R"(# Connective corpus for the invariant suite.
delta(x; p) := p | <a>x
theta(x; p, q) := p | (q & <a>x)
eta(x; p, q) := p | (q & [a]x)
ex1(x; p) := (p & [a]x) | (~p & <a>(x & <a>x))
agbox(x; p) := p & [a]x
dia(x;) := <a>x
bx(x;) := [a]x
nested(x; p) := p | <a><a>x
until2(x; p, q) := q | (p & <a>x)
twoact(x; p) := <a>x | [b](x | p)
nabform(x; p) := nab a {x, p | x}
unguarded(x; p) := x | (p & <a>x)
ddeep(x;) := <a>(x & <a>(x & <a>x))
)";
}

SignatureTable builtin_corpus() {
  return parse_signature_file(builtin_corpus_text());
}

Formula random_formula(std::mt19937_64& rng, int depth,
                       const std::vector<std::string>& vars,
                       const std::vector<std::string>& actions) {
  auto pick_var = [&] { return vars[rng() % vars.size()]; };
  auto pick_action = [&] { return actions[rng() % actions.size()]; };
  if (depth <= 0) {
    switch (rng() % 5) {
      case 0:
        return Formula::top();
      case 1:
        return Formula::bot();
      case 2:
        return Formula::neg(Formula::var(pick_var()));
      default:
        return Formula::var(pick_var());
    }
  }
  switch (rng() % 12) {
    case 0:
      return Formula::top();
    case 1:
      return Formula::bot();
    case 2:
    case 3:
      return Formula::var(pick_var());
    case 4:
      return Formula::neg(random_formula(rng, depth - 1, vars, actions));
    case 5:
    case 6: {
      std::vector<Formula> kids;
      for (std::size_t i = 0, n = 2 + rng() % 2; i < n; ++i)
        kids.push_back(random_formula(rng, depth - 1, vars, actions));
      return Formula::conj(std::move(kids));
    }
    case 7:
    case 8: {
      std::vector<Formula> kids;
      for (std::size_t i = 0, n = 2 + rng() % 2; i < n; ++i)
        kids.push_back(random_formula(rng, depth - 1, vars, actions));
      return Formula::disj(std::move(kids));
    }
    case 9:
      return Formula::dia(pick_action(),
                          random_formula(rng, depth - 1, vars, actions));
    case 10:
      return Formula::box(pick_action(),
                          random_formula(rng, depth - 1, vars, actions));
    default: {
      std::vector<Formula> elems;
      for (std::size_t i = 0, n = rng() % 3; i < n; ++i)
        elems.push_back(random_formula(rng, depth - 1, vars, actions));
      return Formula::nabla(pick_action(), std::move(elems));
    }
  }
}

bool SuiteReport::ok() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const SuiteEntry& e) { return e.ok; });
}

std::uint64_t SuiteReport::total_cases() const {
  std::uint64_t n = 0;
  for (const SuiteEntry& e : entries) n += e.cases;
  return n;
}

namespace {

struct Entry {
  SuiteEntry data;
  explicit Entry(std::string name) { data.name = std::move(name); }
  void require(bool ok, const std::string& detail) {
    ++data.cases;
    if (!ok && data.ok) {
      data.ok = false;
      data.detail = detail;
    }
  }
};

// System terms compiled against the layout [vars..., params...], with the
// parameters bound from the model valuation.
struct CompiledSystem {
  std::vector<std::string> vars;
  std::vector<std::string> params;
  std::vector<CompiledFormula> terms;
  std::size_t max_slots = 0;

  CompiledSystem() = default;
  CompiledSystem(const ModalSystem& system,
                 const std::vector<std::string>& parameters)
      : vars(system.vars), params(parameters) {
    std::vector<std::string> layout = vars;
    layout.insert(layout.end(), params.begin(), params.end());
    for (const std::string& v : vars) terms.emplace_back(system.term(v), layout);
    max_slots = layout.size();
    for (const CompiledFormula& c : terms)
      max_slots = std::max(max_slots, c.slot_count());
  }

  // Simultaneous iteration from bottom; trace.front() is the zero vector and
  // trace.back() the fixpoint.
  std::vector<std::vector<StateSet>> lfp_trace(const KripkeModel& m) const {
    std::vector<CompiledFormula::Binding> b;
    b.reserve(terms.size());
    for (const CompiledFormula& c : terms) b.push_back(c.bind(m));
    std::vector<StateSet> slots(max_slots, 0);
    for (std::size_t i = 0; i < params.size(); ++i)
      slots[vars.size() + i] = m.valuation.at(params[i]);
    const std::size_t n = vars.size();
    std::vector<std::vector<StateSet>> trace{std::vector<StateSet>(n, 0)};
    const int bound = m.size() * static_cast<int>(n) + 1;
    for (int round = 0; round < bound; ++round) {
      for (std::size_t i = 0; i < n; ++i) slots[i] = trace.back()[i];
      std::vector<StateSet> next(n);
      bool stable = true;
      for (std::size_t i = 0; i < n; ++i) {
        next[i] = terms[i].eval(b[i], slots);
        if ((trace.back()[i] & ~next[i]) != 0)
          throw Error("suite: decreasing iteration step");
        stable = stable && next[i] == trace.back()[i];
      }
      if (stable) return trace;
      trace.push_back(std::move(next));
    }
    throw Error("suite: iteration exceeded its bound");
  }
};

struct SigContext {
  SignaturePtr sig;
  Pipeline pipeline;
  std::set<std::string> actions;
  std::set<std::string> props;
  std::vector<KripkeModel> models;      // seeded random models
  std::vector<KripkeModel> exhaustive;  // all one- and two-state models
  CompiledSystem zsys, ysys;
  // The preprocessed formula and the relevant subformulas, over [x, params].
  std::vector<std::string> xlayout;
  std::vector<CompiledFormula> subformulas;  // in system variable order
};

std::vector<SigContext> make_contexts(const SignatureTable& sigs,
                                      const SuiteOptions& opt) {
  std::vector<SigContext> out;
  std::uint64_t salt = 0;
  for (const auto& [name, sig] : sigs) {
    SigContext ctx;
    ctx.sig = sig;
    ctx.actions = actions_of(sig->body);
    if (ctx.actions.empty()) ctx.actions.insert("a");
    ctx.props.insert(sig->params.begin(), sig->params.end());
    ctx.pipeline = run_pipeline(sig, ctx.actions);
    for (int i = 0; i < opt.random_models; ++i)
      ctx.models.push_back(random_model(opt.seed + 7919 * salt + i,
                                        opt.max_states, ctx.actions,
                                        ctx.props));
    if (opt.exhaustive_two_state)
      ctx.exhaustive = all_models(2, ctx.actions, ctx.props);
    ctx.zsys = CompiledSystem(ctx.pipeline.rep.system, sig->params);
    ctx.ysys = CompiledSystem(ctx.pipeline.tplus, sig->params);
    ctx.xlayout.push_back(sig->x);
    ctx.xlayout.insert(ctx.xlayout.end(), sig->params.begin(),
                       sig->params.end());
    for (const std::string& z : ctx.pipeline.rep.system.vars)
      ctx.subformulas.emplace_back(ctx.pipeline.rep.subformula.at(z),
                                   ctx.xlayout);
    ++salt;
    out.push_back(std::move(ctx));
  }
  return out;
}

template <typename Fn>
void for_each_model(const SigContext& ctx, const Fn& fn) {
  for (const KripkeModel& m : ctx.models) fn(m, false);
  for (const KripkeModel& m : ctx.exhaustive) fn(m, true);
}

std::string describe(const SignaturePtr& sig, const KripkeModel& m,
                     const std::string& what) {
  return sig->name + ": " + what + " on model " + model_to_json(m).dump();
}

StateSet trace_at(const std::vector<StateSet>& trace, std::size_t n) {
  return n < trace.size() ? trace[n] : trace.back();
}

// Kleene trace of a single formula in x, parameters from the valuation.
std::vector<StateSet> formula_trace(const CompiledFormula& pre,
                                    const std::vector<std::string>& params,
                                    const KripkeModel& m) {
  auto b = pre.bind(m);
  std::vector<StateSet> slots(pre.slot_count(), 0);
  for (std::size_t i = 0; i < params.size(); ++i)
    slots[1 + i] = m.valuation.at(params[i]);
  std::vector<StateSet> trace{0};
  for (int round = 0; round <= m.size(); ++round) {
    slots[0] = trace.back();
    StateSet next = pre.eval(b, slots);
    if ((trace.back() & ~next) != 0)
      throw Error("suite: decreasing iteration step");
    if (next == trace.back()) return trace;
    trace.push_back(next);
  }
  throw Error("suite: iteration exceeded its bound");
}

// ---- Entries --------------------------------------------------------------

void check_normal_forms(Entry& e, const SuiteOptions& opt) {
  std::mt19937_64 rng(opt.seed * 31337 + 17);
  const std::vector<std::vector<std::string>> var_choices = {
      {"x", "p"}, {"x", "q"}, {"p", "q"}, {"x"}};
  const std::vector<std::vector<std::string>> action_choices = {
      {"a"}, {"a", "b"}};
  // The pure normal forms are exponential by nature; formulas whose lifted
  // form exceeds the size guard are counted here and bounded below.
  int skipped = 0;
  auto too_large = [](const Error& err) {
    return std::string(err.what()).find("too large") != std::string::npos;
  };
  for (int i = 0; i < opt.random_formulas; ++i) {
    const auto& vars = var_choices[rng() % var_choices.size()];
    const auto& acts = action_choices[rng() % action_choices.size()];
    Formula f = canonicalize(random_formula(rng, 3, vars, acts));
    ActionSet actions(acts.begin(), acts.end());

    Formula nb = to_nabla(f);
    e.require(is_nabla_fragment(nb),
              "to_nabla output not in fragment: " + render(f));

    std::vector<Formula> equivalents{nb};
    try {
      Formula dj = to_disjunctive(nb);
      Formula sp = nabla_simplify(dj);
      e.require(is_disjunctive(dj), "to_disjunctive output: " + render(f));
      e.require(nabla_simplify(sp) == sp,
                "nabla_simplify not idempotent: " + render(f));
      equivalents.push_back(dj);
      equivalents.push_back(sp);
      Formula pd = to_pure_disjunction(nb, actions);
      e.require(is_pure_disjunction(pd, actions),
                "to_pure_disjunction output: " + render(f));
      equivalents.push_back(pd);
    } catch (const Error& err) {
      if (!too_large(err)) throw;
      ++skipped;
    }

    Polarity pol = polarity(f, "x");
    bool positive = pol == Polarity::Positive || pol == Polarity::Absent;
    Formula g2;
    if (positive) {
      g2 = guard_split(f, "x");
      e.require(is_guarded(g2, "x"),
                "guard_split left x unguarded: " + render(f));
      if (is_guarded(f, "x")) {
        try {
          Formula pnb = to_pure_nbx(f, "x", actions);
          e.require(is_pure_nbx(pnb, "x", actions),
                    "to_pure_nbx grammar: " + render(f));
          e.require(is_guarded(pnb, "x"),
                    "to_pure_nbx lost guardedness: " + render(f));
          equivalents.push_back(pnb);
        } catch (const Error& err) {
          if (!too_large(err)) throw;
          ++skipped;
        }
      }
    }

    for (const KripkeModel& m : all_models(2, actions_of(f), free_vars(f))) {
      StateSet base = eval(m, {}, f);
      bool same = true;
      for (const Formula& g : equivalents)
        same = same && eval(m, {}, g) == base;
      e.require(same, "pass changed the denotation of " + render(f));
      if (positive) {
        Env env;
        bool agree = true;
        for (StateSet y = 0;; ++y) {
          env["x"] = y;
          bool pre1 = (eval(m, env, f) & ~y & m.universe()) == 0;
          bool pre2 = (eval(m, env, g2) & ~y & m.universe()) == 0;
          if (pre1 != pre2) {
            agree = false;
            break;
          }
          if (y == m.universe()) break;
        }
        e.require(agree,
                  "guard_split changed the prefixpoints of " + render(f));
      }
    }
  }
  e.require(skipped * 10 <= opt.random_formulas,
            "too many formulas over the lift size guard: " +
                std::to_string(skipped));
  if (e.data.ok && skipped)
    e.data.detail = "(" + std::to_string(skipped) + " over size guard)";
}

void check_representation(Entry& e, const std::vector<SigContext>& ctxs) {
  for (const SigContext& ctx : ctxs) {
    const SystemRepresentation& rep = ctx.pipeline.rep;
    std::map<std::string, Formula> back{{"z_g", Formula::var(rep.x)}};
    for (const auto& [z, psi] : rep.subformula)
      if (z != "z_g") back.emplace(z, psi);
    for (const std::string& z : rep.system.vars) {
      Formula rebuilt = canonicalize(substitute(rep.system.term(z), back));
      e.require(rebuilt == rep.subformula.at(z),
                ctx.sig->name + ": reconstruction failed for " + z);
    }
    e.require(classify_system(rep.system) != SystemKind::General,
              ctx.sig->name + ": representation not semi-simple");

    CompiledFormula pre(ctx.pipeline.preprocessed, ctx.xlayout);
    for_each_model(ctx, [&](const KripkeModel& m, bool) {
      StateSet a = formula_trace(pre, ctx.sig->params, m).back();
      std::vector<StateSet> b = ctx.zsys.lfp_trace(m).back();
      e.require(b[0] == a, describe(ctx.sig, m, "point of the system fixpoint"));
      std::vector<StateSet> slots(ctx.xlayout.size(), 0);
      for (std::size_t i = 0; i < ctx.sig->params.size(); ++i)
        slots[1 + i] = m.valuation.at(ctx.sig->params[i]);
      slots[0] = a;
      for (std::size_t i = 0; i < rep.system.vars.size(); ++i) {
        std::vector<StateSet> sl(ctx.subformulas[i].slot_count(), 0);
        std::copy_n(slots.begin(), ctx.xlayout.size(), sl.begin());
        auto bnd = ctx.subformulas[i].bind(m);
        e.require(b[i] == ctx.subformulas[i].eval(bnd, sl),
                  describe(ctx.sig, m,
                           "component " + rep.system.vars[i]));
      }
    });
  }
}

void check_simulation(Entry& e, const std::vector<SigContext>& ctxs,
                      const SuiteOptions& opt) {
  for (const SigContext& ctx : ctxs) {
    const ModalSystem& t = ctx.pipeline.rep.system;
    const ModalSystem& tp = ctx.pipeline.tplus;
    e.require(classify_system(tp) == SystemKind::Simple,
              ctx.sig->name + ": simulation not simple");
    e.require(tp.vars.size() == (1u << t.vars.size()) - 1,
              ctx.sig->name + ": wrong simulation variable count");

    std::map<std::string, Formula> zy;
    auto subsets = proper_subsets(static_cast<int>(t.vars.size()));
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      std::vector<Formula> members;
      for (int i : subsets[s]) members.push_back(Formula::var(t.vars[i]));
      zy[tp.vars[s]] = canonicalize(Formula::conj(std::move(members)));
    }

    const std::size_t nz = t.vars.size();
    std::vector<std::string> layout = t.vars;
    for (const std::string& p : ctx.sig->params) layout.push_back(p);

    std::vector<CompiledFormula> merged, plain;
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      merged.emplace_back(canonicalize(substitute(tp.term(tp.vars[s]), zy)),
                          layout);
      std::vector<Formula> member_terms;
      for (int i : subsets[s]) member_terms.push_back(t.term(t.vars[i]));
      plain.emplace_back(canonicalize(Formula::conj(std::move(member_terms))),
                         layout);
    }
    std::size_t max_slots = layout.size();
    for (const CompiledFormula& c : merged)
      max_slots = std::max(max_slots, c.slot_count());
    for (const CompiledFormula& c : plain)
      max_slots = std::max(max_slots, c.slot_count());

    std::uint64_t salt = 0;
    for_each_model(ctx, [&](const KripkeModel& m, bool two_state) {
      std::vector<StateSet> zfix = ctx.zsys.lfp_trace(m).back();
      std::vector<StateSet> yfix = ctx.ysys.lfp_trace(m).back();
      e.require(iota(zfix) == yfix,
                describe(ctx.sig, m, "simulation fixpoint vs intersections"));

      std::vector<StateSet> slots(max_slots, 0);
      for (std::size_t i = 0; i < ctx.sig->params.size(); ++i)
        slots[nz + i] = m.valuation.at(ctx.sig->params[i]);
      const std::uint64_t bits = static_cast<std::uint64_t>(m.size()) * nz;
      const std::uint64_t cap = two_state ? 8 : 14;
      const bool exhaustive = bits <= cap;
      std::mt19937_64 vrng(opt.seed + 977 * ++salt);
      const std::uint64_t rounds =
          exhaustive ? (1ull << bits) : (two_state ? 64 : 256);

      std::vector<CompiledFormula::Binding> mb, pb;
      for (const CompiledFormula& c : merged) mb.push_back(c.bind(m));
      for (const CompiledFormula& c : plain) pb.push_back(c.bind(m));

      bool same = true;
      for (std::uint64_t r = 0; r < rounds && same; ++r) {
        if (exhaustive) {
          std::uint64_t rest = r;
          for (std::size_t i = 0; i < nz; ++i) {
            slots[i] = rest & m.universe();
            rest >>= m.size();
          }
        } else {
          for (std::size_t i = 0; i < nz; ++i) slots[i] = vrng() & m.universe();
        }
        for (std::size_t s = 0; s < subsets.size() && same; ++s)
          if (merged[s].eval(mb[s], slots) != plain[s].eval(pb[s], slots))
            same = false;
      }
      e.require(same,
                describe(ctx.sig, m,
                         "merged term differs from the member conjunction"));

      // The simulation commutes with the subset intersections.
      std::vector<CompiledFormula::Binding> zb, yb;
      for (const CompiledFormula& c : ctx.zsys.terms) zb.push_back(c.bind(m));
      for (const CompiledFormula& c : ctx.ysys.terms) yb.push_back(c.bind(m));
      std::vector<StateSet> zslots(ctx.zsys.max_slots, 0);
      std::vector<StateSet> yslots(ctx.ysys.max_slots, 0);
      for (std::size_t i = 0; i < ctx.sig->params.size(); ++i) {
        zslots[nz + i] = m.valuation.at(ctx.sig->params[i]);
        yslots[tp.vars.size() + i] = m.valuation.at(ctx.sig->params[i]);
      }
      std::mt19937_64 rng(opt.seed + 31 * salt);
      bool commutes = true;
      for (int round = 0; round < 4 && commutes; ++round) {
        std::vector<StateSet> w(nz);
        for (std::size_t i = 0; i < nz; ++i) {
          w[i] = rng() & m.universe();
          zslots[i] = w[i];
        }
        std::vector<StateSet> tw(nz);
        for (std::size_t i = 0; i < nz; ++i)
          tw[i] = ctx.zsys.terms[i].eval(zb[i], zslots);
        std::vector<StateSet> expect = iota(tw);
        std::vector<StateSet> iw = iota(w);
        for (std::size_t s = 0; s < tp.vars.size(); ++s) yslots[s] = iw[s];
        for (std::size_t s = 0; s < tp.vars.size() && commutes; ++s)
          if (ctx.ysys.terms[s].eval(yb[s], yslots) != expect[s])
            commutes = false;
      }
      e.require(commutes, describe(ctx.sig, m, "diagram commutation"));
    });
  }
}

void check_cofinality(Entry& e, const std::vector<SigContext>& ctxs) {
  for (const SigContext& ctx : ctxs) {
    const Formula& gamma = ctx.pipeline.preprocessed;
    const std::size_t k =
        static_cast<std::size_t>(std::max(1, modal_depth(gamma)));
    CompiledFormula pre(gamma, ctx.xlayout);
    for_each_model(ctx, [&](const KripkeModel& m, bool) {
      std::vector<StateSet> c = formula_trace(pre, ctx.sig->params, m);
      std::vector<std::vector<StateSet>> zt = ctx.zsys.lfp_trace(m);
      std::vector<StateSet> t;
      t.reserve(zt.size());
      for (const auto& step : zt) t.push_back(step[0]);
      bool mono = true;
      for (std::size_t i = 1; i < c.size(); ++i)
        mono = mono && (c[i - 1] & ~c[i]) == 0;
      for (std::size_t i = 1; i < t.size(); ++i)
        mono = mono && (t[i - 1] & ~t[i]) == 0;
      e.require(mono, describe(ctx.sig, m, "non-monotone trace"));
      bool ok = true;
      for (std::size_t n = 0; n <= 6; ++n) {
        if ((trace_at(t, n + 1) & ~trace_at(c, n + 1)) != 0) ok = false;
        if ((trace_at(c, n) & ~trace_at(t, k * n)) != 0) ok = false;
      }
      e.require(ok, describe(ctx.sig, m, "approximant comparison"));
    });
  }
}

void check_soundness(Entry& axioms_entry, Entry& rules_entry,
                     const std::vector<SigContext>& ctxs,
                     const SuiteOptions& opt) {
  for (const SigContext& ctx : ctxs) {
    AxiomSet kff = kozen_park(ctx.sig);
    AxiomSet kplus =
        plus_axioms(ctx.sig, ctx.pipeline.tplus, ctx.pipeline.chi, true);
    std::vector<const AxiomSet*> sets{&kff, &kplus};

    std::uint64_t item = 0;
    for (const AxiomSet* set : sets) {
      for (const Axiom& a : set->axioms) {
        ++item;
        CompiledAxiom compiled(a);
        std::uint64_t model_index = 0;
        for_each_model(ctx, [&](const KripkeModel& m, bool two_state) {
          CheckOutcome out = compiled.run(
              m, two_state ? opt.two_state_budget : opt.budget,
              opt.seed + item * 65537 + ++model_index);
          axioms_entry.require(
              out.ok, describe(ctx.sig, m, "axiom " + a.name + " refuted"));
        });
      }
      for (const Rule& r : set->rules) {
        ++item;
        CompiledRule compiled(r);
        std::uint64_t model_index = 0;
        for_each_model(ctx, [&](const KripkeModel& m, bool two_state) {
          CheckOutcome out = compiled.run(
              m, two_state ? opt.two_state_budget : opt.budget,
              opt.seed + item * 65537 + ++model_index);
          rules_entry.require(
              out.ok, describe(ctx.sig, m, "rule " + r.name + " unsound"));
        });
      }
    }
  }
}

void check_axiom_shape(Entry& e, const std::vector<SigContext>& ctxs) {
  for (const SigContext& ctx : ctxs) {
    AxiomSet kff = kozen_park(ctx.sig);
    AxiomSet kplus =
        plus_axioms(ctx.sig, ctx.pipeline.tplus, ctx.pipeline.chi, false);
    std::size_t subsets = ctx.pipeline.tplus.vars.size();
    e.require(kff.axioms.size() == 1 && kff.rules.size() == 1,
              ctx.sig->name + ": Kozen-Park counts");
    e.require(kplus.axioms.size() == 1 + subsets &&
                  kplus.rules.size() == 1 + subsets,
              ctx.sig->name + ": extended system counts");
    auto it = ctx.pipeline.chi.chi_sharp.find("y_g");
    e.require(it != ctx.pipeline.chi.chi_sharp.end() &&
                  it->second.is(Kind::Sharp) &&
                  it->second.name() == ctx.sig->name,
              ctx.sig->name + ": chi of the point singleton");
    for (const Rule& r : kplus.rules)
      if (r.name != "sharp-least")
        e.require(r.premises.size() == subsets,
                  ctx.sig->name + ": rule " + r.name + " premise count");
  }
}

void check_classifiers(Entry& e) {
  auto p = [](const char* s) { return parse_formula(s); };
  e.require(is_untied(p("nab a {nab b {p}} & nab a {x}"), "x"),
            "untied fixture 1");
  e.require(is_untied(p("nab a {nab b {x}} & nab b {x}"), "x"),
            "untied fixture 2");
  e.require(!is_untied(p("nab a {nab b {x}} & nab a {x}"), "x"),
            "untied fixture 3");
  e.require(!is_harmless(p("<a>(x & <b>x)"), "x"), "harmless fixture 1");
  e.require(is_harmless(p("<a>x & <a><a>x & [b]<a>x"), "x"),
            "harmless fixture 2");
  e.require(is_harmless(p("<a>x & <a><a>x & [a]<a>p"), "x"),
            "harmless fixture 3");

  const std::vector<const char*> harmless = {
      "x", "<a>x", "<a>x & <a><a>x & [b]<a>x", "p | (q & <a>x)",
      "[a](x | p)"};
  for (const char* s : harmless) {
    Formula f = p(s);
    Formula u = harmless_to_untied(f, "x");
    e.require(is_untied(u, "x"), std::string("translation not untied: ") + s);
    std::set<std::string> props = free_vars(f);
    props.insert("x");
    bool same = true;
    for (const KripkeModel& m : all_models(2, actions_of(f), props))
      if (eval(m, {}, f) != eval(m, {}, u)) same = false;
    e.require(same, std::string("translation not equivalent: ") + s);
  }
}

}  // namespace

SuiteReport run_suite(const SuiteOptions& options) {
  SuiteReport report;
  SignatureTable corpus = builtin_corpus();
  std::vector<SigContext> ctxs = make_contexts(corpus, options);

  Entry normal_forms("normal-form-preservation");
  check_normal_forms(normal_forms, options);
  report.entries.push_back(normal_forms.data);

  Entry representation("system-representation");
  check_representation(representation, ctxs);
  report.entries.push_back(representation.data);

  Entry simulation("subset-simulation");
  check_simulation(simulation, ctxs, options);
  report.entries.push_back(simulation.data);

  Entry cofinality("approximant-cofinality");
  check_cofinality(cofinality, ctxs);
  report.entries.push_back(cofinality.data);

  Entry axiom_shape("axiom-shape");
  check_axiom_shape(axiom_shape, ctxs);
  report.entries.push_back(axiom_shape.data);

  Entry axioms("axiom-soundness");
  Entry rules("rule-soundness");
  check_soundness(axioms, rules, ctxs, options);
  report.entries.push_back(axioms.data);
  report.entries.push_back(rules.data);

  Entry classifiers("classifier-fixtures");
  check_classifiers(classifiers);
  report.entries.push_back(classifiers.data);

  return report;
}

std::string report_text(const SuiteReport& report) {
  std::ostringstream out;
  for (const SuiteEntry& e : report.entries) {
    out << (e.ok ? "ok   " : "FAIL ") << e.name << " (" << e.cases
        << " cases)";
    if (!e.detail.empty()) out << (e.ok ? " " : "\n     ") << e.detail;
    out << "\n";
  }
  out << (report.ok() ? "all checks passed" : "CHECKS FAILED") << " ("
      << report.total_cases() << " cases)\n";
  return out.str();
}

Json report_json(const SuiteReport& report) {
  Json j;
  j["ok"] = report.ok();
  j["cases"] = report.total_cases();
  j["entries"] = Json::array();
  for (const SuiteEntry& e : report.entries) {
    Json ej;
    ej["name"] = e.name;
    ej["ok"] = e.ok;
    ej["cases"] = e.cases;
    if (!e.detail.empty()) ej["detail"] = e.detail;
    j["entries"].push_back(std::move(ej));
  }
  return j;
}

}  // namespace flatfix
