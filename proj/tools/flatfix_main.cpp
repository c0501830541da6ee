#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "flatfix/analysis.hpp"
#include "flatfix/axioms.hpp"
#include "flatfix/classify.hpp"
#include "flatfix/error.hpp"
#include "flatfix/normal_form.hpp"
#include "flatfix/parser.hpp"
#include "flatfix/suite.hpp"

namespace {

using namespace flatfix;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Common {
  std::string sigs_path;
  std::vector<std::string> actions;
  bool json = false;

  SignatureTable load_sigs() const {
    if (sigs_path.empty()) return {};
    return parse_signature_file(read_file(sigs_path));
  }
  ActionSet action_set(const Formula& f) const {
    ActionSet set = actions_of(f);
    for (const std::string& a : actions) set.insert(a);
    if (set.empty()) set.insert("a");
    return set;
  }
};

// The first non-comment line of a formula file, or the inline text.
std::string formula_text(const std::string& inline_text,
                         const std::string& path) {
  if (!path.empty()) {
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
      auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#')
        return line;
    }
    throw Error("no formula found in " + path);
  }
  return inline_text;
}

SignaturePtr signature_for(const Common& common, const SignatureTable& table,
                           const std::string& sig_name,
                           const std::string& text, const std::string& x) {
  if (!sig_name.empty()) {
    SignaturePtr sig = table.find(sig_name);
    if (!sig) throw Error("unknown connective: " + sig_name);
    return sig;
  }
  if (text.empty())
    throw Error("pass a formula or select a connective with --sig");
  SharpSignature sig;
  sig.name = "g";
  sig.x = x;
  sig.body = parse_formula(text, table);
  std::set<std::string> params = free_vars(sig.body);
  params.erase(x);
  sig.params.assign(params.begin(), params.end());
  SignatureTable scratch;
  return scratch.add(std::move(sig));
}

int cmd_normalize(const Common& common, const std::string& form,
                  const std::string& text, const std::string& x) {
  SignatureTable sigs = common.load_sigs();
  Formula f = parse_formula(text, sigs);
  Formula out;
  if (form == "nabla") {
    out = to_nabla(f);
  } else if (form == "disjunctive") {
    out = to_disjunctive(to_nabla(f));
  } else if (form == "pure-nabla") {
    out = to_pure_disjunction(to_nabla(f), common.action_set(f));
  } else if (form == "pure-nbx") {
    // Preprocessing proper: split off the unguarded part first. The result
    // has the same prefixpoints in x as the input (not the same denotation
    // when the input had unguarded occurrences of x).
    out = to_pure_nbx(guard_split(f, x), x, common.action_set(f));
  } else {
    throw Error("unknown normal form: " + form);
  }
  if (common.json) {
    Json j;
    j["input"] = render(canonicalize(f));
    j["form"] = form;
    j["result"] = render(out);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << render(out) << "\n";
  }
  return 0;
}

int cmd_represent(const Common& common, const std::string& sig_name,
                  const std::string& text, const std::string& x,
                  bool simulate_too, bool raw, bool reachable) {
  SignatureTable sigs = common.load_sigs();
  SignaturePtr sig = signature_for(common, sigs, sig_name, text, x);
  ActionSet actions = common.action_set(sig->body);
  for (const std::string& a : common.actions) actions.insert(a);
  Formula pre = to_pure_nbx(guard_split(sig->body, sig->x), sig->x, actions);
  SystemRepresentation rep = build_system(pre, sig->x);
  if (!simulate_too) {
    if (common.json)
      std::cout << to_json(rep.system).dump(2) << "\n";
    else
      std::cout << to_text(rep.system);
    return 0;
  }
  ModalSystem tplus = simulate(rep.system, !raw, reachable);
  if (common.json)
    std::cout << to_json(tplus).dump(2) << "\n";
  else
    std::cout << to_text(tplus);
  return 0;
}

int cmd_axiomatize(const Common& common, const std::string& system,
                   const std::string& sig_name, bool lean) {
  SignatureTable sigs = common.load_sigs();
  if (sigs.empty()) throw Error("axiomatize needs --sigs");
  if (system != "kff" && system != "kffplus")
    throw Error("unknown axiom system: " + system);
  bool first = true;
  Json all = Json::array();
  for (const auto& [name, sig] : sigs) {
    if (!sig_name.empty() && name != sig_name) continue;
    if (system == "kff") {
      AxiomSet set = kozen_park(sig);
      if (common.json)
        all.push_back(axioms_to_json(set));
      else
        std::cout << (first ? "" : "\n") << render_axioms_text(set);
    } else {
      Pipeline pipe = run_pipeline(sig, common.action_set(sig->body));
      AxiomSet set = plus_axioms(sig, pipe.tplus, pipe.chi, lean);
      if (common.json)
        all.push_back(axioms_to_json(set, &pipe.tplus));
      else
        std::cout << (first ? "" : "\n") << render_axioms_text(set);
    }
    first = false;
  }
  if (!sig_name.empty() && first)
    throw Error("unknown connective: " + sig_name);
  if (common.json)
    std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
  return 0;
}

int cmd_classify(const Common& common, const std::string& text,
                 const std::string& x) {
  SignatureTable sigs = common.load_sigs();
  Formula f = parse_formula(text, sigs);
  bool harmless = is_harmless(f, x);
  Formula nb = has_sharp(f) ? Formula::bot() : to_nabla(f);
  bool untied = !has_sharp(f) && is_untied(nb, x);
  if (common.json) {
    Json j;
    j["formula"] = render(f);
    j["x"] = x;
    j["harmless"] = harmless;
    j["untied_nabla_form"] = untied;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "harmless: " << (harmless ? "yes" : "no")
              << ", untied(nabla-form): " << (untied ? "yes" : "no") << "\n";
  }
  return 0;
}

int cmd_eval(const Common& common, const std::string& model_path,
             const std::string& formula_path) {
  SignatureTable sigs = common.load_sigs();
  KripkeModel model = model_from_json(Json::parse(read_file(model_path)));
  Formula f = parse_formula(formula_text("", formula_path), sigs);
  StateSet result = eval(model, {}, f);
  if (common.json) {
    Json j;
    j["formula"] = render(f);
    Json states = Json::array();
    for (int i = 0; i < model.size(); ++i)
      if (result & (1ull << i)) states.push_back(model.state_ids[i]);
    j["states"] = std::move(states);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << format_state_set(model, result) << "\n";
  }
  return 0;
}

int cmd_check(const Common& common, int models, int max_states,
              std::uint64_t seed, bool exhaustive2) {
  SuiteOptions opt;
  opt.random_models = models;
  opt.max_states = max_states;
  opt.seed = seed;
  opt.exhaustive_two_state = exhaustive2;
  opt.budget = budget_from_env();
  SuiteReport report = run_suite(opt);
  if (common.json)
    std::cout << report_json(report).dump(2) << "\n";
  else
    std::cout << report_text(report);
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "flatfix: axiom systems for flat fixpoint connectives via cover-"
      "modality normal forms, equation systems, and the subset construction"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--sigs", common.sigs_path,
                 "connective signature file (name(x; p1,...) := formula)");
  app.add_option("--actions", common.actions,
                 "declared action set (default: inferred)")
      ->delimiter(',');
  app.add_flag("--json", common.json, "machine-readable output");

  std::string formula_arg, x = "x", form = "pure-nbx", sig_name, system =
      "kffplus", model_path, formula_path;
  bool lean = false, raw = false, reachable = false, exhaustive2 = false;
  int models = 200, max_states = 4;
  std::uint64_t seed = 1;

  CLI::App* normalize =
      app.add_subcommand("normalize", "rewrite into a normal form");
  normalize->add_option("formula", formula_arg, "formula text")->required();
  normalize
      ->add_option("--form", form,
                   "nabla | disjunctive | pure-nabla | pure-nbx")
      ->check(CLI::IsMember({"nabla", "disjunctive", "pure-nabla",
                             "pure-nbx"}));
  normalize->add_option("--x", x, "fixpoint variable (default x)");

  CLI::App* represent = app.add_subcommand(
      "represent", "emit the equation system of a connective body");
  represent->add_option("formula", formula_arg, "formula text");
  represent->add_option("--sig", sig_name, "connective from --sigs");
  represent->add_option("--x", x, "fixpoint variable (default x)");

  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "emit the simple system simulating the representation");
  simulate_cmd->add_option("formula", formula_arg, "formula text");
  simulate_cmd->add_option("--sig", sig_name, "connective from --sigs");
  simulate_cmd->add_option("--x", x, "fixpoint variable (default x)");
  simulate_cmd->add_flag("--raw", raw, "keep every product disjunct");
  simulate_cmd->add_flag("--reachable", reachable,
                         "prune subsets unreachable from the point");

  CLI::App* axiomatize =
      app.add_subcommand("axiomatize", "emit an axiom system");
  axiomatize->add_option("--system", system, "kff | kffplus")
      ->check(CLI::IsMember({"kff", "kffplus"}));
  axiomatize->add_option("--sig", sig_name,
                         "restrict to one connective (default: all)");
  axiomatize->add_flag("--lean", lean,
                       "drop the Kozen-Park axiom and rule from kffplus");

  CLI::App* classify =
      app.add_subcommand("classify", "harmless/untied classification");
  classify->add_option("formula", formula_arg, "formula text")->required();
  classify->add_option("--x", x, "fixpoint variable (default x)");

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate on a model");
  eval_cmd->add_option("--model", model_path, "model file (JSON)")
      ->required();
  eval_cmd->add_option("--formula", formula_path, "formula file")->required();

  CLI::App* check =
      app.add_subcommand("check", "run the model-checked invariant suite");
  check->add_option("--models", models, "random models per connective");
  check->add_option("--max-states", max_states, "random model state bound");
  check->add_option("--seed", seed, "random seed");
  check->add_flag("--exhaustive-2state", exhaustive2,
                  "also check every one- and two-state model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (normalize->parsed())
      return cmd_normalize(common, form, formula_arg, x);
    if (represent->parsed())
      return cmd_represent(common, sig_name, formula_arg, x, false, false,
                           false);
    if (simulate_cmd->parsed())
      return cmd_represent(common, sig_name, formula_arg, x, true, raw,
                           reachable);
    if (axiomatize->parsed())
      return cmd_axiomatize(common, system, sig_name, lean);
    if (classify->parsed()) return cmd_classify(common, formula_arg, x);
    if (eval_cmd->parsed()) return cmd_eval(common, model_path, formula_path);
    if (check->parsed())
      return cmd_check(common, models, max_states, seed, exhaustive2);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
