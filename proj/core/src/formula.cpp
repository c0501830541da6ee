#include "flatfix/formula.hpp"

#include <algorithm>
#include <cassert>

#include "flatfix/error.hpp"
#include "flatfix/signature.hpp"

namespace flatfix {

Formula Formula::make(Node node) {
  return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula::Formula() : node_(top().node_) {}

Formula Formula::top() {
  static const Formula t = make(Node{Kind::Top, {}, {}, {}});
  return t;
}

Formula Formula::bot() {
  static const Formula f = make(Node{Kind::Bot, {}, {}, {}});
  return f;
}

Formula Formula::var(std::string name) {
  return make(Node{Kind::Var, std::move(name), {}, {}});
}

Formula Formula::lit(std::string name, bool negated) {
  Formula v = var(std::move(name));
  return negated ? neg(v) : v;
}

Formula Formula::neg(Formula f) {
  return make(Node{Kind::Neg, {}, {std::move(f)}, {}});
}

Formula Formula::conj(std::vector<Formula> kids) {
  return make(Node{Kind::And, {}, std::move(kids), {}});
}

Formula Formula::disj(std::vector<Formula> kids) {
  return make(Node{Kind::Or, {}, std::move(kids), {}});
}

Formula Formula::dia(std::string action, Formula f) {
  return make(Node{Kind::Dia, std::move(action), {std::move(f)}, {}});
}

Formula Formula::box(std::string action, Formula f) {
  return make(Node{Kind::Box, std::move(action), {std::move(f)}, {}});
}

Formula Formula::nabla(std::string action, std::vector<Formula> elements) {
  return make(Node{Kind::Nabla, std::move(action),
                   sorted_unique(std::move(elements)), {}});
}

Formula Formula::sharp(std::shared_ptr<const SharpSignature> sig,
                       std::vector<Formula> args) {
  if (!sig) throw Error("sharp: null signature");
  if (args.size() != sig->params.size())
    throw Error("sharp " + sig->name + ": expected " +
                std::to_string(sig->params.size()) + " arguments, got " +
                std::to_string(args.size()));
  return make(Node{Kind::Sharp, sig->name, std::move(args), std::move(sig)});
}

bool Formula::operator==(const Formula& other) const {
  return compare(*this, other) == 0;
}

int compare(const Formula& a, const Formula& b) {
  if (&a == &b) return 0;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Top:
    case Kind::Bot:
      return 0;
    case Kind::Var:
      return a.name().compare(b.name());
    default:
      break;
  }
  // Action for modal nodes, connective name for sharp.
  if (int c = a.name().compare(b.name()); c != 0) return c;
  const auto& ka = a.kids();
  const auto& kb = b.kids();
  for (std::size_t i = 0; i < ka.size() && i < kb.size(); ++i)
    if (int c = compare(ka[i], kb[i]); c != 0) return c;
  if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
  return 0;
}

std::vector<Formula> sorted_unique(std::vector<Formula> fs) {
  std::sort(fs.begin(), fs.end(), FormulaLess{});
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  return fs;
}

namespace {

void flatten_into(Kind kind, const Formula& f, std::vector<Formula>& out) {
  for (const Formula& k : f.kids()) {
    if (k.kind() == kind)
      flatten_into(kind, k, out);
    else
      out.push_back(k);
  }
}

}  // namespace

Formula canonicalize(const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
    case Kind::Var:
      return f;
    case Kind::Neg:
      return Formula::neg(canonicalize(f.child()));
    case Kind::Dia:
      return Formula::dia(f.action(), canonicalize(f.child()));
    case Kind::Box:
      return Formula::box(f.action(), canonicalize(f.child()));
    case Kind::Nabla: {
      std::vector<Formula> elems;
      elems.reserve(f.kids().size());
      for (const Formula& e : f.kids()) elems.push_back(canonicalize(e));
      return Formula::nabla(f.action(), std::move(elems));
    }
    case Kind::Sharp: {
      std::vector<Formula> args;
      args.reserve(f.kids().size());
      for (const Formula& a : f.kids()) args.push_back(canonicalize(a));
      return Formula::sharp(f.sig(), std::move(args));
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> flat;
      flatten_into(f.kind(), f, flat);
      for (Formula& k : flat) k = canonicalize(k);
      // Flattening below an already-canonical child cannot resurface: the
      // recursion above collapsed nested And/Or before sorting.
      std::vector<Formula> again;
      for (Formula& k : flat) {
        if (k.kind() == f.kind())
          flatten_into(k.kind(), k, again);
        else
          again.push_back(std::move(k));
      }
      again = sorted_unique(std::move(again));
      if (again.empty())
        return f.kind() == Kind::And ? Formula::top() : Formula::bot();
      if (again.size() == 1) return again.front();
      return f.kind() == Kind::And ? Formula::conj(std::move(again))
                                   : Formula::disj(std::move(again));
    }
  }
  throw Error("canonicalize: unreachable");
}

Formula substitute(const Formula& f,
                   const std::map<std::string, Formula>& map) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
      return f;
    case Kind::Var: {
      auto it = map.find(f.name());
      return it == map.end() ? f : it->second;
    }
    case Kind::Neg:
      return Formula::neg(substitute(f.child(), map));
    case Kind::Dia:
      return Formula::dia(f.action(), substitute(f.child(), map));
    case Kind::Box:
      return Formula::box(f.action(), substitute(f.child(), map));
    case Kind::Nabla: {
      std::vector<Formula> elems;
      elems.reserve(f.kids().size());
      for (const Formula& e : f.kids()) elems.push_back(substitute(e, map));
      return Formula::nabla(f.action(), std::move(elems));
    }
    case Kind::Sharp: {
      std::vector<Formula> args;
      args.reserve(f.kids().size());
      for (const Formula& a : f.kids()) args.push_back(substitute(a, map));
      return Formula::sharp(f.sig(), std::move(args));
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (const Formula& k : f.kids()) kids.push_back(substitute(k, map));
      return f.kind() == Kind::And ? Formula::conj(std::move(kids))
                                   : Formula::disj(std::move(kids));
    }
  }
  throw Error("substitute: unreachable");
}

namespace {

// Precedence levels: Or 0, And 1, unary 2, atoms 3.
int precedence(const Formula& f) {
  switch (f.kind()) {
    case Kind::Or:
      return 0;
    case Kind::And:
      return 1;
    case Kind::Neg:
    case Kind::Dia:
    case Kind::Box:
      return 2;
    default:
      return 3;
  }
}

void render_to(const Formula& f, const std::string* implicit,
               std::string& out);

void render_operand(const Formula& f, int min_prec, const std::string* implicit,
                    std::string& out) {
  if (precedence(f) < min_prec) {
    out += '(';
    render_to(f, implicit, out);
    out += ')';
  } else {
    // Keyword-led operands read better with a separating space.
    if (f.is(Kind::Nabla) || f.is(Kind::Sharp)) out += ' ';
    render_to(f, implicit, out);
  }
}

void render_list(const std::vector<Formula>& fs, const char* sep, int min_prec,
                 const std::string* implicit, std::string& out) {
  bool first = true;
  for (const Formula& f : fs) {
    if (!first) out += sep;
    first = false;
    if (precedence(f) < min_prec) {
      out += '(';
      render_to(f, implicit, out);
      out += ')';
    } else {
      render_to(f, implicit, out);
    }
  }
}

void render_to(const Formula& f, const std::string* implicit,
               std::string& out) {
  switch (f.kind()) {
    case Kind::Top:
      out += 'T';
      return;
    case Kind::Bot:
      out += 'F';
      return;
    case Kind::Var:
      out += f.name();
      return;
    case Kind::Neg:
      out += '~';
      render_operand(f.child(), 2, implicit, out);
      return;
    case Kind::Dia:
      out += '<';
      out += f.action();
      out += '>';
      render_operand(f.child(), 2, implicit, out);
      return;
    case Kind::Box:
      out += '[';
      out += f.action();
      out += ']';
      render_operand(f.child(), 2, implicit, out);
      return;
    case Kind::And:
      render_list(f.kids(), " & ", 2, implicit, out);
      return;
    case Kind::Or:
      render_list(f.kids(), " | ", 1, implicit, out);
      return;
    case Kind::Nabla: {
      out += "nab ";
      out += f.action();
      out += " {";
      bool first = true;
      for (const Formula& e : f.kids()) {
        if (!first) out += ", ";
        first = false;
        render_to(e, implicit, out);
      }
      out += '}';
      return;
    }
    case Kind::Sharp: {
      out += "sharp";
      if (!implicit || f.name() != *implicit) {
        out += ' ';
        out += f.name();
      }
      out += '(';
      bool first = true;
      for (const Formula& a : f.kids()) {
        if (!first) out += ", ";
        first = false;
        render_to(a, implicit, out);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_to(f, nullptr, out);
  return out;
}

std::string render_implicit(const Formula& f, const std::string& implicit) {
  std::string out;
  render_to(f, &implicit, out);
  return out;
}

bool has_sharp(const Formula& f) {
  if (f.is(Kind::Sharp)) return true;
  for (const Formula& k : f.kids())
    if (has_sharp(k)) return true;
  return false;
}

}  // namespace flatfix
