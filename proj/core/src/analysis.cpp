#include "flatfix/analysis.hpp"

#include <algorithm>

#include "flatfix/error.hpp"
#include "flatfix/signature.hpp"

namespace flatfix {

const char* to_string(Polarity p) {
  switch (p) {
    case Polarity::Absent:
      return "absent";
    case Polarity::Positive:
      return "positive";
    case Polarity::Negative:
      return "negative";
    case Polarity::Both:
      return "both";
  }
  return "?";
}

namespace {

Polarity flip(Polarity p) {
  switch (p) {
    case Polarity::Positive:
      return Polarity::Negative;
    case Polarity::Negative:
      return Polarity::Positive;
    default:
      return p;
  }
}

Polarity join(Polarity a, Polarity b) {
  if (a == Polarity::Absent) return b;
  if (b == Polarity::Absent) return a;
  if (a == b) return a;
  return Polarity::Both;
}

// Occurrence polarity of "inner occurring in the position of outer".
Polarity compose(Polarity outer, Polarity inner) {
  if (outer == Polarity::Absent || inner == Polarity::Absent)
    return Polarity::Absent;
  if (outer == Polarity::Both) return Polarity::Both;
  return outer == Polarity::Positive ? inner : flip(inner);
}

}  // namespace

Polarity polarity(const Formula& f, const std::string& x) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
      return Polarity::Absent;
    case Kind::Var:
      return f.name() == x ? Polarity::Positive : Polarity::Absent;
    case Kind::Neg:
      return flip(polarity(f.child(), x));
    case Kind::Sharp: {
      const SharpSignature& sig = *f.sig();
      Polarity out = Polarity::Absent;
      for (std::size_t i = 0; i < f.kids().size(); ++i) {
        Polarity in_arg = polarity(f.kids()[i], x);
        if (in_arg == Polarity::Absent) continue;
        Polarity of_param = polarity(sig.body, sig.params[i]);
        out = join(out, compose(of_param, in_arg));
      }
      return out;
    }
    default: {
      Polarity out = Polarity::Absent;
      for (const Formula& k : f.kids()) out = join(out, polarity(k, x));
      return out;
    }
  }
}

bool is_guarded(const Formula& f, const std::string& x) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::Var:
      return f.name() != x;
    case Kind::Dia:
    case Kind::Box:
    case Kind::Nabla:
      return true;
    case Kind::Sharp: {
      const SharpSignature& sig = *f.sig();
      for (std::size_t i = 0; i < f.kids().size(); ++i) {
        if (is_guarded(f.kids()[i], x)) continue;
        if (!is_guarded(sig.body, sig.params[i])) return false;
      }
      return true;
    }
    default:
      return std::all_of(f.kids().begin(), f.kids().end(),
                         [&](const Formula& k) { return is_guarded(k, x); });
  }
}

int modal_depth(const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
    case Kind::Var:
      return 0;
    case Kind::Dia:
    case Kind::Box:
    case Kind::Nabla: {
      int d = 0;
      for (const Formula& k : f.kids()) d = std::max(d, modal_depth(k));
      return d + 1;
    }
    case Kind::Sharp: {
      int d = 0;
      for (const Formula& k : f.kids()) d = std::max(d, modal_depth(k));
      return d + modal_depth(f.sig()->body);
    }
    default: {
      int d = 0;
      for (const Formula& k : f.kids()) d = std::max(d, modal_depth(k));
      return d;
    }
  }
}

namespace {

void collect_free_vars(const Formula& f, std::set<std::string>& out) {
  if (f.is(Kind::Var)) {
    out.insert(f.name());
    return;
  }
  for (const Formula& k : f.kids()) collect_free_vars(k, out);
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  collect_free_vars(f, out);
  return out;
}

Analysis analyze(const Formula& f, const std::string& x) {
  Analysis a;
  a.free_vars = free_vars(f);
  a.polarity = polarity(f, x);
  a.guarded = is_guarded(f, x);
  a.modal_depth = modal_depth(f);
  return a;
}

}  // namespace flatfix
