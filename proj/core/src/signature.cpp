#include "flatfix/signature.hpp"

#include <algorithm>
#include <set>

#include "flatfix/analysis.hpp"
#include "flatfix/error.hpp"
#include "flatfix/parser.hpp"

namespace flatfix {

std::string render_signature(const SharpSignature& sig) {
  std::string out = sig.name + "(" + sig.x + ";";
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    out += i == 0 ? " " : ", ";
    out += sig.params[i];
  }
  out += ") := " + render(sig.body);
  return out;
}

SignaturePtr SignatureTable::add(SharpSignature sig) {
  if (by_name_.count(sig.name))
    throw Error("duplicate connective '" + sig.name + "'");
  std::set<std::string> seen;
  for (const std::string& p : sig.params) {
    if (p == sig.x)
      throw Error(sig.name + ": fixpoint variable " + sig.x +
                  " listed among the parameters");
    if (!seen.insert(p).second)
      throw Error(sig.name + ": duplicate parameter " + p);
  }
  if (has_sharp(sig.body))
    throw Error(sig.name + ": connective bodies must be plain modal formulas");
  sig.body = canonicalize(sig.body);
  std::set<std::string> allowed(sig.params.begin(), sig.params.end());
  allowed.insert(sig.x);
  for (const std::string& v : free_vars(sig.body))
    if (!allowed.count(v))
      throw Error(sig.name + ": free variable " + v +
                  " is neither the fixpoint variable nor a parameter");
  Polarity p = polarity(sig.body, sig.x);
  if (p == Polarity::Negative || p == Polarity::Both)
    throw Error(sig.name + ": " + sig.x + " must occur only positively");
  auto ptr = std::make_shared<const SharpSignature>(std::move(sig));
  by_name_.emplace(ptr->name, ptr);
  return ptr;
}

SignaturePtr SignatureTable::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

SignatureTable parse_signature_file(std::string_view text) {
  SignatureTable table;
  std::size_t line_start = 0;
  int line_no = 0;
  while (line_start <= text.size()) {
    std::size_t nl = text.find('\n', line_start);
    std::string_view line = text.substr(
        line_start, nl == std::string_view::npos ? text.size() - line_start
                                                 : nl - line_start);
    ++line_no;
    line_start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string_view::npos || line[a] == '#') continue;
    line = line.substr(a);

    try {
      std::size_t open = line.find('(');
      std::size_t semi = line.find(';');
      std::size_t close = line.find(')');
      std::size_t assign = line.find(":=");
      if (open == std::string_view::npos || semi == std::string_view::npos ||
          close == std::string_view::npos || assign == std::string_view::npos ||
          !(open < semi && semi < close && close < assign))
        throw Error("expected 'name(x; p1,...,pn) := formula'");

      auto trim = [](std::string_view s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) return std::string();
        std::size_t e = s.find_last_not_of(" \t\r");
        return std::string(s.substr(b, e - b + 1));
      };

      SharpSignature sig;
      sig.name = trim(line.substr(0, open));
      sig.x = trim(line.substr(open + 1, semi - open - 1));
      std::string_view params = line.substr(semi + 1, close - semi - 1);
      while (!params.empty()) {
        std::size_t comma = params.find(',');
        std::string p = trim(params.substr(0, comma));
        if (!p.empty()) sig.params.push_back(std::move(p));
        if (comma == std::string_view::npos) break;
        params = params.substr(comma + 1);
      }
      if (sig.name.empty() || sig.x.empty())
        throw Error("missing connective name or fixpoint variable");
      sig.body = parse_formula(line.substr(assign + 2), table);
      table.add(std::move(sig));
    } catch (const Error& e) {
      throw Error("signature file line " + std::to_string(line_no) + ": " +
                  e.what());
    }
  }
  return table;
}

}  // namespace flatfix
