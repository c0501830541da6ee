#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "flatfix/formula.hpp"

namespace flatfix {

// Definition of a fixpoint connective: a plain modal body gamma, the
// designated fixpoint variable x, and the ordered parameter list. The body
// must use x only positively and must not mention other fixpoint
// connectives.
struct SharpSignature {
  std::string name;
  std::string x;
  std::vector<std::string> params;
  Formula body;
};

using SignaturePtr = std::shared_ptr<const SharpSignature>;

// "name(x; p1, p2) := body"
std::string render_signature(const SharpSignature& sig);

class SignatureTable {
 public:
  // Validates and registers; throws Error on ill-formed signatures
  // (duplicate name, x among the parameters, stray free variables, x not
  // positive, nested sharp in the body).
  SignaturePtr add(SharpSignature sig);

  SignaturePtr find(const std::string& name) const;

  auto begin() const { return by_name_.begin(); }
  auto end() const { return by_name_.end(); }
  std::size_t size() const { return by_name_.size(); }
  bool empty() const { return by_name_.empty(); }

 private:
  std::map<std::string, SignaturePtr> by_name_;
};

// One declaration per line, "name(x; p1,...,pn) := formula"; blank lines and
// lines starting with '#' are skipped.
SignatureTable parse_signature_file(std::string_view text);

}  // namespace flatfix
