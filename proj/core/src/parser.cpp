#include "flatfix/parser.hpp"

#include <cctype>

#include "flatfix/error.hpp"

namespace flatfix {

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!consume(c))
      throw ParseError(std::string("expected '") + c + "' " + what, pos);
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string ident(const char* what) {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos]))
      throw ParseError(std::string("expected ") + what, pos);
    std::size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    return std::string(text.substr(start, pos - start));
  }

  // Peeks an identifier without consuming.
  std::string peek_ident() {
    skip_ws();
    std::size_t save = pos;
    if (pos >= text.size() || !ident_start(text[pos])) return {};
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    std::string word(text.substr(save, pos - save));
    pos = save;
    return word;
  }
};

struct Parser {
  Lexer lex;
  const SignatureTable* sigs;

  Formula parse_or() {
    std::vector<Formula> kids{parse_and()};
    while (lex.consume('|')) kids.push_back(parse_and());
    return kids.size() == 1 ? kids.front() : Formula::disj(std::move(kids));
  }

  Formula parse_and() {
    std::vector<Formula> kids{parse_unary()};
    while (lex.consume('&')) kids.push_back(parse_unary());
    return kids.size() == 1 ? kids.front() : Formula::conj(std::move(kids));
  }

  Formula parse_unary() {
    if (lex.consume('~')) return Formula::neg(parse_unary());
    if (lex.consume('<')) {
      std::string action = lex.ident("action name");
      lex.expect('>', "after action");
      return Formula::dia(std::move(action), parse_unary());
    }
    if (lex.consume('[')) {
      std::string action = lex.ident("action name");
      lex.expect(']', "after action");
      return Formula::box(std::move(action), parse_unary());
    }
    if (lex.consume('(')) {
      Formula f = parse_or();
      lex.expect(')', "to close group");
      return f;
    }
    std::string word = lex.ident("formula");
    if (word == "T") return Formula::top();
    if (word == "F") return Formula::bot();
    if (word == "nab") {
      std::string action = lex.ident("action name");
      lex.expect('{', "to open nabla argument set");
      std::vector<Formula> elems;
      if (!lex.consume('}')) {
        elems.push_back(parse_or());
        while (lex.consume(',')) elems.push_back(parse_or());
        lex.expect('}', "to close nabla argument set");
      }
      return Formula::nabla(std::move(action), std::move(elems));
    }
    if (word == "sharp") {
      std::size_t name_pos = lex.pos;
      std::string name = lex.ident("connective name");
      SignaturePtr sig = sigs ? sigs->find(name) : nullptr;
      if (!sig)
        throw ParseError("unknown sharp connective '" + name + "'", name_pos);
      lex.expect('(', "to open sharp arguments");
      std::vector<Formula> args;
      if (!lex.consume(')')) {
        args.push_back(parse_or());
        while (lex.consume(',')) args.push_back(parse_or());
        lex.expect(')', "to close sharp arguments");
      }
      if (args.size() != sig->params.size())
        throw ParseError("sharp " + name + " expects " +
                             std::to_string(sig->params.size()) +
                             " arguments, got " + std::to_string(args.size()),
                         name_pos);
      return Formula::sharp(std::move(sig), std::move(args));
    }
    return Formula::var(std::move(word));
  }
};

}  // namespace

Formula parse_formula(std::string_view text, const SignatureTable& sigs) {
  Parser p{Lexer{text}, &sigs};
  Formula f = p.parse_or();
  if (!p.lex.eof())
    throw ParseError("unexpected trailing input", p.lex.pos);
  return canonicalize(f);
}

Formula parse_formula(std::string_view text) {
  static const SignatureTable empty;
  return parse_formula(text, empty);
}

}  // namespace flatfix
