#ifndef ABSTRACTIS_PARSER_HPP
#define ABSTRACTIS_PARSER_HPP

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "abstractis/formula.hpp"

namespace abstractis::logic {

struct FormulaParseError : std::runtime_error {
  std::size_t position;
  FormulaParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

namespace detail {

enum class Tok {
  Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Dot, Colon,
  Eq, EqEq, Less, Arrow, DArrow, Amp, Bar, Forall, Exists, NotKw, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string t, std::size_t p) { out.push_back({k, std::move(t), p}); };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    std::size_t p = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word = s.substr(i, j - i);
      i = j;
      if (word == "forall") push(Tok::Forall, word, p);
      else if (word == "exists") push(Tok::Exists, word, p);
      else if (word == "not") push(Tok::NotKw, word, p);
      else push(Tok::Ident, word, p);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tok::Number, s.substr(i, j - i), p);
      i = j;
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", p); ++i; break;
      case ')': push(Tok::RParen, ")", p); ++i; break;
      case '[': push(Tok::LBracket, "[", p); ++i; break;
      case ']': push(Tok::RBracket, "]", p); ++i; break;
      case ',': push(Tok::Comma, ",", p); ++i; break;
      case '.': push(Tok::Dot, ".", p); ++i; break;
      case ':': push(Tok::Colon, ":", p); ++i; break;
      case '&': push(Tok::Amp, "&", p); ++i; break;
      case '|': push(Tok::Bar, "|", p); ++i; break;
      case '=':
        if (i + 1 < s.size() && s[i + 1] == '=') { push(Tok::EqEq, "==", p); i += 2; }
        else { push(Tok::Eq, "=", p); ++i; }
        break;
      case '<':
        if (i + 2 < s.size() && s[i + 1] == '-' && s[i + 2] == '>') { push(Tok::DArrow, "<->", p); i += 3; }
        else { push(Tok::Less, "<", p); ++i; }
        break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') { push(Tok::Arrow, "->", p); i += 2; }
        else throw FormulaParseError("stray '-'", p);
        break;
      default: throw FormulaParseError(std::string("unexpected character '") + c + "'", p);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

// Returns the 0-based operator index when the identifier has the reserved
// shape ext<digits>.
inline std::optional<int> ext_op_index(const std::string& word) {
  if (word.size() < 4 || word.compare(0, 3, "ext") != 0) return std::nullopt;
  for (std::size_t i = 3; i < word.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(word[i]))) return std::nullopt;
  int n = std::stoi(word.substr(3));
  if (n < 1) return std::nullopt;
  return n - 1;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Signature& sig) : toks_(std::move(toks)), sig_(sig) {
    for (const auto& name : sig.object_vars) scope_.push_back({name, 0});
    for (const auto& [name, arity] : sig.concept_vars) scope_.push_back({name, arity});
  }

  Formula parse() {
    Formula f = formula();
    expect(Tok::End, "trailing input after formula");
    return f;
  }

 private:
  struct Binding {
    std::string name;
    int arity;  // 0 = object variable
  };

  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + static_cast<std::size_t>(ahead);
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& eat() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind == k) { ++pos_; return true; }
    return false;
  }
  void expect(Tok k, const std::string& what) {
    if (!accept(k)) throw FormulaParseError(what, peek().pos);
  }
  [[noreturn]] void fail(const std::string& what) const { throw FormulaParseError(what, peek().pos); }

  std::optional<int> lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name) return it->arity;
    return std::nullopt;
  }

  // formula := iff-chain
  Formula formula() {
    Formula f = impl();
    while (accept(Tok::DArrow)) f = iff(f, impl());
    return f;
  }

  Formula impl() {
    Formula f = disj();
    if (accept(Tok::Arrow)) return implies(f, impl());
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (accept(Tok::Bar)) f = lor(f, conj());
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (accept(Tok::Amp)) f = land(f, unary());
    return f;
  }

  Formula unary() {
    if (accept(Tok::NotKw)) return neg(unary());
    if (peek().kind == Tok::Forall || peek().kind == Tok::Exists) {
      bool universal = eat().kind == Tok::Forall;
      if (peek().kind != Tok::Ident) fail("expected variable after quantifier");
      std::string name = eat().text;
      if (ext_op_index(name)) fail("'" + name + "' is reserved for extension operators");
      int arity = 0;
      if (accept(Tok::Colon)) {
        if (peek().kind != Tok::Number) fail("expected arity after ':'");
        arity = std::stoi(eat().text);
        if (arity < 1) fail("concept arity must be >= 1");
      }
      expect(Tok::Dot, "expected '.' after quantified variable");
      scope_.push_back({name, arity});
      Formula body = formula();
      scope_.pop_back();
      return arity == 0 ? quant_obj(universal, name, body) : quant_con(universal, name, arity, body);
    }
    return atom();
  }

  Formula atom() {
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen, "expected ')'");
      return f;
    }
    // an atom starts with a term; decide object vs concept and finish it
    if (is_object_term_start()) {
      ObjTerm t = object_term();
      if (accept(Tok::Eq)) return obj_eq(t, object_term());
      if (accept(Tok::Less)) {
        if (!sig_.has_order) fail("order symbol '<' is not part of this signature");
        return less(t, object_term());
      }
      fail("expected '=' or '<' after object term");
    }
    ConTerm c = concept_term();
    if (peek().kind == Tok::LParen) {
      auto args = paren_args();
      if (c->arity == 0) c = resolve_arity(c, static_cast<int>(args.size()));
      return pred(c, std::move(args));
    }
    if (accept(Tok::EqEq)) {
      ConTerm d = concept_term();
      if (c->arity == 0 && d->arity > 0) c = resolve_arity(c, d->arity);
      if (d->arity == 0 && c->arity > 0) d = resolve_arity(d, c->arity);
      if (c->arity == 0 || d->arity == 0)
        fail("cannot infer concept arity; annotate with ':<n>'");
      return con_eq(c, d);
    }
    fail("expected predication or '==' after concept term");
  }

  // How many argument places an unresolved application chain has consumed.
  static int pending_applied(const ConTerm& c) {
    int n = 0;
    const ConTermNode* cur = c.get();
    while (cur->kind == ConKind::Apply) {
      n += static_cast<int>(cur->args.size());
      cur = cur->fn.get();
    }
    return n;
  }

  // Rebuilds a concept term whose head variable had unknown arity, giving
  // the HEAD enough places that the whole term ends with `result_arity`.
  ConTerm resolve_arity(const ConTerm& c, int result_arity) {
    if (c->kind == ConKind::Var) {
      ConTerm fixed = con_var(c->name, result_arity);
      note_inferred(c->name, result_arity);
      return fixed;
    }
    ConTerm fn = resolve_arity(c->fn, result_arity + static_cast<int>(c->args.size()));
    return apply_term(fn, c->args);
  }

  void note_inferred(const std::string& name, int arity) {
    if (lookup(name)) return;  // bound or declared names keep their arity
    auto it = inferred_.find(name);
    if (it != inferred_.end() && it->second != arity)
      fail("conflicting arities inferred for '" + name + "'");
    inferred_[name] = arity;
  }

  bool is_object_term_start() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("expected a term");
    if (ext_op_index(t.text)) return true;
    auto arity = lookup(t.text);
    if (arity) return *arity == 0;
    if (auto it = inferred_.find(t.text); it != inferred_.end()) return false;
    // Undeclared name: concept when it is used with concept syntax.
    Tok next = peek(1).kind;
    return !(next == Tok::LBracket || next == Tok::LParen || next == Tok::EqEq ||
             next == Tok::Colon);
  }

  ObjTerm object_term() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("expected an object term");
    if (auto op = ext_op_index(t.text)) {
      eat();
      if (*op >= sig_.ext_count())
        fail("extension operator ext" + std::to_string(*op + 1) + " is not in the signature");
      expect(Tok::LParen, "expected '(' after extension operator");
      ConTerm c = concept_term();
      if (c->arity == 0) c = resolve_arity(c, sig_.ext_arities[*op]);
      expect(Tok::RParen, "expected ')'");
      if (c->arity != sig_.ext_arities[*op])
        fail("ext" + std::to_string(*op + 1) + " expects an arity-" +
             std::to_string(sig_.ext_arities[*op]) + " concept");
      return ext_term(*op, c);
    }
    std::string name = eat().text;
    auto arity = lookup(name);
    if (arity && *arity != 0) fail("'" + name + "' is a concept variable, not an object");
    if (!arity) free_objects_.insert(name);
    return obj_var(name);
  }

  // concept_term := ident [':' arity] ('[' obj args ']')*
  ConTerm concept_term() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || ext_op_index(t.text)) fail("expected a concept term");
    std::string name = eat().text;
    int arity = 0;
    if (accept(Tok::Colon)) {
      if (peek().kind != Tok::Number) fail("expected arity after ':'");
      arity = std::stoi(eat().text);
      if (arity < 1) fail("concept arity must be >= 1");
      if (auto known = lookup(name)) {
        if (*known == 0) fail("'" + name + "' is an object variable, not a concept");
        if (*known != arity) fail("arity annotation conflicts with binding of '" + name + "'");
      } else {
        note_inferred(name, arity);
      }
    } else if (auto known = lookup(name)) {
      if (*known == 0) fail("'" + name + "' is an object variable, not a concept");
      arity = *known;
    } else if (auto it = inferred_.find(name); it != inferred_.end()) {
      arity = it->second;
    }
    // arity may still be 0 here; the caller resolves it from usage
    ConTerm c = arity == 0 ? unresolved_con_var(name) : con_var(name, arity);
    while (peek().kind == Tok::LBracket) {
      eat();
      std::vector<ObjTerm> args;
      args.push_back(object_term());
      while (accept(Tok::Comma)) args.push_back(object_term());
      expect(Tok::RBracket, "expected ']'");
      if (c->arity != 0) {
        c = apply_term(c, std::move(args));
      } else {
        auto n = std::make_shared<ConTermNode>();
        n->kind = ConKind::Apply;
        n->fn = c;
        n->args = std::move(args);
        n->arity = 0;  // unresolved
        c = n;
      }
    }
    return c;
  }

  static ConTerm unresolved_con_var(std::string name) {
    auto n = std::make_shared<ConTermNode>();
    n->kind = ConKind::Var;
    n->name = std::move(name);
    n->arity = 0;
    return n;
  }

  std::vector<ObjTerm> paren_args() {
    expect(Tok::LParen, "expected '('");
    std::vector<ObjTerm> args;
    args.push_back(object_term());
    while (accept(Tok::Comma)) args.push_back(object_term());
    expect(Tok::RParen, "expected ')'");
    return args;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::vector<Binding> scope_;
  std::map<std::string, int> inferred_;    // free concept vars: name -> arity
  std::set<std::string> free_objects_;
};

}  // namespace detail

/// Parses a formula in the published grammar. Free variables may be
/// declared in `sig`; undeclared concept variables have their arity
/// inferred from the first occurrence (annotate with ':<n>' when the
/// occurrence alone does not determine it).
inline Formula parse(const std::string& text, const Signature& sig = {}) {
  detail::Parser p(detail::tokenize(text), sig);
  return p.parse();
}

}  // namespace abstractis::logic

#endif  // ABSTRACTIS_PARSER_HPP
