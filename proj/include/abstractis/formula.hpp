#ifndef ABSTRACTIS_FORMULA_HPP
#define ABSTRACTIS_FORMULA_HPP

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace abstractis::logic {

// Many-sorted second-order syntax: object terms, concept terms of fixed
// arity, atoms, connectives, and quantifiers over objects and over n-ary
// concepts. Extension operators ext1..extK lower a concept term of the
// operator's arity to an object term. Application C[t1..tn] fixes the
// first n argument places of a concept term and yields a concept term of
// the remaining arity (which must stay >= 1).

struct ArityError : std::runtime_error {
  explicit ArityError(const std::string& what) : std::runtime_error(what) {}
};

struct ObjTermNode;
struct ConTermNode;
struct FormulaNode;
using ObjTerm = std::shared_ptr<const ObjTermNode>;
using ConTerm = std::shared_ptr<const ConTermNode>;
using Formula = std::shared_ptr<const FormulaNode>;

enum class ObjKind { Var, Ext };

struct ObjTermNode {
  ObjKind kind;
  std::string name;  // Var
  int op = 0;        // Ext: 0-based operator index
  ConTerm arg;       // Ext
};

enum class ConKind { Var, Apply };

struct ConTermNode {
  ConKind kind;
  int arity = 0;              // arity of the denoted relation
  std::string name;           // Var
  ConTerm fn;                 // Apply
  std::vector<ObjTerm> args;  // Apply: fixed leading arguments
};

enum class FKind {
  ObjEq,
  ConEq,
  Pred,
  Less,
  Not,
  And,
  Or,
  Implies,
  Iff,
  ForallObj,
  ExistsObj,
  ForallCon,
  ExistsCon
};

struct FormulaNode {
  FKind kind;
  ObjTerm t1, t2;             // ObjEq, Less
  ConTerm c1, c2;             // ConEq; Pred uses c1
  std::vector<ObjTerm> args;  // Pred
  Formula f1, f2;
  std::string var;  // quantifiers
  int arity = 0;    // concept quantifiers
};

// ---- factories (arity discipline enforced here) ----

inline ObjTerm obj_var(std::string name) {
  auto n = std::make_shared<ObjTermNode>();
  n->kind = ObjKind::Var;
  n->name = std::move(name);
  return n;
}

inline ObjTerm ext_term(int op, ConTerm arg) {
  auto n = std::make_shared<ObjTermNode>();
  n->kind = ObjKind::Ext;
  n->op = op;
  n->arg = std::move(arg);
  return n;
}

inline ConTerm con_var(std::string name, int arity) {
  if (arity < 1) throw ArityError("concept variable arity must be >= 1");
  auto n = std::make_shared<ConTermNode>();
  n->kind = ConKind::Var;
  n->name = std::move(name);
  n->arity = arity;
  return n;
}

inline ConTerm apply_term(ConTerm fn, std::vector<ObjTerm> args) {
  if (args.empty()) throw ArityError("application needs at least one argument");
  int rest = fn->arity - static_cast<int>(args.size());
  if (rest < 1)
    throw ArityError("application of arity-" + std::to_string(fn->arity) + " concept to " +
                     std::to_string(args.size()) + " arguments leaves no places");
  auto n = std::make_shared<ConTermNode>();
  n->kind = ConKind::Apply;
  n->fn = std::move(fn);
  n->args = std::move(args);
  n->arity = rest;
  return n;
}

inline Formula obj_eq(ObjTerm a, ObjTerm b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::ObjEq;
  n->t1 = std::move(a);
  n->t2 = std::move(b);
  return n;
}

inline Formula con_eq(ConTerm a, ConTerm b) {
  if (a->arity != b->arity) throw ArityError("concept equality between different arities");
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::ConEq;
  n->c1 = std::move(a);
  n->c2 = std::move(b);
  return n;
}

inline Formula pred(ConTerm c, std::vector<ObjTerm> args) {
  if (c->arity != static_cast<int>(args.size()))
    throw ArityError("predication of arity-" + std::to_string(c->arity) + " concept with " +
                     std::to_string(args.size()) + " arguments");
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::Pred;
  n->c1 = std::move(c);
  n->args = std::move(args);
  return n;
}

inline Formula less(ObjTerm a, ObjTerm b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::Less;
  n->t1 = std::move(a);
  n->t2 = std::move(b);
  return n;
}

inline Formula mk_unary(FKind k, Formula f) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->f1 = std::move(f);
  return n;
}

inline Formula mk_binary(FKind k, Formula a, Formula b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->f1 = std::move(a);
  n->f2 = std::move(b);
  return n;
}

inline Formula neg(Formula f) { return mk_unary(FKind::Not, std::move(f)); }
inline Formula land(Formula a, Formula b) { return mk_binary(FKind::And, std::move(a), std::move(b)); }
inline Formula lor(Formula a, Formula b) { return mk_binary(FKind::Or, std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) { return mk_binary(FKind::Implies, std::move(a), std::move(b)); }
inline Formula iff(Formula a, Formula b) { return mk_binary(FKind::Iff, std::move(a), std::move(b)); }

inline Formula quant_obj(bool universal, std::string var, Formula body) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = universal ? FKind::ForallObj : FKind::ExistsObj;
  n->var = std::move(var);
  n->f1 = std::move(body);
  return n;
}

inline Formula quant_con(bool universal, std::string var, int arity, Formula body) {
  if (arity < 1) throw ArityError("concept quantifier arity must be >= 1");
  auto n = std::make_shared<FormulaNode>();
  n->kind = universal ? FKind::ForallCon : FKind::ExistsCon;
  n->var = std::move(var);
  n->arity = arity;
  n->f1 = std::move(body);
  return n;
}

// ---- signature ----

/// Non-logical vocabulary available to a formula: the extension operators
/// (ext1..extK with their arities), the optional global object order '<',
/// and declared free variables.
struct Signature {
  std::vector<int> ext_arities;
  bool has_order = false;
  std::map<std::string, int> concept_vars;  // free concept variables: name -> arity
  std::vector<std::string> object_vars;     // free object variables

  int ext_count() const { return static_cast<int>(ext_arities.size()); }
};

// ---- printing ----

inline std::string print(const ObjTerm& t);
inline std::string print(const ConTerm& c);

inline std::string print(const ObjTerm& t) {
  if (t->kind == ObjKind::Var) return t->name;
  return "ext" + std::to_string(t->op + 1) + "(" + print(t->arg) + ")";
}

inline std::string print(const ConTerm& c) {
  if (c->kind == ConKind::Var) return c->name;
  std::string out = print(c->fn) + "[";
  for (std::size_t i = 0; i < c->args.size(); ++i) {
    if (i) out += ",";
    out += print(c->args[i]);
  }
  return out + "]";
}

namespace detail {
// precedence: iff 0 < implies 1 < or 2 < and 3 < not/quantifier 4 < atom 5
inline int precedence(FKind k) {
  switch (k) {
    case FKind::Iff: return 0;
    case FKind::Implies: return 1;
    case FKind::Or: return 2;
    case FKind::And: return 3;
    case FKind::Not:
    case FKind::ForallObj:
    case FKind::ExistsObj:
    case FKind::ForallCon:
    case FKind::ExistsCon: return 4;
    default: return 5;
  }
}

inline std::string print_at(const Formula& f, int level) {
  int p = precedence(f->kind);
  // A quantifier body extends maximally to the right, so a quantified
  // formula must be parenthesized in any tighter context.
  switch (f->kind) {
    case FKind::ForallObj:
    case FKind::ExistsObj:
    case FKind::ForallCon:
    case FKind::ExistsCon: p = 0; break;
    default: break;
  }
  std::string out;
  switch (f->kind) {
    case FKind::ObjEq: out = print(f->t1) + " = " + print(f->t2); break;
    case FKind::ConEq: out = print(f->c1) + " == " + print(f->c2); break;
    case FKind::Less: out = print(f->t1) + " < " + print(f->t2); break;
    case FKind::Pred: {
      out = print(f->c1) + "(";
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        if (i) out += ",";
        out += print(f->args[i]);
      }
      out += ")";
      break;
    }
    case FKind::Not: out = "not " + print_at(f->f1, 4); break;
    case FKind::And: out = print_at(f->f1, 3) + " & " + print_at(f->f2, 4); break;
    case FKind::Or: out = print_at(f->f1, 2) + " | " + print_at(f->f2, 3); break;
    case FKind::Implies: out = print_at(f->f1, 2) + " -> " + print_at(f->f2, 1); break;
    case FKind::Iff: out = print_at(f->f1, 1) + " <-> " + print_at(f->f2, 1); break;
    case FKind::ForallObj: out = "forall " + f->var + ". " + print_at(f->f1, 0); break;
    case FKind::ExistsObj: out = "exists " + f->var + ". " + print_at(f->f1, 0); break;
    case FKind::ForallCon:
      out = "forall " + f->var + ":" + std::to_string(f->arity) + ". " + print_at(f->f1, 0);
      break;
    case FKind::ExistsCon:
      out = "exists " + f->var + ":" + std::to_string(f->arity) + ". " + print_at(f->f1, 0);
      break;
  }
  if (p < level) return "(" + out + ")";
  return out;
}
}  // namespace detail

inline std::string print(const Formula& f) { return detail::print_at(f, 0); }

// ---- structural equality ----

inline bool equal(const ObjTerm& a, const ObjTerm& b);
inline bool equal(const ConTerm& a, const ConTerm& b);

inline bool equal(const ObjTerm& a, const ObjTerm& b) {
  if (a->kind != b->kind) return false;
  if (a->kind == ObjKind::Var) return a->name == b->name;
  return a->op == b->op && equal(a->arg, b->arg);
}

inline bool equal(const ConTerm& a, const ConTerm& b) {
  if (a->kind != b->kind || a->arity != b->arity) return false;
  if (a->kind == ConKind::Var) return a->name == b->name;
  if (!equal(a->fn, b->fn) || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

inline bool equal(const Formula& a, const Formula& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FKind::ObjEq:
    case FKind::Less: return equal(a->t1, b->t1) && equal(a->t2, b->t2);
    case FKind::ConEq: return equal(a->c1, b->c1) && equal(a->c2, b->c2);
    case FKind::Pred: {
      if (!equal(a->c1, b->c1) || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
      return true;
    }
    case FKind::Not: return equal(a->f1, b->f1);
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff: return equal(a->f1, b->f1) && equal(a->f2, b->f2);
    case FKind::ForallObj:
    case FKind::ExistsObj: return a->var == b->var && equal(a->f1, b->f1);
    case FKind::ForallCon:
    case FKind::ExistsCon:
      return a->var == b->var && a->arity == b->arity && equal(a->f1, b->f1);
  }
  return false;
}

// ---- free variables ----

struct FreeVars {
  std::set<std::string> objects;
  std::map<std::string, int> concepts;  // name -> arity
};

namespace detail {
inline void free_vars_term(const ObjTerm& t, std::vector<std::string>& bound_obj,
                           std::vector<std::string>& bound_con, FreeVars& out);
inline void free_vars_term(const ConTerm& c, std::vector<std::string>& bound_obj,
                           std::vector<std::string>& bound_con, FreeVars& out);

inline void free_vars_term(const ObjTerm& t, std::vector<std::string>& bound_obj,
                           std::vector<std::string>& bound_con, FreeVars& out) {
  if (t->kind == ObjKind::Var) {
    for (auto it = bound_obj.rbegin(); it != bound_obj.rend(); ++it)
      if (*it == t->name) return;
    out.objects.insert(t->name);
  } else {
    free_vars_term(t->arg, bound_obj, bound_con, out);
  }
}

inline void free_vars_term(const ConTerm& c, std::vector<std::string>& bound_obj,
                           std::vector<std::string>& bound_con, FreeVars& out) {
  if (c->kind == ConKind::Var) {
    for (auto it = bound_con.rbegin(); it != bound_con.rend(); ++it)
      if (*it == c->name) return;
    out.concepts.emplace(c->name, c->arity);
  } else {
    free_vars_term(c->fn, bound_obj, bound_con, out);
    for (auto& a : c->args) free_vars_term(a, bound_obj, bound_con, out);
  }
}

inline void free_vars_rec(const Formula& f, std::vector<std::string>& bound_obj,
                          std::vector<std::string>& bound_con, FreeVars& out) {
  switch (f->kind) {
    case FKind::ObjEq:
    case FKind::Less:
      free_vars_term(f->t1, bound_obj, bound_con, out);
      free_vars_term(f->t2, bound_obj, bound_con, out);
      break;
    case FKind::ConEq:
      free_vars_term(f->c1, bound_obj, bound_con, out);
      free_vars_term(f->c2, bound_obj, bound_con, out);
      break;
    case FKind::Pred:
      free_vars_term(f->c1, bound_obj, bound_con, out);
      for (auto& a : f->args) free_vars_term(a, bound_obj, bound_con, out);
      break;
    case FKind::Not: free_vars_rec(f->f1, bound_obj, bound_con, out); break;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff:
      free_vars_rec(f->f1, bound_obj, bound_con, out);
      free_vars_rec(f->f2, bound_obj, bound_con, out);
      break;
    case FKind::ForallObj:
    case FKind::ExistsObj:
      bound_obj.push_back(f->var);
      free_vars_rec(f->f1, bound_obj, bound_con, out);
      bound_obj.pop_back();
      break;
    case FKind::ForallCon:
    case FKind::ExistsCon:
      bound_con.push_back(f->var);
      free_vars_rec(f->f1, bound_obj, bound_con, out);
      bound_con.pop_back();
      break;
  }
}
}  // namespace detail

inline FreeVars free_vars(const Formula& f) {
  FreeVars out;
  std::vector<std::string> bo, bc;
  detail::free_vars_rec(f, bo, bc, out);
  return out;
}

// ---- canonical key (bound variables as de Bruijn indices) ----
// Two formulas get the same key iff they are equal up to renaming of bound
// variables. Used for duplicate-free enumeration and alpha-stable checks.

namespace detail {
struct KeyCtx {
  std::vector<std::string> obj;  // innermost last
  std::vector<std::string> con;
};

inline void key_term(const ObjTerm& t, KeyCtx& ctx, std::string& out);
inline void key_term(const ConTerm& c, KeyCtx& ctx, std::string& out);

inline void key_term(const ObjTerm& t, KeyCtx& ctx, std::string& out) {
  if (t->kind == ObjKind::Var) {
    for (std::size_t i = ctx.obj.size(); i-- > 0;)
      if (ctx.obj[i] == t->name) {
        out += "o" + std::to_string(ctx.obj.size() - 1 - i) + ";";
        return;
      }
    out += "f:" + t->name + ";";
  } else {
    out += "E" + std::to_string(t->op) + "(";
    key_term(t->arg, ctx, out);
    out += ")";
  }
}

inline void key_term(const ConTerm& c, KeyCtx& ctx, std::string& out) {
  if (c->kind == ConKind::Var) {
    for (std::size_t i = ctx.con.size(); i-- > 0;)
      if (ctx.con[i] == c->name) {
        out += "c" + std::to_string(ctx.con.size() - 1 - i) + ";";
        return;
      }
    out += "F:" + c->name + "/" + std::to_string(c->arity) + ";";
  } else {
    out += "A(";
    key_term(c->fn, ctx, out);
    for (auto& a : c->args) key_term(a, ctx, out);
    out += ")";
  }
}

inline void key_rec(const Formula& f, KeyCtx& ctx, std::string& out) {
  switch (f->kind) {
    case FKind::ObjEq:
      out += "=(";
      key_term(f->t1, ctx, out);
      key_term(f->t2, ctx, out);
      out += ")";
      break;
    case FKind::Less:
      out += "<(";
      key_term(f->t1, ctx, out);
      key_term(f->t2, ctx, out);
      out += ")";
      break;
    case FKind::ConEq:
      out += "~(";
      key_term(f->c1, ctx, out);
      key_term(f->c2, ctx, out);
      out += ")";
      break;
    case FKind::Pred:
      out += "P(";
      key_term(f->c1, ctx, out);
      for (auto& a : f->args) key_term(a, ctx, out);
      out += ")";
      break;
    case FKind::Not:
      out += "!";
      key_rec(f->f1, ctx, out);
      break;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff: {
      const char* op = f->kind == FKind::And   ? "&"
                       : f->kind == FKind::Or  ? "|"
                       : f->kind == FKind::Implies ? ">"
                                               : "<>";
      out += op;
      out += "(";
      key_rec(f->f1, ctx, out);
      key_rec(f->f2, ctx, out);
      out += ")";
      break;
    }
    case FKind::ForallObj:
    case FKind::ExistsObj:
      out += f->kind == FKind::ForallObj ? "Ao" : "Eo";
      ctx.obj.push_back(f->var);
      key_rec(f->f1, ctx, out);
      ctx.obj.pop_back();
      break;
    case FKind::ForallCon:
    case FKind::ExistsCon:
      out += (f->kind == FKind::ForallCon ? "Ac" : "Ec") + std::to_string(f->arity);
      ctx.con.push_back(f->var);
      key_rec(f->f1, ctx, out);
      ctx.con.pop_back();
      break;
  }
}
}  // namespace detail

inline std::string canonical_key(const Formula& f) {
  detail::KeyCtx ctx;
  std::string out;
  detail::key_rec(f, ctx, out);
  return out;
}

// ---- classification ----

struct Classification {
  enum Kind { FO, Sigma, Pi, Other } kind = FO;
  int level = 0;  // quantifier-block count for Sigma/Pi

  bool operator==(const Classification&) const = default;
};

inline std::string to_string(const Classification& c) {
  switch (c.kind) {
    case Classification::FO: return "FO";
    case Classification::Sigma: return "Sigma^1_" + std::to_string(c.level);
    case Classification::Pi: return "Pi^1_" + std::to_string(c.level);
    default: return "other";
  }
}

namespace detail {
inline bool has_concept_quantifier(const Formula& f) {
  switch (f->kind) {
    case FKind::ForallCon:
    case FKind::ExistsCon: return true;
    case FKind::Not:
    case FKind::ForallObj:
    case FKind::ExistsObj: return has_concept_quantifier(f->f1);
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff: return has_concept_quantifier(f->f1) || has_concept_quantifier(f->f2);
    default: return false;
  }
}
}  // namespace detail

/// FO when the formula has no concept quantifiers at all. Sigma/Pi with
/// level m when it consists of m alternating blocks of leading concept
/// quantifiers over a concept-quantifier-free matrix (the first block
/// existential for Sigma, universal for Pi). Anything else is Other.
inline Classification classify(const Formula& f) {
  if (!detail::has_concept_quantifier(f)) return {Classification::FO, 0};
  Formula cur = f;
  int blocks = 0;
  bool first_existential = false;
  bool current_existential = false;
  while (cur->kind == FKind::ForallCon || cur->kind == FKind::ExistsCon) {
    bool ex = cur->kind == FKind::ExistsCon;
    if (blocks == 0) {
      first_existential = ex;
      current_existential = ex;
      blocks = 1;
    } else if (ex != current_existential) {
      ++blocks;
      current_existential = ex;
    }
    cur = cur->f1;
  }
  if (blocks == 0 || detail::has_concept_quantifier(cur)) return {Classification::Other, 0};
  return {first_existential ? Classification::Sigma : Classification::Pi, blocks};
}

}  // namespace abstractis::logic

#endif  // ABSTRACTIS_FORMULA_HPP
