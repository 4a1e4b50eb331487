#ifndef ABSTRACTIS_EVALUATE_HPP
#define ABSTRACTIS_EVALUATE_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abstractis/formula.hpp"
#include "abstractis/structure.hpp"

namespace abstractis::model {

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

/// An extension operator was applied to a concept outside its domain.
/// Finite structures force partial operators (pigeonhole), so this is a
/// first-class outcome that schema checkers turn into tagged failures.
struct PartialExtError : EvalError {
  int op;
  std::string concept_literal;
  PartialExtError(int op_, std::string lit)
      : EvalError("ext" + std::to_string(op_ + 1) + " undefined on concept " + lit),
        op(op_),
        concept_literal(std::move(lit)) {}
};

struct Assignment {
  std::map<std::string, ObjId> objects;
  std::map<std::string, Relation> concepts;
};

namespace detail {

struct Env {
  const ExhaustiveStructure& S;
  const Assignment& base;
  std::vector<std::pair<std::string, ObjId>> objs;
  std::vector<std::pair<std::string, Relation>> cons;

  ObjId lookup_obj(const std::string& name) const {
    for (auto it = objs.rbegin(); it != objs.rend(); ++it)
      if (it->first == name) return it->second;
    auto it = base.objects.find(name);
    if (it == base.objects.end()) throw EvalError("unbound object variable '" + name + "'");
    return it->second;
  }

  const Relation& lookup_con(const std::string& name, int arity) const {
    for (auto it = cons.rbegin(); it != cons.rend(); ++it)
      if (it->first == name) {
        if (it->second.arity() != arity)
          throw EvalError("concept variable '" + name + "' arity mismatch");
        return it->second;
      }
    auto it = base.concepts.find(name);
    if (it == base.concepts.end()) throw EvalError("unbound concept variable '" + name + "'");
    if (it->second.arity() != arity)
      throw EvalError("concept variable '" + name + "' arity mismatch");
    return it->second;
  }
};

inline ObjId eval_obj(const logic::ObjTerm& t, Env& env);
inline Relation eval_con(const logic::ConTerm& c, Env& env);

inline ObjId eval_obj(const logic::ObjTerm& t, Env& env) {
  if (t->kind == logic::ObjKind::Var) return env.lookup_obj(t->name);
  Relation r = eval_con(t->arg, env);
  if (t->op < 0 || t->op >= env.S.ext_count())
    throw EvalError("structure has no operator ext" + std::to_string(t->op + 1));
  if (r.arity() != env.S.ext_arity(t->op))
    throw EvalError("ext" + std::to_string(t->op + 1) + " arity mismatch");
  auto v = env.S.ext_value(t->op, r);
  if (!v) throw PartialExtError(t->op, env.S.relation_literal(r));
  return *v;
}

inline Relation eval_con(const logic::ConTerm& c, Env& env) {
  if (c->kind == logic::ConKind::Var) return env.lookup_con(c->name, c->arity);
  Relation fn = eval_con(c->fn, env);
  std::vector<ObjId> args;
  args.reserve(c->args.size());
  for (auto& a : c->args) args.push_back(eval_obj(a, env));
  return fn.section(args);
}

inline bool eval_formula(const logic::Formula& f, Env& env) {
  using logic::FKind;
  switch (f->kind) {
    case FKind::ObjEq: return eval_obj(f->t1, env) == eval_obj(f->t2, env);
    case FKind::ConEq: {
      // extensional identity, decided by set comparison
      return eval_con(f->c1, env) == eval_con(f->c2, env);
    }
    case FKind::Pred: {
      Relation r = eval_con(f->c1, env);
      std::vector<ObjId> args;
      args.reserve(f->args.size());
      for (auto& a : f->args) args.push_back(eval_obj(a, env));
      return r.test(args);
    }
    case FKind::Less: {
      ObjId a = eval_obj(f->t1, env), b = eval_obj(f->t2, env);
      if (!env.S.has_order()) throw EvalError("order atom on a structure without order");
      return env.S.less(a, b);
    }
    case FKind::Not: return !eval_formula(f->f1, env);
    case FKind::And: return eval_formula(f->f1, env) && eval_formula(f->f2, env);
    case FKind::Or: return eval_formula(f->f1, env) || eval_formula(f->f2, env);
    case FKind::Implies: return !eval_formula(f->f1, env) || eval_formula(f->f2, env);
    case FKind::Iff: return eval_formula(f->f1, env) == eval_formula(f->f2, env);
    case FKind::ForallObj:
    case FKind::ExistsObj: {
      bool forall = f->kind == FKind::ForallObj;
      env.objs.emplace_back(f->var, 0);
      for (ObjId o : env.S.objects_in_order()) {
        env.objs.back().second = o;
        bool v = eval_formula(f->f1, env);
        if (forall && !v) {
          env.objs.pop_back();
          return false;
        }
        if (!forall && v) {
          env.objs.pop_back();
          return true;
        }
      }
      env.objs.pop_back();
      return forall;
    }
    case FKind::ForallCon:
    case FKind::ExistsCon: {
      bool forall = f->kind == FKind::ForallCon;
      const auto& fam = env.S.family(f->arity);
      env.cons.emplace_back(f->var, Relation(f->arity, env.S.object_count()));
      for (const Relation& r : fam) {
        env.cons.back().second = r;
        bool v = eval_formula(f->f1, env);
        if (forall && !v) {
          env.cons.pop_back();
          return false;
        }
        if (!forall && v) {
          env.cons.pop_back();
          return true;
        }
      }
      env.cons.pop_back();
      return forall;
    }
  }
  throw EvalError("unreachable formula kind");
}

}  // namespace detail

/// Tarskian satisfaction over an exhaustive structure. Concept quantifiers
/// range exactly over the concept family of their arity, in encoding
/// order. Throws PartialExtError when an extension operator is applied
/// off-domain and EvalError for unbound variables or arity mismatches.
inline bool evaluate(const ExhaustiveStructure& S, const logic::Formula& f,
                     const Assignment& asg = {}) {
  detail::Env env{S, asg, {}, {}};
  return detail::eval_formula(f, env);
}

// ---------------------------------------------------------------------------
// Budgeted three-valued evaluation against a lazily presented structure.
//
// A lazy backend provides deterministic enumerators with no totality
// promise, so quantifier search past the budget yields Unknown, never a
// definite verdict. Required backend interface:
//
//   using ObjVal = ...;   using ConVal = ...;
//   std::optional<ObjVal> object_at(std::size_t idx);
//   std::optional<ConVal> concept_at(int arity, std::size_t idx);
//   bool obj_equal(const ObjVal&, const ObjVal&);
//   bool con_equal(const ConVal&, const ConVal&);
//   bool holds(const ConVal&, std::span<const ObjVal>);
//   ConVal apply(const ConVal&, std::span<const ObjVal>);
//   int ext_count(); int ext_arity(int op);
//   std::optional<ObjVal> ext(int op, const ConVal&);
//   bool has_order(); bool less(const ObjVal&, const ObjVal&);
//   std::string show_obj(const ObjVal&); std::string show_con(const ConVal&);
// ---------------------------------------------------------------------------

enum class TV : std::uint8_t { False, True, Unknown };

inline TV tv_not(TV a) {
  if (a == TV::Unknown) return a;
  return a == TV::True ? TV::False : TV::True;
}
inline TV tv_and(TV a, TV b) {
  if (a == TV::False || b == TV::False) return TV::False;
  if (a == TV::True && b == TV::True) return TV::True;
  return TV::Unknown;
}
inline TV tv_or(TV a, TV b) { return tv_not(tv_and(tv_not(a), tv_not(b))); }

template <class Backend>
class LazyEvaluator {
 public:
  using ObjVal = typename Backend::ObjVal;
  using ConVal = typename Backend::ConVal;

  LazyEvaluator(Backend& b, std::size_t budget) : b_(b), budget_(budget) {}

  struct Result {
    TV value = TV::Unknown;
    std::string witness;  // bindings leading to a definite counterexample/witness
  };

  Result eval(const logic::Formula& f) {
    Result r;
    r.value = go(f, r.witness);
    return r;
  }

  void bind_obj(const std::string& name, ObjVal v) { objs_.emplace_back(name, std::move(v)); }
  void bind_con(const std::string& name, ConVal v) { cons_.emplace_back(name, std::move(v)); }
  std::size_t consumed() const { return consumed_; }

 private:
  ObjVal eval_obj(const logic::ObjTerm& t) {
    if (t->kind == logic::ObjKind::Var) {
      for (auto it = objs_.rbegin(); it != objs_.rend(); ++it)
        if (it->first == t->name) return it->second;
      throw EvalError("unbound object variable '" + t->name + "'");
    }
    ConVal c = eval_con(t->arg);
    auto v = b_.ext(t->op, c);
    if (!v) throw PartialExtError(t->op, b_.show_con(c));
    return *v;
  }

  ConVal eval_con(const logic::ConTerm& c) {
    if (c->kind == logic::ConKind::Var) {
      for (auto it = cons_.rbegin(); it != cons_.rend(); ++it)
        if (it->first == c->name) return it->second;
      throw EvalError("unbound concept variable '" + c->name + "'");
    }
    ConVal fn = eval_con(c->fn);
    std::vector<ObjVal> args;
    for (auto& a : c->args) args.push_back(eval_obj(a));
    return b_.apply(fn, args);
  }

  TV go(const logic::Formula& f, std::string& witness) {
    using logic::FKind;
    switch (f->kind) {
      case FKind::ObjEq: return b_.obj_equal(eval_obj(f->t1), eval_obj(f->t2)) ? TV::True : TV::False;
      case FKind::ConEq: return b_.con_equal(eval_con(f->c1), eval_con(f->c2)) ? TV::True : TV::False;
      case FKind::Pred: {
        ConVal c = eval_con(f->c1);
        std::vector<ObjVal> args;
        for (auto& a : f->args) args.push_back(eval_obj(a));
        return b_.holds(c, args) ? TV::True : TV::False;
      }
      case FKind::Less: {
        if (!b_.has_order()) throw EvalError("order atom on a structure without order");
        return b_.less(eval_obj(f->t1), eval_obj(f->t2)) ? TV::True : TV::False;
      }
      case FKind::Not: return tv_not(go(f->f1, witness));
      case FKind::And: {
        TV a = go(f->f1, witness);
        if (a == TV::False) return TV::False;
        return tv_and(a, go(f->f2, witness));
      }
      case FKind::Or: {
        TV a = go(f->f1, witness);
        if (a == TV::True) return TV::True;
        return tv_or(a, go(f->f2, witness));
      }
      case FKind::Implies: {
        TV a = go(f->f1, witness);
        if (a == TV::False) return TV::True;
        return tv_or(tv_not(a), go(f->f2, witness));
      }
      case FKind::Iff: {
        TV a = go(f->f1, witness);
        TV b = go(f->f2, witness);
        if (a == TV::Unknown || b == TV::Unknown) return TV::Unknown;
        return a == b ? TV::True : TV::False;
      }
      case FKind::ForallObj:
      case FKind::ExistsObj: {
        bool forall = f->kind == FKind::ForallObj;
        bool exhausted = false;
        bool saw_unknown = false;
        objs_.emplace_back(f->var, ObjVal{});
        for (std::size_t i = 0;; ++i) {
          auto v = b_.object_at(i);
          if (!v) {
            exhausted = true;
            break;
          }
          if (i >= budget_) break;  // more items exist past the budget
          ++consumed_;
          objs_.back().second = *v;
          TV r = go(f->f1, witness);
          if (forall && r == TV::False) {
            prepend_witness(witness, f->var + " := " + b_.show_obj(*v));
            objs_.pop_back();
            return TV::False;
          }
          if (!forall && r == TV::True) {
            prepend_witness(witness, f->var + " := " + b_.show_obj(*v));
            objs_.pop_back();
            return TV::True;
          }
          if (r == TV::Unknown) saw_unknown = true;
        }
        objs_.pop_back();
        if (!exhausted || saw_unknown) return TV::Unknown;
        return forall ? TV::True : TV::False;
      }
      case FKind::ForallCon:
      case FKind::ExistsCon: {
        bool forall = f->kind == FKind::ForallCon;
        bool exhausted = false;
        bool saw_unknown = false;
        bool bound = false;
        for (std::size_t i = 0;; ++i) {
          auto v = b_.concept_at(f->arity, i);
          if (!v) {
            exhausted = true;
            break;
          }
          if (i >= budget_) break;  // more items exist past the budget
          ++consumed_;
          if (!bound) {
            cons_.emplace_back(f->var, *v);
            bound = true;
          } else {
            cons_.back().second = *v;
          }
          TV r = go(f->f1, witness);
          if (forall && r == TV::False) {
            prepend_witness(witness, f->var + " := " + b_.show_con(*v));
            cons_.pop_back();
            return TV::False;
          }
          if (!forall && r == TV::True) {
            prepend_witness(witness, f->var + " := " + b_.show_con(*v));
            cons_.pop_back();
            return TV::True;
          }
          if (r == TV::Unknown) saw_unknown = true;
        }
        if (bound) cons_.pop_back();
        if (!exhausted || saw_unknown) return TV::Unknown;
        return forall ? TV::True : TV::False;
      }
    }
    throw EvalError("unreachable formula kind");
  }

  static void prepend_witness(std::string& witness, const std::string& binding) {
    witness = witness.empty() ? binding : binding + ", " + witness;
  }

  Backend& b_;
  std::size_t budget_;
  std::size_t consumed_ = 0;
  std::vector<std::pair<std::string, ObjVal>> objs_;
  std::vector<std::pair<std::string, ConVal>> cons_;
};

/// Evaluates a sentence against a lazy backend within the given
/// per-quantifier budget.
template <class Backend>
Verdict evaluate_lazy(Backend& backend, const logic::Formula& f, std::size_t budget) {
  LazyEvaluator<Backend> ev(backend, budget);
  auto r = ev.eval(f);
  switch (r.value) {
    case TV::True: return Verdict::holds(ev.consumed());
    case TV::False: return Verdict::fails(r.witness, ev.consumed());
    default: return Verdict::unknown(ev.consumed());
  }
}

}  // namespace abstractis::model

#endif  // ABSTRACTIS_EVALUATE_HPP
