// Brute-force oracles used by the unit and acceptance suites. These are
// deliberately naive, set-based implementations kept independent of the
// library's bitset/evaluator code paths.
#ifndef ABSTRACTIS_TESTS_ORACLES_HPP
#define ABSTRACTIS_TESTS_ORACLES_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "abstractis/formula.hpp"
#include "abstractis/structure.hpp"

namespace oracle {

using Tuple = std::vector<unsigned>;
using TupleSet = std::set<Tuple>;

struct BruteOp {
  int arity;
  std::vector<std::pair<TupleSet, unsigned>> table;
};

struct BruteStructure {
  unsigned n = 0;                            // objects 0..n-1
  std::vector<std::vector<TupleSet>> fams;   // fams[arity-1], insertion order
  std::vector<BruteOp> ops;
  std::vector<unsigned> order;               // ascending ranks; empty = none
};

inline BruteStructure reflect(const abstractis::model::ExhaustiveStructure& S) {
  BruteStructure b;
  b.n = S.object_count();
  b.fams.resize(static_cast<std::size_t>(S.max_arity()));
  for (int a = 1; a <= S.max_arity(); ++a)
    for (auto& r : S.family(a)) {
      TupleSet ts;
      for (auto& t : r.tuples()) ts.insert(Tuple(t.begin(), t.end()));
      b.fams[static_cast<std::size_t>(a - 1)].push_back(ts);
    }
  for (int op = 0; op < S.ext_count(); ++op) {
    BruteOp bo;
    bo.arity = S.ext_arity(op);
    for (auto& [idx, val] : S.ext_table(op)) {
      TupleSet ts;
      for (auto& t : S.family(bo.arity)[idx].tuples()) ts.insert(Tuple(t.begin(), t.end()));
      bo.table.emplace_back(ts, val);
    }
    b.ops.push_back(std::move(bo));
  }
  if (S.has_order())
    for (auto o : S.objects_in_order()) b.order.push_back(o);
  return b;
}

struct BruteAbort : std::runtime_error {
  explicit BruteAbort(const std::string& w) : std::runtime_error(w) {}
};

struct BruteEnv {
  std::map<std::string, unsigned> objs;
  std::map<std::string, TupleSet> cons;
};

inline unsigned brute_obj(const BruteStructure& S, const abstractis::logic::ObjTerm& t,
                          BruteEnv& env);
inline TupleSet brute_con(const BruteStructure& S, const abstractis::logic::ConTerm& c,
                          BruteEnv& env);

inline unsigned brute_obj(const BruteStructure& S, const abstractis::logic::ObjTerm& t,
                          BruteEnv& env) {
  using namespace abstractis::logic;
  if (t->kind == ObjKind::Var) {
    auto it = env.objs.find(t->name);
    if (it == env.objs.end()) throw BruteAbort("unbound object var " + t->name);
    return it->second;
  }
  TupleSet c = brute_con(S, t->arg, env);
  if (t->op < 0 || t->op >= static_cast<int>(S.ops.size())) throw BruteAbort("no such ext op");
  for (auto& [dom, val] : S.ops[static_cast<std::size_t>(t->op)].table)
    if (dom == c) return val;
  throw BruteAbort("ext undefined");
}

inline TupleSet brute_con(const BruteStructure& S, const abstractis::logic::ConTerm& c,
                          BruteEnv& env) {
  using namespace abstractis::logic;
  if (c->kind == ConKind::Var) {
    auto it = env.cons.find(c->name);
    if (it == env.cons.end()) throw BruteAbort("unbound concept var " + c->name);
    return it->second;
  }
  TupleSet fn = brute_con(S, c->fn, env);
  Tuple front;
  for (auto& a : c->args) front.push_back(brute_obj(S, a, env));
  TupleSet out;
  for (auto& t : fn) {
    if (t.size() <= front.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < front.size(); ++i) match = match && t[i] == front[i];
    if (match) out.insert(Tuple(t.begin() + static_cast<long>(front.size()), t.end()));
  }
  return out;
}

// enumerate every subset of n^arity tuples? no: concept quantifiers range
// over the structure's family, which is what the semantics prescribes.
inline bool brute_eval(const BruteStructure& S, const abstractis::logic::Formula& f,
                       BruteEnv& env) {
  using namespace abstractis::logic;
  switch (f->kind) {
    case FKind::ObjEq: return brute_obj(S, f->t1, env) == brute_obj(S, f->t2, env);
    case FKind::ConEq: return brute_con(S, f->c1, env) == brute_con(S, f->c2, env);
    case FKind::Pred: {
      TupleSet c = brute_con(S, f->c1, env);
      Tuple t;
      for (auto& a : f->args) t.push_back(brute_obj(S, a, env));
      return c.count(t) > 0;
    }
    case FKind::Less: {
      if (S.order.empty()) throw BruteAbort("no order");
      unsigned a = brute_obj(S, f->t1, env), b = brute_obj(S, f->t2, env);
      std::size_t ra = 0, rb = 0;
      for (std::size_t i = 0; i < S.order.size(); ++i) {
        if (S.order[i] == a) ra = i;
        if (S.order[i] == b) rb = i;
      }
      return ra < rb;
    }
    case FKind::Not: return !brute_eval(S, f->f1, env);
    case FKind::And: return brute_eval(S, f->f1, env) && brute_eval(S, f->f2, env);
    case FKind::Or: return brute_eval(S, f->f1, env) || brute_eval(S, f->f2, env);
    case FKind::Implies: return !brute_eval(S, f->f1, env) || brute_eval(S, f->f2, env);
    case FKind::Iff: return brute_eval(S, f->f1, env) == brute_eval(S, f->f2, env);
    case FKind::ForallObj:
    case FKind::ExistsObj: {
      bool forall = f->kind == FKind::ForallObj;
      bool had = env.objs.count(f->var) > 0;
      unsigned saved = had ? env.objs[f->var] : 0;
      for (unsigned o = 0; o < S.n; ++o) {
        env.objs[f->var] = o;
        bool v = brute_eval(S, f->f1, env);
        if (forall != v) {
          if (had) env.objs[f->var] = saved; else env.objs.erase(f->var);
          return !forall;
        }
      }
      if (had) env.objs[f->var] = saved; else env.objs.erase(f->var);
      return forall;
    }
    case FKind::ForallCon:
    case FKind::ExistsCon: {
      bool forall = f->kind == FKind::ForallCon;
      if (f->arity > static_cast<int>(S.fams.size())) return forall;
      bool had = env.cons.count(f->var) > 0;
      TupleSet saved = had ? env.cons[f->var] : TupleSet{};
      for (auto& rel : S.fams[static_cast<std::size_t>(f->arity - 1)]) {
        env.cons[f->var] = rel;
        bool v = brute_eval(S, f->f1, env);
        if (forall != v) {
          if (had) env.cons[f->var] = saved; else env.cons.erase(f->var);
          return !forall;
        }
      }
      if (had) env.cons[f->var] = saved; else env.cons.erase(f->var);
      return forall;
    }
  }
  throw BruteAbort("unreachable");
}

inline bool brute_eval(const BruteStructure& S, const abstractis::logic::Formula& f) {
  BruteEnv env;
  return brute_eval(S, f, env);
}

}  // namespace oracle

#endif
