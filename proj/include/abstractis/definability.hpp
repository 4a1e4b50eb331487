#ifndef ABSTRACTIS_DEFINABILITY_HPP
#define ABSTRACTIS_DEFINABILITY_HPP

#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "abstractis/enumerate.hpp"
#include "abstractis/evaluate.hpp"
#include "abstractis/hf.hpp"
#include "abstractis/structure.hpp"

namespace abstractis::model {

struct DefinabilityBudgetExceeded : std::runtime_error {
  explicit DefinabilityBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Object-parameter policy for first-order definability. The structure's
/// own relational content (its concept family members, the graphs of the
/// extension operators, equality, and the order) is always available as
/// atoms; the policy governs which objects may appear as parameters.
struct ParamPolicy {
  enum Kind { None, FromSet, All } kind = All;
  std::vector<ObjId> params;  // FromSet

  static ParamPolicy none() { return {None, {}}; }
  static ParamPolicy all() { return {All, {}}; }
  static ParamPolicy from(std::vector<ObjId> objs) { return {FromSet, std::move(objs)}; }
};

struct DefinableRelation {
  Relation rel;
  std::string how;  // construction recipe, for witnesses
};

struct DefinableFamily {
  int arity_cap = 0;
  std::vector<std::vector<DefinableRelation>> by_arity;  // [a-1], sorted by encoding
  std::size_t total() const {
    std::size_t n = 0;
    for (auto& v : by_arity) n += v.size();
    return n;
  }
  const std::vector<DefinableRelation>& at_arity(int a) const {
    static const std::vector<DefinableRelation> none;
    if (a < 1 || a > arity_cap) return none;
    return by_arity[static_cast<std::size_t>(a - 1)];
  }
  bool contains(const Relation& r) const {
    for (auto& d : at_arity(r.arity()))
      if (d.rel == r) return true;
    return false;
  }
};

namespace detail {

class FixpointBuilder {
 public:
  FixpointBuilder(ObjId domain, int cap, std::size_t budget)
      : domain_(domain), cap_(cap), budget_(budget) {
    rels_.resize(static_cast<std::size_t>(cap));
    how_.resize(static_cast<std::size_t>(cap));
  }

  void add(const Relation& r, const std::string& how) {
    if (r.arity() > cap_) return;
    auto& bucket = index_[r.hash()];
    for (auto [a, i] : bucket)
      if (rels_[static_cast<std::size_t>(a - 1)][i] == r) return;
    std::size_t idx = rels_[static_cast<std::size_t>(r.arity() - 1)].size();
    rels_[static_cast<std::size_t>(r.arity() - 1)].push_back(r);
    how_[static_cast<std::size_t>(r.arity() - 1)].push_back(how);
    bucket.emplace_back(r.arity(), idx);
    work_.emplace_back(r.arity(), idx);
    if (total_() > budget_)
      throw DefinabilityBudgetExceeded("definable-relation budget of " +
                                       std::to_string(budget_) + " exceeded");
  }

  void close() {
    while (!work_.empty()) {
      auto [arity, idx] = work_.front();
      work_.pop_front();
      Relation r = rels_[static_cast<std::size_t>(arity - 1)][idx];
      std::string h = how_[static_cast<std::size_t>(arity - 1)][idx];
      add(r.complement(), "not(" + h + ")");
      if (arity >= 2) {
        std::vector<int> perm(static_cast<std::size_t>(arity));
        std::iota(perm.begin(), perm.end(), 0);
        while (std::next_permutation(perm.begin(), perm.end()))
          add(r.permute(perm), perm_name(perm) + "(" + h + ")");
        for (int i = 0; i < arity; ++i)
          for (int j = i + 1; j < arity; ++j)
            add(r.identify(i, j), "ident[" + std::to_string(i + 1) + "=" +
                                      std::to_string(j + 1) + "](" + h + ")");
        add(r.project_last(), "proj(" + h + ")");
      }
      if (arity + 1 <= cap_) add(r.cylinder(), "cyl(" + h + ")");
      // intersections with everything currently known of the same arity
      auto& peers = rels_[static_cast<std::size_t>(arity - 1)];
      std::size_t snapshot = peers.size();
      for (std::size_t i = 0; i < snapshot; ++i) {
        Relation meet = r.intersect(peers[i]);
        add(meet, "and(" + h + "," + how_[static_cast<std::size_t>(arity - 1)][i] + ")");
      }
    }
  }

  DefinableFamily finish() {
    DefinableFamily out;
    out.arity_cap = cap_;
    out.by_arity.resize(static_cast<std::size_t>(cap_));
    for (int a = 1; a <= cap_; ++a) {
      auto& src = rels_[static_cast<std::size_t>(a - 1)];
      auto& hows = how_[static_cast<std::size_t>(a - 1)];
      std::vector<std::size_t> order(src.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return src[x].encoding_order(src[y]) == std::strong_ordering::less;
      });
      for (std::size_t i : order)
        out.by_arity[static_cast<std::size_t>(a - 1)].push_back({src[i], hows[i]});
    }
    return out;
  }

 private:
  static std::string perm_name(const std::vector<int>& perm) {
    std::string s = "perm[";
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(perm[i] + 1);
    }
    return s + "]";
  }

  std::size_t total_() const {
    std::size_t n = 0;
    for (auto& v : rels_) n += v.size();
    return n;
  }

  ObjId domain_;
  int cap_;
  std::size_t budget_;
  std::vector<std::vector<Relation>> rels_;
  std::vector<std::vector<std::string>> how_;
  std::unordered_map<std::size_t, std::vector<std::pair<int, std::size_t>>> index_;
  std::deque<std::pair<int, std::size_t>> work_;
};

}  // namespace detail

/// First-order definable relations of the structure, per arity up to
/// `arity_cap`: the least family containing the atoms (equality, order,
/// concept family members, extension-operator graphs, and parameter
/// singletons per policy) closed under boolean operations, coordinate
/// permutation and identification, cylindrification, and projection.
/// The fixpoint terminates on finite structures; with all object
/// parameters allowed it is the full powerset at every arity (parameter
/// singletons plus boolean closure), which is returned directly.
inline DefinableFamily definable_relations(const ExhaustiveStructure& S, const ParamPolicy& policy,
                                           int arity_cap = 0, std::size_t budget = 200000) {
  ObjId n = S.object_count();
  if (arity_cap <= 0) arity_cap = std::max(2, S.max_arity());

  bool all_params = policy.kind == ParamPolicy::All ||
                    (policy.kind == ParamPolicy::FromSet &&
                     std::set<ObjId>(policy.params.begin(), policy.params.end()).size() == n);
  if (all_params && n > 0) {
    DefinableFamily out;
    out.arity_cap = arity_cap;
    out.by_arity.resize(static_cast<std::size_t>(arity_cap));
    for (int a = 1; a <= arity_cap; ++a) {
      Relation probe(a, n);
      std::size_t tuples = probe.tuple_count();
      if (tuples > 24)
        throw DefinabilityBudgetExceeded("powerset of " + std::to_string(tuples) +
                                         " tuples is past the budget");
      std::size_t count = std::size_t{1} << tuples;
      if (count > budget)
        throw DefinabilityBudgetExceeded("definable-relation budget of " +
                                         std::to_string(budget) + " exceeded");
      for (std::size_t mask = 0; mask < count; ++mask) {
        Relation r(a, n);
        for (std::size_t t = 0; t < tuples; ++t)
          if ((mask >> t) & 1u) r.set_index(t);
        out.by_arity[static_cast<std::size_t>(a - 1)].push_back(
            {r, "pointwise(parameters)"});
      }
    }
    return out;
  }

  detail::FixpointBuilder fb(n, arity_cap, budget);
  // the trivially definable unary relations seed every arity via cylinders
  fb.add(Relation::full(1, n), "x1 = x1");
  // equality
  if (arity_cap >= 2) {
    Relation eq(2, n);
    for (ObjId i = 0; i < n; ++i) eq.set(std::vector<ObjId>{i, i});
    fb.add(eq, "x1 = x2");
  }
  if (S.has_order() && arity_cap >= 2) {
    Relation lt(2, n);
    for (ObjId a = 0; a < n; ++a)
      for (ObjId b = 0; b < n; ++b)
        if (S.less(a, b)) lt.set(std::vector<ObjId>{a, b});
    fb.add(lt, "x1 < x2");
  }
  // concept family members as atoms
  for (int a = 1; a <= S.max_arity(); ++a)
    for (auto& r : S.family(a))
      if (a <= arity_cap) fb.add(r, S.relation_literal(r) + "(x*)");
  // extension-operator graphs over applications of family members
  for (int op = 0; op < S.ext_count(); ++op) {
    int m = S.ext_arity(op);
    std::string opname = "ext" + std::to_string(op + 1);
    for (int k = m; k <= S.max_arity(); ++k) {
      int free_coords = k - m;          // application arguments
      int graph_arity = free_coords + 1;
      if (graph_arity > arity_cap) continue;
      for (auto& r : S.family(k)) {
        Relation g(graph_arity, n);
        bool any = false;
        if (free_coords == 0) {
          auto v = S.ext_value(op, r);
          if (v) {
            g.set(std::vector<ObjId>{*v});
            any = true;
          }
        } else {
          Relation probe(free_coords, n);
          std::size_t fronts = probe.tuple_count();
          for (std::size_t i = 0; i < fronts; ++i) {
            auto front = probe.tuple_at(i);
            auto v = S.ext_value(op, r.section(front));
            if (v) {
              auto tup = front;
              tup.push_back(*v);
              g.set(tup);
              any = true;
            }
          }
        }
        if (any) fb.add(g, opname + "(" + S.relation_literal(r) + "[x*]) = x'");
      }
    }
  }
  // object parameters
  if (policy.kind == ParamPolicy::FromSet) {
    for (ObjId p : policy.params) {
      Relation s(1, n);
      s.set(std::vector<ObjId>{p});
      fb.add(s, "x1 = " + S.object_name(p));
    }
  }
  fb.close();
  return fb.finish();
}

/// Replaces the unary concept family by the definable unary relations.
/// Other families, the extension tables, and the order are carried over.
inline ExhaustiveStructure defn_step(const ExhaustiveStructure& S, const ParamPolicy& policy,
                                     std::size_t budget = 200000) {
  auto defs = definable_relations(S, policy, std::max(2, S.max_arity()), budget);
  ExhaustiveStructure out;
  for (ObjId i = 0; i < S.object_count(); ++i) out.add_object(S.object_name(i));
  for (int op = 0; op < S.ext_count(); ++op) out.add_ext_op(S.ext_arity(op));
  for (auto& d : defs.at_arity(1)) out.add_concept(d.rel);
  for (int a = 2; a <= S.max_arity(); ++a)
    for (auto& r : S.family(a)) out.add_concept(r);
  for (int op = 0; op < S.ext_count(); ++op) {
    int m = S.ext_arity(op);
    for (auto& [idx, val] : S.ext_table(op)) {
      const Relation& r = S.family(m)[idx];
      if (m == 1 && !defs.contains(r)) continue;  // concept no longer present
      out.add_concept(r);
      out.set_ext(op, r, val);
    }
  }
  if (S.has_order()) out.set_order(S.objects_in_order());
  return out;
}

struct DefnLevel {
  std::vector<hf::HFSet> members;     // the level, as canonical sets
  std::size_t size = 0;
  std::size_t powerset_size = 0;      // size of the pure powerset iterate at this level
  bool equals_powerset_step = false;  // level k+1 == P(level k)
};

struct DefnHierarchy {
  std::vector<DefnLevel> levels;  // levels[0] = base
};

/// Iterates the definable-subsets operator over hereditarily finite sets:
/// level k+1 consists of the subsets of level k definable over the
/// membership structure on level k (object parameters per policy). The
/// report carries the pure powerset iterate alongside for comparison.
inline DefnHierarchy defn_iterate(const std::vector<hf::HFSet>& base, int steps,
                                  const ParamPolicy& policy, std::size_t budget = 200000) {
  DefnHierarchy out;
  std::vector<hf::HFSet> cur = base;
  std::sort(cur.begin(), cur.end(), hf::CanonicalLess{});
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
  std::size_t pow_size = cur.size();
  for (int k = 0; k <= steps; ++k) {
    DefnLevel lvl;
    lvl.members = cur;
    lvl.size = cur.size();
    lvl.powerset_size = pow_size;
    if (k == steps) {
      out.levels.push_back(std::move(lvl));
      break;
    }
    // membership structure on the current level
    ExhaustiveStructure S;
    for (auto& s : cur) S.add_object(hf::to_literal(s));
    ObjId n = S.object_count();
    Relation mem(2, std::max<ObjId>(n, 1));
    if (n > 0) {
      mem = Relation(2, n);
      for (ObjId i = 0; i < n; ++i)
        for (ObjId j = 0; j < n; ++j)
          if (cur[j].contains(cur[i])) mem.set(std::vector<ObjId>{i, j});
      S.add_concept(mem);
    }
    ParamPolicy p = policy;
    if (p.kind == ParamPolicy::FromSet) {
      // parameters are resolved against the current level
      p.params.clear();
      for (ObjId i = 0; i < n; ++i) p.params.push_back(i);
    }
    std::vector<hf::HFSet> next;
    if (n == 0) {
      next.push_back(hf::HFSet());  // only the empty subset is definable
    } else {
      // with every object as a parameter no binary intermediates are needed
      int cap = p.kind == ParamPolicy::None ? 2 : 1;
      auto defs = definable_relations(S, p, cap, budget);
      for (auto& d : defs.at_arity(1)) {
        std::vector<hf::HFSet> elems;
        for (auto& t : d.rel.tuples()) elems.push_back(cur[t[0]]);
        next.push_back(hf::HFSet::make(elems));
      }
      std::sort(next.begin(), next.end(), hf::CanonicalLess{});
      next.erase(std::unique(next.begin(), next.end()), next.end());
    }
    lvl.equals_powerset_step =
        next.size() == (cur.size() >= 63 ? 0 : (std::size_t{1} << cur.size()));
    out.levels.push_back(std::move(lvl));
    cur = std::move(next);
    pow_size = pow_size >= 63 ? SIZE_MAX : (std::size_t{1} << pow_size);
  }
  return out;
}

// ---- definable closure and code surjection ----

struct ClosureOptions {
  int depth = 3;
  int param_slots = 1;                  // parameter variables available to formulas
  logic::EnumLimits limits = {};        // concept-quantifier arity set from the structure
  std::size_t max_formulas = 2'000'000;
};

struct DefinableClosure {
  std::vector<ObjId> members;                       // sorted
  std::map<ObjId, std::string> defined_by;          // first defining instance
};

namespace detail {
inline logic::Signature closure_signature(const ExhaustiveStructure& S, int param_slots) {
  logic::Signature sig;
  sig.object_vars = {"x"};
  for (int i = 0; i < param_slots; ++i) sig.object_vars.push_back("p" + std::to_string(i + 1));
  for (int op = 0; op < S.ext_count(); ++op) sig.ext_arities.push_back(S.ext_arity(op));
  sig.has_order = S.has_order();
  return sig;
}

// Runs fn for every assignment of the parameter slots from `pool`.
inline void for_each_params(const std::vector<ObjId>& pool, int slots,
                            const std::function<void(const std::vector<ObjId>&)>& fn) {
  std::vector<ObjId> cur(static_cast<std::size_t>(slots));
  std::function<void(int)> rec = [&](int i) {
    if (i == slots) {
      fn(cur);
      return;
    }
    for (ObjId p : pool) {
      cur[static_cast<std::size_t>(i)] = p;
      rec(i + 1);
    }
  };
  if (slots == 0)
    fn({});
  else
    rec(0);
}
}  // namespace detail

/// Objects that are the unique solution of some enumerated formula with
/// parameters from A, at the given connective depth. Monotone in both A
/// and the depth. Formula instances whose evaluation errors (a partial
/// extension operator hit) are skipped.
inline DefinableClosure definable_closure(const ExhaustiveStructure& S,
                                          const std::vector<ObjId>& A, ClosureOptions opt = {}) {
  DefinableClosure out;
  if (S.object_count() == 0) return out;
  auto sig = detail::closure_signature(S, opt.param_slots);
  opt.limits.quant_concept_max_arity = std::max(opt.limits.quant_concept_max_arity,
                                                std::min(S.max_arity(), 2));
  opt.limits.count_cap = opt.max_formulas;
  std::set<ObjId> found;
  logic::for_each_formula(sig, opt.depth, opt.limits, [&](const logic::Formula& f) {
    detail::for_each_params(A, opt.param_slots, [&](const std::vector<ObjId>& ps) {
      Assignment asg;
      for (std::size_t i = 0; i < ps.size(); ++i)
        asg.objects["p" + std::to_string(i + 1)] = ps[i];
      std::optional<ObjId> unique;
      int count = 0;
      for (ObjId o = 0; o < S.object_count(); ++o) {
        asg.objects["x"] = o;
        bool v = false;
        try {
          v = evaluate(S, f, asg);
        } catch (const EvalError&) {
          count = 2;  // treat the whole instance as non-defining
          break;
        }
        if (v) {
          ++count;
          unique = o;
          if (count > 1) break;
        }
      }
      if (count == 1 && !found.count(*unique)) {
        found.insert(*unique);
        std::string inst = logic::print(f);
        for (std::size_t i = 0; i < ps.size(); ++i)
          inst += " [p" + std::to_string(i + 1) + " := " + S.object_name(ps[i]) + "]";
        out.defined_by[*unique] = inst;
      }
    });
    return found.size() < S.object_count();  // stop early when everything is covered
  });
  out.members.assign(found.begin(), found.end());
  return out;
}

/// A code is a pair (formula index, parameter tuple). theta maps codes
/// with a unique solution to that solution; iota picks, for each covered
/// object, the enumeration-least code. theta(iota(a)) = a by construction.
struct CodeSurjection {
  struct Code {
    std::size_t formula;
    std::vector<ObjId> params;
  };
  std::vector<logic::Formula> formulas;         // enumeration prefix, in order
  std::vector<std::pair<Code, ObjId>> theta;    // enumeration order
  std::map<ObjId, Code> iota;                   // least code per object
  std::vector<ObjId> uncovered;                 // objects not hit at this depth
};

inline CodeSurjection code_surjection(const ExhaustiveStructure& S, int depth,
                                      const std::vector<ObjId>& params = {},
                                      ClosureOptions opt = {}) {
  CodeSurjection out;
  opt.depth = depth;
  auto sig = detail::closure_signature(S, params.empty() ? 0 : opt.param_slots);
  opt.limits.quant_concept_max_arity = std::max(opt.limits.quant_concept_max_arity,
                                                std::min(S.max_arity(), 2));
  opt.limits.count_cap = opt.max_formulas;
  int slots = params.empty() ? 0 : opt.param_slots;
  logic::for_each_formula(sig, depth, opt.limits, [&](const logic::Formula& f) {
    std::size_t fidx = out.formulas.size();
    out.formulas.push_back(f);
    detail::for_each_params(params, slots, [&](const std::vector<ObjId>& ps) {
      Assignment asg;
      for (std::size_t i = 0; i < ps.size(); ++i)
        asg.objects["p" + std::to_string(i + 1)] = ps[i];
      std::optional<ObjId> unique;
      int count = 0;
      for (ObjId o = 0; o < S.object_count(); ++o) {
        asg.objects["x"] = o;
        bool v = false;
        try {
          v = evaluate(S, f, asg);
        } catch (const EvalError&) {
          count = 2;
          break;
        }
        if (v) {
          ++count;
          unique = o;
          if (count > 1) break;
        }
      }
      if (count == 1) {
        CodeSurjection::Code code{fidx, ps};
        out.theta.emplace_back(code, *unique);
        if (!out.iota.count(*unique)) out.iota.emplace(*unique, code);
      }
    });
    return true;
  });
  for (ObjId o = 0; o < S.object_count(); ++o)
    if (!out.iota.count(o)) out.uncovered.push_back(o);
  return out;
}

// ---- uniformization ----

/// Least-witness uniformization: keeps, for every x in the domain of R,
/// exactly the pair (x, y) with y order-least among the witnesses.
inline std::vector<std::pair<ObjId, ObjId>> uniformize(
    const std::vector<std::pair<ObjId, ObjId>>& R,
    const std::function<bool(ObjId, ObjId)>& less) {
  std::map<ObjId, ObjId> best;
  for (auto& [x, y] : R) {
    auto it = best.find(x);
    if (it == best.end() || less(y, it->second)) best[x] = y;
  }
  std::vector<std::pair<ObjId, ObjId>> out(best.begin(), best.end());
  return out;
}

/// Uniformize a binary relation of the structure by its object order.
inline Relation uniformize(const ExhaustiveStructure& S, const Relation& R) {
  if (R.arity() != 2) throw std::invalid_argument("uniformize expects a binary relation");
  std::vector<std::pair<ObjId, ObjId>> pairs;
  for (auto& t : R.tuples()) pairs.emplace_back(t[0], t[1]);
  auto picked = uniformize(pairs, [&](ObjId a, ObjId b) {
    return S.has_order() ? S.less(a, b) : a < b;
  });
  Relation out(2, R.domain());
  for (auto& [x, y] : picked) out.set(std::vector<ObjId>{x, y});
  return out;
}

}  // namespace abstractis::model

#endif  // ABSTRACTIS_DEFINABILITY_HPP
