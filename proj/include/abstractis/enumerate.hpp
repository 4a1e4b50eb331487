#ifndef ABSTRACTIS_ENUMERATE_HPP
#define ABSTRACTIS_ENUMERATE_HPP

#include <functional>
#include <string>
#include <vector>

#include "abstractis/formula.hpp"

namespace abstractis::logic {

struct EnumCapExceeded : std::runtime_error {
  explicit EnumCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Bounds for the formula enumerator. Depth counts connective and
/// quantifier nodes; atoms are depth 0. Terms do not count toward depth
/// but their nesting (extension operators and applications inside terms)
/// is capped separately, otherwise the atom supply would be infinite.
struct EnumLimits {
  int depth_cap = 8;
  std::size_t count_cap = 5'000'000;
  int term_nesting = 1;
  int quant_concept_max_arity = 0;  // 0 disables concept quantifiers
  bool allow_object_quant = true;
};

namespace detail {

struct EnumCtx {
  std::vector<std::string> objects;                  // in scope, outermost first
  std::vector<std::pair<std::string, int>> concepts; // name, arity
  int obj_binders = 0;
  int con_binders = 0;
};

class Enumerator {
 public:
  Enumerator(const Signature& sig, const EnumLimits& lim) : sig_(sig), lim_(lim) {}

  bool run(int depth, const std::function<bool(const Formula&)>& fn) {
    EnumCtx ctx;
    ctx.objects = sig_.object_vars;
    for (auto& [n, a] : sig_.concept_vars) ctx.concepts.emplace_back(n, a);
    for (int d = 0; d <= depth; ++d)
      if (!gen(d, ctx, fn)) return false;
    return true;
  }

  std::size_t yielded() const { return yielded_; }

 private:
  bool yield(const Formula& f, const std::function<bool(const Formula&)>& fn) {
    if (++yielded_ > lim_.count_cap)
      throw EnumCapExceeded("formula enumeration cap of " + std::to_string(lim_.count_cap) +
                            " exceeded");
    return fn(f);
  }

  struct Terms {
    std::vector<ObjTerm> objects;
    std::vector<ConTerm> concepts;
  };

  Terms terms_for(const EnumCtx& ctx) const {
    Terms t0;
    for (auto& name : ctx.objects) t0.objects.push_back(obj_var(name));
    for (auto& [name, arity] : ctx.concepts) t0.concepts.push_back(con_var(name, arity));
    Terms cur = t0;
    for (int level = 0; level < lim_.term_nesting; ++level) {
      Terms next = cur;
      for (int op = 0; op < sig_.ext_count(); ++op)
        for (auto& c : cur.concepts)
          if (c->arity == sig_.ext_arities[op]) next.objects.push_back(ext_term(op, c));
      for (auto& c : cur.concepts)
        for (int k = 1; k < c->arity; ++k)
          append_applications(c, k, cur.objects, next.concepts);
      dedup(next);
      cur = std::move(next);
    }
    return cur;
  }

  static void dedup(Terms& t) {
    auto uniq_obj = [](std::vector<ObjTerm>& v) {
      std::vector<ObjTerm> out;
      for (auto& x : v) {
        bool dup = false;
        for (auto& y : out) dup = dup || equal(x, y);
        if (!dup) out.push_back(x);
      }
      v = std::move(out);
    };
    auto uniq_con = [](std::vector<ConTerm>& v) {
      std::vector<ConTerm> out;
      for (auto& x : v) {
        bool dup = false;
        for (auto& y : out) dup = dup || equal(x, y);
        if (!dup) out.push_back(x);
      }
      v = std::move(out);
    };
    uniq_obj(t.objects);
    uniq_con(t.concepts);
  }

  static void append_applications(const ConTerm& c, int k, const std::vector<ObjTerm>& objs,
                                  std::vector<ConTerm>& out) {
    if (objs.empty()) return;
    std::vector<ObjTerm> args(static_cast<std::size_t>(k));
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    while (true) {
      for (int i = 0; i < k; ++i) args[static_cast<std::size_t>(i)] = objs[idx[static_cast<std::size_t>(i)]];
      out.push_back(apply_term(c, args));
      int pos = k - 1;
      while (pos >= 0) {
        if (++idx[static_cast<std::size_t>(pos)] < objs.size()) break;
        idx[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }

  bool gen_atoms(const EnumCtx& ctx, const std::function<bool(const Formula&)>& fn) {
    Terms t = terms_for(ctx);
    for (auto& a : t.objects)
      for (auto& b : t.objects)
        if (!yield(obj_eq(a, b), fn)) return false;
    if (sig_.has_order)
      for (auto& a : t.objects)
        for (auto& b : t.objects)
          if (!yield(less(a, b), fn)) return false;
    for (auto& c : t.concepts) {
      if (t.objects.empty()) break;
      std::vector<ObjTerm> args(static_cast<std::size_t>(c->arity));
      std::vector<std::size_t> idx(static_cast<std::size_t>(c->arity), 0);
      while (true) {
        for (int i = 0; i < c->arity; ++i)
          args[static_cast<std::size_t>(i)] = t.objects[idx[static_cast<std::size_t>(i)]];
        if (!yield(pred(c, args), fn)) return false;
        int pos = c->arity - 1;
        while (pos >= 0) {
          if (++idx[static_cast<std::size_t>(pos)] < t.objects.size()) break;
          idx[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    }
    for (auto& c : t.concepts)
      for (auto& d : t.concepts)
        if (c->arity == d->arity && !equal(c, d))
          if (!yield(con_eq(c, d), fn)) return false;
    return true;
  }

  // Formulas of exactly depth d in the given context.
  bool gen(int d, EnumCtx& ctx, const std::function<bool(const Formula&)>& fn) {
    if (d == 0) return gen_atoms(ctx, fn);
    // negation
    if (!gen(d - 1, ctx, [&](const Formula& f) { return yield(neg(f), fn); })) return false;
    // binary connectives over splits i + j = d - 1; the right operand is
    // generated under the original context, not under binders the left
    // operand's generation is momentarily inside
    static constexpr FKind bins[] = {FKind::And, FKind::Or, FKind::Implies, FKind::Iff};
    for (FKind k : bins)
      for (int i = 0; i < d; ++i) {
        int j = d - 1 - i;
        EnumCtx snapshot = ctx;
        bool go = gen(i, ctx, [&](const Formula& f1) {
          return gen(j, snapshot, [&](const Formula& f2) { return yield(mk_binary(k, f1, f2), fn); });
        });
        if (!go) return false;
      }
    // object quantifiers with canonical bound names v0, v1, ...
    if (lim_.allow_object_quant) {
      std::string name = "v" + std::to_string(ctx.obj_binders);
      ctx.objects.push_back(name);
      ++ctx.obj_binders;
      bool go = gen(d - 1, ctx, [&](const Formula& f) {
                  return yield(quant_obj(true, name, f), fn);
                }) &&
                gen(d - 1, ctx, [&](const Formula& f) {
                  return yield(quant_obj(false, name, f), fn);
                });
      --ctx.obj_binders;
      ctx.objects.pop_back();
      if (!go) return false;
    }
    // concept quantifiers with canonical bound names V0, V1, ...
    for (int a = 1; a <= lim_.quant_concept_max_arity; ++a) {
      std::string name = "V" + std::to_string(ctx.con_binders);
      ctx.concepts.emplace_back(name, a);
      ++ctx.con_binders;
      bool go = gen(d - 1, ctx, [&](const Formula& f) {
                  return yield(quant_con(true, name, a, f), fn);
                }) &&
                gen(d - 1, ctx, [&](const Formula& f) {
                  return yield(quant_con(false, name, a, f), fn);
                });
      --ctx.con_binders;
      ctx.concepts.pop_back();
      if (!go) return false;
    }
    return true;
  }

  const Signature& sig_;
  const EnumLimits& lim_;
  std::size_t yielded_ = 0;
};

}  // namespace detail

/// Visits every formula of depth <= depth over the signature, in a fixed
/// deterministic order, duplicate-free up to renaming of bound variables
/// (bound names are canonical by construction). The callback returns
/// false to stop early. Throws EnumCapExceeded past the configured caps.
inline void for_each_formula(const Signature& sig, int depth, const EnumLimits& lim,
                             const std::function<bool(const Formula&)>& fn) {
  if (depth > lim.depth_cap)
    throw EnumCapExceeded("requested depth " + std::to_string(depth) +
                          " exceeds the configured cap " + std::to_string(lim.depth_cap));
  detail::Enumerator e(sig, lim);
  e.run(depth, fn);
}

/// Materializes the enumeration into a vector.
inline std::vector<Formula> enumerate_formulas(const Signature& sig, int depth,
                                               const EnumLimits& lim = {}) {
  std::vector<Formula> out;
  for_each_formula(sig, depth, lim, [&](const Formula& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

}  // namespace abstractis::logic

#endif  // ABSTRACTIS_ENUMERATE_HPP
