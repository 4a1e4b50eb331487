#include <catch2/catch_amalgamated.hpp>

#include "abstractis/enumerate.hpp"
#include "abstractis/evaluate.hpp"
#include "abstractis/parser.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace abstractis;
using namespace abstractis::model;
using fixtures::rel1;

static logic::Signature running_sig() {
  logic::Signature sig;
  sig.ext_arities = {1};
  sig.has_order = true;
  return sig;
}

TEST_CASE("trivially valid sentence holds in any structure") {
  auto s = fixtures::von_neumann_012();
  CHECK(evaluate(s, logic::parse("forall x. x = x")));
  CHECK(!evaluate(s, logic::parse("exists x. not x = x")));
}

TEST_CASE("basic law V holds on the running structure's family") {
  auto s = fixtures::von_neumann_012();
  auto blv = logic::parse("forall X:1. forall Y:1. (ext1(X) = ext1(Y) <-> X == Y)", running_sig());
  CHECK(evaluate(s, blv));
}

TEST_CASE("witnessed existential over concepts") {
  auto s = fixtures::von_neumann_012();
  // the unique concept with ext value 2 is {0,1}, and 1 is a member
  auto f = logic::parse("exists X:1. (ext1(X) = t & X(u))", running_sig());
  Assignment asg;
  asg.objects["t"] = 2;
  asg.objects["u"] = 1;
  CHECK(evaluate(s, f, asg));
  asg.objects["u"] = 2;
  CHECK(!evaluate(s, f, asg));
}

TEST_CASE("partial extension operators raise a tagged error") {
  ExhaustiveStructure s;
  s.add_object("a");
  s.add_object("b");
  s.add_ext_op(1);
  s.add_concept(rel1(2, {}));
  s.add_concept(rel1(2, {0}));
  s.set_ext(0, rel1(2, {}), 0);
  auto f = logic::parse("forall X:1. ext1(X) = ext1(X)", running_sig());
  CHECK_THROWS_AS(evaluate(s, f), PartialExtError);
}

TEST_CASE("evaluation errors") {
  auto s = fixtures::von_neumann_012();
  CHECK_THROWS_AS(evaluate(s, logic::parse("x = x")), EvalError);  // unbound
  ExhaustiveStructure no_order;
  no_order.add_object("a");
  logic::Signature osig;
  osig.has_order = true;
  CHECK_THROWS_AS(evaluate(no_order, logic::parse("forall x. x < x", osig)), EvalError);
}

TEST_CASE("application terms evaluate as sections") {
  ExhaustiveStructure s;
  s.add_object("a");
  s.add_object("b");
  s.add_concept(fixtures::rel2(2, {{0, 1}, {1, 1}}));
  auto f = logic::parse("forall R:2. (R[x](y) <-> R(x,y))");
  Assignment asg;
  asg.objects["x"] = 0;
  asg.objects["y"] = 1;
  CHECK(evaluate(s, f, asg));
}

TEST_CASE("evaluator agrees with the brute-force oracle on enumerated formulas") {
  std::vector<ExhaustiveStructure> corpus;
  corpus.push_back(fixtures::von_neumann_012());
  corpus.push_back(fixtures::quine_atom());
  corpus.push_back(fixtures::pure_powerset(2, 2));
  corpus.push_back(fixtures::pure_powerset(3, 1));

  logic::Signature sig;
  sig.object_vars = {"x"};
  sig.concept_vars = {{"P", 1}};
  sig.ext_arities = {1};
  sig.has_order = true;
  logic::EnumLimits lim;
  lim.quant_concept_max_arity = 2;

  for (auto& S : corpus) {
    // skip signature pieces the structure lacks
    logic::Signature use = sig;
    use.has_order = S.has_order();
    if (S.ext_count() == 0) use.ext_arities.clear();
    auto brute = oracle::reflect(S);
    std::size_t checked = 0;
    for_each_formula(use, 2, lim, [&](const logic::Formula& f) {
      Assignment asg;
      oracle::BruteEnv benv;
      for (ObjId o = 0; o < S.object_count(); ++o) {
        asg.objects["x"] = o;
        benv.objs["x"] = o;
        for (auto& p : S.family(1)) {
          asg.concepts["P"] = p;
          oracle::TupleSet ts;
          for (auto& t : p.tuples()) ts.insert(oracle::Tuple(t.begin(), t.end()));
          benv.cons["P"] = ts;

          bool lib_threw = false, orc_threw = false, lib = false, orc = false;
          try {
            lib = evaluate(S, f, asg);
          } catch (const EvalError&) {
            lib_threw = true;
          }
          try {
            oracle::BruteEnv e2 = benv;
            orc = oracle::brute_eval(brute, f, e2);
          } catch (const oracle::BruteAbort&) {
            orc_threw = true;
          }
          INFO(logic::print(f) << "  [x=" << o << "]");
          REQUIRE(lib_threw == orc_threw);
          if (!lib_threw) REQUIRE(lib == orc);
          ++checked;
        }
        if (S.family(1).empty()) {
          // no unary concepts: only check formulas not using P
          auto fv = free_vars(f);
          if (!fv.concepts.empty()) continue;
          bool lib = evaluate(S, f, asg);
          oracle::BruteEnv e2 = benv;
          bool orc = oracle::brute_eval(brute, f, e2);
          REQUIRE(lib == orc);
          ++checked;
        }
      }
      return true;
    });
    CHECK(checked > 0);
  }
}

// A toy lazy backend wrapping an exhaustive structure, used to exercise the
// three-valued evaluator's budget semantics.
struct ToyLazy {
  using ObjVal = ObjId;
  using ConVal = Relation;
  const ExhaustiveStructure& S;

  std::optional<ObjVal> object_at(std::size_t i) {
    if (i >= S.object_count()) return std::nullopt;
    return static_cast<ObjId>(i);
  }
  std::optional<ConVal> concept_at(int arity, std::size_t i) {
    const auto& fam = S.family(arity);
    if (i >= fam.size()) return std::nullopt;
    return fam[i];
  }
  bool obj_equal(ObjVal a, ObjVal b) const { return a == b; }
  bool con_equal(const ConVal& a, const ConVal& b) const { return a == b; }
  bool holds(const ConVal& c, std::span<const ObjVal> t) const { return c.test(t); }
  ConVal apply(const ConVal& c, std::span<const ObjVal> t) const { return c.section(t); }
  int ext_count() const { return S.ext_count(); }
  int ext_arity(int op) const { return S.ext_arity(op); }
  std::optional<ObjVal> ext(int op, const ConVal& c) const { return S.ext_value(op, c); }
  bool has_order() const { return S.has_order(); }
  bool less(ObjVal a, ObjVal b) const { return S.less(a, b); }
  std::string show_obj(ObjVal o) const { return S.object_name(o); }
  std::string show_con(const ConVal& c) const { return S.relation_literal(c); }
};

TEST_CASE("lazy evaluation returns Unknown at exhausted budget, never a guess") {
  auto s = fixtures::von_neumann_012();
  ToyLazy lazy{s};
  auto blv = logic::parse("forall X:1. forall Y:1. (ext1(X) = ext1(Y) <-> X == Y)", running_sig());

  auto v = evaluate_lazy(lazy, blv, 100);
  CHECK(v.status == Verdict::Status::Holds);  // enumerators exhaust within budget

  auto v0 = evaluate_lazy(lazy, blv, 0);
  CHECK(v0.status == Verdict::Status::Unknown);

  // a genuine counterexample is found within budget and carries a witness
  auto bad = logic::parse("forall x. forall y. x = y");
  auto v2 = evaluate_lazy(lazy, bad, 2);
  CHECK(v2.status == Verdict::Status::Fails);
  CHECK(!v2.witness.empty());

  // an existential that would need items beyond the budget is Unknown
  auto needs3 = logic::parse("exists x. forall y. not x < y", running_sig());
  auto v3 = evaluate_lazy(lazy, needs3, 2);
  CHECK(v3.status == Verdict::Status::Unknown);
  auto v4 = evaluate_lazy(lazy, needs3, 3);
  CHECK(v4.status == Verdict::Status::Holds);
}
