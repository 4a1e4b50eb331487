#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "abstractis/enumerate.hpp"
#include "abstractis/parser.hpp"

using namespace abstractis::logic;

TEST_CASE("depth 0 with one object variable yields only x = x") {
  Signature sig;
  sig.object_vars = {"x"};
  auto v = enumerate_formulas(sig, 0);
  REQUIRE(v.size() == 1);
  CHECK(print(v[0]) == "x = x");
}

TEST_CASE("depth 0 picks up order and predication atoms from the signature") {
  Signature sig;
  sig.object_vars = {"x"};
  sig.concept_vars = {{"P", 1}};
  sig.has_order = true;
  auto v = enumerate_formulas(sig, 0);
  // x = x, x < x, P(x)
  REQUIRE(v.size() == 3);
  std::set<std::string> texts;
  for (auto& f : v) texts.insert(print(f));
  CHECK(texts == std::set<std::string>{"x = x", "x < x", "P(x)"});
}

TEST_CASE("depth 0 with empty variable pool is empty") {
  Signature sig;
  auto v = enumerate_formulas(sig, 0);
  CHECK(v.empty());
}

TEST_CASE("depth 1 over one unary concept constant includes not P(x) and exists") {
  Signature sig;
  sig.object_vars = {"x"};
  sig.concept_vars = {{"P", 1}};
  auto v = enumerate_formulas(sig, 1);
  std::set<std::string> texts;
  for (auto& f : v) texts.insert(print(f));
  CHECK(texts.count("not P(x)") == 1);
  CHECK(texts.count("exists v0. P(v0)") == 1);
  CHECK(texts.count("forall v0. v0 = x") == 1);
}

// Independent count oracle for the tiny signature {x} with one unary P and
// object quantifiers only. Atoms in a context with k extra object variables
// in scope: (1+k)^2 equalities + (1+k) predications. Formulas of depth d:
//   F(d,k) = F(d-1,k) [not] + 4 * sum_{i+j=d-1} F(i,k)F(j,k) + 2 F(d-1,k+1)
static std::size_t count_oracle(int d, int k) {
  if (d == 0) {
    std::size_t n = static_cast<std::size_t>(1 + k);
    return n * n + n;
  }
  std::size_t total = count_oracle(d - 1, k);
  for (int i = 0; i < d; ++i) total += 4 * count_oracle(i, k) * count_oracle(d - 1 - i, k);
  total += 2 * count_oracle(d - 1, k + 1);
  return total;
}

TEST_CASE("enumeration counts match the hand recurrence at depths 0..2") {
  Signature sig;
  sig.object_vars = {"x"};
  sig.concept_vars = {{"P", 1}};
  for (int depth = 0; depth <= 2; ++depth) {
    std::size_t expect = 0;
    for (int d = 0; d <= depth; ++d) expect += count_oracle(d, 0);
    auto v = enumerate_formulas(sig, depth);
    INFO("depth " << depth);
    CHECK(v.size() == expect);
  }
}

TEST_CASE("enumeration is duplicate-free up to bound renaming and deterministic") {
  Signature sig;
  sig.object_vars = {"x"};
  sig.concept_vars = {{"P", 1}};
  EnumLimits lim;
  lim.quant_concept_max_arity = 1;
  auto v1 = enumerate_formulas(sig, 2, lim);
  auto v2 = enumerate_formulas(sig, 2, lim);
  REQUIRE(v1.size() == v2.size());
  std::set<std::string> keys;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    CHECK(equal(v1[i], v2[i]));
    CHECK(keys.insert(canonical_key(v1[i])).second);
  }
}

TEST_CASE("round trip parse(print(f)) = f over the depth-2 enumeration") {
  Signature sig;
  sig.object_vars = {"x"};
  sig.concept_vars = {{"P", 1}};
  sig.ext_arities = {1};
  sig.has_order = true;
  EnumLimits lim;
  lim.quant_concept_max_arity = 1;
  std::size_t n = 0;
  for_each_formula(sig, 2, lim, [&](const Formula& f) {
    auto back = parse(print(f), sig);
    if (!equal(f, back)) {
      INFO(print(f));
      CHECK(equal(f, back));
    }
    ++n;
    return true;
  });
  CHECK(n > 1000);
}

TEST_CASE("caps are enforced") {
  Signature sig;
  sig.object_vars = {"x"};
  EnumLimits lim;
  lim.count_cap = 10;
  CHECK_THROWS_AS(enumerate_formulas(sig, 3, lim), EnumCapExceeded);
  EnumLimits lim2;
  lim2.depth_cap = 2;
  CHECK_THROWS_AS(enumerate_formulas(sig, 3, lim2), EnumCapExceeded);
}

TEST_CASE("ext terms appear at the configured nesting") {
  Signature sig;
  sig.object_vars = {"x"};
  sig.concept_vars = {{"X", 1}};
  sig.ext_arities = {1};
  auto v = enumerate_formulas(sig, 0);
  std::set<std::string> texts;
  for (auto& f : v) texts.insert(print(f));
  CHECK(texts.count("ext1(X) = x") == 1);
  CHECK(texts.count("X(ext1(X))") == 1);
}
