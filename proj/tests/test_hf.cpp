#include <catch2/catch_amalgamated.hpp>

#include "abstractis/hf.hpp"

using namespace abstractis::hf;

static HFSet e() { return HFSet(); }
static HFSet s1() { return singleton(e()); }          // {{}}
static HFSet s01() { return HFSet::make({e(), s1()}); }  // {{},{{}}}

TEST_CASE("ack_code of small sets") {
  CHECK(ack_code(e()) == 0);
  CHECK(ack_code(s1()) == 1);      // 2^0
  CHECK(ack_code(s01()) == 3);     // 2^0 + 2^1
  CHECK(ack_code(singleton(s1())) == 2);  // 2^1
}

TEST_CASE("decode of small codes") {
  CHECK(decode(std::uint64_t{0}) == e());
  CHECK(decode(std::uint64_t{2}) == singleton(s1()));
  CHECK(decode(std::uint64_t{3}) == s01());
}

TEST_CASE("decode/ack_code round trip over all codes below 2^16") {
  for (std::uint64_t n = 0; n < (1u << 16); ++n) {
    HFSet s = decode(n);
    CHECK(ack_code(s) == n);
  }
}

TEST_CASE("canonical_cmp matches code comparison and is a strict total order") {
  CHECK(canonical_cmp(e(), s1()) == Cmp::less);
  CHECK(canonical_cmp(s1(), s1()) == Cmp::equal);
  CHECK(canonical_cmp(singleton(s1()), s01()) == Cmp::less);  // codes 2 < 3

  // all sets of rank <= 4 live below code 2^16; check agreement with codes,
  // antisymmetry and transitivity on a slice
  std::vector<HFSet> sets;
  for (std::uint64_t n = 0; n < 128; ++n) sets.push_back(decode(n));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      Cmp c = canonical_cmp(sets[i], sets[j]);
      if (i < j) CHECK(c == Cmp::less);
      if (i == j) CHECK(c == Cmp::equal);
      if (i > j) CHECK(c == Cmp::greater);
    }
  }
}

TEST_CASE("rank") {
  CHECK(e().rank() == 0);
  CHECK(s1().rank() == 1);
  CHECK(s01().rank() == 2);
  CHECK(decode(std::uint64_t{65535}).rank() == 4);
}

TEST_CASE("equality is extensional and order-insensitive") {
  HFSet a = HFSet::make({e(), s1()});
  HFSet b = HFSet::make({s1(), e(), s1()});  // duplicates and order collapse
  CHECK(a == b);
  CHECK(a.contains(e()));
  CHECK(a.contains(s1()));
  CHECK(!a.contains(s01()));
}

TEST_CASE("kuratowski pair") {
  // (0,0) collapses to {{0}}
  CHECK(pair_set(e(), e()) == singleton(singleton(e())));
  // (0,{0}) is {{0},{0,{0}}}
  HFSet p = pair_set(e(), s1());
  CHECK(p == HFSet::make({singleton(e()), HFSet::make({e(), s1()})}));
  // injectivity spot check
  CHECK(pair_set(e(), s1()) != pair_set(s1(), e()));

  HFSet x, y;
  REQUIRE(unpair(p, x, y));
  CHECK(x == e());
  CHECK(y == s1());
  REQUIRE(unpair(pair_set(s01(), s01()), x, y));
  CHECK(x == s01());
  CHECK(y == s01());
  CHECK(!unpair(s01(), x, y));
}

TEST_CASE("pair injectivity over a slice") {
  std::vector<HFSet> sets;
  for (std::uint64_t n = 0; n < 24; ++n) sets.push_back(decode(n));
  std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> seen;
  for (std::uint64_t i = 0; i < sets.size(); ++i)
    for (std::uint64_t j = 0; j < sets.size(); ++j) {
      HFSet p = pair_set(sets[i], sets[j]);
      auto [it, fresh] = seen.emplace(p.id(), std::make_pair(i, j));
      INFO("pair of codes " << i << "," << j);
      CHECK(fresh);
      (void)it;
    }
}

TEST_CASE("literal print/parse round trip") {
  CHECK(to_literal(e()) == "{}");
  CHECK(to_literal(s01()) == "{{},{{}}}");
  CHECK(parse_literal("{{},{{}}}") == s01());
  CHECK(parse_literal(" { { } , { { } } } ") == s01());
  for (std::uint64_t n = 0; n < 512; ++n) {
    HFSet s = decode(n);
    CHECK(parse_literal(to_literal(s)) == s);
  }
  CHECK_THROWS_AS(parse_literal("{{}"), LiteralParseError);
  CHECK_THROWS_AS(parse_literal("{} x"), LiteralParseError);
}

TEST_CASE("code budget guards runaway sets") {
  std::size_t saved = max_code_bits();
  set_max_code_bits(64);
  // iterated singletons: code of the k-th is 2^2^...^... - rank 7 singleton
  // tower already needs 2^65536 bits
  HFSet t = e();
  for (int i = 0; i < 8; ++i) t = singleton(t);
  CHECK_THROWS_AS(ack_code(t), CodeBudgetExceeded);
  set_max_code_bits(saved);
  CHECK(ack_code(s01()) == 3);
}
