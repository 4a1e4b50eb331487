#include <catch2/catch_amalgamated.hpp>

#include "abstractis/structure.hpp"
#include "fixtures.hpp"

using namespace abstractis::model;
using fixtures::rel1;
using fixtures::rel2;

TEST_CASE("relation tuple indexing and coordinate operations") {
  Relation r(2, 3);
  r.set(std::vector<ObjId>{0, 1});
  r.set(std::vector<ObjId>{2, 0});
  CHECK(r.test(std::vector<ObjId>{0, 1}));
  CHECK(!r.test(std::vector<ObjId>{1, 0}));
  CHECK(r.count() == 2);

  auto flip = r.permute({1, 0});  // coordinate 0 goes to slot 1
  CHECK(flip.test(std::vector<ObjId>{1, 0}));
  CHECK(flip.test(std::vector<ObjId>{0, 2}));
  CHECK(flip.count() == 2);

  auto diag = Relation(2, 3);
  diag.set(std::vector<ObjId>{1, 1});
  diag.set(std::vector<ObjId>{0, 1});
  CHECK(diag.identify(0, 1).tuples() == std::vector<std::vector<ObjId>>{{1}});

  auto cyl = rel1(3, {1}).cylinder();
  CHECK(cyl.count() == 3);
  CHECK(cyl.test(std::vector<ObjId>{1, 2}));
  CHECK(cyl.project_last() == rel1(3, {1}));

  CHECK(r.section(std::vector<ObjId>{2}) == rel1(3, {0}));
  CHECK(r.complement().count() == 7);
  CHECK(rel1(3, {0, 1}).intersect(rel1(3, {1, 2})) == rel1(3, {1}));
}

TEST_CASE("relation encoding order is the bit-vector-as-natural order") {
  // encoding: bit i = membership of tuple i; {a} has bit 0, {b} bit 1 ...
  CHECK(rel1(2, {}).encoding_order(rel1(2, {0})) == std::strong_ordering::less);
  CHECK(rel1(2, {0}).encoding_order(rel1(2, {1})) == std::strong_ordering::less);
  CHECK(rel1(2, {1}).encoding_order(rel1(2, {0, 1})) == std::strong_ordering::less);
  CHECK(rel1(2, {0}).encoding_order(rel1(2, {0})) == std::strong_ordering::equal);
}

TEST_CASE("families stay sorted and extension tables follow insertions") {
  ExhaustiveStructure s;
  s.add_object("a");
  s.add_object("b");
  s.add_ext_op(1);
  s.add_concept(rel1(2, {0, 1}));
  s.set_ext(0, rel1(2, {0, 1}), 0);
  // inserting a smaller concept shifts the family index of {a,b}
  s.add_concept(rel1(2, {}));
  CHECK(s.family(1).size() == 2);
  CHECK(s.family(1)[0] == rel1(2, {}));
  CHECK(s.ext_value(0, rel1(2, {0, 1})) == ObjId{0});
  CHECK(!s.ext_value(0, rel1(2, {})).has_value());
  CHECK(s.ext_preimage(0, 0).has_value());
  CHECK(!s.ext_total_on_family(0));
}

TEST_CASE("extension operators must stay injective") {
  ExhaustiveStructure s;
  s.add_object("a");
  s.add_object("b");
  s.add_ext_op(1);
  s.add_concept(rel1(2, {}));
  s.add_concept(rel1(2, {0}));
  s.set_ext(0, rel1(2, {}), 0);
  CHECK_THROWS_AS(s.set_ext(0, rel1(2, {0}), 0), StructureError);
  s.set_ext(0, rel1(2, {0}), 1);  // fine
  CHECK(s.ext_total_on_family(0));
}

TEST_CASE("order validation") {
  ExhaustiveStructure s;
  s.add_object("a");
  s.add_object("b");
  CHECK_THROWS_AS(s.set_order({0}), StructureError);
  CHECK_THROWS_AS(s.set_order({0, 0}), StructureError);
  s.set_order({1, 0});
  CHECK(s.less(1, 0));
  CHECK(!s.less(0, 1));
  CHECK(s.objects_in_order() == std::vector<ObjId>{1, 0});
}

TEST_CASE("structure text round trip") {
  auto s = fixtures::von_neumann_012();
  auto text = s.to_text();
  auto back = ExhaustiveStructure::from_text(text);
  CHECK(back.to_text() == text);
  CHECK(back.object_count() == 3);
  CHECK(back.family(1).size() == 3);
  CHECK(back.ext_value(0, rel1(3, {0, 1})) == ObjId{2});
  CHECK(back.has_order());

  // binary concepts round trip too
  s.add_concept(rel2(3, {{0, 1}, {1, 2}}));
  auto back2 = ExhaustiveStructure::from_text(s.to_text());
  CHECK(back2.family(2).size() == 1);
  CHECK(back2.family(2)[0] == rel2(3, {{0, 1}, {1, 2}}));
}

TEST_CASE("structure text errors") {
  CHECK_THROWS_AS(ExhaustiveStructure::from_text(""), StructureError);
  CHECK_THROWS_AS(ExhaustiveStructure::from_text("objects a b\n"), StructureError);
  CHECK_THROWS_AS(
      ExhaustiveStructure::from_text("abstractis-structure v1\nobjects a\nconcept 1 {zz}\n"),
      StructureError);
  CHECK_THROWS_AS(
      ExhaustiveStructure::from_text(
          "abstractis-structure v1\nobjects a\nextop 1 arity 1\next 1 {a} -> a\n"),
      StructureError);  // concept not in family
}
