// Shared structure builders for tests.
#ifndef ABSTRACTIS_TESTS_FIXTURES_HPP
#define ABSTRACTIS_TESTS_FIXTURES_HPP

#include <vector>

#include "abstractis/structure.hpp"

namespace fixtures {

using abstractis::model::ExhaustiveStructure;
using abstractis::model::ObjId;
using abstractis::model::Relation;

inline Relation rel1(ObjId domain, std::initializer_list<ObjId> members) {
  Relation r(1, domain);
  for (ObjId m : members) r.set(std::vector<ObjId>{m});
  return r;
}

inline Relation rel2(ObjId domain, std::initializer_list<std::pair<ObjId, ObjId>> pairs) {
  Relation r(2, domain);
  for (auto [a, b] : pairs) r.set(std::vector<ObjId>{a, b});
  return r;
}

/// Objects 0,1,2 named "0","1","2"; unary family {}, {0}, {0,1};
/// ext1 maps them to 0, 1, 2; order 0 < 1 < 2. The extensions behave as
/// the von Neumann numerals 0, 1, 2 under the induced membership.
inline ExhaustiveStructure von_neumann_012() {
  ExhaustiveStructure s;
  s.add_object("0");
  s.add_object("1");
  s.add_object("2");
  s.add_ext_op(1);
  s.add_concept(rel1(3, {}));
  s.add_concept(rel1(3, {0}));
  s.add_concept(rel1(3, {0, 1}));
  s.set_ext(0, rel1(3, {}), 0);
  s.set_ext(0, rel1(3, {0}), 1);
  s.set_ext(0, rel1(3, {0, 1}), 2);
  s.set_order({0, 1, 2});
  return s;
}

/// One object q with ext1({q}) = q: a self-membered extension. A second
/// object z = ext1({}) keeps the structure extensional at the object level.
inline ExhaustiveStructure quine_atom() {
  ExhaustiveStructure s;
  s.add_object("q");
  s.add_object("z");
  s.add_ext_op(1);
  s.add_concept(rel1(2, {}));
  s.add_concept(rel1(2, {0}));
  s.set_ext(0, rel1(2, {0}), 0);  // {q} -> q
  s.set_ext(0, rel1(2, {}), 1);   // {}  -> z
  s.set_order({1, 0});
  return s;
}

/// Full unary powerset over n objects, no extension operator.
inline ExhaustiveStructure pure_powerset(ObjId n, int max_arity = 1) {
  ExhaustiveStructure s;
  for (ObjId i = 0; i < n; ++i) s.add_object(std::string(1, static_cast<char>('a' + i)));
  for (int arity = 1; arity <= max_arity; ++arity) {
    Relation empty(arity, n);
    std::size_t tuples = empty.tuple_count();
    for (std::size_t mask = 0; mask < (std::size_t{1} << tuples); ++mask) {
      Relation r(arity, n);
      for (std::size_t t = 0; t < tuples; ++t)
        if ((mask >> t) & 1u) r.set_index(t);
      s.add_concept(r);
    }
  }
  std::vector<ObjId> ord;
  for (ObjId i = 0; i < n; ++i) ord.push_back(i);
  s.set_order(ord);
  return s;
}

}  // namespace fixtures

#endif
