#ifndef ABSTRACTIS_STRUCTURE_HPP
#define ABSTRACTIS_STRUCTURE_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "abstractis/relation.hpp"

namespace abstractis::model {

/// Three-valued outcome of a check. Fails always carries a witness that
/// can be replayed; Unknown appears only for budgeted searches.
struct Verdict {
  enum class Status { Holds, Fails, Unknown };
  Status status = Status::Unknown;
  std::string witness;
  std::uint64_t bound = 0;  // budget consumed (instances checked, depth, ...)
  std::string note;         // flags: "partiality", "vacuous-trcl", "semantic-E", ...

  static Verdict holds(std::uint64_t bound = 0, std::string note = {}) {
    return {Status::Holds, "", bound, std::move(note)};
  }
  static Verdict fails(std::string witness, std::uint64_t bound = 0, std::string note = {}) {
    return {Status::Fails, std::move(witness), bound, std::move(note)};
  }
  static Verdict unknown(std::uint64_t bound = 0, std::string note = {}) {
    return {Status::Unknown, "", bound, std::move(note)};
  }
};

inline const char* to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Holds: return "Holds";
    case Verdict::Status::Fails: return "Fails";
    default: return "Unknown";
  }
}

struct StructureError : std::runtime_error {
  explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

/// A finite model (M, S_1, S_2, ..., ext ops, optional order) with every
/// component materialized. Concept families are kept duplicate-free and
/// sorted by canonical encoding, so quantifier enumeration order and
/// reports are deterministic. Extension operators are partial injective
/// maps from a concept family into the objects.
class ExhaustiveStructure {
 public:
  // ---- construction ----

  ObjId add_object(const std::string& name) {
    if (find_object(name)) throw StructureError("duplicate object name '" + name + "'");
    names_.push_back(name);
    return static_cast<ObjId>(names_.size() - 1);
  }

  int add_ext_op(int arity) {
    if (arity < 1) throw StructureError("extension operator arity must be >= 1");
    ops_.push_back({arity, {}});
    return static_cast<int>(ops_.size() - 1);
  }

  /// Inserts into the family of its arity (no-op when already present).
  /// Returns the family index, which is the encoding-order position.
  std::size_t add_concept(const Relation& r) {
    if (r.domain() != object_count())
      throw StructureError("concept domain does not match the structure");
    auto& fam = family_mut(r.arity());
    auto it = std::lower_bound(fam.begin(), fam.end(), r, [](const Relation& a, const Relation& b) {
      return a.encoding_order(b) == std::strong_ordering::less;
    });
    if (it != fam.end() && *it == r) return static_cast<std::size_t>(it - fam.begin());
    std::size_t pos = static_cast<std::size_t>(it - fam.begin());
    fam.insert(it, r);
    // family indices after pos shift by one; fix up ext tables of this arity
    for (auto& op : ops_) {
      if (op.arity != r.arity()) continue;
      std::map<std::size_t, ObjId> fixed;
      for (auto& [idx, val] : op.table) fixed.emplace(idx >= pos ? idx + 1 : idx, val);
      op.table = std::move(fixed);
    }
    return pos;
  }

  void set_ext(int op, const Relation& concept_rel, ObjId value) {
    check_op(op);
    if (concept_rel.arity() != ops_[static_cast<std::size_t>(op)].arity)
      throw StructureError("extension operator arity mismatch");
    if (value >= object_count()) throw StructureError("extension value outside objects");
    auto idx = find_concept(concept_rel);
    if (!idx) throw StructureError("extension operator applied outside the concept family");
    auto& table = ops_[static_cast<std::size_t>(op)].table;
    for (auto& [i, v] : table)
      if (v == value && i != *idx)
        throw StructureError("extension operator must be injective: object '" +
                             object_name(value) + "' already assigned");
    table[*idx] = value;
  }

  void set_order(const std::vector<ObjId>& ascending) {
    if (ascending.size() != object_count())
      throw StructureError("order must list every object exactly once");
    std::vector<bool> seen(object_count(), false);
    for (ObjId o : ascending) {
      if (o >= object_count() || seen[o]) throw StructureError("order is not a permutation");
      seen[o] = true;
    }
    order_ = ascending;
    rank_.assign(object_count(), 0);
    for (std::size_t i = 0; i < ascending.size(); ++i) rank_[ascending[i]] = i;
  }

  // ---- objects ----

  ObjId object_count() const { return static_cast<ObjId>(names_.size()); }
  const std::string& object_name(ObjId o) const { return names_[o]; }

  std::optional<ObjId> find_object(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<ObjId>(i);
    return std::nullopt;
  }

  bool has_order() const { return !order_.empty(); }
  bool less(ObjId a, ObjId b) const {
    if (!has_order()) throw StructureError("structure has no object order");
    return rank_[a] < rank_[b];
  }
  /// Objects ascending by order when present, else by insertion.
  std::vector<ObjId> objects_in_order() const {
    if (has_order()) return order_;
    std::vector<ObjId> v(object_count());
    for (ObjId i = 0; i < object_count(); ++i) v[i] = i;
    return v;
  }

  // ---- concepts ----

  int max_arity() const { return static_cast<int>(families_.size()); }

  const std::vector<Relation>& family(int arity) const {
    static const std::vector<Relation> none;
    if (arity < 1 || arity > max_arity()) return none;
    return families_[static_cast<std::size_t>(arity - 1)];
  }

  std::optional<std::size_t> find_concept(const Relation& r) const {
    const auto& fam = family(r.arity());
    auto it = std::lower_bound(fam.begin(), fam.end(), r, [](const Relation& a, const Relation& b) {
      return a.encoding_order(b) == std::strong_ordering::less;
    });
    if (it != fam.end() && *it == r) return static_cast<std::size_t>(it - fam.begin());
    return std::nullopt;
  }

  // ---- extension operators ----

  int ext_count() const { return static_cast<int>(ops_.size()); }
  int ext_arity(int op) const {
    check_op(op);
    return ops_[static_cast<std::size_t>(op)].arity;
  }

  std::optional<ObjId> ext_value_at(int op, std::size_t family_index) const {
    check_op(op);
    const auto& t = ops_[static_cast<std::size_t>(op)].table;
    auto it = t.find(family_index);
    if (it == t.end()) return std::nullopt;
    return it->second;
  }

  std::optional<ObjId> ext_value(int op, const Relation& r) const {
    auto idx = find_concept(r);
    if (!idx) return std::nullopt;
    return ext_value_at(op, *idx);
  }

  /// Family index of the concept mapped to `value`, if any. Well defined
  /// because the table is injective.
  std::optional<std::size_t> ext_preimage(int op, ObjId value) const {
    check_op(op);
    for (auto& [idx, v] : ops_[static_cast<std::size_t>(op)].table)
      if (v == value) return idx;
    return std::nullopt;
  }

  bool ext_total_on_family(int op) const {
    check_op(op);
    return ops_[static_cast<std::size_t>(op)].table.size() ==
           family(ext_arity(op)).size();
  }

  const std::map<std::size_t, ObjId>& ext_table(int op) const {
    check_op(op);
    return ops_[static_cast<std::size_t>(op)].table;
  }

  // ---- text format ----

  std::string to_text() const {
    std::ostringstream out;
    out << "abstractis-structure v1\n";
    out << "objects";
    for (auto& n : names_) out << " " << n;
    out << "\n";
    for (int op = 0; op < ext_count(); ++op)
      out << "extop " << (op + 1) << " arity " << ext_arity(op) << "\n";
    for (int a = 1; a <= max_arity(); ++a)
      for (auto& r : family(a)) out << "concept " << a << " " << relation_literal(r) << "\n";
    for (int op = 0; op < ext_count(); ++op)
      for (auto& [idx, val] : ops_[static_cast<std::size_t>(op)].table)
        out << "ext " << (op + 1) << " " << relation_literal(family(ext_arity(op))[idx]) << " -> "
            << names_[val] << "\n";
    if (has_order()) {
      out << "order";
      for (ObjId o : order_) out << " " << names_[o];
      out << "\n";
    }
    return out.str();
  }

  std::string relation_literal(const Relation& r) const {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (auto& t : r.tuples()) {
      if (!first) out << ",";
      first = false;
      if (r.arity() == 1) {
        out << names_[t[0]];
      } else {
        out << "(";
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (i) out << ",";
          out << names_[t[i]];
        }
        out << ")";
      }
    }
    out << "}";
    return out.str();
  }

  Relation parse_relation_literal(const std::string& text, int arity) const;

  static ExhaustiveStructure from_text(const std::string& text);

 private:
  struct ExtOp {
    int arity;
    std::map<std::size_t, ObjId> table;  // family index -> object
  };

  std::vector<Relation>& family_mut(int arity) {
    if (arity < 1) throw StructureError("concept arity must be >= 1");
    while (max_arity() < arity) families_.emplace_back();
    return families_[static_cast<std::size_t>(arity - 1)];
  }

  void check_op(int op) const {
    if (op < 0 || op >= ext_count())
      throw StructureError("no such extension operator: " + std::to_string(op + 1));
  }

  std::vector<std::string> names_;
  std::vector<std::vector<Relation>> families_;  // families_[a-1] sorted by encoding
  std::vector<ExtOp> ops_;
  std::vector<ObjId> order_;        // ascending; empty = no order
  std::vector<std::size_t> rank_;   // rank_[obj] = position in order_
};

// ---- text format parsing ----

inline Relation ExhaustiveStructure::parse_relation_literal(const std::string& text,
                                                            int arity) const {
  auto fail = [&](const std::string& msg) {
    throw StructureError("bad relation literal '" + text + "': " + msg);
  };
  Relation r(arity, object_count());
  std::size_t i = 0;
  auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip();
  if (i >= text.size() || text[i] != '{') fail("expected '{'");
  ++i;
  skip();
  if (i < text.size() && text[i] == '}') return r;
  auto read_name = [&]() -> ObjId {
    skip();
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
           text[j] != ',' && text[j] != ')' && text[j] != '}' && text[j] != '(')
      ++j;
    std::string name = text.substr(i, j - i);
    auto o = find_object(name);
    if (!o) fail("unknown object '" + name + "'");
    i = j;
    return *o;
  };
  while (true) {
    skip();
    std::vector<ObjId> tuple;
    if (arity == 1) {
      tuple.push_back(read_name());
    } else {
      if (i >= text.size() || text[i] != '(') fail("expected '('");
      ++i;
      tuple.push_back(read_name());
      skip();
      while (i < text.size() && text[i] == ',') {
        ++i;
        tuple.push_back(read_name());
        skip();
      }
      if (i >= text.size() || text[i] != ')') fail("expected ')'");
      ++i;
      if (static_cast<int>(tuple.size()) != arity) fail("tuple arity mismatch");
    }
    r.set(tuple);
    skip();
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    if (i < text.size() && text[i] == '}') return r;
    fail("expected ',' or '}'");
  }
}

inline ExhaustiveStructure ExhaustiveStructure::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ExhaustiveStructure s;
  bool header = false;
  std::size_t lineno = 0;
  // ext assignments are applied after all concepts exist
  std::vector<std::tuple<int, std::string, std::string>> pending_ext;
  auto fail = [&](const std::string& msg) {
    throw StructureError("structure text line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (!header) {
      if (word != "abstractis-structure") fail("missing 'abstractis-structure v1' header");
      std::string ver;
      ls >> ver;
      if (ver != "v1") fail("unsupported version '" + ver + "'");
      header = true;
      continue;
    }
    if (word == "objects") {
      std::string name;
      while (ls >> name) s.add_object(name);
    } else if (word == "extop") {
      int op = 0, arity = 0;
      std::string kw;
      if (!(ls >> op >> kw >> arity) || kw != "arity") fail("expected 'extop <n> arity <k>'");
      if (op != s.ext_count() + 1) fail("extension operators must be declared in order");
      s.add_ext_op(arity);
    } else if (word == "concept") {
      int arity = 0;
      if (!(ls >> arity)) fail("expected 'concept <arity> <literal>'");
      std::string rest;
      std::getline(ls, rest);
      s.add_concept(s.parse_relation_literal(rest, arity));
    } else if (word == "ext") {
      int op = 0;
      if (!(ls >> op)) fail("expected 'ext <n> <literal> -> <object>'");
      std::string rest;
      std::getline(ls, rest);
      auto arrow = rest.find("->");
      if (arrow == std::string::npos) fail("expected '->' in ext mapping");
      std::string lit = rest.substr(0, arrow);
      std::string target = rest.substr(arrow + 2);
      auto trim = [](std::string t) {
        auto b = t.find_first_not_of(" \t\r");
        auto e = t.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
      };
      pending_ext.emplace_back(op - 1, trim(lit), trim(target));
    } else if (word == "order") {
      std::vector<ObjId> ord;
      std::string name;
      while (ls >> name) {
        auto o = s.find_object(name);
        if (!o) fail("unknown object '" + name + "' in order");
        ord.push_back(*o);
      }
      s.set_order(ord);
    } else {
      fail("unknown directive '" + word + "'");
    }
  }
  if (!header) throw StructureError("empty structure text");
  for (auto& [op, lit, target] : pending_ext) {
    if (op < 0 || op >= s.ext_count())
      throw StructureError("ext mapping for undeclared operator " + std::to_string(op + 1));
    auto obj = s.find_object(target);
    if (!obj) throw StructureError("ext mapping to unknown object '" + target + "'");
    Relation r = s.parse_relation_literal(lit, s.ext_arity(op));
    if (!s.find_concept(r))
      throw StructureError("ext mapping concept " + lit + " is not in the family");
    s.set_ext(op, r, *obj);
  }
  return s;
}

}  // namespace abstractis::model

#endif  // ABSTRACTIS_STRUCTURE_HPP
