#ifndef ABSTRACTIS_FINITE_RELATION_HPP
#define ABSTRACTIS_FINITE_RELATION_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "abstractis/hf.hpp"

namespace abstractis::hf {

/// A finite binary relation over opaque named nodes. An edge a -> b is read
/// "a is below b" (a will become a member of b under collapse).
class FiniteRelation {
 public:
  FiniteRelation() = default;

  std::uint32_t add_node(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    preds_.emplace_back();
    return id;
  }

  void add_edge(const std::string& below, const std::string& above) {
    std::uint32_t a = add_node(below), b = add_node(above);
    edges_.insert({a, b});
    preds_[b].insert(a);
  }

  std::size_t node_count() const { return names_.size(); }
  const std::string& node_name(std::uint32_t id) const { return names_[id]; }

  std::optional<std::uint32_t> find_node(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(std::uint32_t a, std::uint32_t b) const { return edges_.count({a, b}) > 0; }

  /// Nodes strictly below `x`: the y with y -> x.
  const std::set<std::uint32_t>& predecessors(std::uint32_t x) const { return preds_[x]; }

  const std::set<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }

  /// Edge-list text, one "a<b" line per edge, nodes without edges on
  /// their own line. Round-trips with parse_edge_list.
  std::string to_edge_list() const {
    std::set<std::uint32_t> touched;
    std::ostringstream out;
    for (auto [a, b] : edges_) {
      out << names_[a] << "<" << names_[b] << "\n";
      touched.insert(a);
      touched.insert(b);
    }
    for (std::uint32_t i = 0; i < names_.size(); ++i)
      if (!touched.count(i)) out << names_[i] << "\n";
    return out.str();
  }

  static FiniteRelation parse_edge_list(const std::string& text) {
    FiniteRelation r;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      auto lt = line.find('<');
      if (lt == std::string::npos) {
        r.add_node(line);
        continue;
      }
      std::string a = trim(line.substr(0, lt));
      std::string b = trim(line.substr(lt + 1));
      if (a.empty() || b.empty())
        throw std::runtime_error("edge list line " + std::to_string(lineno) + ": malformed edge");
      r.add_edge(a, b);
    }
    return r;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::uint32_t> index_;
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::set<std::uint32_t>> preds_;
};

/// The nodes reachable from x by a nonempty descending path (following
/// edges backwards). Cycles are traversed, so x itself may appear.
inline std::set<std::uint32_t> meta_trcl(std::uint32_t x, const FiniteRelation& r) {
  if (x >= r.node_count()) throw std::out_of_range("meta_trcl: unknown node id");
  std::set<std::uint32_t> seen;
  std::vector<std::uint32_t> work(r.predecessors(x).begin(), r.predecessors(x).end());
  while (!work.empty()) {
    std::uint32_t y = work.back();
    work.pop_back();
    if (!seen.insert(y).second) continue;
    for (std::uint32_t p : r.predecessors(y)) work.push_back(p);
  }
  return seen;
}

/// True iff distinct nodes have distinct predecessor sets.
inline bool is_extensional(const FiniteRelation& r) {
  std::set<std::set<std::uint32_t>> seen;
  for (std::uint32_t i = 0; i < r.node_count(); ++i)
    if (!seen.insert(r.predecessors(i)).second) return false;
  return true;
}

struct CollapseResult {
  bool ok = false;
  /// Defined for every node when ok; partial otherwise.
  std::map<std::uint32_t, HFSet> image;
  /// A witness cycle (node sequence, each below the next, last below first)
  /// when the relation is not well-founded.
  std::vector<std::uint32_t> cycle;
};

/// The Mostowski collapse pi with pi(y) = { pi(y') : y' below y }.
/// Requires well-foundedness, which for a finite relation means acyclicity;
/// on failure reports a witness cycle instead.
inline CollapseResult mostowski_collapse(const FiniteRelation& r) {
  CollapseResult res;
  enum class Mark : std::uint8_t { White, Grey, Black };
  std::vector<Mark> mark(r.node_count(), Mark::White);
  std::vector<HFSet> out(r.node_count());

  // Iterative DFS keeping an explicit stack so deep chains cannot overflow.
  struct Frame {
    std::uint32_t node;
    std::vector<std::uint32_t> preds;
    std::size_t next = 0;
  };
  for (std::uint32_t root = 0; root < r.node_count(); ++root) {
    if (mark[root] != Mark::White) continue;
    std::vector<Frame> stack;
    stack.push_back({root, {r.predecessors(root).begin(), r.predecessors(root).end()}});
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < f.preds.size()) {
        std::uint32_t child = f.preds[f.next++];
        if (mark[child] == Mark::Grey) {
          // found a cycle: walk the grey stack back to `child`
          std::vector<std::uint32_t> cyc;
          for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            cyc.push_back(it->node);
            if (it->node == child) break;
          }
          std::reverse(cyc.begin(), cyc.end());
          res.ok = false;
          res.cycle = cyc;
          return res;
        }
        if (mark[child] == Mark::White) {
          mark[child] = Mark::Grey;
          stack.push_back({child, {r.predecessors(child).begin(), r.predecessors(child).end()}});
        }
      } else {
        std::vector<HFSet> members;
        members.reserve(f.preds.size());
        for (std::uint32_t p : f.preds) members.push_back(out[p]);
        out[f.node] = HFSet::make(members);
        mark[f.node] = Mark::Black;
        stack.pop_back();
      }
    }
  }
  res.ok = true;
  for (std::uint32_t i = 0; i < r.node_count(); ++i) res.image.emplace(i, out[i]);
  return res;
}

}  // namespace abstractis::hf

#endif  // ABSTRACTIS_FINITE_RELATION_HPP
