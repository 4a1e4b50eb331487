#ifndef ABSTRACTIS_HF_HPP
#define ABSTRACTIS_HF_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace abstractis::hf {

/// Arbitrary-precision natural number used for Ackermann codes. Codes grow
/// as iterated exponentials, so a fixed-width integer is not an option.
using BigNat = boost::multiprecision::cpp_int;

/// Thrown when an Ackermann code would exceed the configured bit budget.
struct CodeBudgetExceeded : std::runtime_error {
  explicit CodeBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct LiteralParseError : std::runtime_error {
  std::size_t position;
  LiteralParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at offset " + std::to_string(pos)), position(pos) {}
};

enum class Cmp { less, equal, greater };

namespace detail {

struct Node {
  std::vector<std::uint32_t> elems;  // child ids, strictly descending in canonical order
  std::uint32_t rank = 0;
  std::size_t hash = 0;
};

inline std::size_t hash_elems(const std::vector<std::uint32_t>& elems) {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (std::uint32_t e : elems) h = (h ^ (e + 0x9e3779b9u)) * 0x100000001b3ull;
  return h;
}

/// Global hash-consing pool. Every distinct hereditarily finite set is
/// interned exactly once, so extensional equality is id equality. All
/// access goes through the mutex; ids handed out are stable forever.
class Pool {
 public:
  static Pool& instance() {
    static Pool pool;
    return pool;
  }

  std::uint32_t empty_id() const { return 0; }

  // `ids` may be unsorted and contain duplicates.
  std::uint32_t intern(std::vector<std::uint32_t> ids) {
    std::lock_guard<std::mutex> lock(mu_);
    sort_unique(ids);
    return intern_sorted(std::move(ids));
  }

  Cmp cmp(std::uint32_t a, std::uint32_t b) const {
    std::lock_guard<std::mutex> lock(mu_);
    return cmp_nolock(a, b);
  }

  std::vector<std::uint32_t> elems(std::uint32_t id) const {
    std::lock_guard<std::mutex> lock(mu_);
    return nodes_[id].elems;
  }

  std::uint32_t rank(std::uint32_t id) const {
    std::lock_guard<std::mutex> lock(mu_);
    return nodes_[id].rank;
  }

  bool contains(std::uint32_t set, std::uint32_t elem) const {
    std::lock_guard<std::mutex> lock(mu_);
    const auto& es = nodes_[set].elems;
    // elements are strictly descending; binary search
    std::size_t lo = 0, hi = es.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      Cmp c = cmp_nolock(es[mid], elem);
      if (c == Cmp::equal) return true;
      if (c == Cmp::greater)
        lo = mid + 1;
      else
        hi = mid;
    }
    return false;
  }

 private:
  Pool() {
    Node empty;  // id 0 = the empty set
    empty.hash = hash_elems(empty.elems);
    nodes_.push_back(std::move(empty));
    buckets_.emplace(nodes_[0].hash, std::vector<std::uint32_t>{0});
  }

  Cmp cmp_nolock(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return Cmp::equal;
    const auto& ea = nodes_[a].elems;
    const auto& eb = nodes_[b].elems;
    // Both element lists are descending by code, so the first position where
    // they differ decides the code comparison; a longer list of equal
    // prefixes carries extra (smaller) powers of two and is the bigger code.
    for (std::size_t i = 0; i < ea.size() && i < eb.size(); ++i) {
      Cmp c = cmp_nolock(ea[i], eb[i]);
      if (c != Cmp::equal) return c;
    }
    if (ea.size() < eb.size()) return Cmp::less;
    if (ea.size() > eb.size()) return Cmp::greater;
    return Cmp::equal;  // unreachable for distinct interned ids
  }

  void sort_unique(std::vector<std::uint32_t>& ids) const {
    std::sort(ids.begin(), ids.end(),
              [this](std::uint32_t x, std::uint32_t y) { return cmp_nolock(x, y) == Cmp::greater; });
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }

  std::uint32_t intern_sorted(std::vector<std::uint32_t> ids) {
    std::size_t h = hash_elems(ids);
    auto it = buckets_.find(h);
    if (it != buckets_.end()) {
      for (std::uint32_t cand : it->second)
        if (nodes_[cand].elems == ids) return cand;
    }
    Node node;
    node.rank = 0;
    for (std::uint32_t e : ids) node.rank = std::max(node.rank, nodes_[e].rank + 1);
    node.hash = h;
    node.elems = std::move(ids);
    nodes_.push_back(std::move(node));
    auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
    buckets_[h].push_back(id);
    return id;
  }

  mutable std::mutex mu_;
  std::deque<Node> nodes_;
  std::unordered_map<std::size_t, std::vector<std::uint32_t>> buckets_;
};

inline std::size_t& code_bits_budget() {
  static std::size_t budget = [] {
    if (const char* env = std::getenv("ABSTRACTIS_MAX_BIGINT_BITS")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return static_cast<std::size_t>(1u << 20);
  }();
  return budget;
}

}  // namespace detail

/// A canonical hereditarily finite set. Values are interned handles:
/// copying is trivial and `==` is extensional equality.
class HFSet {
 public:
  /// The empty set.
  HFSet() : id_(0) {}

  /// Builds the set with the given elements (duplicates collapse).
  static HFSet make(const std::vector<HFSet>& elems) {
    std::vector<std::uint32_t> ids;
    ids.reserve(elems.size());
    for (HFSet e : elems) ids.push_back(e.id_);
    return HFSet(detail::Pool::instance().intern(std::move(ids)));
  }

  static HFSet from_id(std::uint32_t id) { return HFSet(id); }

  /// Elements in canonical ascending order.
  std::vector<HFSet> elements() const {
    auto ids = detail::Pool::instance().elems(id_);
    std::vector<HFSet> out;
    out.reserve(ids.size());
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) out.push_back(HFSet(*it));
    return out;
  }

  std::size_t size() const { return detail::Pool::instance().elems(id_).size(); }
  bool empty() const { return id_ == 0; }
  bool contains(HFSet e) const { return detail::Pool::instance().contains(id_, e.id_); }

  /// 0 for the empty set, else 1 + the maximum rank of an element.
  std::uint32_t rank() const { return detail::Pool::instance().rank(id_); }

  std::uint32_t id() const { return id_; }

  friend bool operator==(HFSet a, HFSet b) { return a.id_ == b.id_; }
  friend bool operator!=(HFSet a, HFSet b) { return a.id_ != b.id_; }

 private:
  explicit HFSet(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

/// Total order agreeing with Ackermann-code comparison; the computable
/// stand-in for a constructibility order at finite scale.
inline Cmp canonical_cmp(HFSet a, HFSet b) { return detail::Pool::instance().cmp(a.id(), b.id()); }

inline bool canonical_less(HFSet a, HFSet b) { return canonical_cmp(a, b) == Cmp::less; }

/// Comparator usable as std::map ordering.
struct CanonicalLess {
  bool operator()(HFSet a, HFSet b) const { return canonical_less(a, b); }
};

/// Maximum bit width permitted for an Ackermann code before ack_code
/// refuses with CodeBudgetExceeded. Defaults to 2^20 bits, overridable
/// via the ABSTRACTIS_MAX_BIGINT_BITS environment variable.
inline std::size_t max_code_bits() { return detail::code_bits_budget(); }
inline void set_max_code_bits(std::size_t bits) { detail::code_bits_budget() = bits; }

namespace detail {
inline BigNat ack_code_memo(HFSet s, std::unordered_map<std::uint32_t, BigNat>& memo) {
  auto it = memo.find(s.id());
  if (it != memo.end()) return it->second;
  BigNat code = 0;
  for (HFSet e : s.elements()) {
    BigNat sub = ack_code_memo(e, memo);
    if (sub >= static_cast<std::uint64_t>(code_bits_budget()))
      throw CodeBudgetExceeded("set too large: Ackermann code exceeds " +
                               std::to_string(code_bits_budget()) + " bits");
    bit_set(code, static_cast<unsigned>(sub));
  }
  memo.emplace(s.id(), code);
  return code;
}
}  // namespace detail

/// The Ackermann code: the sum of 2^code(e) over the elements e.
/// A bijection between hereditarily finite sets and the naturals.
inline BigNat ack_code(HFSet s) {
  std::unordered_map<std::uint32_t, BigNat> memo;
  return detail::ack_code_memo(s, memo);
}

namespace detail {
inline HFSet decode_memo(std::uint64_t n, std::unordered_map<std::uint64_t, HFSet>& memo) {
  if (n == 0) return HFSet();
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  std::vector<HFSet> elems;
  for (unsigned bit = 0; n >> bit; ++bit)
    if ((n >> bit) & 1u) elems.push_back(decode_memo(bit, memo));
  HFSet s = HFSet::make(elems);
  memo.emplace(n, s);
  return s;
}
}  // namespace detail

/// Inverse of ack_code.
inline HFSet decode(std::uint64_t n) {
  std::unordered_map<std::uint64_t, HFSet> memo;
  return detail::decode_memo(n, memo);
}

inline HFSet decode(const BigNat& n) {
  if (n < 0) throw std::invalid_argument("decode: negative code");
  if (n == 0) return HFSet();
  std::unordered_map<std::uint64_t, HFSet> memo;
  std::vector<HFSet> elems;
  unsigned top = boost::multiprecision::msb(n);
  for (unsigned bit = 0; bit <= top; ++bit)
    if (boost::multiprecision::bit_test(n, bit)) elems.push_back(detail::decode_memo(bit, memo));
  return HFSet::make(elems);
}

inline HFSet singleton(HFSet a) { return HFSet::make({a}); }

/// Kuratowski pair {{a},{a,b}}; injective in (a, b).
inline HFSet pair_set(HFSet a, HFSet b) {
  return HFSet::make({singleton(a), HFSet::make({a, b})});
}

/// Decomposes a Kuratowski pair; returns false if s is not pair-shaped.
inline bool unpair(HFSet s, HFSet& first, HFSet& second) {
  auto outer = s.elements();
  if (outer.empty() || outer.size() > 2) return false;
  if (outer.size() == 1) {
    // {{a}} encodes (a, a)
    auto inner = outer[0].elements();
    if (inner.size() != 1) return false;
    first = second = inner[0];
    return true;
  }
  auto e0 = outer[0].elements();
  auto e1 = outer[1].elements();
  const std::vector<HFSet>* single = nullptr;
  const std::vector<HFSet>* dbl = nullptr;
  if (e0.size() == 1 && e1.size() == 2) {
    single = &e0;
    dbl = &e1;
  } else if (e1.size() == 1 && e0.size() == 2) {
    single = &e1;
    dbl = &e0;
  } else {
    return false;
  }
  HFSet a = (*single)[0];
  if ((*dbl)[0] == a)
    second = (*dbl)[1];
  else if ((*dbl)[1] == a)
    second = (*dbl)[0];
  else
    return false;
  first = a;
  return true;
}

/// Renders the brace literal, elements in canonical ascending order: "{{},{{}}}".
inline std::string to_literal(HFSet s) {
  std::string out = "{";
  bool first = true;
  for (HFSet e : s.elements()) {
    if (!first) out += ",";
    first = false;
    out += to_literal(e);
  }
  out += "}";
  return out;
}

namespace detail {
inline HFSet parse_literal_at(std::string_view text, std::size_t& pos) {
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos >= text.size() || text[pos] != '{') throw LiteralParseError("expected '{'", pos);
  ++pos;
  std::vector<HFSet> elems;
  skip_ws();
  if (pos < text.size() && text[pos] == '}') {
    ++pos;
    return HFSet::make(elems);
  }
  while (true) {
    elems.push_back(parse_literal_at(text, pos));
    skip_ws();
    if (pos >= text.size()) throw LiteralParseError("unterminated set literal", pos);
    if (text[pos] == ',') {
      ++pos;
      continue;
    }
    if (text[pos] == '}') {
      ++pos;
      return HFSet::make(elems);
    }
    throw LiteralParseError("expected ',' or '}'", pos);
  }
}
}  // namespace detail

/// Parses a brace literal such as "{{},{{}}}". Whitespace-insensitive.
inline HFSet parse_literal(std::string_view text) {
  std::size_t pos = 0;
  HFSet s = detail::parse_literal_at(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw LiteralParseError("trailing input after set literal", pos);
  return s;
}

}  // namespace abstractis::hf

#endif  // ABSTRACTIS_HF_HPP
