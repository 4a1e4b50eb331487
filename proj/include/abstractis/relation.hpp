#ifndef ABSTRACTIS_RELATION_HPP
#define ABSTRACTIS_RELATION_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace abstractis::model {

using ObjId = std::uint32_t;

/// An n-ary relation over the object domain {0, ..., domain-1}, stored as
/// the bit vector of its tuple membership in lexicographic tuple order
/// (first coordinate most significant). The bit vector read as a natural
/// number is the relation's canonical encoding; comparing encodings gives
/// the concept order used for least representatives.
class Relation {
 public:
  Relation() = default;

  Relation(int arity, ObjId domain) : arity_(arity), domain_(domain) {
    if (arity < 1) throw std::invalid_argument("relation arity must be >= 1");
    std::size_t n = tuple_count();
    bits_.assign((n + 63) / 64, 0);
  }

  static Relation full(int arity, ObjId domain) {
    Relation r(arity, domain);
    std::size_t n = r.tuple_count();
    for (std::size_t w = 0; w < r.bits_.size(); ++w) r.bits_[w] = ~0ull;
    r.trim(n);
    return r;
  }

  int arity() const { return arity_; }
  ObjId domain() const { return domain_; }

  std::size_t tuple_count() const {
    std::size_t n = 1;
    for (int i = 0; i < arity_; ++i) n *= domain_;
    return n;
  }

  std::size_t index_of(std::span<const ObjId> tuple) const {
    std::size_t idx = 0;
    for (ObjId t : tuple) {
      if (t >= domain_) throw std::out_of_range("tuple component outside domain");
      idx = idx * domain_ + t;
    }
    return idx;
  }

  std::vector<ObjId> tuple_at(std::size_t index) const {
    std::vector<ObjId> t(static_cast<std::size_t>(arity_));
    for (int i = arity_ - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<ObjId>(index % domain_);
      index /= domain_;
    }
    return t;
  }

  bool test_index(std::size_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1u; }
  bool test(std::span<const ObjId> tuple) const { return test_index(index_of(tuple)); }

  void set_index(std::size_t i, bool v = true) {
    if (v)
      bits_[i >> 6] |= (1ull << (i & 63));
    else
      bits_[i >> 6] &= ~(1ull << (i & 63));
  }
  void set(std::span<const ObjId> tuple, bool v = true) { set_index(index_of(tuple), v); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : bits_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  bool is_empty() const {
    for (auto w : bits_)
      if (w) return false;
    return true;
  }

  std::vector<std::vector<ObjId>> tuples() const {
    std::vector<std::vector<ObjId>> out;
    std::size_t n = tuple_count();
    for (std::size_t i = 0; i < n; ++i)
      if (test_index(i)) out.push_back(tuple_at(i));
    return out;
  }

  Relation complement() const {
    Relation r = *this;
    for (auto& w : r.bits_) w = ~w;
    r.trim(tuple_count());
    return r;
  }

  Relation intersect(const Relation& o) const {
    check_shape(o);
    Relation r = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= o.bits_[i];
    return r;
  }

  Relation unite(const Relation& o) const {
    check_shape(o);
    Relation r = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] |= o.bits_[i];
    return r;
  }

  bool subset_of(const Relation& o) const {
    check_shape(o);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] & ~o.bits_[i]) return false;
    return true;
  }

  /// Coordinate permutation: result(t[perm[0]], ..., t[perm[k-1]]) ...
  /// precisely, result holds u iff *this holds (u[perm[0]], .., u[perm[k-1]]).
  Relation permute(const std::vector<int>& perm) const {
    Relation r(arity_, domain_);
    std::size_t n = tuple_count();
    std::vector<ObjId> src(static_cast<std::size_t>(arity_));
    for (std::size_t i = 0; i < n; ++i) {
      if (!test_index(i)) continue;
      auto t = tuple_at(i);
      // place coordinate j of t at position perm[j] of the image tuple
      for (int j = 0; j < arity_; ++j) src[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = t[static_cast<std::size_t>(j)];
      r.set(src);
    }
    return r;
  }

  /// Identify coordinates i and j (keep i, drop j): arity decreases by one.
  Relation identify(int ci, int cj) const {
    if (arity_ < 2) throw std::invalid_argument("identify needs arity >= 2");
    Relation r(arity_ - 1, domain_);
    std::size_t n = tuple_count();
    for (std::size_t t = 0; t < n; ++t) {
      if (!test_index(t)) continue;
      auto tup = tuple_at(t);
      if (tup[static_cast<std::size_t>(ci)] != tup[static_cast<std::size_t>(cj)]) continue;
      std::vector<ObjId> out;
      for (int k = 0; k < arity_; ++k)
        if (k != cj) out.push_back(tup[static_cast<std::size_t>(k)]);
      r.set(out);
    }
    return r;
  }

  /// Append a free coordinate at the end: arity increases by one.
  Relation cylinder() const {
    Relation r(arity_ + 1, domain_);
    std::size_t n = tuple_count();
    for (std::size_t t = 0; t < n; ++t) {
      if (!test_index(t)) continue;
      std::size_t base = t * domain_;
      for (ObjId d = 0; d < domain_; ++d) r.set_index(base + d);
    }
    return r;
  }

  /// Existentially project away the last coordinate.
  Relation project_last() const {
    if (arity_ < 2) throw std::invalid_argument("project_last needs arity >= 2");
    Relation r(arity_ - 1, domain_);
    std::size_t n = tuple_count() / domain_;
    for (std::size_t t = 0; t < n; ++t) {
      for (ObjId d = 0; d < domain_; ++d)
        if (test_index(t * domain_ + d)) {
          r.set_index(t);
          break;
        }
    }
    return r;
  }

  /// Fix the first `front.size()` coordinates; arity decreases accordingly.
  Relation section(std::span<const ObjId> front) const {
    int rest = arity_ - static_cast<int>(front.size());
    if (rest < 1) throw std::invalid_argument("section leaves no coordinates");
    Relation r(rest, domain_);
    std::size_t base = 0;
    for (ObjId t : front) base = base * domain_ + t;
    std::size_t n = r.tuple_count();
    for (std::size_t i = 0; i < n; ++i)
      if (test_index(base * n + i)) r.set_index(i);
    return r;
  }

  /// Re-encode over a larger domain (membership preserved).
  Relation with_domain(ObjId new_domain) const {
    if (new_domain < domain_) throw std::invalid_argument("domain can only grow");
    Relation r(arity_, new_domain);
    std::size_t n = tuple_count();
    for (std::size_t i = 0; i < n; ++i)
      if (test_index(i)) r.set(tuple_at(i));
    return r;
  }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.arity_ == b.arity_ && a.domain_ == b.domain_ && a.bits_ == b.bits_;
  }

  /// Encoding order: the bit vector read as a natural number.
  std::strong_ordering encoding_order(const Relation& o) const {
    check_shape(o);
    for (std::size_t i = bits_.size(); i-- > 0;) {
      if (bits_[i] != o.bits_[i]) return bits_[i] <=> o.bits_[i];
    }
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ull ^ static_cast<std::size_t>(arity_);
    for (auto w : bits_) h = (h ^ w) * 0x100000001b3ull;
    return h;
  }

 private:
  void check_shape(const Relation& o) const {
    if (arity_ != o.arity_ || domain_ != o.domain_)
      throw std::invalid_argument("relation shape mismatch");
  }
  void trim(std::size_t n) {
    if (n & 63) bits_.back() &= (1ull << (n & 63)) - 1;
  }

  int arity_ = 1;
  ObjId domain_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace abstractis::model

#endif  // ABSTRACTIS_RELATION_HPP
