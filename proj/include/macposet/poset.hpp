#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace macposet {

using ElementId = std::uint32_t;
using Rank = std::uint32_t;

/// Raised for malformed input and violated preconditions. Scientific
/// outcomes (a poset failing a property) are reported as values instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExponentVector {
  std::vector<std::uint32_t> coords;

  std::size_t arity() const { return coords.size(); }
  std::uint32_t degree() const {
    return std::accumulate(coords.begin(), coords.end(), std::uint32_t{0});
  }
  std::uint32_t operator[](std::size_t i) const { return coords[i]; }

  auto operator<=>(const ExponentVector&) const = default;
};

/// Monomial labels attached to every element of a poset.
struct Labels {
  std::vector<std::string> variables;
  std::vector<ExponentVector> of;  // indexed by element id

  bool operator==(const Labels&) const = default;
};

struct Cover {
  ElementId lower;
  ElementId upper;  // upper covers lower

  auto operator<=>(const Cover&) const = default;
};

/// Finite ranked poset stored through its cover relation.
///
/// Elements are the dense ids 0..size()-1. Levels list their ids in
/// ascending order; a level may be empty (e.g. rank 0 after removing a
/// bottom element). The constructor does not enforce the rank law so that
/// validate_poset can report violations as data; every other operation
/// assumes a valid poset.
class RankedPoset {
 public:
  RankedPoset() = default;

  RankedPoset(std::vector<Rank> ranks, std::vector<Cover> covers,
              std::string name = {}, std::optional<Labels> labels = {})
      : ranks_(std::move(ranks)),
        up_(ranks_.size()),
        down_(ranks_.size()),
        position_(ranks_.size()),
        labels_(std::move(labels)),
        name_(std::move(name)) {
    const auto n = static_cast<ElementId>(ranks_.size());
    for (const auto& c : covers) {
      if (c.lower >= n || c.upper >= n)
        throw Error("cover (" + std::to_string(c.lower) + ", " +
                    std::to_string(c.upper) + ") refers to a missing element");
      up_[c.lower].push_back(c.upper);
      down_[c.upper].push_back(c.lower);
    }
    for (auto* adj : {&up_, &down_}) {
      for (auto& v : *adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
    }
    Rank top = 0;
    for (auto r : ranks_) top = std::max(top, r);
    levels_.assign(n == 0 ? 0 : top + 1, {});
    for (ElementId e = 0; e < n; ++e) {
      position_[e] = static_cast<std::uint32_t>(levels_[ranks_[e]].size());
      levels_[ranks_[e]].push_back(e);
    }
    if (labels_ && labels_->of.size() != n)
      throw Error("label count " + std::to_string(labels_->of.size()) +
                  " does not match element count " + std::to_string(n));
  }

  std::size_t size() const { return ranks_.size(); }
  bool empty() const { return ranks_.empty(); }

  Rank rank(ElementId e) const { return ranks_[e]; }
  const std::vector<Rank>& ranks() const { return ranks_; }

  /// Elements covering e.
  std::span<const ElementId> up(ElementId e) const { return up_[e]; }
  /// Elements covered by e.
  std::span<const ElementId> down(ElementId e) const { return down_[e]; }

  /// Number of levels, i.e. max rank + 1 (0 for the empty poset).
  std::size_t level_count() const { return levels_.size(); }
  Rank max_rank() const {
    return levels_.empty() ? 0 : static_cast<Rank>(levels_.size() - 1);
  }
  std::span<const ElementId> level(Rank d) const {
    if (d >= levels_.size()) return {};
    return levels_[d];
  }
  std::size_t level_size(Rank d) const { return level(d).size(); }
  std::vector<std::size_t> level_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& l : levels_) out.push_back(l.size());
    return out;
  }
  /// Index of e inside level(rank(e)).
  std::uint32_t position(ElementId e) const { return position_[e]; }

  const std::optional<Labels>& labels() const { return labels_; }
  bool has_labels() const { return labels_.has_value(); }
  const ExponentVector& label(ElementId e) const {
    if (!labels_) throw Error("poset has no labels");
    return labels_->of[e];
  }

  const std::string& name() const { return name_; }
  RankedPoset renamed(std::string name) const {
    RankedPoset copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }
  RankedPoset without_labels() const {
    RankedPoset copy = *this;
    copy.labels_.reset();
    return copy;
  }

  std::vector<Cover> covers() const {
    std::vector<Cover> out;
    for (ElementId a = 0; a < size(); ++a)
      for (auto b : up_[a]) out.push_back({a, b});
    return out;
  }
  std::size_t cover_count() const {
    std::size_t n = 0;
    for (const auto& u : up_) n += u.size();
    return n;
  }

  std::vector<ElementId> minimal_elements() const {
    std::vector<ElementId> out;
    for (ElementId e = 0; e < size(); ++e)
      if (down_[e].empty()) out.push_back(e);
    return out;
  }
  std::vector<ElementId> maximal_elements() const {
    std::vector<ElementId> out;
    for (ElementId e = 0; e < size(); ++e)
      if (up_[e].empty()) out.push_back(e);
    return out;
  }

  bool operator==(const RankedPoset& o) const {
    return ranks_ == o.ranks_ && up_ == o.up_ && labels_ == o.labels_;
  }

 private:
  std::vector<Rank> ranks_;
  std::vector<std::vector<ElementId>> up_;
  std::vector<std::vector<ElementId>> down_;
  std::vector<std::vector<ElementId>> levels_;
  std::vector<std::uint32_t> position_;
  std::optional<Labels> labels_;
  std::string name_;
};

/// Outcome of validate_poset: ok, or the first violated invariant.
struct Validation {
  bool ok = true;
  std::string violation;
  std::vector<ElementId> elements;

  explicit operator bool() const { return ok; }
};

inline Validation validate_poset(const RankedPoset& p) {
  for (ElementId a = 0; a < p.size(); ++a) {
    for (auto b : p.up(a)) {
      if (a == b) return {false, "self-cover", {a}};
      if (p.rank(b) != p.rank(a) + 1) {
        if (p.rank(b) > p.rank(a))
          return {false,
                  "cover raises rank by " + std::to_string(p.rank(b) - p.rank(a)),
                  {a, b}};
        return {false, "cover does not raise rank", {a, b}};
      }
    }
  }
  if (const auto& l = p.labels()) {
    for (ElementId e = 0; e < p.size(); ++e)
      if (l->of[e].arity() != l->variables.size())
        return {false, "label arity differs from variable count", {e}};
  }
  return {};
}

/// Up-closures: bit b of result[a] is set iff a <= b.
inline std::vector<boost::dynamic_bitset<>> up_closure(const RankedPoset& p) {
  std::vector<boost::dynamic_bitset<>> out(p.size(),
                                           boost::dynamic_bitset<>(p.size()));
  for (Rank d = static_cast<Rank>(p.level_count()); d-- > 0;) {
    for (auto a : p.level(d)) {
      out[a].set(a);
      for (auto b : p.up(a)) out[a] |= out[b];
    }
  }
  return out;
}

/// A set of elements inside one level, stored densely over level positions.
class LevelSubset {
 public:
  LevelSubset() = default;
  LevelSubset(Rank level, boost::dynamic_bitset<> bits)
      : level_(level), bits_(std::move(bits)) {}

  static LevelSubset none(const RankedPoset& p, Rank d) {
    return {d, boost::dynamic_bitset<>(p.level_size(d))};
  }
  static LevelSubset all(const RankedPoset& p, Rank d) {
    auto s = none(p, d);
    s.bits_.set();
    return s;
  }
  static LevelSubset of(const RankedPoset& p, Rank d,
                        std::span<const ElementId> ids) {
    auto s = none(p, d);
    for (auto e : ids) s.insert(p, e);
    return s;
  }

  Rank level() const { return level_; }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  std::size_t width() const { return bits_.size(); }
  const boost::dynamic_bitset<>& bits() const { return bits_; }

  bool contains(const RankedPoset& p, ElementId e) const {
    return e < p.size() && p.rank(e) == level_ && bits_.test(p.position(e));
  }
  bool contains_position(std::size_t pos) const { return bits_.test(pos); }
  void insert(const RankedPoset& p, ElementId e) {
    if (e >= p.size() || p.rank(e) != level_)
      throw Error("element " + std::to_string(e) + " is not in level " +
                  std::to_string(level_));
    bits_.set(p.position(e));
  }
  void insert_position(std::size_t pos) { bits_.set(pos); }

  std::vector<ElementId> members(const RankedPoset& p) const {
    std::vector<ElementId> out;
    auto lvl = p.level(level_);
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos;
         i = bits_.find_next(i))
      out.push_back(lvl[i]);
    return out;
  }

  bool is_subset_of(const LevelSubset& o) const {
    same_shape(o);
    return bits_.is_subset_of(o.bits_);
  }

  LevelSubset& operator|=(const LevelSubset& o) {
    same_shape(o);
    bits_ |= o.bits_;
    return *this;
  }
  LevelSubset& operator&=(const LevelSubset& o) {
    same_shape(o);
    bits_ &= o.bits_;
    return *this;
  }
  LevelSubset& operator-=(const LevelSubset& o) {
    same_shape(o);
    bits_ -= o.bits_;
    return *this;
  }
  friend LevelSubset operator|(LevelSubset a, const LevelSubset& b) { return a |= b; }
  friend LevelSubset operator&(LevelSubset a, const LevelSubset& b) { return a &= b; }
  friend LevelSubset operator-(LevelSubset a, const LevelSubset& b) { return a -= b; }

  bool operator==(const LevelSubset& o) const {
    return level_ == o.level_ && bits_ == o.bits_;
  }

 private:
  void same_shape(const LevelSubset& o) const {
    if (level_ != o.level_ || bits_.size() != o.bits_.size())
      throw Error("level subsets from different levels");
  }

  Rank level_ = 0;
  boost::dynamic_bitset<> bits_;
};

inline LevelSubset upper_shadow(const RankedPoset& p, const LevelSubset& a) {
  auto out = LevelSubset::none(p, a.level() + 1);
  for (auto e : a.members(p))
    for (auto u : p.up(e)) out.insert_position(p.position(u));
  return out;
}

inline LevelSubset lower_shadow(const RankedPoset& p, const LevelSubset& a) {
  if (a.level() == 0) return LevelSubset::none(p, 0);  // nothing below rank 0
  auto out = LevelSubset::none(p, a.level() - 1);
  for (auto e : a.members(p))
    for (auto l : p.down(e)) out.insert_position(p.position(l));
  return out;
}

}  // namespace macposet
