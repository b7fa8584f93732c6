#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "poset.hpp"

namespace macposet {

/// Per-level total orders, each list running from largest to smallest, so
/// the initial segment Seg_d q is the length-q prefix of list d.
class LevelOrderFamily {
 public:
  LevelOrderFamily() = default;

  std::size_t level_count() const { return lists_.size(); }
  std::span<const ElementId> level(Rank d) const {
    if (d >= lists_.size()) return {};
    return lists_[d];
  }
  const std::vector<std::vector<ElementId>>& lists() const { return lists_; }
  /// 0 for the largest element of its level.
  std::uint32_t index_of(ElementId e) const { return index_[e]; }

  /// True iff this family orders p (same element count and level shape).
  bool fits(const RankedPoset& p) const {
    if (p.size() != index_.size() || p.level_count() != lists_.size()) return false;
    for (Rank d = 0; d < lists_.size(); ++d)
      if (lists_[d].size() != p.level_size(d)) return false;
    return true;
  }

  bool operator==(const LevelOrderFamily& o) const { return lists_ == o.lists_; }

  friend LevelOrderFamily order_from_lists(const RankedPoset&,
                                           std::vector<std::vector<ElementId>>);

 private:
  std::vector<std::vector<ElementId>> lists_;
  std::vector<std::uint32_t> index_;
};

inline LevelOrderFamily order_from_lists(const RankedPoset& p,
                                         std::vector<std::vector<ElementId>> lists) {
  if (lists.size() != p.level_count())
    throw Error("order has " + std::to_string(lists.size()) + " levels, poset has " +
                std::to_string(p.level_count()));
  LevelOrderFamily o;
  o.index_.assign(p.size(), 0);
  std::vector<char> seen(p.size(), 0);
  for (Rank d = 0; d < lists.size(); ++d) {
    const auto& l = lists[d];
    auto bad = [&](const std::string& why) {
      return Error("order list for level " + std::to_string(d) + " " + why);
    };
    if (l.size() != p.level_size(d)) throw bad("has the wrong length");
    for (std::uint32_t i = 0; i < l.size(); ++i) {
      auto e = l[i];
      if (e >= p.size() || p.rank(e) != d) throw bad("contains a foreign element");
      if (seen[e]) throw bad("repeats element " + std::to_string(e));
      seen[e] = 1;
      o.index_[e] = i;
    }
  }
  o.lists_ = std::move(lists);
  return o;
}

/// Where an element of an operation's output came from. Merged glue
/// elements carry several origins.
struct Origin {
  std::uint32_t factor;
  ElementId source;

  auto operator<=>(const Origin&) const = default;
};

struct Provenance {
  std::vector<std::vector<Origin>> of;  // indexed by output element id

  bool merged(ElementId e) const { return of[e].size() > 1; }
  std::size_t factor_count() const {
    std::size_t n = 0;
    for (const auto& v : of)
      for (const auto& o : v) n = std::max<std::size_t>(n, o.factor + 1);
    return n;
  }
  bool operator==(const Provenance&) const = default;
};

/// Resolves variable names to indices; empty means the labels' own order.
inline std::vector<std::size_t> resolve_priority(const Labels& labels,
                                                 const std::vector<std::string>& names) {
  const auto& vars = labels.variables;
  std::vector<std::size_t> out;
  if (names.empty()) {
    for (std::size_t i = 0; i < vars.size(); ++i) out.push_back(i);
    return out;
  }
  if (names.size() != vars.size())
    throw Error("priority lists " + std::to_string(names.size()) + " variables, poset has " +
                std::to_string(vars.size()));
  for (const auto& nm : names) {
    auto it = std::find(vars.begin(), vars.end(), nm);
    if (it == vars.end()) throw Error("unknown variable '" + nm + "'");
    auto idx = static_cast<std::size_t>(it - vars.begin());
    if (std::find(out.begin(), out.end(), idx) != out.end())
      throw Error("variable '" + nm + "' repeated in priority");
    out.push_back(idx);
  }
  return out;
}

/// a > b in lex with the given priority (priority[0] most significant).
inline bool lex_greater(const ExponentVector& a, const ExponentVector& b,
                        const std::vector<std::size_t>& priority) {
  for (auto i : priority)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

inline LevelOrderFamily lex_order(const RankedPoset& p,
                                  const std::vector<std::string>& priority = {}) {
  if (!p.has_labels()) throw Error("lex order needs exponent labels");
  auto pr = resolve_priority(*p.labels(), priority);
  std::vector<std::vector<ElementId>> lists;
  for (Rank d = 0; d < p.level_count(); ++d) {
    auto lvl = p.level(d);
    std::vector<ElementId> l(lvl.begin(), lvl.end());
    std::sort(l.begin(), l.end(), [&](ElementId a, ElementId b) {
      return lex_greater(p.label(a), p.label(b), pr);
    });
    for (std::size_t i = 1; i < l.size(); ++i)
      if (p.label(l[i - 1]) == p.label(l[i]))
        throw Error("duplicate label in level " + std::to_string(d));
    lists.push_back(std::move(l));
  }
  return order_from_lists(p, std::move(lists));
}

/// Later factors sit above earlier ones within every level; each factor keeps
/// its own order; merged glue elements go last.
inline LevelOrderFamily union_simplicial_order(
    const RankedPoset& p, const Provenance& prov,
    const std::vector<LevelOrderFamily>& factor_orders) {
  if (prov.of.size() != p.size()) throw Error("provenance does not cover the poset");
  if (factor_orders.size() != prov.factor_count())
    throw Error("union simplicial order needs " + std::to_string(prov.factor_count()) +
                " factor orders, got " + std::to_string(factor_orders.size()));
  std::vector<std::vector<ElementId>> lists;
  for (Rank d = 0; d < p.level_count(); ++d) {
    std::vector<ElementId> plain, glue;
    for (auto e : p.level(d)) {
      if (prov.of[e].empty()) throw Error("element " + std::to_string(e) + " has no provenance");
      (prov.merged(e) ? glue : plain).push_back(e);
    }
    auto key = [&](ElementId e) {
      const auto& o = prov.of[e].front();
      return std::pair{-static_cast<long>(o.factor),
                       factor_orders[o.factor].index_of(o.source)};
    };
    std::stable_sort(plain.begin(), plain.end(),
                     [&](ElementId a, ElementId b) { return key(a) < key(b); });
    plain.insert(plain.end(), glue.begin(), glue.end());
    lists.push_back(std::move(plain));
  }
  return order_from_lists(p, std::move(lists));
}

/// Twist order on the heart of (x^a0, y^a1) and (x^b0, y^b1), b1 >= a1.
/// Low strip M0 (y-degree < a1) follows lex with y > x, high strip M1 follows
/// reversed lex, and M0 lies below M1 in every level.
inline LevelOrderFamily twist_order(const RankedPoset& p, unsigned a0, unsigned a1,
                                    unsigned b0, unsigned b1) {
  if (b1 < a1) throw Error("twist order needs b1 >= a1");
  if (!p.has_labels() || p.labels()->variables.size() != 2)
    throw Error("twist order needs two-variable exponent labels");
  auto in_heart = [&](unsigned i, unsigned j) {
    return (i < a0 && j < a1) || (i < b0 && j < b1);
  };
  std::size_t expected = 0;
  for (unsigned i = 0; i < std::max(a0, b0); ++i)
    for (unsigned j = 0; j < std::max(a1, b1); ++j) expected += in_heart(i, j);
  if (expected != p.size()) throw Error("labels do not form the stated heart");
  for (ElementId e = 0; e < p.size(); ++e)
    if (!in_heart(p.label(e)[0], p.label(e)[1])) throw Error("labels do not form the stated heart");

  const std::vector<std::size_t> y_first{1, 0};
  std::vector<std::vector<ElementId>> lists;
  for (Rank d = 0; d < p.level_count(); ++d) {
    std::vector<ElementId> m0, m1;
    for (auto e : p.level(d)) (p.label(e)[1] < a1 ? m0 : m1).push_back(e);
    auto desc = [&](ElementId a, ElementId b) { return lex_greater(p.label(a), p.label(b), y_first); };
    std::sort(m0.begin(), m0.end(), desc);
    std::sort(m1.begin(), m1.end(), [&](ElementId a, ElementId b) { return desc(b, a); });
    m1.insert(m1.end(), m0.begin(), m0.end());
    lists.push_back(std::move(m1));
  }
  return order_from_lists(p, std::move(lists));
}

/// Orders target by pulling back src along target_to_src: each target level is
/// sorted by the source order of its mapped elements, unmapped elements last.
inline LevelOrderFamily transport_order(const LevelOrderFamily& src, const RankedPoset& target,
                                        const std::vector<std::optional<ElementId>>& target_to_src) {
  if (target_to_src.size() != target.size()) throw Error("transport map has the wrong size");
  std::vector<std::vector<ElementId>> lists;
  for (Rank d = 0; d < target.level_count(); ++d) {
    std::vector<ElementId> mapped, loose;
    for (auto e : target.level(d)) (target_to_src[e] ? mapped : loose).push_back(e);
    std::sort(mapped.begin(), mapped.end(), [&](ElementId a, ElementId b) {
      return src.index_of(*target_to_src[a]) < src.index_of(*target_to_src[b]);
    });
    mapped.insert(mapped.end(), loose.begin(), loose.end());
    lists.push_back(std::move(mapped));
  }
  return order_from_lists(target, std::move(lists));
}

/// Restriction of o (an order on parent) to sub, embedded via embedding[sub id] = parent id.
inline LevelOrderFamily restrict_order(const LevelOrderFamily& o, const RankedPoset& parent,
                                       const RankedPoset& sub,
                                       const std::vector<ElementId>& embedding) {
  if (embedding.size() != sub.size()) throw Error("embedding has the wrong size");
  std::vector<std::optional<ElementId>> m(sub.size());
  for (ElementId e = 0; e < sub.size(); ++e) {
    if (embedding[e] >= parent.size() || parent.rank(embedding[e]) != sub.rank(e))
      throw Error("embedding does not preserve rank at element " + std::to_string(e));
    m[e] = embedding[e];
  }
  return transport_order(o, sub, m);
}

}  // namespace macposet
