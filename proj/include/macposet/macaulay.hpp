#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "orders.hpp"
#include "poset.hpp"

namespace macposet {

using Mask = std::uint64_t;
inline constexpr std::size_t kMaxLevelWidth = 63;
inline constexpr std::size_t kDefaultLevelCap = 24;

/// Cover structure as bit masks: up[d][pos] is the set of level-(d+1)
/// positions covering position pos of level d.
struct LevelMasks {
  std::vector<std::vector<Mask>> up;
  std::vector<std::size_t> width;

  explicit LevelMasks(const RankedPoset& p) {
    for (Rank d = 0; d < p.level_count(); ++d) {
      width.push_back(p.level_size(d));
      if (width.back() > kMaxLevelWidth)
        throw Error("level " + std::to_string(d) + " has " + std::to_string(width.back()) +
                    " elements; at most " + std::to_string(kMaxLevelWidth) + " are supported");
    }
    up.resize(p.level_count());
    for (Rank d = 0; d < p.level_count(); ++d)
      for (auto e : p.level(d)) {
        Mask m = 0;
        for (auto u : p.up(e)) m |= Mask{1} << p.position(u);
        up[d].push_back(m);
      }
  }

  Mask full(Rank d) const {
    if (d >= width.size()) return 0;
    return width[d] == 0 ? 0 : (~Mask{0} >> (64 - width[d]));
  }
  Mask shadow(Rank d, Mask s) const {
    Mask out = 0;
    for (; s; s &= s - 1) out |= up[d][std::countr_zero(s)];
    return out;
  }
};

inline Mask mask_of(const RankedPoset& p, std::span<const ElementId> ids) {
  Mask m = 0;
  for (auto e : ids) m |= Mask{1} << p.position(e);
  return m;
}

inline std::vector<ElementId> members_of(const RankedPoset& p, Rank d, Mask m) {
  std::vector<ElementId> out;
  auto lvl = p.level(d);
  for (; m; m &= m - 1) out.push_back(lvl[std::countr_zero(m)]);
  return out;
}

/// min[d][q] = min |∇A| over A ⊆ level d with |A| = q; argmin[d][q] is the
/// first such A in ascending binary order over level positions.
struct MinShadowTable {
  std::vector<std::vector<std::uint32_t>> min;
  std::vector<std::vector<Mask>> argmin;
  std::uint64_t subsets = 0;

  std::uint32_t operator()(Rank d, std::size_t q) const { return min[d][q]; }
};

namespace detail {

struct LevelBest {
  std::vector<std::uint32_t> val;
  std::vector<Mask> arg;
};

// Exhaustive scan of masks in [lo, hi) using split lookup tables.
inline LevelBest scan_level(const std::vector<Mask>& up, std::size_t w, Mask lo, Mask hi) {
  const std::size_t lw = w / 2, hw = w - lw;
  std::vector<Mask> lowtab(std::size_t{1} << lw, 0), hightab(std::size_t{1} << hw, 0);
  for (std::size_t m = 1; m < lowtab.size(); ++m)
    lowtab[m] = lowtab[m & (m - 1)] | up[std::countr_zero(m)];
  for (std::size_t m = 1; m < hightab.size(); ++m)
    hightab[m] = hightab[m & (m - 1)] | up[lw + std::countr_zero(m)];
  LevelBest best{std::vector<std::uint32_t>(w + 1, ~std::uint32_t{0}), std::vector<Mask>(w + 1, 0)};
  const Mask lowmask = (Mask{1} << lw) - 1;
  for (Mask m = lo; m < hi; ++m) {
    auto q = std::popcount(m);
    auto s = static_cast<std::uint32_t>(std::popcount(lowtab[m & lowmask] | hightab[m >> lw]));
    if (s < best.val[q]) {
      best.val[q] = s;
      best.arg[q] = m;
    }
  }
  return best;
}

}  // namespace detail

inline MinShadowTable min_shadow_table(const RankedPoset& p, const LevelMasks& lm,
                                       std::size_t level_cap = kDefaultLevelCap,
                                       unsigned threads = 1) {
  MinShadowTable t;
  const auto levels = lm.width.size();
  t.min.resize(levels);
  t.argmin.resize(levels);
  for (Rank d = 0; d < levels; ++d) {
    if (lm.width[d] > level_cap)
      throw Error("level " + std::to_string(d) + " has " + std::to_string(lm.width[d]) +
                  " elements, above the level cap " + std::to_string(level_cap) +
                  "; raise --level-cap");
  }
  // one job per (level, chunk); results merged keeping the smaller mask on ties
  struct Job { Rank d; Mask lo, hi; };
  std::vector<Job> jobs;
  for (Rank d = 0; d < levels; ++d) {
    const Mask total = Mask{1} << lm.width[d];
    t.subsets += total;
    const Mask chunk = std::max<Mask>(Mask{1} << 16, total / std::max(1u, threads * 4));
    for (Mask lo = 0; lo < total; lo += chunk) jobs.push_back({d, lo, std::min(total, lo + chunk)});
  }
  std::vector<detail::LevelBest> results(jobs.size());
  auto run = [&](std::size_t i) {
    const auto& j = jobs[i];
    results[i] = detail::scan_level(lm.up[j.d], lm.width[j.d], j.lo, j.hi);
  };
  if (threads <= 1 || jobs.size() == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned k = 0; k < threads; ++k)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < jobs.size();) run(i);
      });
    for (auto& th : pool) th.join();
  }
  for (Rank d = 0; d < levels; ++d) {
    t.min[d].assign(lm.width[d] + 1, ~std::uint32_t{0});
    t.argmin[d].assign(lm.width[d] + 1, 0);
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto d = jobs[i].d;
    for (std::size_t q = 0; q <= lm.width[d]; ++q) {
      auto v = results[i].val[q];
      auto a = results[i].arg[q];
      if (v < t.min[d][q] || (v == t.min[d][q] && a < t.argmin[d][q])) {
        t.min[d][q] = v;
        t.argmin[d][q] = a;
      }
    }
  }
  (void)p;
  return t;
}

inline MinShadowTable min_shadow_table(const RankedPoset& p,
                                       std::size_t level_cap = kDefaultLevelCap,
                                       unsigned threads = 1) {
  return min_shadow_table(p, LevelMasks(p), level_cap, threads);
}

enum class WitnessKind { min_shadow_beaten, shadow_not_initial, segment_inequality };

inline const char* witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::min_shadow_beaten: return "min-shadow-beaten";
    case WitnessKind::shadow_not_initial: return "shadow-not-initial";
    case WitnessKind::segment_inequality: return "segment-inequality";
  }
  return "?";
}

/// Evidence for a failed check.
///  min-shadow-beaten: |∇ Seg_d q| = measured exceeds |∇ better| = bound.
///  shadow-not-initial: ∇ Seg_d q (= shadow) is not a prefix of level d+1.
///  segment-inequality: for segments of size q, clause 1 has new(A) = measured
///    < new(B) = bound with B starting at start; clause 2 has new(B) =
///    measured < new(C) = bound.
struct Witness {
  WitnessKind kind{};
  Rank level = 0;
  std::size_t q = 0;
  std::vector<ElementId> set;
  std::vector<ElementId> better;
  std::vector<ElementId> shadow;
  std::size_t start = 0;
  int clause = 0;
  std::size_t measured = 0;
  std::size_t bound = 0;

  bool operator==(const Witness&) const = default;
};

struct Verdict {
  bool ok = true;
  std::optional<Witness> witness;

  explicit operator bool() const { return ok; }
};

inline LevelSubset initial_segment(const RankedPoset& p, const LevelOrderFamily& o, Rank d,
                                   std::size_t q) {
  if (d >= p.level_count() || q > p.level_size(d))
    throw Error("segment size " + std::to_string(q) + " out of range for level " +
                std::to_string(d));
  auto l = o.level(d);
  return LevelSubset::of(p, d, l.subspan(0, q));
}

/// ∇ of the segment [start, start+len) of level d minus ∇ of everything larger.
inline LevelSubset new_shadow(const RankedPoset& p, const LevelOrderFamily& o, Rank d,
                              std::size_t start, std::size_t len) {
  auto l = o.level(d);
  if (start + len > l.size()) throw Error("segment runs past the end of level " + std::to_string(d));
  auto seg = upper_shadow(p, LevelSubset::of(p, d, l.subspan(start, len)));
  auto before = upper_shadow(p, LevelSubset::of(p, d, l.subspan(0, start)));
  return seg - before;
}

inline void require_fits(const RankedPoset& p, const LevelOrderFamily& o) {
  if (!o.fits(p)) throw Error("order does not belong to this poset");
}

inline Verdict check_macaulay(const RankedPoset& p, const LevelOrderFamily& o,
                              const LevelMasks& lm, const MinShadowTable& t) {
  require_fits(p, o);
  for (Rank d = 0; d < p.level_count(); ++d) {
    auto l = o.level(d);
    auto next = o.level(d + 1);
    Mask seg = 0;
    for (std::size_t q = 0; q <= l.size(); ++q) {
      if (q) seg |= Mask{1} << p.position(l[q - 1]);
      Mask sh = lm.shadow(d, seg);
      auto k = static_cast<std::size_t>(std::popcount(sh));
      if (k != t(d, q)) {
        Witness w;
        w.kind = WitnessKind::min_shadow_beaten, w.level = d, w.q = q;
        w.set.assign(l.begin(), l.begin() + q);
        w.better = members_of(p, d, t.argmin[d][q]);
        w.shadow = members_of(p, d + 1, sh);
        w.measured = k;
        w.bound = t(d, q);
        return {false, w};
      }
      Mask prefix = mask_of(p, next.subspan(0, k));
      if (prefix != sh) {
        Witness w;
        w.kind = WitnessKind::shadow_not_initial, w.level = d, w.q = q;
        w.set.assign(l.begin(), l.begin() + q);
        w.shadow = members_of(p, d + 1, sh);
        w.measured = k;
        return {false, w};
      }
    }
  }
  return {};
}

inline Verdict check_macaulay(const RankedPoset& p, const LevelOrderFamily& o,
                              std::size_t level_cap = kDefaultLevelCap, unsigned threads = 1) {
  require_fits(p, o);
  LevelMasks lm(p);
  return check_macaulay(p, o, lm, min_shadow_table(p, lm, level_cap, threads));
}

/// Re-derives a witness from scratch; true iff it still demonstrates a violation.
inline bool replay_witness(const RankedPoset& p, const LevelOrderFamily& o, const Witness& w) {
  if (!o.fits(p) || w.level >= p.level_count()) return false;
  auto l = o.level(w.level);
  if (w.kind == WitnessKind::segment_inequality) {
    if (w.q == 0 || w.q > l.size() || w.start + w.q > l.size()) return false;
    auto nA = new_shadow(p, o, w.level, 0, w.q).size();
    auto nB = new_shadow(p, o, w.level, w.start, w.q).size();
    auto nC = new_shadow(p, o, w.level, l.size() - w.q, w.q).size();
    return w.clause == 1 ? nA < nB : nB < nC;
  }
  if (w.q > l.size()) return false;
  auto seg = initial_segment(p, o, w.level, w.q);
  if (LevelSubset::of(p, w.level, w.set) != seg) return false;
  auto sh = upper_shadow(p, seg);
  if (w.kind == WitnessKind::min_shadow_beaten) {
    if (w.better.size() != w.q) return false;
    auto other = upper_shadow(p, LevelSubset::of(p, w.level, w.better));
    return other.size() < sh.size();
  }
  auto next = o.level(w.level + 1);
  return LevelSubset::of(p, w.level + 1, next.subspan(0, sh.size())) != sh;
}

inline Verdict is_additive(const RankedPoset& p, const LevelOrderFamily& o,
                           std::size_t level_cap = kDefaultLevelCap) {
  if (!check_macaulay(p, o, level_cap)) throw Error("additivity is only defined for Macaulay orders");
  LevelMasks lm(p);
  for (Rank d = 0; d < p.level_count(); ++d) {
    auto l = o.level(d);
    const auto w = l.size();
    // shadow of each prefix, so new(s, q) = |∇[s, s+q) \ ∇[0, s)|
    std::vector<Mask> pre(w + 1, 0);
    for (std::size_t i = 0; i < w; ++i) pre[i + 1] = pre[i] | lm.up[d][p.position(l[i])];
    auto fresh = [&](std::size_t s, std::size_t q) {
      Mask seg = 0;
      for (std::size_t i = s; i < s + q; ++i) seg |= lm.up[d][p.position(l[i])];
      return static_cast<std::size_t>(std::popcount(seg & ~pre[s]));
    };
    for (std::size_t q = 1; q <= w; ++q) {
      auto nA = fresh(0, q), nC = fresh(w - q, q);
      for (std::size_t s = 0; s + q <= w; ++s) {
        auto nB = fresh(s, q);
        int clause = nA < nB ? 1 : (nB < nC ? 2 : 0);
        if (!clause) continue;
        Witness wit;
        wit.kind = WitnessKind::segment_inequality, wit.level = d, wit.q = q;
        wit.set.assign(l.begin() + s, l.begin() + s + q);
        wit.start = s;
        wit.clause = clause;
        wit.measured = clause == 1 ? nA : nB;
        wit.bound = clause == 1 ? nB : nC;
        return {false, wit};
      }
    }
  }
  return {};
}

enum class SearchStatus { found, none, inconclusive };

inline const char* search_status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::none: return "none";
    case SearchStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct SearchOptions {
  std::uint64_t budget = 50'000'000;  // DFS placements
  std::size_t level_cap = kDefaultLevelCap;
  unsigned threads = 1;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t level_states = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t table_subsets = 0;
};

struct SearchResult {
  SearchStatus status = SearchStatus::none;
  std::optional<LevelOrderFamily> order;
  SearchStats stats;
};

namespace detail {

struct MaskVecHash {
  std::size_t operator()(const std::vector<Mask>& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto m : v) h = (h ^ std::hash<Mask>{}(m)) * 0x100000001b3ull + (h >> 7);
    return h;
  }
};

class OrderSearch {
 public:
  OrderSearch(const RankedPoset& p, const LevelMasks& lm, const MinShadowTable& t,
              std::uint64_t budget)
      : p_(p), lm_(lm), t_(t), budget_(budget), failed_(lm.width.size()), lists_(lm.width.size()) {}

  struct OutOfBudget {};

  // Level d must be ordered block by block, blocks in the given order.
  bool solve(Rank d, const std::vector<Mask>& blocks) {
    if (d + 1 >= lm_.width.size()) {
      lists_[d].clear();
      for (auto b : blocks) append_positions(lists_[d], b);
      return true;
    }
    if (failed_[d].count(blocks)) {
      ++stats.memo_hits;
      return false;
    }
    ++stats.level_states;
    Level lv{d, blocks, {}, {}, {}};
    bool ok = place(lv, 0, 0, 0);
    if (!ok) failed_[d].insert(blocks);
    return ok;
  }

  SearchStats stats;
  std::vector<std::vector<std::uint32_t>> positions() const { return lists_; }

 private:
  struct Level {
    Rank d;
    const std::vector<Mask>& blocks;
    std::vector<Mask> incr;          // nonempty shadow increments so far
    std::vector<std::uint32_t> seq;  // placed positions
    std::unordered_set<std::vector<Mask>, MaskVecHash> dead;  // (S, incr...) keys
  };

  static void append_positions(std::vector<std::uint32_t>& out, Mask m) {
    for (; m; m &= m - 1) out.push_back(static_cast<std::uint32_t>(std::countr_zero(m)));
  }

  bool place(Level& lv, Mask placed, Mask shadow, std::size_t block) {
    const Rank d = lv.d;
    while (block < lv.blocks.size() && (lv.blocks[block] & ~placed) == 0) ++block;
    if (block == lv.blocks.size()) {
      std::vector<Mask> next = lv.incr;
      Mask rest = lm_.full(d + 1) & ~shadow;
      if (rest) next.push_back(rest);
      lists_[d] = lv.seq;
      return solve(d + 1, next);
    }
    std::vector<Mask> key;
    key.reserve(lv.incr.size() + 1);
    key.push_back(placed);
    key.insert(key.end(), lv.incr.begin(), lv.incr.end());
    if (lv.dead.count(key)) {
      ++stats.memo_hits;
      return false;
    }
    const auto k = static_cast<std::size_t>(std::popcount(placed));
    const auto target = t_(d, k + 1);
    Mask cand = lv.blocks[block] & ~placed;
    std::vector<Mask> tried;
    for (Mask c = cand; c; c &= c - 1) {
      auto pos = std::countr_zero(c);
      Mask up = lm_.up[d][pos];
      if (std::find(tried.begin(), tried.end(), up) != tried.end()) continue;
      tried.push_back(up);
      Mask nsh = shadow | up;
      if (static_cast<std::uint32_t>(std::popcount(nsh)) != target) continue;
      if (++stats.nodes > budget_) throw OutOfBudget{};
      bool grew = nsh != shadow;
      if (grew) lv.incr.push_back(nsh & ~shadow);
      lv.seq.push_back(static_cast<std::uint32_t>(pos));
      bool ok = place(lv, placed | (Mask{1} << pos), nsh, block);
      lv.seq.pop_back();
      if (grew) lv.incr.pop_back();
      if (ok) return true;
    }
    lv.dead.insert(std::move(key));
    return false;
  }

  const RankedPoset& p_;
  const LevelMasks& lm_;
  const MinShadowTable& t_;
  std::uint64_t budget_;
  std::vector<std::unordered_set<std::vector<Mask>, MaskVecHash>> failed_;
  std::vector<std::vector<std::uint32_t>> lists_;
};

}  // namespace detail

/// Searches for a Macaulay order level by level. Condition (1) forces each
/// prefix to meet the min-shadow table; condition (2) turns the successive
/// shadow increments into ordered blocks that level d+1 must respect.
/// A found order is re-verified with check_macaulay.
inline SearchResult find_macaulay_order(const RankedPoset& p, const SearchOptions& opt = {}) {
  SearchResult r;
  if (p.empty()) {
    r.status = SearchStatus::found;
    r.order = order_from_lists(p, {});
    return r;
  }
  LevelMasks lm(p);
  auto t = min_shadow_table(p, lm, opt.level_cap, opt.threads);
  detail::OrderSearch s(p, lm, t, opt.budget);
  bool ok = false;
  try {
    std::vector<Mask> first;
    if (lm.full(0)) first.push_back(lm.full(0));
    ok = s.solve(0, first);
  } catch (const detail::OrderSearch::OutOfBudget&) {
    r.status = SearchStatus::inconclusive;
    r.stats = s.stats;
    r.stats.table_subsets = t.subsets;
    return r;
  }
  r.stats = s.stats;
  r.stats.table_subsets = t.subsets;
  if (!ok) {
    r.status = SearchStatus::none;
    return r;
  }
  std::vector<std::vector<ElementId>> lists;
  auto pos = s.positions();
  for (Rank d = 0; d < p.level_count(); ++d) {
    std::vector<ElementId> l;
    for (auto i : pos[d]) l.push_back(p.level(d)[i]);
    lists.push_back(std::move(l));
  }
  auto o = order_from_lists(p, std::move(lists));
  if (!check_macaulay(p, o, lm, t)) throw Error("internal: search produced an order that fails the check");
  r.status = SearchStatus::found;
  r.order = std::move(o);
  return r;
}

/// Tries every tuple of per-level permutations. Only for tiny posets.
inline std::optional<LevelOrderFamily> brute_force_macaulay_order(const RankedPoset& p) {
  LevelMasks lm(p);
  auto t = min_shadow_table(p, lm);
  std::vector<std::vector<ElementId>> lists;
  for (Rank d = 0; d < p.level_count(); ++d) {
    auto l = p.level(d);
    lists.emplace_back(l.begin(), l.end());
  }
  for (;;) {
    auto o = order_from_lists(p, lists);
    if (check_macaulay(p, o, lm, t)) return o;
    std::size_t d = 0;
    while (d < lists.size() && !std::next_permutation(lists[d].begin(), lists[d].end())) ++d;
    if (d == lists.size()) return std::nullopt;
  }
}

}  // namespace macposet
