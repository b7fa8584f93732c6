#include <gtest/gtest.h>

#include <functional>
#include <numeric>

#include "macposet/construct.hpp"
#include "macposet/macaulay.hpp"
#include "macposet/monomial.hpp"
#include "macposet/orders.hpp"

using namespace macposet;

namespace {

using Vec = std::vector<std::uint32_t>;

std::vector<Vec> level_labels(const RankedPoset& p, const LevelOrderFamily& o, Rank d) {
  std::vector<Vec> out;
  for (auto e : o.level(d)) out.push_back(p.label(e).coords);
  return out;
}

RankedPoset degree_le(unsigned n, unsigned deg) {
  std::vector<ExponentVector> gens;
  std::vector<std::uint32_t> v(n, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned k, unsigned left) {
    if (k + 1 == n) {
      v[k] = left;
      gens.push_back({v});
      return;
    }
    for (unsigned i = 0; i <= left; ++i) {
      v[k] = i;
      rec(k + 1, left - i);
    }
  };
  rec(0, deg + 1);
  return standard_monomial_poset(ideal_from_generators(default_variables(n), gens));
}

}  // namespace

TEST(OrderFamily, PathSingletons) {
  auto p = path(2);
  auto o = order_from_lists(p, {{0}, {1}, {2}});
  EXPECT_TRUE(o.fits(p));
  EXPECT_EQ(o.index_of(2), 0u);
}

TEST(OrderFamily, BoxLevelOne) {
  auto p = box({2, 2});
  auto o = lex_order(p);
  auto seg = initial_segment(p, o, 1, 1).members(p);
  ASSERT_EQ(seg.size(), 1u);
  EXPECT_EQ(p.label(seg[0]).coords, (Vec{1, 0}));
}

TEST(OrderFamily, DuplicateRejected) {
  auto p = box({2, 2});
  auto l = lex_order(p).lists();
  l[1][1] = l[1][0];
  EXPECT_THROW(order_from_lists(p, l), Error);
}

TEST(OrderFamily, WrongLevelRejected) {
  auto p = box({2, 2});
  auto l = lex_order(p).lists();
  std::swap(l[0][0], l[1][0]);
  EXPECT_THROW(order_from_lists(p, l), Error);
}

TEST(Lex, DegreeTwoThreeVariables) {
  auto p = degree_le(3, 2);
  auto o = lex_order(p, {"x", "y", "z"});
  EXPECT_EQ(level_labels(p, o, 2),
            (std::vector<Vec>{{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}}));
  std::vector<Vec> seg;
  for (auto e : initial_segment(p, o, 2, 4).members(p)) seg.push_back(p.label(e).coords);
  std::sort(seg.begin(), seg.end());
  EXPECT_EQ(seg, (std::vector<Vec>{{0, 2, 0}, {1, 0, 1}, {1, 1, 0}, {2, 0, 0}}));
}

TEST(Lex, SingleVariable) {
  auto p = path(4);
  for (Rank d = 0; d <= 4; ++d) EXPECT_EQ(lex_order(p).level(d).size(), 1u);
}

TEST(Lex, PriorityYFirst) {
  auto p = box({3, 2});
  auto o = lex_order(p, {"y", "x"});
  EXPECT_EQ(level_labels(p, o, 1), (std::vector<Vec>{{0, 1}, {1, 0}}));
}

TEST(Lex, UnknownVariable) { EXPECT_THROW(lex_order(box({2, 2}), {"q", "x"}), Error); }

TEST(Lex, NeedsLabels) { EXPECT_THROW(lex_order(box({2, 2}).without_labels()), Error); }

TEST(UnionSimplicial, DisjointUnionLevelOne) {
  auto b = box({2, 2});
  auto u = disjoint_union({b, b});
  auto lx = lex_order(b);
  auto o = union_simplicial_order(u.poset, u.provenance, {lx, lx});
  std::vector<std::pair<std::uint32_t, Vec>> got;
  for (auto e : o.level(1)) got.push_back({u.provenance.of[e][0].factor, b.label(u.provenance.of[e][0].source).coords});
  EXPECT_EQ(got, (std::vector<std::pair<std::uint32_t, Vec>>{{1, {1, 0}}, {1, {0, 1}}, {0, {1, 0}}, {0, {0, 1}}}));
}

TEST(UnionSimplicial, SingleFactorKeepsOrder) {
  auto b = box({2, 3});
  auto u = disjoint_union({b});
  auto o = union_simplicial_order(u.poset, u.provenance, {lex_order(b)});
  auto emb = factor_embedding(u, 0, b.size());
  auto lx = lex_order(b);
  for (Rank d = 0; d < b.level_count(); ++d)
    for (std::size_t i = 0; i < lx.level(d).size(); ++i) EXPECT_EQ(o.level(d)[i], emb[lx.level(d)[i]]);
}

TEST(UnionSimplicial, WedgeOfPaths) {
  auto w = wedge({path(2), path(2)});
  auto o = union_simplicial_order(w.poset, w.provenance, {lex_order(path(2)), lex_order(path(2))});
  for (Rank d = 1; d <= 2; ++d) {
    ASSERT_EQ(o.level(d).size(), 2u);
    EXPECT_EQ(w.provenance.of[o.level(d)[0]][0].factor, 1u);
  }
}

TEST(UnionSimplicial, ArityMismatch) {
  auto w = wedge({path(2), path(2)});
  EXPECT_THROW(union_simplicial_order(w.poset, w.provenance, {lex_order(path(2))}), Error);
}

TEST(Twist, HeartRankThree) {
  auto p = heart(5, 2, 2, 5);
  auto o = twist_order(p, 5, 2, 2, 5);
  auto l = level_labels(p, o, 3);
  std::reverse(l.begin(), l.end());  // ascending
  EXPECT_EQ(l, (std::vector<Vec>{{3, 0}, {2, 1}, {0, 3}, {1, 2}}));
}

TEST(Twist, LowRanksMatchLex) {
  auto p = heart(5, 2, 2, 5);
  auto t = twist_order(p, 5, 2, 2, 5);
  auto l = lex_order(p, {"y", "x"});
  for (Rank d = 0; d < 2; ++d) EXPECT_EQ(t.level(d).size(), l.level(d).size());
  for (Rank d = 0; d < 2; ++d)
    EXPECT_TRUE(std::equal(t.level(d).begin(), t.level(d).end(), l.level(d).begin()));
}

TEST(Twist, SingletonRankZero) {
  auto p = heart(3, 1, 1, 4);
  EXPECT_EQ(twist_order(p, 3, 1, 1, 4).level(0).size(), 1u);
}

TEST(Twist, WrongHeartRejected) {
  EXPECT_THROW(twist_order(heart(5, 2, 2, 5), 4, 2, 2, 5), Error);
  EXPECT_THROW(twist_order(heart(5, 2, 2, 5), 2, 5, 5, 2), Error);
}

TEST(Restrict, WedgeToFactor) {
  auto q = box({2, 3});
  auto pp = path(3);
  auto w = wedge({pp, q});
  auto o = union_simplicial_order(w.poset, w.provenance, {lex_order(pp), lex_order(q)});
  auto emb = factor_embedding(w, 1, q.size());
  EXPECT_EQ(restrict_order(o, w.poset, q, emb), lex_order(q));
}

TEST(Restrict, Identity) {
  auto p = box({3, 3});
  std::vector<ElementId> id(p.size());
  std::iota(id.begin(), id.end(), 0);
  EXPECT_EQ(restrict_order(lex_order(p), p, p, id), lex_order(p));
}

TEST(Restrict, SubBox) {
  auto big = box({3, 3}), small = box({2, 2});
  std::vector<ElementId> emb;
  for (ElementId e = 0; e < small.size(); ++e)
    for (ElementId f = 0; f < big.size(); ++f)
      if (big.label(f) == small.label(e)) emb.push_back(f);
  EXPECT_EQ(restrict_order(lex_order(big), big, small, emb), lex_order(small));
}

TEST(Transport, UnmappedLast) {
  auto b = box({2, 2});
  auto h = adjoin_extreme(b, Extreme::bottom);
  auto o = transport_order(lex_order(b), h.poset, source_map(h));
  EXPECT_TRUE(o.fits(h.poset));
  EXPECT_EQ(o.level(0).size(), 1u);
}

TEST(Prefix, SegmentsNest) {
  auto p = box({3, 4, 2});
  auto o = lex_order(p);
  for (Rank d = 0; d < p.level_count(); ++d)
    for (std::size_t q = 0; q < p.level_size(d); ++q) {
      auto a = initial_segment(p, o, d, q), b = initial_segment(p, o, d, q + 1);
      EXPECT_EQ(a.size(), q);
      EXPECT_TRUE(a.is_subset_of(b));
    }
  EXPECT_THROW(initial_segment(p, o, 0, 2), Error);
}
