#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "macposet/construct.hpp"
#include "macposet/iso.hpp"
#include "macposet/monomial.hpp"
#include "macposet/poset.hpp"

using namespace macposet;

namespace {

// monomials of K[x,y] of degree <= 3
RankedPoset truncated_xy() {
  return standard_monomial_poset(ideal_from_generators({"x", "y"}, {{{4, 0}}, {{3, 1}}, {{2, 2}}, {{1, 3}}, {{0, 4}}}));
}

ElementId by_label(const RankedPoset& p, std::vector<std::uint32_t> v) {
  for (ElementId e = 0; e < p.size(); ++e)
    if (p.label(e).coords == v) return e;
  ADD_FAILURE() << "no such label";
  return 0;
}

std::vector<std::vector<std::uint32_t>> labels_of(const RankedPoset& p, const std::vector<ElementId>& ids) {
  std::vector<std::vector<std::uint32_t>> out;
  for (auto e : ids) out.push_back(p.label(e).coords);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Validate, PathIsValid) { EXPECT_TRUE(validate_poset(path(2)).ok); }

TEST(Validate, SkippedRankReported) {
  RankedPoset p({0, 2}, {{0, 1}});
  auto v = validate_poset(p);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.violation, "cover raises rank by 2");
  EXPECT_EQ(v.elements, (std::vector<ElementId>{0, 1}));
}

TEST(Validate, BoxIsValid) { EXPECT_TRUE(validate_poset(box({3, 4})).ok); }

TEST(Validate, SelfCoverAndFlatCover) {
  EXPECT_EQ(validate_poset(RankedPoset({0}, {{0, 0}})).violation, "self-cover");
  EXPECT_EQ(validate_poset(RankedPoset({1, 1}, {{0, 1}})).violation, "cover does not raise rank");
}

TEST(Poset, CoverOutOfRangeThrows) { EXPECT_THROW(RankedPoset({0}, {{0, 3}}), Error); }

TEST(Poset, LevelsAscendingAndPositions) {
  RankedPoset p({1, 0, 1, 2}, {{1, 0}, {1, 2}, {0, 3}});
  ASSERT_EQ(p.level_count(), 3u);
  EXPECT_EQ(std::vector<ElementId>(p.level(1).begin(), p.level(1).end()), (std::vector<ElementId>{0, 2}));
  EXPECT_EQ(p.position(2), 1u);
  EXPECT_EQ(p.minimal_elements(), (std::vector<ElementId>{1}));
  EXPECT_EQ(p.maximal_elements(), (std::vector<ElementId>{2, 3}));
}

TEST(Poset, EmptyLevelsAllowed) {
  RankedPoset p({0, 2}, {});
  EXPECT_EQ(p.level_sizes(), (std::vector<std::size_t>{1, 0, 1}));
}

TEST(Shadow, UpperShadowOfDegreeTwoSet) {
  auto p = truncated_xy();
  auto a = LevelSubset::of(p, 2, std::vector<ElementId>{by_label(p, {1, 1}), by_label(p, {0, 2})});
  auto s = upper_shadow(p, a).members(p);
  EXPECT_EQ(labels_of(p, s), (std::vector<std::vector<std::uint32_t>>{{0, 3}, {1, 2}, {2, 1}}));
}

TEST(Shadow, EmptyAndTop) {
  auto p = box({3, 4});
  EXPECT_TRUE(upper_shadow(p, LevelSubset::none(p, 1)).empty());
  auto top = p.maximal_elements();
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(p.label(top[0]).coords, (std::vector<std::uint32_t>{2, 3}));
  EXPECT_TRUE(upper_shadow(p, LevelSubset::of(p, p.rank(top[0]), top)).empty());
}

TEST(Shadow, LowerShadow) {
  auto p = truncated_xy();
  auto a = LevelSubset::of(p, 2, std::vector<ElementId>{by_label(p, {1, 1}), by_label(p, {2, 0})});
  EXPECT_EQ(labels_of(p, lower_shadow(p, a).members(p)),
            (std::vector<std::vector<std::uint32_t>>{{0, 1}, {1, 0}}));
  EXPECT_TRUE(lower_shadow(p, LevelSubset::none(p, 2)).empty());
  EXPECT_TRUE(lower_shadow(p, LevelSubset::all(p, 0)).empty());
}

TEST(Shadow, InsertOutsideLevelThrows) {
  auto p = box({2, 2});
  auto s = LevelSubset::none(p, 1);
  EXPECT_THROW(s.insert(p, 0), Error);
}

TEST(Shadow, Monotone) {
  std::mt19937 rng(7);
  auto p = box({3, 4, 2});
  for (int it = 0; it < 300; ++it) {
    Rank d = rng() % p.max_rank();
    auto a = LevelSubset::none(p, d), b = LevelSubset::none(p, d);
    for (auto e : p.level(d)) {
      bool in_a = rng() % 2;
      if (in_a) a.insert(p, e);
      if (in_a || rng() % 2) b.insert(p, e);
    }
    ASSERT_TRUE(a.is_subset_of(b));
    EXPECT_TRUE(upper_shadow(p, a).is_subset_of(upper_shadow(p, b)));
    if (d > 0) {
      EXPECT_TRUE(lower_shadow(p, a).is_subset_of(lower_shadow(p, b)));
    }
  }
}

TEST(Shadow, UnionAdditive) {
  auto p = box({3, 3});
  for (Rank d = 0; d < p.level_count(); ++d) {
    auto lvl = std::vector<ElementId>(p.level(d).begin(), p.level(d).end());
    for (std::size_t i = 0; i < lvl.size(); ++i)
      for (std::size_t j = 0; j < lvl.size(); ++j) {
        auto a = LevelSubset::of(p, d, std::vector<ElementId>{lvl[i]});
        auto b = LevelSubset::of(p, d, std::vector<ElementId>{lvl[j]});
        EXPECT_EQ(upper_shadow(p, a | b), upper_shadow(p, a) | upper_shadow(p, b));
      }
  }
}

TEST(Iso, BoxTransposed) {
  auto iso = are_isomorphic(box({2, 3}), box({3, 2}));
  ASSERT_TRUE(iso);
  EXPECT_TRUE(is_isomorphism(box({2, 3}), box({3, 2}), *iso));
}

TEST(Iso, OverlineHat) {
  auto q = spider({2, 2}).poset;
  EXPECT_TRUE(are_isomorphic(bar(hat(q)), q));
  EXPECT_TRUE(are_isomorphic(bar(hat(box({2, 3}))), box({2, 3})));
  // maxima of spider(1,2) sit at ranks 1 and 2, so no top can be adjoined
  EXPECT_THROW(hat(spider({1, 2}).poset), Error);
}

TEST(Iso, SpiderOverlineHatUnderlineUhat) {
  auto p = spider({1, 2}).poset;
  auto q = ubar(uhat(p));
  EXPECT_EQ(q.covers(), p.covers());
  for (ElementId e = 0; e < p.size(); ++e) EXPECT_EQ(q.rank(e), p.rank(e) + 1);
}

TEST(Iso, DifferentLevelSizes) { EXPECT_FALSE(are_isomorphic(box({2, 4}), box({3, 3}))); }

TEST(Iso, SameLevelSizesDifferentCovers) {
  // two 1,2,1 shapes: diamond versus a path with a pendant
  RankedPoset a({0, 1, 1, 2}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  RankedPoset b({0, 1, 1, 2}, {{0, 1}, {0, 2}, {1, 3}});
  EXPECT_FALSE(are_isomorphic(a, b));
  EXPECT_TRUE(are_isomorphic(a, diamond({path(2), path(2)}).poset));
}

TEST(Iso, ComposeAndInvert) {
  auto p = box({2, 3}), q = box({3, 2});
  auto f = *are_isomorphic(p, q);
  auto g = f.inverse();
  EXPECT_TRUE(is_isomorphism(q, p, g));
  auto id = f.then(g);
  for (ElementId e = 0; e < p.size(); ++e) EXPECT_EQ(id(e), e);
}

TEST(Iso, RandomRelabellingFound) {
  std::mt19937 rng(11);
  auto p = box({2, 3, 3});
  for (int it = 0; it < 5; ++it) {
    std::vector<ElementId> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Rank> ranks(p.size());
    for (ElementId e = 0; e < p.size(); ++e) ranks[perm[e]] = p.rank(e);
    std::vector<Cover> covers;
    for (auto c : p.covers()) covers.push_back({perm[c.lower], perm[c.upper]});
    RankedPoset q(ranks, covers);
    auto iso = are_isomorphic(p, q);
    ASSERT_TRUE(iso);
    EXPECT_TRUE(is_isomorphism(p, q, *iso));
  }
}
