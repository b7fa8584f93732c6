#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <tuple>
#include <vector>

#include "poset.hpp"

namespace macposet {

struct PosetIso {
  std::vector<ElementId> mapping;  // element of p -> element of q

  ElementId operator()(ElementId e) const { return mapping[e]; }

  PosetIso inverse() const {
    PosetIso inv{std::vector<ElementId>(mapping.size())};
    for (ElementId a = 0; a < mapping.size(); ++a) inv.mapping[mapping[a]] = a;
    return inv;
  }
  PosetIso then(const PosetIso& next) const {
    PosetIso out{mapping};
    for (auto& m : out.mapping) m = next.mapping[m];
    return out;
  }
};

/// True iff iso is a rank- and cover-preserving bijection p -> q.
inline bool is_isomorphism(const RankedPoset& p, const RankedPoset& q,
                           const PosetIso& iso) {
  if (p.size() != q.size() || iso.mapping.size() != p.size()) return false;
  std::vector<char> hit(q.size(), 0);
  for (ElementId a = 0; a < p.size(); ++a) {
    auto b = iso.mapping[a];
    if (b >= q.size() || hit[b]) return false;
    hit[b] = 1;
    if (p.rank(a) != q.rank(b) || p.up(a).size() != q.up(b).size()) return false;
    for (auto u : p.up(a)) {
      auto qu = q.up(b);
      if (!std::binary_search(qu.begin(), qu.end(), iso.mapping[u])) return false;
    }
  }
  return true;
}

namespace detail {

// Joint 1-WL colouring of two posets; colours are comparable across both.
inline std::pair<std::vector<int>, std::vector<int>> refine_colours(
    const RankedPoset& p, const RankedPoset& q) {
  using Sig = std::tuple<int, std::vector<int>, std::vector<int>>;
  const RankedPoset* ps[2] = {&p, &q};
  std::vector<int> col[2];
  {
    std::map<std::tuple<Rank, std::size_t, std::size_t>, int> ids;
    for (int s = 0; s < 2; ++s)
      for (ElementId e = 0; e < ps[s]->size(); ++e)
        ids.try_emplace({ps[s]->rank(e), ps[s]->up(e).size(), ps[s]->down(e).size()}, 0);
    int next = 0;
    for (auto& [k, v] : ids) v = next++;
    for (int s = 0; s < 2; ++s) {
      col[s].resize(ps[s]->size());
      for (ElementId e = 0; e < ps[s]->size(); ++e)
        col[s][e] = ids[{ps[s]->rank(e), ps[s]->up(e).size(), ps[s]->down(e).size()}];
    }
  }
  std::size_t classes = 0;
  for (;;) {
    std::map<Sig, int> ids;
    std::vector<Sig> sig[2];
    for (int s = 0; s < 2; ++s) {
      for (ElementId e = 0; e < ps[s]->size(); ++e) {
        std::vector<int> u, d;
        for (auto x : ps[s]->up(e)) u.push_back(col[s][x]);
        for (auto x : ps[s]->down(e)) d.push_back(col[s][x]);
        std::sort(u.begin(), u.end());
        std::sort(d.begin(), d.end());
        sig[s].emplace_back(col[s][e], std::move(u), std::move(d));
        ids.try_emplace(sig[s].back(), 0);
      }
    }
    int next = 0;
    for (auto& [k, v] : ids) v = next++;
    for (int s = 0; s < 2; ++s)
      for (ElementId e = 0; e < ps[s]->size(); ++e) col[s][e] = ids[sig[s][e]];
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return {std::move(col[0]), std::move(col[1])};
}

}  // namespace detail

/// Finds an isomorphism p -> q if one exists. Deterministic.
inline std::optional<PosetIso> are_isomorphic(const RankedPoset& p,
                                              const RankedPoset& q) {
  if (p.size() != q.size() || p.level_sizes() != q.level_sizes() ||
      p.cover_count() != q.cover_count())
    return std::nullopt;
  const auto n = p.size();
  auto [cp, cq] = detail::refine_colours(p, q);
  {
    auto a = cp, b = cq;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }

  // visit p in BFS order over the undirected Hasse graph so each element
  // is usually adjacent to something already mapped
  std::vector<ElementId> order;
  std::vector<char> seen(n, 0);
  for (Rank d = 0; d < p.level_count(); ++d) {
    for (auto root : p.level(d)) {
      if (seen[root]) continue;
      std::queue<ElementId> bfs;
      bfs.push(root);
      seen[root] = 1;
      while (!bfs.empty()) {
        auto e = bfs.front();
        bfs.pop();
        order.push_back(e);
        for (auto nb : {p.down(e), p.up(e)})
          for (auto x : nb)
            if (!seen[x]) seen[x] = 1, bfs.push(x);
      }
    }
  }

  std::vector<std::vector<ElementId>> by_colour;
  for (ElementId b = 0; b < n; ++b) {
    if (static_cast<std::size_t>(cq[b]) >= by_colour.size()) by_colour.resize(cq[b] + 1);
    by_colour[cq[b]].push_back(b);
  }

  constexpr ElementId kNone = ~ElementId{0};
  std::vector<ElementId> f(n, kNone), g(n, kNone);

  auto consistent = [&](ElementId a, ElementId c) {
    auto pdn = p.down(a), pup = p.up(a);
    for (auto u : pdn)
      if (f[u] != kNone) {
        auto qd = q.down(c);
        if (!std::binary_search(qd.begin(), qd.end(), f[u])) return false;
      }
    for (auto u : pup)
      if (f[u] != kNone) {
        auto qu = q.up(c);
        if (!std::binary_search(qu.begin(), qu.end(), f[u])) return false;
      }
    for (auto v : q.down(c))
      if (g[v] != kNone && !std::binary_search(pdn.begin(), pdn.end(), g[v])) return false;
    for (auto v : q.up(c))
      if (g[v] != kNone && !std::binary_search(pup.begin(), pup.end(), g[v])) return false;
    return true;
  };

  auto place = [&](auto& self, std::size_t k) -> bool {
    if (k == n) return true;
    auto a = order[k];
    for (auto c : by_colour[cp[a]]) {
      if (g[c] != kNone || !consistent(a, c)) continue;
      f[a] = c;
      g[c] = a;
      if (self(self, k + 1)) return true;
      f[a] = kNone;
      g[c] = kNone;
    }
    return false;
  };
  if (!place(place, 0)) return std::nullopt;
  return PosetIso{std::move(f)};
}

}  // namespace macposet
