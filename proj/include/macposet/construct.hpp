#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orders.hpp"
#include "poset.hpp"

namespace macposet {

enum class Operation { none, disjoint_union, wedge, diamond, fiber, cartesian, adjoin, remove };

inline const char* operation_name(Operation op) {
  switch (op) {
    case Operation::none: return "none";
    case Operation::disjoint_union: return "disjoint_union";
    case Operation::wedge: return "wedge";
    case Operation::diamond: return "diamond";
    case Operation::fiber: return "fiber";
    case Operation::cartesian: return "cartesian";
    case Operation::adjoin: return "adjoin";
    case Operation::remove: return "remove";
  }
  return "?";
}

/// For cartesian products every element has two origins (one per
/// coordinate); "merged" only means glue for the other operations.
struct OperationResult {
  RankedPoset poset;
  Provenance provenance;
  Operation operation = Operation::none;
};

enum class Extreme { top, bottom };

inline std::vector<std::string> default_variables(std::size_t n) {
  static const char* xyz[] = {"x", "y", "z"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(n <= 3 ? std::string(xyz[i]) : "x" + std::to_string(i + 1));
  return out;
}

namespace detail {

inline std::string join_args(const std::vector<unsigned>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

/// Poset on a down-closed set of exponent vectors (divisibility order), ids
/// sorted by degree then lex-descending.
inline RankedPoset monomial_poset(std::vector<ExponentVector> monos,
                                  std::vector<std::string> variables, std::string name) {
  std::sort(monos.begin(), monos.end(), [](const ExponentVector& a, const ExponentVector& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a > b;
  });
  std::map<ExponentVector, ElementId> id;
  for (ElementId i = 0; i < monos.size(); ++i) id[monos[i]] = i;
  std::vector<Rank> ranks;
  std::vector<Cover> covers;
  for (ElementId i = 0; i < monos.size(); ++i) {
    ranks.push_back(monos[i].degree());
    for (std::size_t k = 0; k < monos[i].arity(); ++k) {
      auto up = monos[i];
      ++up.coords[k];
      if (auto it = id.find(up); it != id.end()) covers.push_back({i, it->second});
    }
  }
  return RankedPoset(std::move(ranks), std::move(covers), std::move(name),
                     Labels{std::move(variables), std::move(monos)});
}

inline std::optional<ElementId> unique_extreme(const RankedPoset& p, Extreme which) {
  auto v = which == Extreme::bottom ? p.minimal_elements() : p.maximal_elements();
  if (v.size() != 1) return std::nullopt;
  return v.front();
}

}  // namespace detail

inline RankedPoset path(unsigned d) {
  std::vector<Rank> ranks;
  std::vector<Cover> covers;
  std::vector<ExponentVector> labels;
  for (ElementId i = 0; i <= d; ++i) {
    ranks.push_back(i);
    labels.push_back({{i}});
    if (i) covers.push_back({i - 1, i});
  }
  return RankedPoset(std::move(ranks), std::move(covers), "path(" + std::to_string(d) + ")",
                     Labels{{"x"}, std::move(labels)});
}

/// Monomials of K[x1..xn]/(x1^d1,...,xn^dn).
inline RankedPoset box(const std::vector<unsigned>& dims) {
  if (dims.empty()) throw Error("box needs at least one side");
  for (auto d : dims)
    if (d == 0) throw Error("box sides must be at least 1");
  std::vector<ExponentVector> monos;
  ExponentVector cur{std::vector<std::uint32_t>(dims.size(), 0)};
  for (;;) {
    monos.push_back(cur);
    std::size_t k = 0;
    while (k < dims.size() && ++cur.coords[k] == dims[k]) cur.coords[k++] = 0;
    if (k == dims.size()) break;
  }
  return detail::monomial_poset(std::move(monos), default_variables(dims.size()),
                                "box(" + detail::join_args(dims) + ")");
}

inline OperationResult disjoint_union(const std::vector<RankedPoset>& ps) {
  std::vector<Rank> ranks;
  std::vector<Cover> covers;
  Provenance prov;
  ElementId off = 0;
  for (std::uint32_t f = 0; f < ps.size(); ++f) {
    const auto& p = ps[f];
    for (ElementId e = 0; e < p.size(); ++e) {
      ranks.push_back(p.rank(e));
      prov.of.push_back({{f, e}});
    }
    for (auto c : p.covers()) covers.push_back({c.lower + off, c.upper + off});
    off += static_cast<ElementId>(p.size());
  }
  return {RankedPoset(std::move(ranks), std::move(covers)), std::move(prov),
          Operation::disjoint_union};
}

namespace detail {

// Disjoint union with the unique minima (and optionally maxima) identified.
inline OperationResult glue(const std::vector<RankedPoset>& ps, bool tops, Operation op) {
  const char* what = tops ? "diamond" : "wedge";
  if (ps.empty()) throw Error(std::string(what) + " needs at least one factor");
  std::vector<ElementId> lo, hi;
  for (std::size_t f = 0; f < ps.size(); ++f) {
    auto l = unique_extreme(ps[f], Extreme::bottom);
    if (!l) throw Error(std::string(what) + " factor " + std::to_string(f + 1) +
                        " lacks a unique minimal element");
    lo.push_back(*l);
    if (tops) {
      auto h = unique_extreme(ps[f], Extreme::top);
      if (!h) throw Error("diamond factor " + std::to_string(f + 1) +
                          " lacks a unique maximal element");
      if (*h == *l) throw Error("diamond factor " + std::to_string(f + 1) + " has rank 0");
      hi.push_back(*h);
    }
  }
  for (std::size_t f = 1; f < ps.size(); ++f) {
    if (ps[f].rank(lo[f]) != ps[0].rank(lo[0]))
      throw Error(std::string(what) + " factors have minima at different ranks");
    if (tops && ps[f].rank(hi[f]) != ps[0].rank(hi[0]))
      throw Error("diamond factors have different top ranks (" +
                  std::to_string(ps[0].rank(hi[0])) + " vs " + std::to_string(ps[f].rank(hi[f])) +
                  ")");
  }

  std::vector<Rank> ranks{ps[0].rank(lo[0])};
  Provenance prov;
  prov.of.emplace_back();
  for (std::uint32_t f = 0; f < ps.size(); ++f) prov.of[0].push_back({f, lo[f]});
  std::vector<std::vector<ElementId>> id(ps.size());
  for (std::uint32_t f = 0; f < ps.size(); ++f) {
    id[f].assign(ps[f].size(), 0);
    for (ElementId e = 0; e < ps[f].size(); ++e) {
      if (e == lo[f] || (tops && e == hi[f])) continue;
      id[f][e] = static_cast<ElementId>(ranks.size());
      ranks.push_back(ps[f].rank(e));
      prov.of.push_back({{f, e}});
    }
  }
  if (tops) {
    auto top = static_cast<ElementId>(ranks.size());
    ranks.push_back(ps[0].rank(hi[0]));
    prov.of.emplace_back();
    for (std::uint32_t f = 0; f < ps.size(); ++f) {
      id[f][hi[f]] = top;
      prov.of.back().push_back({f, hi[f]});
    }
  }
  std::vector<Cover> covers;
  for (std::size_t f = 0; f < ps.size(); ++f)
    for (auto c : ps[f].covers()) covers.push_back({id[f][c.lower], id[f][c.upper]});
  return {RankedPoset(std::move(ranks), std::move(covers)), std::move(prov), op};
}

}  // namespace detail

inline OperationResult wedge(const std::vector<RankedPoset>& ps) {
  return detail::glue(ps, false, Operation::wedge);
}

inline OperationResult diamond(const std::vector<RankedPoset>& ps) {
  return detail::glue(ps, true, Operation::diamond);
}

inline OperationResult spider(const std::vector<unsigned>& legs) {
  std::vector<RankedPoset> ps;
  for (auto l : legs) {
    if (l == 0) throw Error("spider legs must have length at least 1");
    ps.push_back(path(l));
  }
  auto r = wedge(ps);
  r.poset = r.poset.renamed("spider(" + detail::join_args(legs) + ")");
  return r;
}

/// Glues pa and pb along the images of pc. ia[c], ib[c] are the images of c.
inline OperationResult fiber_product(const RankedPoset& pa, const RankedPoset& pb,
                                     const RankedPoset& pc, const std::vector<ElementId>& ia,
                                     const std::vector<ElementId>& ib) {
  auto check = [&](const RankedPoset& big, const std::vector<ElementId>& m, const char* side) {
    auto fail = [&](const std::string& why) {
      return Error(std::string("inclusion into ") + side + " " + why);
    };
    if (m.size() != pc.size()) throw fail("has the wrong size");
    std::vector<char> hit(big.size(), 0);
    for (ElementId c = 0; c < pc.size(); ++c) {
      if (m[c] >= big.size()) throw fail("maps outside the poset");
      if (hit[m[c]]) throw fail("is not injective");
      hit[m[c]] = 1;
      if (big.rank(m[c]) != pc.rank(c)) throw fail("does not preserve rank");
    }
    auto lc = up_closure(pc), lb = up_closure(big);
    for (ElementId c = 0; c < pc.size(); ++c)
      for (ElementId c2 = 0; c2 < pc.size(); ++c2)
        if (lc[c].test(c2) != lb[m[c]].test(m[c2])) throw fail("is not an order embedding");
  };
  check(pa, ia, "A");
  check(pb, ib, "B");

  std::vector<Rank> ranks;
  Provenance prov;
  std::vector<ElementId> ida(pa.size(), ~ElementId{0}), idb(pb.size(), ~ElementId{0});
  for (ElementId c = 0; c < pc.size(); ++c) {
    ida[ia[c]] = idb[ib[c]] = c;
    ranks.push_back(pc.rank(c));
    prov.of.push_back({{0, ia[c]}, {1, ib[c]}});
  }
  for (ElementId a = 0; a < pa.size(); ++a)
    if (ida[a] == ~ElementId{0}) {
      ida[a] = static_cast<ElementId>(ranks.size());
      ranks.push_back(pa.rank(a));
      prov.of.push_back({{0, a}});
    }
  for (ElementId b = 0; b < pb.size(); ++b)
    if (idb[b] == ~ElementId{0}) {
      idb[b] = static_cast<ElementId>(ranks.size());
      ranks.push_back(pb.rank(b));
      prov.of.push_back({{1, b}});
    }
  // ranks are consistent, so the covers of the generated order are exactly
  // the union of both cover relations
  std::vector<Cover> covers;
  for (auto c : pa.covers()) covers.push_back({ida[c.lower], ida[c.upper]});
  for (auto c : pb.covers()) covers.push_back({idb[c.lower], idb[c.upper]});

  std::optional<Labels> labels;
  if (pa.has_labels() && pb.has_labels() &&
      pa.labels()->variables == pb.labels()->variables) {
    Labels l{pa.labels()->variables, std::vector<ExponentVector>(ranks.size())};
    for (ElementId a = 0; a < pa.size(); ++a) l.of[ida[a]] = pa.label(a);
    for (ElementId b = 0; b < pb.size(); ++b) l.of[idb[b]] = pb.label(b);
    bool agree = true;
    for (ElementId c = 0; c < pc.size(); ++c) agree &= pa.label(ia[c]) == pb.label(ib[c]);
    if (agree) labels = std::move(l);
  }
  return {RankedPoset(std::move(ranks), std::move(covers), {}, std::move(labels)),
          std::move(prov), Operation::fiber};
}

/// (a,b) <= (a',b') iff a <= a' and b <= b'. Ids sorted by rank, then (a, b).
inline OperationResult cartesian_product(const RankedPoset& p, const RankedPoset& q) {
  std::vector<std::pair<ElementId, ElementId>> pairs;
  for (ElementId a = 0; a < p.size(); ++a)
    for (ElementId b = 0; b < q.size(); ++b) pairs.push_back({a, b});
  std::stable_sort(pairs.begin(), pairs.end(), [&](auto x, auto y) {
    return p.rank(x.first) + q.rank(x.second) < p.rank(y.first) + q.rank(y.second);
  });
  std::vector<ElementId> id(p.size() * q.size());
  for (ElementId i = 0; i < pairs.size(); ++i)
    id[pairs[i].first * q.size() + pairs[i].second] = i;
  std::vector<Rank> ranks;
  std::vector<Cover> covers;
  Provenance prov;
  for (ElementId i = 0; i < pairs.size(); ++i) {
    auto [a, b] = pairs[i];
    ranks.push_back(p.rank(a) + q.rank(b));
    prov.of.push_back({{0, a}, {1, b}});
    for (auto u : p.up(a)) covers.push_back({i, id[u * q.size() + b]});
    for (auto u : q.up(b)) covers.push_back({i, id[a * q.size() + u]});
  }
  std::optional<Labels> labels;
  if (p.has_labels() && q.has_labels()) {
    auto vars = p.labels()->variables;
    const auto& qv = q.labels()->variables;
    vars.insert(vars.end(), qv.begin(), qv.end());
    if (std::set<std::string>(vars.begin(), vars.end()).size() != vars.size()) {
      for (std::size_t i = 0; i < vars.size(); ++i) vars[i] = "x" + std::to_string(i + 1);
    }
    Labels l{std::move(vars), {}};
    for (auto [a, b] : pairs) {
      auto v = p.label(a);
      v.coords.insert(v.coords.end(), q.label(b).coords.begin(), q.label(b).coords.end());
      l.of.push_back(std::move(v));
    }
    labels = std::move(l);
  }
  return {RankedPoset(std::move(ranks), std::move(covers), {}, std::move(labels)),
          std::move(prov), Operation::cartesian};
}

/// hat (top) or uwidehat (bottom). A new bottom lands at rank 0 and the old
/// minima move to rank 1.
inline OperationResult adjoin_extreme(const RankedPoset& p, Extreme which) {
  std::vector<Rank> ranks;
  std::vector<Cover> covers;
  Provenance prov;
  if (which == Extreme::top) {
    auto tops = p.maximal_elements();
    for (auto t : tops)
      if (p.rank(t) != p.rank(tops.front()))
        throw Error("maximal elements have different ranks; cannot adjoin a top");
    ranks = p.ranks();
    covers = p.covers();
    auto n = static_cast<ElementId>(p.size());
    ranks.push_back(tops.empty() ? 0 : p.rank(tops.front()) + 1);
    for (auto t : tops) covers.push_back({t, n});
    for (ElementId e = 0; e < n; ++e) prov.of.push_back({{0, e}});
    prov.of.emplace_back();
  } else {
    auto mins = p.minimal_elements();
    for (auto m : mins)
      if (p.rank(m) != p.rank(mins.front()))
        throw Error("minimal elements have different ranks; cannot adjoin a bottom");
    Rank r = mins.empty() ? 0 : p.rank(mins.front());
    ranks.push_back(0);
    prov.of.emplace_back();
    for (ElementId e = 0; e < p.size(); ++e) {
      ranks.push_back(p.rank(e) - r + 1);
      prov.of.push_back({{0, e}});
    }
    for (auto c : p.covers()) covers.push_back({c.lower + 1, c.upper + 1});
    for (auto m : mins) covers.push_back({0, m + 1});
  }
  return {RankedPoset(std::move(ranks), std::move(covers)), std::move(prov),
          Operation::adjoin};
}

/// Removes the unique minimum (bar-under) or maximum (bar). Ranks are kept.
inline OperationResult remove_extreme(const RankedPoset& p, Extreme which) {
  auto x = detail::unique_extreme(p, which);
  if (!x) throw Error(std::string("poset has no unique ") +
                      (which == Extreme::top ? "maximum" : "minimum"));
  std::vector<Rank> ranks;
  std::vector<ElementId> id(p.size(), 0);
  Provenance prov;
  std::optional<Labels> labels;
  if (p.has_labels()) labels = Labels{p.labels()->variables, {}};
  for (ElementId e = 0; e < p.size(); ++e) {
    if (e == *x) continue;
    id[e] = static_cast<ElementId>(ranks.size());
    ranks.push_back(p.rank(e));
    prov.of.push_back({{0, e}});
    if (labels) labels->of.push_back(p.label(e));
  }
  std::vector<Cover> covers;
  for (auto c : p.covers())
    if (c.lower != *x && c.upper != *x) covers.push_back({id[c.lower], id[c.upper]});
  return {RankedPoset(std::move(ranks), std::move(covers), {}, std::move(labels)),
          std::move(prov), Operation::remove};
}

inline RankedPoset hat(const RankedPoset& p) { return adjoin_extreme(p, Extreme::top).poset; }
inline RankedPoset uhat(const RankedPoset& p) { return adjoin_extreme(p, Extreme::bottom).poset; }
inline RankedPoset bar(const RankedPoset& p) { return remove_extreme(p, Extreme::top).poset; }
inline RankedPoset ubar(const RankedPoset& p) { return remove_extreme(p, Extreme::bottom).poset; }

/// embedding[factor element] = output element, for one factor of r.
inline std::vector<ElementId> factor_embedding(const OperationResult& r, std::uint32_t factor,
                                               std::size_t factor_size) {
  std::vector<ElementId> out(factor_size, ~ElementId{0});
  for (ElementId e = 0; e < r.provenance.of.size(); ++e)
    for (auto o : r.provenance.of[e])
      if (o.factor == factor) out[o.source] = e;
  for (auto v : out)
    if (v == ~ElementId{0}) throw Error("factor is not fully embedded");
  return out;
}

/// Output element -> source element of the single operand (adjoin/remove).
inline std::vector<std::optional<ElementId>> source_map(const OperationResult& r) {
  std::vector<std::optional<ElementId>> out(r.provenance.of.size());
  for (ElementId e = 0; e < out.size(); ++e)
    if (r.provenance.of[e].size() == 1) out[e] = r.provenance.of[e].front().source;
  return out;
}

/// Subposet induced on keep (ranks kept; covers are the induced covers, i.e.
/// related pairs one rank apart).
inline RankedPoset induced_subposet(const RankedPoset& p, const std::vector<ElementId>& keep) {
  auto up = up_closure(p);
  std::vector<Rank> ranks;
  std::vector<Cover> covers;
  std::optional<Labels> labels;
  if (p.has_labels()) labels = Labels{p.labels()->variables, {}};
  for (auto e : keep) {
    ranks.push_back(p.rank(e));
    if (labels) labels->of.push_back(p.label(e));
  }
  for (ElementId i = 0; i < keep.size(); ++i)
    for (ElementId j = 0; j < keep.size(); ++j)
      if (p.rank(keep[j]) == p.rank(keep[i]) + 1 && up[keep[i]].test(keep[j]))
        covers.push_back({i, j});
  return RankedPoset(std::move(ranks), std::move(covers), {}, std::move(labels));
}

}  // namespace macposet
