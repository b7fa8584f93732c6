#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "construct.hpp"
#include "macaulay.hpp"
#include "monomial.hpp"
#include "orders.hpp"

namespace macposet {

// ---------------------------------------------------------------- predicates

inline bool heart_predicate(unsigned a0, unsigned a1, unsigned b0, unsigned b1) {
  if (a0 <= b0 && a1 <= b1) return true;
  if (b0 <= a0 && b1 <= a1) return true;
  auto three = [](unsigned a0, unsigned a1, unsigned b0, unsigned b1) {
    if (!(b0 < a0 && a1 < b1)) return false;
    return a0 == b1 || (b1 < a0 && b1 + b0 <= a0 + a1) || (a0 < b1 && a0 + a1 <= b0 + b1);
  };
  return three(a0, a1, b0, b1) || three(b0, b1, a0, a1);
}

enum class HeartOrderKind { lex, twist };

/// Order recommended for a Macaulay heart. The choice is made on normalized
/// parameters; swap_xy says the normalized heart is the original one with x
/// and y exchanged. On the normalized heart the order is lex with y > x or
/// the twist order.
struct HeartOrderChoice {
  HeartOrderKind kind = HeartOrderKind::lex;
  bool swap_xy = false;
  unsigned a0 = 0, a1 = 0, b0 = 0, b1 = 0;
};

inline HeartOrderChoice heart_order_choice(unsigned a0, unsigned a1, unsigned b0, unsigned b1) {
  if (!heart_predicate(a0, a1, b0, b1)) throw Error("heart predicate is false; no order to recommend");
  HeartOrderChoice c{HeartOrderKind::lex, false, a0, a1, b0, b1};
  bool boxy = (a0 <= b0 && a1 <= b1) || (b0 <= a0 && b1 <= a1);
  if (boxy) {
    // the heart is a box; the variable on the shorter side gets priority
    unsigned sx = std::max(a0, b0), sy = std::max(a1, b1);
    c.swap_xy = sx < sy;
    if (c.swap_xy) c = {HeartOrderKind::lex, true, a1, a0, b1, b0};
    return c;
  }
  if (a0 < b0) std::swap(a0, b0), std::swap(a1, b1);  // now b0 < a0, a1 < b1
  bool flip = a0 < b1 || (a0 == b1 && a1 < b0);
  if (flip) {
    // (a0,a1,b0,b1) -> (b1,b0,a1,a0) exchanges x and y
    c.swap_xy = true;
    unsigned n0 = b1, n1 = b0, m0 = a1, m1 = a0;
    a0 = n0, a1 = n1, b0 = m0, b1 = m1;
  }
  c.a0 = a0, c.a1 = a1, c.b0 = b0, c.b1 = b1;
  c.kind = a1 + b0 > b1 ? HeartOrderKind::lex : HeartOrderKind::twist;
  return c;
}

/// The recommended order, realized on p = heart(a0,a1,b0,b1) (labelled).
inline LevelOrderFamily heart_recommended_order(const RankedPoset& p, unsigned a0, unsigned a1,
                                                unsigned b0, unsigned b1) {
  auto c = heart_order_choice(a0, a1, b0, b1);
  auto q = heart(c.a0, c.a1, c.b0, c.b1);
  auto oq = c.kind == HeartOrderKind::lex ? lex_order(q, {"y", "x"})
                                          : twist_order(q, c.a0, c.a1, c.b0, c.b1);
  std::map<ExponentVector, ElementId> where;
  for (ElementId e = 0; e < q.size(); ++e) where[q.label(e)] = e;
  std::vector<std::optional<ElementId>> m(p.size());
  for (ElementId e = 0; e < p.size(); ++e) {
    auto l = p.label(e);
    if (c.swap_xy) std::swap(l.coords[0], l.coords[1]);
    auto it = where.find(l);
    if (it == where.end()) throw Error("poset is not the stated heart");
    m[e] = it->second;
  }
  return transport_order(oq, p, m);
}

inline std::vector<unsigned> nontrivial_sides(std::vector<unsigned> dims) {
  std::erase(dims, 1u);
  std::sort(dims.begin(), dims.end());
  return dims;
}

inline unsigned box_top_rank(const std::vector<unsigned>& dims) {
  unsigned r = 0;
  for (auto d : dims) r += d - 1;
  return r;
}

/// Diamond product of two boxes: Macaulay iff the boxes are isomorphic, or
/// one is a path and the other is two-dimensional with a side of length 2.
inline bool diamond_box_predicate(const std::vector<unsigned>& p, const std::vector<unsigned>& q) {
  if (box_top_rank(p) != box_top_rank(q))
    throw Error("boxes have different top ranks; their diamond product is undefined");
  auto sp = nontrivial_sides(p), sq = nontrivial_sides(q);
  if (sp == sq) return true;
  auto path_vs_2k = [](const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
    return a.size() == 1 && b.size() == 2 && std::count(b.begin(), b.end(), 2u) > 0;
  };
  return path_vs_2k(sp, sq) || path_vs_2k(sq, sp);
}

/// Wedge of an m x n box with an m' x n' box (m <= n, m' <= n', m, m' > 1).
inline bool wedge_box_predicate_2d(unsigned m, unsigned n, unsigned m2, unsigned n2) {
  if (m > n || m2 > n2 || m < 2 || m2 < 2) throw Error("malformed wedge parameters");
  return (m <= m2 && n <= n2) || (m2 <= m && n2 <= n);
}

/// Wedge of a path with n elements (rank n-1) with an m' x n' box, m' <= n'.
inline bool wedge_box_predicate_path(unsigned n, unsigned m2, unsigned n2) {
  if (n < 1 || m2 < 1 || m2 > n2) throw Error("malformed wedge parameters");
  return n <= n2 || m2 == 1 || m2 == 2;
}

// ---------------------------------------------------------------- grids

struct GridRow {
  std::string instance;
  std::vector<unsigned> params;
  std::optional<bool> predicate;  // absent when the family has no closed form
  SearchStatus outcome = SearchStatus::none;
  bool agree = true;
  std::optional<bool> recommended_ok;
  std::optional<Witness> witness;
  std::string note;
  std::uint64_t nodes = 0;
  std::size_t elements = 0;
};

struct GridReport {
  std::string family;
  std::vector<GridRow> rows;

  std::size_t disagreements() const {
    return std::count_if(rows.begin(), rows.end(), [](const GridRow& r) { return !r.agree; });
  }
  std::size_t inconclusive() const {
    return std::count_if(rows.begin(), rows.end(),
                         [](const GridRow& r) { return r.outcome == SearchStatus::inconclusive; });
  }
  std::size_t recommended_failures() const {
    return std::count_if(rows.begin(), rows.end(), [](const GridRow& r) {
      return r.recommended_ok.has_value() && !*r.recommended_ok;
    });
  }
  bool clean() const { return disagreements() == 0 && inconclusive() == 0 && recommended_failures() == 0; }
};

/// Runs independent jobs on a small pool; rows come back in job order.
inline std::vector<GridRow> run_jobs(const std::vector<std::function<GridRow()>>& jobs,
                                     unsigned threads) {
  std::vector<GridRow> rows(jobs.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) rows[i] = jobs[i]();
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs.size());
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < jobs.size();) {
        try {
          rows[i] = jobs[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

/// Searches p and fills the outcome; agreement is against expect_order when given.
inline GridRow search_row(std::string instance, std::vector<unsigned> params, const RankedPoset& p,
                          std::optional<bool> expect_order, const SearchOptions& opt) {
  GridRow row;
  row.instance = std::move(instance);
  row.params = std::move(params);
  row.predicate = expect_order;
  row.elements = p.size();
  auto r = find_macaulay_order(p, opt);
  row.outcome = r.status;
  row.nodes = r.stats.nodes;
  if (expect_order && r.status != SearchStatus::inconclusive)
    row.agree = *expect_order == (r.status == SearchStatus::found);
  if (r.status == SearchStatus::inconclusive) row.agree = false, row.note = "budget exceeded";
  return row;
}

inline std::string tuple_name(const std::string& f, const std::vector<unsigned>& v) {
  std::string s = f + "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

struct FamilySpec {
  std::string family;  // heart | diamond-box | wedge-2d-box | wedge-path-box | union-wedge-diamond-equiv | cartesian-counterexamples
  unsigned min_side = 1;
  unsigned max_side = 5;
  unsigned max_dims = 3;        // diamond-box
  std::size_t max_elements = 80;  // diamond-box
  unsigned max_path = 6;        // wedge-path-box
  unsigned max_m2 = 3;          // wedge-path-box
  SearchOptions search;
};

inline GridReport heart_grid(const FamilySpec& s) {
  std::vector<std::function<GridRow()>> jobs;
  for (unsigned a0 = s.min_side; a0 <= s.max_side; ++a0)
    for (unsigned a1 = s.min_side; a1 <= s.max_side; ++a1)
      for (unsigned b0 = s.min_side; b0 <= s.max_side; ++b0)
        for (unsigned b1 = s.min_side; b1 <= s.max_side; ++b1)
          jobs.push_back([=] {
            auto p = heart(a0, a1, b0, b1);
            bool pred = heart_predicate(a0, a1, b0, b1);
            auto opt = s.search;
            opt.threads = 1;
            auto row = search_row(p.name(), {a0, a1, b0, b1}, p, pred, opt);
            if (pred) {
              auto v = check_macaulay(p, heart_recommended_order(p, a0, a1, b0, b1), s.search.level_cap);
              row.recommended_ok = v.ok;
              if (!v.ok) row.witness = v.witness;
              auto c = heart_order_choice(a0, a1, b0, b1);
              row.note = c.kind == HeartOrderKind::lex ? "lex" : "twist";
              if (c.swap_xy) row.note += ", x<->y";
            }
            return row;
          });
  return {"heart", run_jobs(jobs, s.search.threads)};
}

/// Sorted side lists with entries in [lo, hi] and 1..max_dims entries.
inline std::vector<std::vector<unsigned>> sorted_boxes(unsigned lo, unsigned hi, unsigned max_dims) {
  std::vector<std::vector<unsigned>> out;
  std::function<void(std::vector<unsigned>&)> rec = [&](std::vector<unsigned>& cur) {
    if (!cur.empty()) out.push_back(cur);
    if (cur.size() == max_dims) return;
    for (unsigned v = cur.empty() ? lo : cur.back(); v <= hi; ++v) {
      cur.push_back(v);
      rec(cur);
      cur.pop_back();
    }
  };
  std::vector<unsigned> cur;
  rec(cur);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t box_size(const std::vector<unsigned>& d) {
  std::size_t n = 1;
  for (auto v : d) n *= v;
  return n;
}

inline GridReport diamond_box_grid(const FamilySpec& s) {
  auto boxes = sorted_boxes(std::max(2u, s.min_side), s.max_side, s.max_dims);
  std::vector<std::function<GridRow()>> jobs;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i; j < boxes.size(); ++j) {
      const auto& p = boxes[i];
      const auto& q = boxes[j];
      if (box_top_rank(p) != box_top_rank(q)) continue;
      if (box_size(p) + box_size(q) - 2 > s.max_elements) continue;
      jobs.push_back([=] {
        auto d = diamond({box(p), box(q)}).poset;
        auto opt = s.search;
        opt.threads = 1;
        auto params = p;
        params.push_back(0);  // separator between the two side lists
        params.insert(params.end(), q.begin(), q.end());
        return search_row("diamond(" + box(p).name() + "," + box(q).name() + ")", params, d,
                          diamond_box_predicate(p, q), opt);
      });
    }
  return {"diamond-box", run_jobs(jobs, s.search.threads)};
}

inline GridReport wedge_2d_grid(const FamilySpec& s) {
  std::vector<std::function<GridRow()>> jobs;
  unsigned lo = std::max(2u, s.min_side);
  for (unsigned m = lo; m <= s.max_side; ++m)
    for (unsigned n = m; n <= s.max_side; ++n)
      for (unsigned m2 = lo; m2 <= s.max_side; ++m2)
        for (unsigned n2 = m2; n2 <= s.max_side; ++n2)
          jobs.push_back([=] {
            auto w = wedge({box({m, n}), box({m2, n2})}).poset;
            auto opt = s.search;
            opt.threads = 1;
            return search_row(tuple_name("wedge-box", {m, n, m2, n2}), {m, n, m2, n2}, w,
                              wedge_box_predicate_2d(m, n, m2, n2), opt);
          });
  return {"wedge-2d-box", run_jobs(jobs, s.search.threads)};
}

inline GridReport wedge_path_grid(const FamilySpec& s) {
  std::vector<std::function<GridRow()>> jobs;
  for (unsigned n = 1; n <= s.max_path; ++n)
    for (unsigned m2 = 1; m2 <= s.max_m2; ++m2)
      for (unsigned n2 = m2; n2 <= s.max_side; ++n2)
        jobs.push_back([=] {
          auto w = wedge({path(n - 1), box({m2, n2})}).poset;
          auto opt = s.search;
          opt.threads = 1;
          return search_row(tuple_name("wedge-path-box", {n, m2, n2}), {n, m2, n2}, w,
                            wedge_box_predicate_path(n, m2, n2), opt);
        });
  return {"wedge-path-box", run_jobs(jobs, s.search.threads)};
}

// ---------------------------------------------------------------- equivalence suite

/// Existence pattern for ⊔ underline(P_i), ⋁ P_i, ⋄ hat(P_i) (must agree) and
/// the chain ⊔ P_i ⇒ ⋁ P_i ⇒ ⋄ P_i. Forms that are undefined are skipped.
inline GridReport union_simplicial_equivalence_check(const std::vector<RankedPoset>& ps,
                                                     const SearchOptions& opt = {}) {
  GridReport rep{"union-wedge-diamond-equiv", {}};
  auto attempt = [&](const std::string& name, auto build) -> std::optional<SearchStatus> {
    std::optional<RankedPoset> p;
    try {
      p = build();
    } catch (const Error&) {
      GridRow row;
      row.instance = name;
      row.note = "undefined";
      rep.rows.push_back(row);
      return std::nullopt;
    }
    auto row = search_row(name, {}, *p, std::nullopt, opt);
    rep.rows.push_back(row);
    return row.outcome;
  };
  auto s1 = attempt("union of underlines", [&] {
    std::vector<RankedPoset> under;
    for (const auto& p : ps) under.push_back(ubar(p));
    return disjoint_union(under).poset;
  });
  auto s2 = attempt("wedge", [&] { return wedge(ps).poset; });
  auto s3 = attempt("diamond of hats", [&] {
    std::vector<RankedPoset> hats;
    for (const auto& p : ps) hats.push_back(hat(p));
    return diamond(hats).poset;
  });
  auto s1p = attempt("union", [&] { return disjoint_union(ps).poset; });
  auto s3p = attempt("diamond", [&] { return diamond(ps).poset; });

  auto found = [](const std::optional<SearchStatus>& s) { return s && *s == SearchStatus::found; };
  std::vector<std::optional<SearchStatus>> eq{s1, s2, s3};
  std::optional<bool> first;
  bool equivalent = true;
  for (auto& s : eq) {
    if (!s) continue;
    if (!first) first = found(s);
    equivalent &= *first == found(s);
  }
  bool chain = (!found(s1p) || !s2 || found(s2)) && (!found(s2) || !s3p || found(s3p));
  GridRow summary;
  summary.instance = "summary";
  summary.agree = equivalent && chain;
  summary.note = std::string(equivalent ? "equivalent" : "NOT equivalent") + ", chain " +
                 (chain ? "holds" : "FAILS");
  rep.rows.push_back(summary);
  return rep;
}

inline RankedPoset y_poset() { return uhat(spider({1, 1}).poset).renamed("Y"); }

/// Monomial poset of K[y,z]/(y^2 - z^2, y^3, z^3): 1; y, z; y^2 = z^2, yz.
/// Both degree-1 monomials divide both degree-2 ones.
inline RankedPoset ring_factor_poset() {
  return RankedPoset({0, 1, 1, 2, 2}, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}},
                     "ring-factor");
}

/// The chain-topped shape 1 < y, z < w < wy (levels 1, 2, 1, 1).
inline RankedPoset ring_shape_poset() {
  return RankedPoset({0, 1, 1, 2, 3}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}}, "ring-shape");
}

inline MonomialIdeal cubic_power_ideal() {
  return ideal_from_generators({"y", "z"}, {{{3, 0}}, {{2, 1}}, {{1, 2}}, {{0, 3}}});
}

inline GridReport cartesian_counterexamples(const SearchOptions& opt = {}) {
  GridReport rep{"cartesian-counterexamples", {}};
  auto add = [&](const std::string& name, const RankedPoset& p) {
    rep.rows.push_back(search_row(name, {}, p, false, opt));
  };
  add("cart(path(1),Y)", cartesian_product(path(1), y_poset()).poset);
  add("cart(poset(ideal(y^3,y^2*z,y*z^2,z^3)),path(1))",
      cartesian_product(standard_monomial_poset(cubic_power_ideal()), path(1)).poset);
  add("cart(ring-factor,path(1))", cartesian_product(ring_factor_poset(), path(1)).poset);
  return rep;
}

/// All ideals of K[y,z] containing y^a and z^b with a, b <= max_exp, other
/// than the unit ideal (i.e. all nonempty staircases in the box).
inline std::vector<MonomialIdeal> staircase_ideals(unsigned max_exp) {
  std::vector<MonomialIdeal> out;
  // heights h[0] >= h[1] >= ... of the staircase columns, h[0] >= 1
  std::vector<unsigned> h(max_exp, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned col, unsigned cap) {
    if (col == max_exp) {
      if (h[0] == 0) return;
      std::vector<ExponentVector> g;
      for (unsigned i = 0; i <= max_exp; ++i) {
        unsigned hi = i < max_exp ? h[i] : 0;
        g.push_back({{i, hi}});
      }
      out.push_back(ideal_from_generators({"y", "z"}, std::move(g)));
      return;
    }
    for (unsigned v = 0; v <= cap; ++v) {
      h[col] = v;
      rec(col + 1, v);
    }
  };
  rec(0, max_exp);
  std::sort(out.begin(), out.end(), [](const MonomialIdeal& a, const MonomialIdeal& b) {
    return a.generators < b.generators;
  });
  return out;
}

inline std::string ideal_text(const MonomialIdeal& i);

/// For each Macaulay S and n in (top degree, top degree + extra], looks for a
/// Macaulay order on poset(S) x path(n-1). A missing order is a counterexample.
/// Rows with n = 2 for the (y^3, y^2 z, y z^2, z^3) quotient form a regression
/// slice outside the conjecture's range.
inline GridReport product_conjecture_search(unsigned max_exp = 4, unsigned extra = 3,
                                        const SearchOptions& opt = {}) {
  auto ideals = staircase_ideals(max_exp);
  std::vector<std::function<GridRow()>> jobs;
  for (const auto& i : ideals) {
    jobs.push_back([=] {
      auto s = standard_monomial_poset(i);
      auto o = opt;
      o.threads = 1;
      auto r = find_macaulay_order(s, o);
      GridRow row;
      row.instance = "poset(" + ideal_text(i) + ")";
      row.elements = s.size();
      row.outcome = r.status;
      row.nodes = r.stats.nodes;
      row.note = r.status == SearchStatus::found ? "base Macaulay" : "base not Macaulay; skipped";
      if (r.status == SearchStatus::inconclusive) row.agree = false;
      return row;
    });
  }
  auto base = run_jobs(jobs, opt.threads);
  jobs.clear();
  for (std::size_t k = 0; k < ideals.size(); ++k) {
    if (base[k].outcome != SearchStatus::found) continue;
    auto s = standard_monomial_poset(ideals[k]);
    unsigned top = s.max_rank();
    for (unsigned n = top + 1; n <= top + extra; ++n)
      jobs.push_back([=, name = base[k].instance] {
        auto o = opt;
        o.threads = 1;
        auto p = cartesian_product(s, path(n - 1)).poset;
        auto row = search_row("cart(" + name + ",path(" + std::to_string(n - 1) + "))",
                              {static_cast<unsigned>(k), n}, p, true, o);
        if (row.outcome == SearchStatus::none) row.note = "COUNTEREXAMPLE";
        return row;
      });
  }
  auto c66 = standard_monomial_poset(cubic_power_ideal());
  jobs.push_back([=] {
    auto o = opt;
    o.threads = 1;
    auto row = search_row("cart(poset(" + ideal_text(cubic_power_ideal()) + "),path(1))", {},
                          cartesian_product(c66, path(1)).poset, false, o);
    row.note = "regression slice (n not above top degree)";
    return row;
  });
  auto rows = run_jobs(jobs, opt.threads);
  base.insert(base.end(), rows.begin(), rows.end());
  return {"product-scan", std::move(base)};
}

inline std::size_t counterexamples(const GridReport& r) {
  return std::count_if(r.rows.begin(), r.rows.end(),
                       [](const GridRow& row) { return row.note == "COUNTEREXAMPLE"; });
}

/// Random ranked posets whose maximal elements all sit in the top level.
inline std::vector<RankedPoset> random_equal_top_posets(std::size_t count, std::size_t max_elements,
                                                        std::uint32_t seed) {
  std::mt19937 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::vector<RankedPoset> out;
  while (out.size() < count) {
    std::size_t levels = pick(2, 5);
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    for (std::size_t d = 0; d < levels; ++d) {
      sizes.push_back(pick(1, 4));
      total += sizes.back();
    }
    if (total > max_elements) continue;
    std::vector<Rank> ranks;
    std::vector<std::vector<ElementId>> lvl(levels);
    for (std::size_t d = 0; d < levels; ++d)
      for (std::size_t i = 0; i < sizes[d]; ++i) {
        lvl[d].push_back(static_cast<ElementId>(ranks.size()));
        ranks.push_back(static_cast<Rank>(d));
      }
    std::vector<Cover> covers;
    for (std::size_t d = 1; d < levels; ++d) {
      std::vector<char> has_up(sizes[d - 1], 0);
      for (auto e : lvl[d]) {
        bool any = false;
        for (std::size_t i = 0; i < sizes[d - 1]; ++i)
          if (pick(0, 2) == 0) covers.push_back({lvl[d - 1][i], e}), has_up[i] = 1, any = true;
        if (!any) {
          auto i = pick(0, sizes[d - 1] - 1);
          covers.push_back({lvl[d - 1][i], e});
          has_up[i] = 1;
        }
      }
      for (std::size_t i = 0; i < sizes[d - 1]; ++i)
        if (!has_up[i]) covers.push_back({lvl[d - 1][i], lvl[d][pick(0, sizes[d] - 1)]});
    }
    out.emplace_back(std::move(ranks), std::move(covers),
                     "random#" + std::to_string(out.size() + 1));
  }
  return out;
}

/// Order existence for P and hat(P) must coincide.
inline GridReport hat_preservation_check(const std::vector<RankedPoset>& corpus,
                                         const SearchOptions& opt = {}) {
  std::vector<std::function<GridRow()>> jobs;
  for (const auto& p : corpus)
    jobs.push_back([&p, opt] {
      auto o = opt;
      o.threads = 1;
      auto base = find_macaulay_order(p, o);
      auto row = search_row("hat(" + p.name() + ")", {}, hat(p), std::nullopt, o);
      row.elements = p.size();
      row.predicate = base.status == SearchStatus::found;
      row.agree = base.status != SearchStatus::inconclusive &&
                  row.outcome != SearchStatus::inconclusive &&
                  (base.status == SearchStatus::found) == (row.outcome == SearchStatus::found);
      return row;
    });
  return {"hat-preservation", run_jobs(jobs, opt.threads)};
}

/// Row for a check of p under a fixed order; expect says whether ok is expected.
inline GridRow check_row(std::string instance, const RankedPoset& p, const LevelOrderFamily& o,
                         bool expect, const SearchOptions& opt) {
  GridRow row;
  row.instance = std::move(instance);
  row.elements = p.size();
  row.predicate = expect;
  auto v = check_macaulay(p, o, opt.level_cap);
  row.outcome = v.ok ? SearchStatus::found : SearchStatus::none;
  row.agree = v.ok == expect;
  row.witness = v.witness;
  row.note = "check under union simplicial order";
  return row;
}

/// Union simplicial order of an n-fold operation over copies with orders os.
inline LevelOrderFamily us_order(const OperationResult& r, const std::vector<LevelOrderFamily>& os) {
  return union_simplicial_order(r.poset, r.provenance, os);
}

/// The disjoint union / wedge / diamond suite and the hat-preservation corpus.
inline GridReport equivalence_suite(const SearchOptions& opt = {}, std::size_t corpus = 50) {
  GridReport rep{"union-wedge-diamond-equiv", {}};
  for (auto dims : {std::vector<unsigned>{2, 2}, std::vector<unsigned>{2, 3}}) {
    auto p = box(dims);
    auto o = lex_order(p);
    auto u = disjoint_union({p, p}), w = wedge({p, p}), d = diamond({p, p});
    rep.rows.push_back(check_row("union(" + p.name() + "," + p.name() + ")", u.poset, us_order(u, {o, o}), true, opt));
    rep.rows.push_back(check_row("wedge(" + p.name() + "," + p.name() + ")", w.poset, us_order(w, {o, o}), true, opt));
    rep.rows.push_back(check_row("diamond(" + p.name() + "," + p.name() + ")", d.poset, us_order(d, {o, o}), true, opt));
  }
  {
    auto p = wedge({path(1), path(2)}).poset;
    rep.rows.push_back(search_row("wedge(P,P), P = wedge(path(1),path(2))", {}, wedge({p, p}).poset, true, opt));
    rep.rows.push_back(search_row("union(P,P), P = wedge(path(1),path(2))", {}, disjoint_union({p, p}).poset, false, opt));
  }
  {
    auto b = box({2, 2});
    auto top = adjoin_extreme(b, Extreme::top), bot = adjoin_extreme(b, Extreme::bottom);
    auto lift = [&](const OperationResult& r) { return transport_order(lex_order(b), r.poset, source_map(r)); };
    auto d = diamond({top.poset, bot.poset});
    auto literal = check_row("diamond(hat(box(2,2)),uhat(box(2,2))), uhat factor larger", d.poset,
                             us_order(d, {lift(top), lift(bot)}), true, opt);
    literal.predicate.reset();
    literal.agree = true;
    literal.note = "informational: operand order as written";
    rep.rows.push_back(literal);
    auto d2 = diamond({bot.poset, top.poset});
    auto asserted = check_row("diamond(hat(box(2,2)),uhat(box(2,2))), hat factor larger", d2.poset,
                              us_order(d2, {lift(bot), lift(top)}), true, opt);
    rep.rows.push_back(asserted);
    rep.rows.push_back(search_row("diamond(hat(box(2,2)),uhat(box(2,2)))", {}, d.poset, true, opt));
    rep.rows.push_back(search_row("wedge(hat(box(2,2)),uhat(box(2,2)))", {},
                                  wedge({top.poset, bot.poset}).poset, false, opt));
  }
  auto hp = hat_preservation_check(random_equal_top_posets(corpus, 20, 20240601), opt);
  rep.rows.insert(rep.rows.end(), hp.rows.begin(), hp.rows.end());
  return rep;
}

// ---------------------------------------------------------------- box lemmas

/// |∇ x^m y^n| in the a x b box.
inline unsigned box_monomial_shadow(unsigned a, unsigned b, unsigned m, unsigned n) {
  if (m < a - 1 && n < b - 1) return 2;
  if (m == a - 1 && n == b - 1) return 0;
  return 1;
}

enum class SegmentKind { initial, final_, neither };

/// |∇A| for a nonempty proper segment A of level d of the a x b box under
/// lex; y_first selects y > x.
inline unsigned box_segment_shadow(unsigned a, unsigned b, unsigned d, unsigned size,
                                   SegmentKind kind, bool y_first) {
  if (kind == SegmentKind::neither) return size + 1;
  bool init = kind == SegmentKind::initial;
  if (!y_first) init = !init;
  unsigned lim = init ? b : a;
  return d + 1 < lim ? size + 1 : size;
}

struct BoxLemmaReport {
  std::size_t monomials = 0, monomial_mismatch = 0;
  std::size_t segments = 0, segment_sum_mismatch = 0, new_shadow_mismatch = 0;
  std::size_t proper_segments = 0, box_segment_mismatch = 0;
  std::size_t literal_clause_disagreements = 0;
  std::size_t whole_level_exceptions = 0;

  bool ok() const {
    return monomial_mismatch == 0 && segment_sum_mismatch == 0 && new_shadow_mismatch == 0 &&
           box_segment_mismatch == 0;
  }
};

/// Exhaustive comparison of brute-force shadows with the 2D box formulas,
/// for all a, b in [1, max_side] and both lex orientations.
inline BoxLemmaReport box_shadow_lemmas(unsigned max_side) {
  BoxLemmaReport r;
  for (unsigned a = 1; a <= max_side; ++a)
    for (unsigned b = 1; b <= max_side; ++b) {
      auto p = box({a, b});
      for (ElementId e = 0; e < p.size(); ++e) {
        ++r.monomials;
        if (p.up(e).size() != box_monomial_shadow(a, b, p.label(e)[0], p.label(e)[1]))
          ++r.monomial_mismatch;
      }
      for (bool y_first : {false, true}) {
        auto o = lex_order(p, y_first ? std::vector<std::string>{"y", "x"}
                                      : std::vector<std::string>{"x", "y"});
        for (Rank d = 0; d < p.level_count(); ++d) {
          auto l = o.level(d);
          const auto w = l.size();
          for (std::size_t s = 0; s < w; ++s)
            for (std::size_t k = 1; s + k <= w; ++k) {
              ++r.segments;
              auto seg = LevelSubset::of(p, d, l.subspan(s, k));
              auto sh = upper_shadow(p, seg).size();
              std::size_t sum = 0;
              for (auto e : l.subspan(s, k)) sum += p.up(e).size();
              if (sh != sum - k + 1) ++r.segment_sum_mismatch;
              auto fresh = new_shadow(p, o, d, s, k).size();
              if (fresh != (s == 0 ? sh : sh - 1)) ++r.new_shadow_mismatch;
              if (k == w) {
                if (sh != box_segment_shadow(a, b, d, k, SegmentKind::initial, y_first))
                  ++r.whole_level_exceptions;
                continue;
              }
              ++r.proper_segments;
              auto kind = s == 0 ? SegmentKind::initial
                                 : (s + k == w ? SegmentKind::final_ : SegmentKind::neither);
              auto want = box_segment_shadow(a, b, d, k, kind, y_first);
              if (sh != want) ++r.box_segment_mismatch;
              // literal hypothesis: b >= a with x > y, or a >= b with y > x
              bool literal = (b >= a && !y_first) || (a >= b && y_first);
              auto lit_kind = kind;
              if (!literal && kind != SegmentKind::neither)
                lit_kind = kind == SegmentKind::initial ? SegmentKind::final_ : SegmentKind::initial;
              auto lit = box_segment_shadow(a, b, d, k, lit_kind, true);
              if (sh != lit) ++r.literal_clause_disagreements;
            }
        }
      }
    }
  return r;
}

/// Spot check of the inequality comparing initial segments of the disjoint
/// union of an a0 x a1 box and a b1 x b0 box (both lex y > x, second factor
/// on top) with the sum of the factors' initial segments. Returns the number
/// of failing (d, |A0|, |A1|) triples with both parts nonempty, and counts
/// failures with an empty part separately.
struct SplitInequalityReport {
  std::size_t tuples = 0, checks = 0, failures = 0, empty_part_failures = 0;
};

inline SplitInequalityReport initial_segment_split_check(unsigned max_side) {
  SplitInequalityReport rep;
  for (unsigned a0 = 1; a0 <= max_side; ++a0)
    for (unsigned a1 = 1; a1 <= max_side; ++a1)
      for (unsigned b0 = 1; b0 <= max_side; ++b0)
        for (unsigned b1 = 1; b1 <= max_side; ++b1) {
          if (!(a0 > b0 && b1 > a1 && a0 >= b1 && a0 + a1 >= b0 + b1)) continue;
          ++rep.tuples;
          auto P = box({a0, a1}), Q = box({b1, b0});
          auto oP = lex_order(P, {"y", "x"}), oQ = lex_order(Q, {"y", "x"});
          auto u = disjoint_union({P, Q});
          auto o = union_simplicial_order(u.poset, u.provenance, {oP, oQ});
          auto seg_shadow = [](const RankedPoset& p, const LevelOrderFamily& ord, Rank d, std::size_t q) {
            if (d >= p.level_count()) return std::size_t{0};
            return upper_shadow(p, initial_segment(p, ord, d, q)).size();
          };
          for (unsigned d = a1 + b0 - 1; d + 2 <= a0 + a1; ++d) {
            for (std::size_t q0 = 0; q0 <= P.level_size(d); ++q0)
              for (std::size_t q1 = 0; q1 <= Q.level_size(d); ++q1) {
                ++rep.checks;
                auto lhs = seg_shadow(u.poset, o, d, q0 + q1);
                auto rhs = seg_shadow(P, oP, d, q0) + seg_shadow(Q, oQ, d, q1);
                if (lhs > rhs) ++((q0 == 0 || q1 == 0) ? rep.empty_part_failures : rep.failures);
              }
          }
        }
  return rep;
}

// ---------------------------------------------------------------- text helpers

inline std::string monomial_text(const std::vector<std::string>& vars, const ExponentVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.arity(); ++i) {
    if (!v[i]) continue;
    if (!s.empty()) s += "*";
    s += vars[i];
    if (v[i] > 1) s += "^" + std::to_string(v[i]);
  }
  return s.empty() ? "1" : s;
}

inline std::string ideal_text(const MonomialIdeal& i) {
  std::string s = "ideal(";
  for (std::size_t k = 0; k < i.generators.size(); ++k)
    s += (k ? ", " : "") + monomial_text(i.variables, i.generators[k]);
  return s + ")";
}

}  // namespace macposet
