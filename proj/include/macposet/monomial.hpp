#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "construct.hpp"
#include "poset.hpp"

namespace macposet {

inline void require_same_arity(const ExponentVector& a, const ExponentVector& b) {
  if (a.arity() != b.arity())
    throw Error("exponent vectors of arity " + std::to_string(a.arity()) + " and " +
                std::to_string(b.arity()));
}

inline bool divides(const ExponentVector& a, const ExponentVector& b) {
  require_same_arity(a, b);
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline ExponentVector lcm(const ExponentVector& a, const ExponentVector& b) {
  require_same_arity(a, b);
  ExponentVector out = a;
  for (std::size_t i = 0; i < a.arity(); ++i) out.coords[i] = std::max(a[i], b[i]);
  return out;
}

/// Monomial ideal given by its minimal generators, sorted lex-descending.
/// No generators means the zero ideal.
struct MonomialIdeal {
  std::vector<std::string> variables;
  std::vector<ExponentVector> generators;

  std::size_t arity() const { return variables.size(); }
  bool is_zero() const { return generators.empty(); }
  bool is_unit() const {
    return std::any_of(generators.begin(), generators.end(),
                       [](const ExponentVector& g) { return g.degree() == 0; });
  }
  bool contains(const ExponentVector& m) const {
    return std::any_of(generators.begin(), generators.end(),
                       [&](const ExponentVector& g) { return divides(g, m); });
  }
  bool operator==(const MonomialIdeal&) const = default;
};

inline MonomialIdeal ideal_from_generators(std::vector<std::string> variables,
                                           std::vector<ExponentVector> gens) {
  for (const auto& g : gens)
    if (g.arity() != variables.size())
      throw Error("generator arity " + std::to_string(g.arity()) + " does not match " +
                  std::to_string(variables.size()) + " variables");
  std::sort(gens.begin(), gens.end(), std::greater<>());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<ExponentVector> minimal;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < gens.size() && !redundant; ++j)
      redundant = j != i && divides(gens[j], gens[i]);
    if (!redundant) minimal.push_back(gens[i]);
  }
  return {std::move(variables), std::move(minimal)};
}

inline void require_same_ring(const MonomialIdeal& i, const MonomialIdeal& j) {
  if (i.variables != j.variables) throw Error("ideals live in different polynomial rings");
}

inline MonomialIdeal ideal_sum(const MonomialIdeal& i, const MonomialIdeal& j) {
  require_same_ring(i, j);
  auto g = i.generators;
  g.insert(g.end(), j.generators.begin(), j.generators.end());
  return ideal_from_generators(i.variables, std::move(g));
}

inline MonomialIdeal ideal_intersection(const MonomialIdeal& i, const MonomialIdeal& j) {
  require_same_ring(i, j);
  std::vector<ExponentVector> g;
  for (const auto& a : i.generators)
    for (const auto& b : j.generators) g.push_back(lcm(a, b));
  return ideal_from_generators(i.variables, std::move(g));
}

/// i ⊆ j
inline bool ideal_contains(const MonomialIdeal& i, const MonomialIdeal& j) {
  require_same_ring(i, j);
  return std::all_of(i.generators.begin(), i.generators.end(),
                     [&](const ExponentVector& g) { return j.contains(g); });
}

/// Exponent of the smallest pure power of variable k in i, or 0 if none.
inline std::uint32_t pure_power(const MonomialIdeal& i, std::size_t k) {
  std::uint32_t best = 0;
  for (const auto& g : i.generators)
    if (g.degree() == g[k] && (best == 0 || g[k] < best)) best = g[k];
  if (best == 0 && i.is_unit()) return 0;
  return best;
}

inline bool quotient_is_finite(const MonomialIdeal& i) {
  if (i.is_unit()) return true;
  for (std::size_t k = 0; k < i.arity(); ++k)
    if (pure_power(i, k) == 0) return false;
  return true;
}

/// Standard monomials of K[vars]/i ordered by divisibility.
inline RankedPoset standard_monomial_poset(const MonomialIdeal& i, std::string name = {}) {
  if (!quotient_is_finite(i)) throw Error("quotient by this ideal is infinite");
  std::vector<ExponentVector> monos;
  if (!i.is_unit()) {
    std::vector<std::uint32_t> bound(i.arity());
    for (std::size_t k = 0; k < i.arity(); ++k) bound[k] = pure_power(i, k);
    ExponentVector cur{std::vector<std::uint32_t>(i.arity(), 0)};
    for (;;) {
      if (!i.contains(cur)) monos.push_back(cur);
      std::size_t k = 0;
      while (k < bound.size() && ++cur.coords[k] == bound[k]) cur.coords[k++] = 0;
      if (k == bound.size()) break;
    }
  }
  return detail::monomial_poset(std::move(monos), i.variables, std::move(name));
}

/// For i ⊆ j: embedding of poset(j) into poset(i), result[id in pj] = id in pi.
inline std::vector<ElementId> inclusion_map(const RankedPoset& pi, const RankedPoset& pj) {
  if (!pi.has_labels() || !pj.has_labels() ||
      pi.labels()->variables != pj.labels()->variables)
    throw Error("inclusion map needs monomial posets over the same variables");
  std::map<ExponentVector, ElementId> where;
  for (ElementId e = 0; e < pi.size(); ++e) where[pi.label(e)] = e;
  std::vector<ElementId> out;
  for (ElementId e = 0; e < pj.size(); ++e) {
    auto it = where.find(pj.label(e));
    if (it == where.end()) throw Error("ideal containment fails: a standard monomial is missing");
    out.push_back(it->second);
  }
  return out;
}

inline std::vector<ElementId> inclusion_map(const MonomialIdeal& i, const MonomialIdeal& j) {
  if (!ideal_contains(i, j)) throw Error("ideal containment fails");
  return inclusion_map(standard_monomial_poset(i), standard_monomial_poset(j));
}

inline MonomialIdeal box_ideal(const std::vector<unsigned>& dims,
                               std::vector<std::string> variables) {
  std::vector<ExponentVector> g;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    ExponentVector v{std::vector<std::uint32_t>(dims.size(), 0)};
    v.coords[k] = dims[k];
    g.push_back(v);
  }
  return ideal_from_generators(std::move(variables), std::move(g));
}

/// (x^a0, y^a1) ∩ (x^b0, y^b1)
inline MonomialIdeal heart_ideal(unsigned a0, unsigned a1, unsigned b0, unsigned b1) {
  return ideal_intersection(box_ideal({a0, a1}, {"x", "y"}), box_ideal({b0, b1}, {"x", "y"}));
}

inline RankedPoset heart(unsigned a0, unsigned a1, unsigned b0, unsigned b1) {
  if (!a0 || !a1 || !b0 || !b1) throw Error("heart sides must be at least 1");
  return standard_monomial_poset(heart_ideal(a0, a1, b0, b1),
                                 "heart(" + std::to_string(a0) + "," + std::to_string(a1) + "," +
                                     std::to_string(b0) + "," + std::to_string(b1) + ")");
}

/// Fiber product of poset(I) and poset(J) over poset(I+J) along the
/// monomial inclusions.
inline OperationResult ideal_fiber_product(const MonomialIdeal& i, const MonomialIdeal& j) {
  auto pi = standard_monomial_poset(i), pj = standard_monomial_poset(j);
  auto pc = standard_monomial_poset(ideal_sum(i, j));
  return fiber_product(pi, pj, pc, inclusion_map(pi, pc), inclusion_map(pj, pc));
}

}  // namespace macposet
