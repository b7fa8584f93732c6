#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "classify.hpp"
#include "construct.hpp"
#include "macaulay.hpp"
#include "orders.hpp"
#include "poset.hpp"

namespace macposet {

inline constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------- poset files

struct PosetFile {
  RankedPoset poset;
  std::optional<Provenance> provenance;
  Operation operation = Operation::none;
};

inline std::string serialize_poset(const RankedPoset& p, const Provenance* prov = nullptr,
                                   Operation op = Operation::none) {
  std::ostringstream out;
  out << "macposet 1\n";
  if (!p.name().empty()) out << "name " << p.name() << "\n";
  out << "elements " << p.size() << "\n";
  out << "ranks";
  for (ElementId e = 0; e < p.size(); ++e) out << ' ' << p.rank(e);
  out << "\ncovers\n";
  for (auto c : p.covers()) out << c.lower << ' ' << c.upper << "\n";
  if (const auto& l = p.labels()) {
    out << "labels";
    for (const auto& v : l->variables) out << ' ' << v;
    out << "\n";
    for (const auto& v : l->of) {
      for (std::size_t i = 0; i < v.arity(); ++i) out << (i ? " " : "") << v[i];
      out << "\n";
    }
  }
  if (prov) {
    out << "provenance " << operation_name(op) << "\n";
    for (const auto& os : prov->of) {
      if (os.empty()) out << '-';
      for (std::size_t i = 0; i < os.size(); ++i)
        out << (i ? "," : "") << os[i].factor << ':' << os[i].source;
      out << "\n";
    }
  }
  out << "end\n";
  return out.str();
}

inline std::string serialize_poset(const OperationResult& r) {
  return serialize_poset(r.poset, &r.provenance, r.operation);
}

inline Operation operation_from_name(const std::string& s) {
  for (auto op : {Operation::none, Operation::disjoint_union, Operation::wedge, Operation::diamond,
                  Operation::fiber, Operation::cartesian, Operation::adjoin, Operation::remove})
    if (s == operation_name(op)) return op;
  throw Error("unknown operation '" + s + "'");
}

inline PosetFile deserialize_poset(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
      if (auto h = l.find('#'); h != std::string::npos) l.resize(h);
      while (!l.empty() && std::isspace(static_cast<unsigned char>(l.back()))) l.pop_back();
      lines.push_back(l);
    }
  }
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    return Error("line " + std::to_string(i + 1) + ": " + why);
  };
  auto skip_blank = [&] {
    while (i < lines.size() && lines[i].find_first_not_of(' ') == std::string::npos) ++i;
  };
  auto keyword = [&](std::string& rest) {
    skip_blank();
    if (i >= lines.size()) {
      i = lines.size() ? lines.size() - 1 : 0;
      throw fail("unexpected end of file");
    }
    std::istringstream ls(lines[i]);
    std::string k;
    ls >> k;
    rest.clear();
    std::getline(ls, rest);
    if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
    return k;
  };
  auto numbers = [&](const std::string& s) {
    std::istringstream ls(s);
    std::vector<std::uint64_t> v;
    std::string tok;
    while (ls >> tok) {
      if (tok.find_first_not_of("0123456789") != std::string::npos) throw fail("expected a number, found '" + tok + "'");
      v.push_back(std::stoull(tok));
    }
    return v;
  };

  std::string rest;
  if (keyword(rest) != "macposet" || rest != "1") throw fail("expected header 'macposet 1'");
  ++i;
  std::string name;
  auto k = keyword(rest);
  if (k == "name") {
    name = rest;
    ++i;
    k = keyword(rest);
  }
  if (k != "elements") throw fail("expected 'elements N'");
  auto nv = numbers(rest);
  if (nv.size() != 1) throw fail("expected 'elements N'");
  std::size_t n = nv[0];
  ++i;
  if (keyword(rest) != "ranks") throw fail("expected 'ranks'");
  auto rv = numbers(rest);
  if (rv.size() != n) throw fail("expected " + std::to_string(n) + " ranks, found " + std::to_string(rv.size()));
  std::vector<Rank> ranks(rv.begin(), rv.end());
  ++i;
  if (keyword(rest) != "covers" || !rest.empty()) throw fail("expected 'covers'");
  ++i;
  std::vector<Cover> covers;
  for (;;) {
    k = keyword(rest);
    if (k == "labels" || k == "provenance" || k == "end") break;
    auto c = numbers(lines[i]);
    if (c.size() != 2) throw fail("expected a cover pair 'i j'");
    if (c[0] >= n || c[1] >= n) throw fail("cover refers to a missing element");
    if (c[0] == c[1]) throw fail("self-cover");
    if (ranks[c[1]] != ranks[c[0]] + 1)
      throw fail("cover " + std::to_string(c[0]) + " " + std::to_string(c[1]) +
                 " does not raise rank by exactly one");
    covers.push_back({static_cast<ElementId>(c[0]), static_cast<ElementId>(c[1])});
    ++i;
  }
  std::optional<Labels> labels;
  if (k == "labels") {
    Labels l;
    std::istringstream ls(rest);
    for (std::string v; ls >> v;) l.variables.push_back(v);
    ++i;
    for (std::size_t e = 0; e < n; ++e, ++i) {
      skip_blank();
      if (i >= lines.size()) throw fail("missing labels");
      auto v = numbers(lines[i]);
      if (v.size() != l.variables.size()) throw fail("label arity differs from variable count");
      l.of.push_back(ExponentVector{std::vector<std::uint32_t>(v.begin(), v.end())});
    }
    labels = std::move(l);
    k = keyword(rest);
  }
  PosetFile out;
  if (k == "provenance") {
    out.operation = operation_from_name(rest);
    Provenance prov;
    ++i;
    for (std::size_t e = 0; e < n; ++e, ++i) {
      skip_blank();
      if (i >= lines.size()) throw fail("missing provenance");
      std::vector<Origin> os;
      std::istringstream ls(lines[i]);
      std::string tok;
      ls >> tok;
      if (tok != "-") {
        std::istringstream ts(tok);
        for (std::string part; std::getline(ts, part, ',');) {
          auto colon = part.find(':');
          if (colon == std::string::npos) throw fail("expected 'factor:source'");
          auto f = numbers(part.substr(0, colon)), s = numbers(part.substr(colon + 1));
          if (f.size() != 1 || s.size() != 1) throw fail("expected 'factor:source'");
          os.push_back({static_cast<std::uint32_t>(f[0]), static_cast<ElementId>(s[0])});
        }
      }
      prov.of.push_back(std::move(os));
    }
    out.provenance = std::move(prov);
    k = keyword(rest);
  }
  if (k != "end") throw fail("expected 'end', found '" + k + "'");
  out.poset = RankedPoset(std::move(ranks), std::move(covers), name, std::move(labels));
  if (auto v = validate_poset(out.poset); !v) throw Error("invalid poset: " + v.violation);
  return out;
}

// ---------------------------------------------------------------- reports

using Json = nlohmann::ordered_json;

inline Json witness_json(const Witness& w) {
  Json j;
  j["kind"] = witness_kind_name(w.kind);
  j["level"] = w.level;
  j["q"] = w.q;
  j["set"] = w.set;
  if (!w.better.empty()) j["better"] = w.better;
  j["shadow"] = w.shadow;
  if (w.kind == WitnessKind::segment_inequality) {
    j["start"] = w.start;
    j["clause"] = w.clause;
  }
  j["measured"] = w.measured;
  j["bound"] = w.bound;
  return j;
}

inline Json row_json(const GridRow& r) {
  Json j;
  j["instance"] = r.instance;
  j["params"] = r.params;
  j["elements"] = r.elements;
  j["predicate"] = r.predicate ? Json(*r.predicate) : Json(nullptr);
  j["outcome"] = search_status_name(r.outcome);
  j["agree"] = r.agree;
  if (r.recommended_ok) j["recommended_ok"] = *r.recommended_ok;
  if (r.witness) j["witness"] = witness_json(*r.witness);
  if (!r.note.empty()) j["note"] = r.note;
  j["nodes"] = r.nodes;
  return j;
}

inline Json make_report(const std::string& command, const Json& input, const std::string& verdict,
                        const std::optional<Witness>& witness = std::nullopt,
                        const std::vector<GridRow>& rows = {}) {
  Json j;
  j["command"] = command;
  j["input"] = input;
  j["verdict"] = verdict;
  j["witness"] = witness ? witness_json(*witness) : Json(nullptr);
  j["rows"] = Json::array();
  for (const auto& r : rows) j["rows"].push_back(row_json(r));
  j["version"] = kVersion;
  return j;
}

inline Json order_json(const LevelOrderFamily& o) { return o.lists(); }

}  // namespace macposet
