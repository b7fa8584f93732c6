#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "classify.hpp"
#include "construct.hpp"
#include "monomial.hpp"
#include "orders.hpp"

namespace macposet {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

enum class ExprKind {
  path, box, spider, heart, ideal_poset,
  disjoint_union, wedge, diamond, cart, fiber,
  hat, uhat, bar, ubar,
  explicit_covers, named
};

struct Expr {
  ExprKind kind = ExprKind::path;
  std::vector<unsigned> ints;
  std::vector<Expr> kids;
  std::optional<MonomialIdeal> ideal;
  std::string text;  // name of a named poset, or a map file for fiber
  std::vector<Rank> ranks;
  std::vector<Cover> covers;

  bool operator==(const Expr&) const = default;
};

struct OrderExpr {
  enum class Kind { lex, us, twist, lists, recommended };
  Kind kind = Kind::lex;
  std::vector<std::string> vars;
  std::vector<OrderExpr> kids;
  std::string file;

  bool operator==(const OrderExpr&) const = default;
};

/// x < y < z, x1 < x2 < x10: alphabetic prefix first, then the numeric suffix.
inline bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    auto i = s.find_last_not_of("0123456789") + 1;
    unsigned long n = i < s.size() ? std::stoul(s.substr(i)) : 0;
    return std::tuple{s.substr(0, i), i < s.size(), n, s};
  };
  return split(a) < split(b);
}

namespace detail {

class Lexer {
 public:
  explicit Lexer(std::string_view src) : s_(src) {}

  enum class Tok { ident, number, string, punct, end };
  struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
  };

  Token peek() {
    auto save = i_;
    auto t = next();
    i_ = save;
    return t;
  }

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    std::size_t start = i_;
    if (i_ >= s_.size()) return {Tok::end, "", start};
    char c = s_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                                (s_[i_] == '-' && i_ + 1 < s_.size() &&
                                 std::isalpha(static_cast<unsigned char>(s_[i_ + 1])))))
        ++i_;
      return {Tok::ident, std::string(s_.substr(start, i_ - start)), start};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return {Tok::number, std::string(s_.substr(start, i_ - start)), start};
    }
    if (c == '"') {
      ++i_;
      std::string out;
      while (i_ < s_.size() && s_[i_] != '"') out += s_[i_++];
      if (i_ >= s_.size()) throw ParseError("unterminated string", start);
      ++i_;
      return {Tok::string, out, start};
    }
    if (std::string_view("(),{};^*").find(c) != std::string_view::npos) {
      ++i_;
      return {Tok::punct, std::string(1, c), start};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

  Token expect(const char* punct) {
    auto t = next();
    if (t.kind != Tok::punct || t.text != punct) {
      if (t.kind == Tok::end) throw ParseError(std::string("expected '") + punct + "' but input ended", t.pos);
      throw ParseError(std::string("expected '") + punct + "' but found '" + t.text + "'", t.pos);
    }
    return t;
  }
  bool accept(const char* punct) {
    auto t = peek();
    if (t.kind == Tok::punct && t.text == punct) {
      next();
      return true;
    }
    return false;
  }
  unsigned number() {
    auto t = next();
    if (t.kind != Tok::number)
      throw ParseError(t.kind == Tok::end ? "expected a number but input ended"
                                          : "expected a number but found '" + t.text + "'",
                       t.pos);
    return static_cast<unsigned>(std::stoul(t.text));
  }
  void finish() {
    auto t = next();
    if (t.kind != Tok::end) throw ParseError("unexpected trailing '" + t.text + "'", t.pos);
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

using Tok = Lexer::Tok;

inline MonomialIdeal parse_ideal_body(Lexer& lx) {
  // ideal( m, m, ... ) with the opening parenthesis already consumed
  std::vector<std::map<std::string, unsigned>> monos;
  std::vector<std::string> names;
  if (!lx.accept(")")) {
    do {
      std::map<std::string, unsigned> m;
      auto t = lx.peek();
      if (t.kind == Tok::number) {
        auto n = lx.number();
        if (n != 1) throw ParseError("malformed monomial: only the constant 1 is allowed", t.pos);
      } else {
        do {
          auto v = lx.next();
          if (v.kind != Tok::ident) throw ParseError("malformed monomial near '" + v.text + "'", v.pos);
          unsigned e = 1;
          if (lx.accept("^")) e = lx.number();
          m[v.text] += e;
          if (std::find(names.begin(), names.end(), v.text) == names.end()) names.push_back(v.text);
        } while (lx.accept("*"));
      }
      monos.push_back(std::move(m));
    } while (lx.accept(","));
    lx.expect(")");
  }
  std::sort(names.begin(), names.end(), natural_less);
  std::vector<ExponentVector> gens;
  for (const auto& m : monos) {
    ExponentVector v{std::vector<std::uint32_t>(names.size(), 0)};
    for (const auto& [k, e] : m)
      v.coords[std::find(names.begin(), names.end(), k) - names.begin()] = e;
    gens.push_back(std::move(v));
  }
  return ideal_from_generators(names, std::move(gens));
}

inline Expr parse_expr(Lexer& lx) {
  auto t = lx.next();
  if (t.kind != Tok::ident)
    throw ParseError(t.kind == Tok::end ? "expected an expression but input ended"
                                        : "expected an expression but found '" + t.text + "'",
                     t.pos);
  Expr e;
  const auto& f = t.text;
  if (f == "explicit") {
    lx.expect("{");
    auto n = lx.peek();
    if (n.kind == Tok::ident) {
      lx.next();
      if (n.text != "Y" && n.text != "ring" && n.text != "ring-shape")
        throw ParseError("unknown named poset '" + n.text + "'", n.pos);
      e.kind = ExprKind::named;
      e.text = n.text;
      lx.expect("}");
      return e;
    }
    e.kind = ExprKind::explicit_covers;
    auto count = lx.number();
    lx.expect(";");
    for (unsigned i = 0; i < count; ++i) e.ranks.push_back(lx.number());
    lx.expect(";");
    if (!lx.accept("}")) {
      do {
        auto lo = lx.number();
        auto hi = lx.number();
        if (lo >= count || hi >= count) throw ParseError("cover refers to a missing element", n.pos);
        e.covers.push_back({lo, hi});
      } while (lx.accept(","));
      lx.expect("}");
    }
    return e;
  }

  static const std::map<std::string, ExprKind> kinds{
      {"path", ExprKind::path},       {"box", ExprKind::box},
      {"spider", ExprKind::spider},   {"heart", ExprKind::heart},
      {"poset", ExprKind::ideal_poset}, {"union", ExprKind::disjoint_union},
      {"wedge", ExprKind::wedge},     {"diamond", ExprKind::diamond},
      {"cart", ExprKind::cart},       {"fiber", ExprKind::fiber},
      {"hat", ExprKind::hat},         {"uhat", ExprKind::uhat},
      {"bar", ExprKind::bar},         {"ubar", ExprKind::ubar}};
  auto it = kinds.find(f);
  if (it == kinds.end()) throw ParseError("unknown function '" + f + "'", t.pos);
  e.kind = it->second;
  lx.expect("(");
  auto arity = [&](bool ok, const char* want) {
    if (!ok) throw ParseError(f + " takes " + want, t.pos);
  };
  switch (e.kind) {
    case ExprKind::path:
    case ExprKind::box:
    case ExprKind::spider:
    case ExprKind::heart:
      do e.ints.push_back(lx.number());
      while (lx.accept(","));
      lx.expect(")");
      if (e.kind == ExprKind::path) arity(e.ints.size() == 1, "one length");
      if (e.kind == ExprKind::heart) arity(e.ints.size() == 4, "four side lengths");
      return e;
    case ExprKind::ideal_poset: {
      auto id = lx.next();
      if (id.kind != Tok::ident || id.text != "ideal") throw ParseError("poset expects ideal(...)", id.pos);
      lx.expect("(");
      e.ideal = parse_ideal_body(lx);
      lx.expect(")");
      return e;
    }
    default:
      break;
  }
  do {
    if (e.kind == ExprKind::fiber && lx.peek().kind == Tok::string) {
      e.text = lx.next().text;
      break;
    }
    e.kids.push_back(parse_expr(lx));
  } while (lx.accept(","));
  lx.expect(")");
  switch (e.kind) {
    case ExprKind::cart: arity(e.kids.size() == 2, "two operands"); break;
    case ExprKind::hat:
    case ExprKind::uhat:
    case ExprKind::bar:
    case ExprKind::ubar: arity(e.kids.size() == 1, "one operand"); break;
    case ExprKind::fiber:
      arity((e.kids.size() == 2 && e.text.empty()) || (e.kids.size() == 3 && !e.text.empty()),
            "two ideal posets, or three posets and a map file");
      if (e.text.empty())
        for (const auto& k : e.kids)
          arity(k.kind == ExprKind::ideal_poset, "two ideal posets, or three posets and a map file");
      break;
    default: break;
  }
  return e;
}

inline OrderExpr parse_order_expr(Lexer& lx) {
  auto t = lx.next();
  if (t.kind != Tok::ident)
    throw ParseError(t.kind == Tok::end ? "expected an order but input ended"
                                        : "expected an order but found '" + t.text + "'",
                     t.pos);
  OrderExpr o;
  if (t.text == "lex") {
    o.kind = OrderExpr::Kind::lex;
    if (lx.accept("(")) {
      do {
        auto v = lx.next();
        if (v.kind != Tok::ident) throw ParseError("expected a variable name", v.pos);
        o.vars.push_back(v.text);
      } while (lx.accept(","));
      lx.expect(")");
    }
  } else if (t.text == "twist") {
    o.kind = OrderExpr::Kind::twist;
  } else if (t.text == "recommended") {
    o.kind = OrderExpr::Kind::recommended;
  } else if (t.text == "us") {
    o.kind = OrderExpr::Kind::us;
    lx.expect("(");
    do o.kids.push_back(parse_order_expr(lx));
    while (lx.accept(","));
    lx.expect(")");
  } else if (t.text == "lists") {
    o.kind = OrderExpr::Kind::lists;
    lx.expect("(");
    auto s = lx.next();
    if (s.kind != Tok::string) throw ParseError("lists expects a quoted file name", s.pos);
    o.file = s.text;
    lx.expect(")");
  } else {
    throw ParseError("unknown order '" + t.text + "'", t.pos);
  }
  return o;
}

}  // namespace detail

inline Expr parse_expression(std::string_view text) {
  detail::Lexer lx(text);
  auto e = detail::parse_expr(lx);
  lx.finish();
  return e;
}

inline OrderExpr parse_order(std::string_view text) {
  detail::Lexer lx(text);
  auto o = detail::parse_order_expr(lx);
  lx.finish();
  return o;
}

inline std::string to_string(const Expr& e) {
  auto ints = [&](const char* f) {
    std::string s = std::string(f) + "(";
    for (std::size_t i = 0; i < e.ints.size(); ++i) s += (i ? "," : "") + std::to_string(e.ints[i]);
    return s + ")";
  };
  auto kids = [&](const char* f) {
    std::string s = std::string(f) + "(";
    for (std::size_t i = 0; i < e.kids.size(); ++i) s += (i ? ", " : "") + to_string(e.kids[i]);
    if (!e.text.empty()) s += ", \"" + e.text + "\"";
    return s + ")";
  };
  switch (e.kind) {
    case ExprKind::path: return ints("path");
    case ExprKind::box: return ints("box");
    case ExprKind::spider: return ints("spider");
    case ExprKind::heart: return ints("heart");
    case ExprKind::ideal_poset: return "poset(" + ideal_text(*e.ideal) + ")";
    case ExprKind::disjoint_union: return kids("union");
    case ExprKind::wedge: return kids("wedge");
    case ExprKind::diamond: return kids("diamond");
    case ExprKind::cart: return kids("cart");
    case ExprKind::fiber: return kids("fiber");
    case ExprKind::hat: return kids("hat");
    case ExprKind::uhat: return kids("uhat");
    case ExprKind::bar: return kids("bar");
    case ExprKind::ubar: return kids("ubar");
    case ExprKind::named: return "explicit{" + e.text + "}";
    case ExprKind::explicit_covers: {
      std::string s = "explicit{" + std::to_string(e.ranks.size()) + ";";
      for (auto r : e.ranks) s += " " + std::to_string(r);
      s += ";";
      for (std::size_t i = 0; i < e.covers.size(); ++i)
        s += std::string(i ? ", " : " ") + std::to_string(e.covers[i].lower) + " " +
             std::to_string(e.covers[i].upper);
      return s + "}";
    }
  }
  return "?";
}

inline std::string to_string(const OrderExpr& o) {
  switch (o.kind) {
    case OrderExpr::Kind::lex: {
      if (o.vars.empty()) return "lex";
      std::string s = "lex(";
      for (std::size_t i = 0; i < o.vars.size(); ++i) s += (i ? "," : "") + o.vars[i];
      return s + ")";
    }
    case OrderExpr::Kind::twist: return "twist";
    case OrderExpr::Kind::recommended: return "recommended";
    case OrderExpr::Kind::lists: return "lists(\"" + o.file + "\")";
    case OrderExpr::Kind::us: {
      std::string s = "us(";
      for (std::size_t i = 0; i < o.kids.size(); ++i) s += (i ? ", " : "") + to_string(o.kids[i]);
      return s + ")";
    }
  }
  return "?";
}

/// An evaluated expression, keeping the operands for order resolution.
struct Node {
  Expr expr;
  RankedPoset poset;
  Provenance provenance;
  Operation op = Operation::none;
  std::vector<Node> kids;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// lines "a <c> <id>" / "b <c> <id>"; '#' starts a comment
inline std::pair<std::vector<ElementId>, std::vector<ElementId>> read_fiber_maps(
    const std::string& path, std::size_t c_size) {
  std::istringstream in(read_file(path));
  std::vector<ElementId> ia(c_size, ~ElementId{0}), ib(c_size, ~ElementId{0});
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string side;
    if (!(ls >> side)) continue;
    std::size_t c, x;
    if ((side != "a" && side != "b") || !(ls >> c >> x) || c >= c_size)
      throw Error(path + ":" + std::to_string(no) + ": expected 'a|b <c> <id>'");
    (side == "a" ? ia : ib)[c] = static_cast<ElementId>(x);
  }
  for (std::size_t c = 0; c < c_size; ++c)
    if (ia[c] == ~ElementId{0} || ib[c] == ~ElementId{0})
      throw Error(path + ": element " + std::to_string(c) + " of the base is not mapped");
  return {ia, ib};
}

}  // namespace detail

inline Node evaluate(const Expr& e) {
  Node n;
  n.expr = e;
  auto operands = [&] {
    std::vector<RankedPoset> ps;
    for (const auto& k : e.kids) {
      n.kids.push_back(evaluate(k));
      ps.push_back(n.kids.back().poset);
    }
    return ps;
  };
  auto take = [&](OperationResult r) {
    n.poset = std::move(r.poset);
    n.provenance = std::move(r.provenance);
    n.op = r.operation;
  };
  switch (e.kind) {
    case ExprKind::path: n.poset = path(e.ints[0]); break;
    case ExprKind::box: n.poset = box(e.ints); break;
    case ExprKind::spider: take(spider(e.ints)); break;
    case ExprKind::heart: n.poset = heart(e.ints[0], e.ints[1], e.ints[2], e.ints[3]); break;
    case ExprKind::ideal_poset: n.poset = standard_monomial_poset(*e.ideal); break;
    case ExprKind::disjoint_union: take(disjoint_union(operands())); break;
    case ExprKind::wedge: take(wedge(operands())); break;
    case ExprKind::diamond: take(diamond(operands())); break;
    case ExprKind::cart: {
      auto ps = operands();
      take(cartesian_product(ps[0], ps[1]));
      break;
    }
    case ExprKind::fiber: {
      auto ps = operands();
      if (e.text.empty()) {
        take(ideal_fiber_product(*e.kids[0].ideal, *e.kids[1].ideal));
      } else {
        auto [ia, ib] = detail::read_fiber_maps(e.text, ps[2].size());
        take(fiber_product(ps[0], ps[1], ps[2], ia, ib));
      }
      break;
    }
    case ExprKind::hat: take(adjoin_extreme(operands()[0], Extreme::top)); break;
    case ExprKind::uhat: take(adjoin_extreme(operands()[0], Extreme::bottom)); break;
    case ExprKind::bar: take(remove_extreme(operands()[0], Extreme::top)); break;
    case ExprKind::ubar: take(remove_extreme(operands()[0], Extreme::bottom)); break;
    case ExprKind::named:
      n.poset = e.text == "Y" ? y_poset() : e.text == "ring" ? ring_factor_poset() : ring_shape_poset();
      break;
    case ExprKind::explicit_covers: n.poset = RankedPoset(e.ranks, e.covers); break;
  }
  n.poset = n.poset.renamed(to_string(e));
  return n;
}

inline Node evaluate(std::string_view text) { return evaluate(parse_expression(text)); }

/// Reads per-level lists: one line per level, largest element first.
inline LevelOrderFamily read_order_lists(const RankedPoset& p, const std::string& path) {
  std::istringstream in(detail::read_file(path));
  std::vector<std::vector<ElementId>> lists;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<ElementId> l;
    for (ElementId e; ls >> e;) l.push_back(e);
    lists.push_back(std::move(l));
  }
  while (lists.size() > p.level_count() && lists.back().empty()) lists.pop_back();
  return order_from_lists(p, std::move(lists));
}

inline LevelOrderFamily resolve_order(const Node& n, const OrderExpr& o) {
  using K = OrderExpr::Kind;
  const auto kind = n.expr.kind;
  bool one_operand = kind == ExprKind::hat || kind == ExprKind::uhat || kind == ExprKind::bar ||
                     kind == ExprKind::ubar;
  if (o.kind == K::lists) return read_order_lists(n.poset, o.file);
  if (o.kind == K::us) {
    if (kind != ExprKind::disjoint_union && kind != ExprKind::wedge && kind != ExprKind::diamond &&
        kind != ExprKind::spider)
      throw Error("us(...) needs a union, wedge or diamond expression");
    if (kind == ExprKind::spider) {
      if (o.kids.size() != n.expr.ints.size())
        throw Error("us(...) has " + std::to_string(o.kids.size()) + " orders for " +
                    std::to_string(n.expr.ints.size()) + " legs");
      std::vector<LevelOrderFamily> fs;
      for (std::size_t i = 0; i < o.kids.size(); ++i) {
        Node leg;
        leg.expr.ints = {n.expr.ints[i]};
        leg.poset = path(n.expr.ints[i]);
        fs.push_back(resolve_order(leg, o.kids[i]));
      }
      return union_simplicial_order(n.poset, n.provenance, fs);
    }
    if (o.kids.size() != n.kids.size())
      throw Error("us(...) has " + std::to_string(o.kids.size()) + " orders for " +
                  std::to_string(n.kids.size()) + " operands");
    std::vector<LevelOrderFamily> fs;
    for (std::size_t i = 0; i < o.kids.size(); ++i) fs.push_back(resolve_order(n.kids[i], o.kids[i]));
    return union_simplicial_order(n.poset, n.provenance, fs);
  }
  if (o.kind == K::twist || o.kind == K::recommended) {
    if (kind != ExprKind::heart) throw Error(to_string(o) + " needs a heart(...) expression");
    const auto& v = n.expr.ints;
    return o.kind == K::twist ? twist_order(n.poset, v[0], v[1], v[2], v[3])
                              : heart_recommended_order(n.poset, v[0], v[1], v[2], v[3]);
  }
  // lex
  if (n.poset.has_labels()) return lex_order(n.poset, o.vars);
  if (one_operand) return transport_order(resolve_order(n.kids[0], o), n.poset, source_map({n.poset, n.provenance, n.op}));
  throw Error("lex needs a poset with monomial labels");
}

inline LevelOrderFamily resolve_order(const Node& n, std::string_view order_text) {
  return resolve_order(n, parse_order(order_text));
}

}  // namespace macposet
