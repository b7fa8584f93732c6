#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "macposet/expr.hpp"
#include "macposet/io.hpp"
#include "macposet/iso.hpp"

using namespace macposet;

namespace {

std::string tmp_file(const std::string& name, const std::string& text) {
  auto path = std::string(testing::TempDir()) + name;
  std::ofstream(path) << text;
  return path;
}

// random well-formed expressions, kept small enough to evaluate
std::string random_expr(std::mt19937& rng, int depth) {
  auto n = [&](unsigned lo, unsigned hi) { return std::to_string(lo + rng() % (hi - lo + 1)); };
  int pick = depth <= 0 ? rng() % 5 : rng() % 11;
  switch (pick) {
    case 0: return "path(" + n(0, 3) + ")";
    case 1: return "box(" + n(1, 3) + "," + n(1, 3) + ")";
    case 2: return "spider(" + n(1, 2) + "," + n(1, 2) + ")";
    case 3: return "heart(" + n(1, 3) + "," + n(1, 3) + "," + n(1, 3) + "," + n(1, 3) + ")";
    case 4: return "poset(ideal(x^" + n(1, 3) + ", y^" + n(1, 3) + ", x*y^" + n(1, 2) + "))";
    case 5: return "union(" + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
    case 6: return "wedge(" + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
    case 7: return "cart(" + random_expr(rng, depth - 1) + ", path(1))";
    case 8: return "uhat(" + random_expr(rng, depth - 1) + ")";
    case 9: return "explicit{3; 0 1 1; 0 1, 0 2}";
    default: return "explicit{Y}";
  }
}

}  // namespace

TEST(Parse, WedgeOfBoxes) {
  auto e = parse_expression("wedge(box(2,3), box(2,4))");
  EXPECT_EQ(e.kind, ExprKind::wedge);
  ASSERT_EQ(e.kids.size(), 2u);
  EXPECT_EQ(e.kids[0].kind, ExprKind::box);
  EXPECT_EQ(e.kids[1].ints, (std::vector<unsigned>{2, 4}));
}

TEST(Parse, IdealQuotient) {
  auto e = parse_expression("poset(ideal(x^4, y^3, x^3*y))");
  EXPECT_EQ(e.kind, ExprKind::ideal_poset);
  EXPECT_EQ(e.ideal->variables, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(e.ideal->generators.size(), 3u);
  EXPECT_EQ(evaluate(e).poset.size(), 10u);
}

TEST(Parse, IndexedVariables) {
  auto e = parse_expression("poset(ideal(x1^3*x2, x2^2, x10, x1^4))");
  EXPECT_EQ(e.ideal->variables, (std::vector<std::string>{"x1", "x2", "x10"}));
}

TEST(Parse, SyntaxErrorAtEnd) {
  std::string s = "diamond(path(3), box(2,3)";
  try {
    parse_expression(s);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), s.size());
  }
}

TEST(Parse, Errors) {
  for (auto bad : {"frob(1)", "path(1, 2)", "heart(1,2,3)", "cart(path(1))", "poset(ideal(x^))",
                   "poset(ideal(2*x))", "hat(path(1), path(2))", "explicit{2; 0; }", "explicit{Q}",
                   "path(1) path(2)", "box()", "fiber(path(1), path(1))"})
    EXPECT_THROW(parse_expression(bad), ParseError) << bad;
}

TEST(Parse, RoundTripCorpus) {
  std::mt19937 rng(31);
  for (int i = 0; i < 400; ++i) {
    auto text = random_expr(rng, 3);
    auto e = parse_expression(text);
    auto printed = to_string(e);
    EXPECT_EQ(parse_expression(printed), e) << text;
    EXPECT_EQ(to_string(parse_expression(printed)), printed);
  }
}

TEST(Parse, OrderRoundTrip) {
  for (auto s : {"lex", "lex(y,x)", "twist", "recommended", "us(lex, us(lex(y,x), twist))", "lists(\"o.txt\")"})
    EXPECT_EQ(to_string(parse_order(s)), s);
  EXPECT_THROW(parse_order("us()"), ParseError);
  EXPECT_THROW(parse_order("lexx"), ParseError);
}

TEST(Evaluate, Shapes) {
  EXPECT_EQ(evaluate("spider(2,2,2)").poset.level_sizes(), (std::vector<std::size_t>{1, 3, 3}));
  EXPECT_EQ(evaluate("cart(path(1), explicit{Y})").poset.size(), 8u);
  EXPECT_EQ(evaluate("cart(explicit{ring}, path(1))").poset.size(), 10u);
  EXPECT_EQ(evaluate("diamond(hat(box(2,2)), uhat(box(2,2)))").poset.size(), 8u);
  EXPECT_TRUE(are_isomorphic(evaluate("fiber(poset(ideal(x^5,y^2)), poset(ideal(x^2,y^5)))").poset, heart(5, 2, 2, 5)));
  EXPECT_THROW(evaluate("diamond(path(1), path(2))"), Error);
}

TEST(Evaluate, FiberWithMapFile) {
  auto maps = tmp_file("fiber_maps.txt", "# stem\na 0 0\na 1 1\nb 0 0\nb 1 1\n");
  auto n = evaluate("fiber(path(2), path(2), path(1), \"" + maps + "\")");
  EXPECT_EQ(n.poset.size(), 4u);
  auto bad = tmp_file("fiber_bad.txt", "a 0 0\nb 0 0\n");
  EXPECT_THROW(evaluate("fiber(path(2), path(2), path(1), \"" + bad + "\")"), Error);
}

TEST(Resolve, OrdersMatchLibrary) {
  auto n = evaluate("union(box(2,2), box(2,2))");
  auto o = resolve_order(n, "us(lex, lex)");
  EXPECT_TRUE(check_macaulay(n.poset, o).ok);
  EXPECT_THROW(resolve_order(n, "us(lex)"), Error);
  auto h = evaluate("heart(5,2,2,5)");
  EXPECT_EQ(resolve_order(h, "twist"), twist_order(h.poset, 5, 2, 2, 5));
  EXPECT_TRUE(check_macaulay(h.poset, resolve_order(h, "recommended")).ok);
  EXPECT_THROW(resolve_order(evaluate("box(2,2)"), "twist"), Error);
  auto s = evaluate("spider(1,2)");
  EXPECT_TRUE(resolve_order(s, "us(lex, lex)").fits(s.poset));
}

TEST(Resolve, TransportThroughHat) {
  auto n = evaluate("hat(explicit{3; 0 1 1; 0 1, 0 2})");
  EXPECT_THROW(resolve_order(n, "lex"), Error);
  auto d = evaluate("diamond(uhat(box(2,2)), hat(box(2,2)))");
  EXPECT_TRUE(check_macaulay(d.poset, resolve_order(d, "us(lex, lex)")).ok);
}

TEST(Resolve, ListsFile) {
  auto p = evaluate("box(2,2)");
  auto f = tmp_file("lists.txt", "0\n2 1\n3\n");
  auto o = resolve_order(p, "lists(\"" + f + "\")");
  EXPECT_EQ(o.level(1)[0], 2u);
}

TEST(File, RoundTripBox) {
  auto b = box({3, 4});
  auto f = deserialize_poset(serialize_poset(b));
  EXPECT_EQ(f.poset, b);
  EXPECT_EQ(f.poset.name(), b.name());
  EXPECT_TRUE(f.poset.has_labels());
  EXPECT_EQ(f.poset.labels()->of, b.labels()->of);
  EXPECT_TRUE(are_isomorphic(f.poset, b));
}

TEST(File, RoundTripProvenance) {
  auto r = diamond({box({2, 3}), path(3)});
  auto f = deserialize_poset(serialize_poset(r));
  EXPECT_EQ(f.poset, r.poset);
  ASSERT_TRUE(f.provenance);
  EXPECT_EQ(*f.provenance, r.provenance);
  EXPECT_EQ(f.operation, Operation::diamond);
}

TEST(File, RoundTripUnlabelled) {
  auto p = cartesian_product(ring_factor_poset(), path(1)).poset.without_labels();
  auto f = deserialize_poset(serialize_poset(p));
  EXPECT_EQ(f.poset, p);
  EXPECT_FALSE(f.poset.has_labels());
  EXPECT_FALSE(f.provenance);
}

TEST(File, BadCoverCitesLine) {
  std::string text = "macposet 1\nelements 3\nranks 0 1 1\ncovers\n0 1\n0 2\n1 2\nend\n";
  try {
    deserialize_poset(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos) << e.what();
  }
}

TEST(File, MalformedInputs) {
  for (auto bad : {"", "macposet 2\n", "macposet 1\nelements x\n", "macposet 1\nelements 2\nranks 0\n",
                   "macposet 1\nelements 2\nranks 0 1\ncovers\n0 5\nend\n",
                   "macposet 1\nelements 2\nranks 0 1\ncovers\n0 1\n"})
    EXPECT_THROW(deserialize_poset(bad), Error) << bad;
}

TEST(Report, Fields) {
  auto j = make_report("check", Json{{"expr", "box(2,2)"}}, "ok");
  std::vector<std::string> keys;
  for (auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "input", "verdict", "witness", "rows", "version"}));
}
