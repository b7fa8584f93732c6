#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "macposet/cli.hpp"

using namespace macposet;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

Json report(std::vector<std::string> args, int expect_code) {
  args.insert(args.begin(), {"--report", "-"});
  auto r = run(args);
  EXPECT_EQ(r.code, expect_code) << r.out << r.err;
  auto brace = r.out.find("{\n");
  EXPECT_NE(brace, std::string::npos) << r.out;
  return Json::parse(r.out.substr(brace));
}

}  // namespace

TEST(Cli, CheckBoxLexOk) {
  auto r = run({"check", "box(3,4)", "--order", "lex(x,y)"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ok"), std::string::npos);
}

TEST(Cli, CheckViolationExitsOne) {
  auto j = report({"check", "heart(5,2,2,5)", "--order", "lex(y,x)"}, 1);
  EXPECT_EQ(j["verdict"], "violation");
  EXPECT_TRUE(j["witness"].is_object());
  EXPECT_GT(j["witness"]["bound"].get<std::size_t>(), 0u);
}

TEST(Cli, HeartExample) {
  auto j = report({"reproduce", "heart-example"}, 1);
  EXPECT_EQ(j["command"], "reproduce");
  EXPECT_EQ(j["verdict"], "no Macaulay order");
  EXPECT_TRUE(j["input"]["generators_match"].get<bool>());
  EXPECT_EQ(j["version"], "1.0.0");
  EXPECT_FALSE(j.contains("timings"));
}

TEST(Cli, SearchProductNone) {
  auto r = run({"search-order", "cart(path(1), explicit{Y})"});
  EXPECT_EQ(r.code, 1) << r.err;
  EXPECT_NE(r.out.find("no Macaulay order"), std::string::npos);
}

TEST(Cli, SearchFoundGivesOrderCertificate) {
  auto j = report({"search-order", "box(2,3)"}, 0);
  EXPECT_EQ(j["verdict"], "Macaulay order found");
  ASSERT_TRUE(j["witness"].contains("order"));
  EXPECT_EQ(j["witness"]["order"].size(), 4u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check", "box(2,2)"}).code, 2);
  auto r = run({"show", "box(2,"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("position"), std::string::npos);
  EXPECT_EQ(run({"reproduce", "nope"}).code, 2);
  EXPECT_EQ(run({"check", "box(2,2)", "--order", "twist"}).code, 2);
  EXPECT_EQ(run({"show", "@/nonexistent/file"}).code, 2);
  EXPECT_EQ(run({"--threads", "0", "show", "path(1)"}).code, 2);
}

TEST(Cli, HelpIsOk) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, BudgetExhausted) {
  auto j = report({"--budget", "3", "search-order", "heart(5,4,4,5)"}, 3);
  EXPECT_EQ(j["verdict"], "inconclusive");
}

TEST(Cli, BuildShowRoundTrip) {
  auto path = std::string(testing::TempDir()) + "cli_box.poset";
  auto b = run({"build", "diamond(box(2,3), box(3,2))", "-o", path});
  ASSERT_EQ(b.code, 0) << b.err;
  auto f = deserialize_poset(detail::read_file(path));
  EXPECT_EQ(f.operation, Operation::diamond);
  auto s = run({"show", "@" + path});
  EXPECT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("level sizes: 1 4 4 1"), std::string::npos) << s.out;
  auto d = run({"show", "path(1)", "--dot"});
  EXPECT_NE(d.out.find("0 -> 1;"), std::string::npos);
}

TEST(Cli, ShadowCommand) {
  auto j = report({"shadow", "box(2,2)", "--set", "1"}, 0);
  EXPECT_EQ(j["witness"]["shadow"].size(), 1u);
  auto l = report({"shadow", "box(2,2)", "--set", "3", "--lower"}, 0);
  EXPECT_EQ(l["witness"]["shadow"].size(), 2u);
  EXPECT_EQ(run({"shadow", "box(2,2)", "--set", "0,1"}).code, 2);
}

TEST(Cli, AdditiveCommand) {
  EXPECT_EQ(run({"additive", "box(3,3)", "--order", "lex"}).code, 0);
  EXPECT_EQ(run({"additive", "heart(5,2,2,5)", "--order", "lex(y,x)"}).code, 1);
}

TEST(Cli, TimingsBeforeVersion) {
  auto j = report({"--timings", "show", "path(2)"}, 0);
  std::vector<std::string> keys;
  for (auto& [k, v] : j.items()) keys.push_back(k);
  ASSERT_GE(keys.size(), 2u);
  EXPECT_EQ(keys[keys.size() - 2], "timings");
  EXPECT_EQ(keys.back(), "version");
}

TEST(Cli, SmallVerifyFamily) {
  auto j = report({"verify-family", "heart", "--max-side", "3"}, 0);
  EXPECT_EQ(j["verdict"], "all rows agree");
  EXPECT_GT(j["rows"].size(), 0u);
}

TEST(Cli, ReportsIdenticalAcrossThreads) {
  for (std::string t : {"twist-figure", "prop61-product", "spider-union-fails"}) {
    auto a = run({"--threads", "1", "--report", "-", "reproduce", t});
    auto b = run({"--threads", "2", "--report", "-", "reproduce", t});
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << t;
  }
}
