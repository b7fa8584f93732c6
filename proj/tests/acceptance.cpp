#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "macposet/cli.hpp"

using namespace macposet;

namespace {

struct TargetRun {
  int code = -1;
  std::string report;
  Json json;
};

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

TargetRun run_target(const std::string& cli, const std::string& name, unsigned threads) {
  TargetRun r;
  auto file = std::filesystem::temp_directory_path() /
              ("macposet_acc_" + name + "_" + std::to_string(threads) + ".json");
  std::vector<std::string> args{"--threads", std::to_string(threads), "--report", file.string(), "reproduce", name};
  if (cli.empty()) {
    std::ostringstream out, err;
    r.code = run_command(args, out, err);
  } else {
    std::string cmd = shell_quote(cli);
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " > /dev/null 2>&1";
    int st = std::system(cmd.c_str());
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  }
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.report = ss.str();
  if (!r.report.empty()) r.json = Json::parse(r.report);
  std::filesystem::remove(file);
  return r;
}

int failures = 0;

void line(int n, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS " : "FAIL ") << n << " " << what << std::endl;
  if (!ok) ++failures;
}

std::size_t count_rows(const Json& j, const std::string& key, const Json& value) {
  std::size_t c = 0;
  for (const auto& r : j["rows"])
    if (r.contains(key) && r[key] == value) ++c;
  return c;
}

std::string grid_summary(const TargetRun& r) {
  if (r.json.is_null()) return "no report, exit " + std::to_string(r.code);
  return std::to_string(r.json["rows"].size()) + " rows, " +
         std::to_string(count_rows(r.json, "agree", false)) + " disagreements, " +
         std::to_string(count_rows(r.json, "outcome", "inconclusive")) + " inconclusive, " +
         std::to_string(count_rows(r.json, "recommended_ok", false)) + " recommended-order failures, exit " +
         std::to_string(r.code);
}

bool grid_clean(const TargetRun& r) {
  return r.code == kOk && !r.json.is_null() && !r.json["rows"].empty() &&
         count_rows(r.json, "agree", false) == 0 && count_rows(r.json, "outcome", "inconclusive") == 0 &&
         count_rows(r.json, "recommended_ok", false) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  std::map<std::string, TargetRun> one, two;
  for (const auto& t : cli::reproduce_targets()) {
    auto t0 = std::chrono::steady_clock::now();
    one[t] = run_target(cli, t, 1);
    two[t] = run_target(cli, t, 2);
    auto s = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "reproduce " << t << ": exit " << one[t].code << " (" << s << " s for both runs)\n";
  }

  {
    std::size_t boxes = 0, ok = 0, unsorted = 0, unsorted_plain_ok = 0;
    auto check = [&](const RankedPoset& b, const LevelOrderFamily& o) {
      ++boxes;
      if (check_macaulay(b, o).ok) ++ok;
    };
    for (const auto& d : sorted_boxes(1, 4, 3)) {
      auto b = box(d);
      check(b, lex_order(b));
    }
    for (unsigned a = 1; a <= 8; ++a)
      for (unsigned c = 1; c <= 8; ++c) {
        auto b = box({a, c});
        if (a <= c) {
          check(b, lex_order(b));
        } else {
          // sides sorted by taking y before x
          check(b, lex_order(b, {"y", "x"}));
          ++unsorted;
          if (check_macaulay(b, lex_order(b)).ok) ++unsorted_plain_ok;
        }
      }
    line(1, ok == boxes,
         "Clements-Lindstrom boxes under lex with sorted sides: " + std::to_string(ok) + "/" +
             std::to_string(boxes) + " ok (unsorted 2D boxes under x before y: " +
             std::to_string(unsorted_plain_ok) + "/" + std::to_string(unsorted) + " ok, recorded)");
  }
  {
    auto r = box_shadow_lemmas(8);
    line(2, r.ok(),
         "2D box shadow lemmas, sides <= 8: " + std::to_string(r.monomials) + " monomials (" +
             std::to_string(r.monomial_mismatch) + " mismatches), " + std::to_string(r.segments) +
             " segments (" + std::to_string(r.segment_sum_mismatch) + " sum, " +
             std::to_string(r.new_shadow_mismatch) + " new-shadow mismatches), " +
             std::to_string(r.proper_segments) + " proper segments (" + std::to_string(r.box_segment_mismatch) +
             " mismatches); recorded: " + std::to_string(r.literal_clause_disagreements) +
             " literal-clause disagreements, " + std::to_string(r.whole_level_exceptions) + " whole-level exceptions");
  }
  {
    const auto& r = one["thmC-grid"];
    line(3, grid_clean(r) && r.json["rows"].size() == 625, "heart grid 1..5: " + grid_summary(r));
  }
  {
    const auto& r = one["heart-example"];
    bool ok = r.code == kViolation && !r.json.is_null() && r.json["input"]["generators_match"] == true &&
              r.json["rows"][0]["outcome"] == "none";
    line(4, ok, "heart-example: generators " +
                    std::string(!r.json.is_null() && r.json["input"]["generators_match"] == true ? "match" : "differ") +
                    ", search " + (r.json.is_null() ? "?" : r.json["rows"][0]["outcome"].get<std::string>()));
  }
  {
    const auto& r = one["twist-figure"];
    bool ok = r.code == kOk && !r.json.is_null() && r.json["rows"].size() == 2 &&
              r.json["rows"][0]["outcome"] == "found";
    std::string lex = ok ? (r.json["rows"][1]["outcome"] == "found" ? "ok" : "violation") : "?";
    line(5, ok, std::string("heart(5,2,2,5): twist ") + (ok ? "ok" : "fails") + ", lex(y,x) " + lex + " (recorded)");
  }
  line(6, grid_clean(one["thmB-diamond-grid"]), "diamond box grid: " + grid_summary(one["thmB-diamond-grid"]));
  line(7, grid_clean(one["thmB-wedge-grid"]), "wedge box grids: " + grid_summary(one["thmB-wedge-grid"]));
  line(8, grid_clean(one["thmA-grid"]), "union/wedge/diamond suite: " + grid_summary(one["thmA-grid"]));
  {
    std::string detail;
    bool ok = true;
    for (auto [t, n] : {std::pair<std::string, std::size_t>{"prop61-product", 8},
                        {"conj66-counterexample", 12},
                        {"prop61-ring-product", 10}}) {
      const auto& r = one[t];
      bool none = r.code == kViolation && !r.json.is_null() && r.json["rows"][0]["outcome"] == "none" &&
                  r.json["rows"][0]["elements"] == n;
      ok = ok && none;
      detail += (detail.empty() ? "" : ", ") + t + " (" + std::to_string(n) + ") " + (none ? "none" : "NOT none");
    }
    line(9, ok, "product counterexamples: " + detail);
  }
  {
    const auto& r = one["conj67-scan"];
    auto c = r.json.is_null() ? 0 : count_rows(r.json, "note", "COUNTEREXAMPLE");
    line(10, grid_clean(r) && c == 0,
         "product scan: " + grid_summary(r) + ", " + std::to_string(c) + " counterexamples");
  }
  {
    std::size_t same = 0;
    std::string diff;
    for (const auto& t : cli::reproduce_targets()) {
      if (!one[t].report.empty() && one[t].report == two[t].report && one[t].code == two[t].code) ++same;
      else diff += " " + t;
    }
    line(11, same == cli::reproduce_targets().size(),
         "reports identical across 1 and 2 threads: " + std::to_string(same) + "/" +
             std::to_string(cli::reproduce_targets().size()) + (diff.empty() ? "" : ", differ:" + diff));
  }
  return failures ? 1 : 0;
}
