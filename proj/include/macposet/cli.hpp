#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "classify.hpp"
#include "expr.hpp"
#include "io.hpp"
#include "macaulay.hpp"

namespace macposet {

enum ExitCode { kOk = 0, kViolation = 1, kUsage = 2, kBudget = 3 };

/// What a command produced: text goes to stdout, the report to --report.
struct Outcome {
  int code = kOk;
  std::string verdict;
  Json input = Json::object();
  std::optional<Witness> witness;
  Json certificate;  // used as the witness when there is no violation witness
  std::vector<GridRow> rows;
};

namespace cli {

inline Node load_node(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    auto f = deserialize_poset(detail::read_file(arg.substr(1)));
    Node n;
    n.expr.kind = ExprKind::named;
    n.expr.text = arg;
    n.poset = f.poset;
    if (f.provenance) n.provenance = *f.provenance;
    n.op = f.operation;
    return n;
  }
  return evaluate(arg);
}

inline std::string element_text(const RankedPoset& p, ElementId e) {
  std::string s = std::to_string(e);
  if (p.has_labels()) s += "[" + monomial_text(p.labels()->variables, p.label(e)) + "]";
  return s;
}

inline std::string ids_text(const RankedPoset& p, const std::vector<ElementId>& ids) {
  std::string s = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? ", " : "") + element_text(p, ids[i]);
  return s + "}";
}

inline void print_witness(std::ostream& out, const RankedPoset& p, const Witness& w) {
  out << "witness: " << witness_kind_name(w.kind) << " at level " << w.level << ", q = " << w.q << "\n";
  out << "  set     " << ids_text(p, w.set) << "\n";
  out << "  shadow  " << ids_text(p, w.shadow) << " (" << w.measured << ", bound " << w.bound << ")\n";
  if (!w.better.empty()) out << "  better  " << ids_text(p, w.better) << "\n";
  if (w.kind == WitnessKind::segment_inequality)
    out << "  segment start " << w.start << ", clause " << w.clause << "\n";
}

inline void print_order(std::ostream& out, const RankedPoset& p, const LevelOrderFamily& o) {
  for (Rank d = 0; d < o.lists().size(); ++d) {
    out << "  level " << d << ":";
    for (auto e : o.level(d)) out << ' ' << element_text(p, e);
    out << "\n";
  }
}

inline void print_rows(std::ostream& out, const GridReport& r, bool all) {
  for (const auto& row : r.rows) {
    bool interesting = !row.agree || (row.recommended_ok && !*row.recommended_ok) ||
                       row.note == "COUNTEREXAMPLE";
    if (!all && !interesting) continue;
    out << "  " << row.instance << ": " << search_status_name(row.outcome);
    if (row.predicate) out << " (expected " << (*row.predicate ? "order" : "none") << ")";
    if (!row.agree) out << " DISAGREE";
    if (row.recommended_ok) out << ", recommended order " << (*row.recommended_ok ? "ok" : "FAILS");
    if (!row.note.empty()) out << " [" << row.note << "]";
    out << "\n";
  }
}

inline Outcome grid_outcome(std::ostream& out, const GridReport& r, bool all_rows) {
  Outcome o;
  o.rows = r.rows;
  auto dis = r.disagreements(), inc = r.inconclusive(), rec = r.recommended_failures();
  out << r.family << ": " << r.rows.size() << " rows, " << dis << " disagreements, " << inc
      << " inconclusive";
  if (rec) out << ", " << rec << " recommended-order failures";
  out << "\n";
  print_rows(out, r, all_rows);
  if (inc) {
    o.code = kBudget;
    o.verdict = "inconclusive";
  } else if (dis || rec) {
    o.code = kViolation;
    o.verdict = std::to_string(dis + rec) + " disagreements";
  } else {
    o.verdict = "all rows agree";
  }
  return o;
}

inline Outcome search_outcome(std::ostream& out, const Node& n, const SearchOptions& opt) {
  Outcome o;
  o.input["poset"] = n.poset.name();
  o.input["elements"] = n.poset.size();
  auto r = find_macaulay_order(n.poset, opt);
  GridRow row;
  row.instance = n.poset.name();
  row.elements = n.poset.size();
  row.outcome = r.status;
  row.nodes = r.stats.nodes;
  o.rows.push_back(row);
  out << n.poset.name() << " (" << n.poset.size() << " elements): ";
  switch (r.status) {
    case SearchStatus::found:
      out << "Macaulay order found\n";
      print_order(out, n.poset, *r.order);
      o.verdict = "Macaulay order found";
      o.certificate = Json{{"order", order_json(*r.order)}};
      break;
    case SearchStatus::none:
      out << "no Macaulay order\n";
      o.verdict = "no Macaulay order";
      o.code = kViolation;
      break;
    case SearchStatus::inconclusive:
      out << "inconclusive: node budget exhausted after " << r.stats.nodes << " nodes\n";
      o.verdict = "inconclusive";
      o.code = kBudget;
      break;
  }
  return o;
}

// ---------------------------------------------------------------- reproduce

inline Outcome counterexample_target(std::ostream& out, const std::vector<GridRow>& rows,
                                     const Json& input) {
  Outcome o;
  o.input = input;
  o.rows = rows;
  const auto& head = rows.front();
  for (const auto& r : rows) {
    out << r.instance << " (" << r.elements << " elements): " << search_status_name(r.outcome);
    if (!r.note.empty()) out << " [" << r.note << "]";
    out << "\n";
  }
  if (head.outcome == SearchStatus::inconclusive) {
    o.verdict = "inconclusive";
    o.code = kBudget;
  } else if (head.outcome == SearchStatus::none) {
    o.verdict = "no Macaulay order";
    o.code = kViolation;
  } else {
    o.verdict = "Macaulay order found";
  }
  return o;
}

inline const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> names{
      "heart-example",  "twist-figure",      "prop61-product",    "prop61-ring-product",
      "conj66-counterexample", "diamond-not-wedge", "spider-union-fails", "thmA-grid",
      "thmB-wedge-grid", "thmB-diamond-grid", "thmC-grid",         "conj67-scan"};
  return names;
}

inline Outcome reproduce(std::ostream& out, const std::string& name, const SearchOptions& opt) {
  Json input{{"target", name}};
  if (name == "heart-example") {
    auto i = ideal_intersection(box_ideal({4, 1}, {"x", "y"}), box_ideal({3, 3}, {"x", "y"}));
    auto quoted = ideal_from_generators({"x", "y"}, {{{4, 0}}, {{0, 3}}, {{3, 1}}});
    bool match = i == quoted;
    out << "(x^4, y) ∩ (x^3, y^3) = " << ideal_text(i) << (match ? "" : " MISMATCH") << "\n";
    input["ideal"] = ideal_text(i);
    input["generators_match"] = match;
    auto p = standard_monomial_poset(i, "poset(" + ideal_text(i) + ")");
    auto o = counterexample_target(out, {search_row(p.name(), {4, 1, 3, 3}, p, false, opt)}, input);
    if (!match) {
      o.verdict = "generator mismatch";
      o.code = kViolation;
    }
    return o;
  }
  if (name == "twist-figure") {
    auto p = heart(5, 2, 2, 5);
    auto tw = check_row("heart(5,2,2,5) under twist", p, twist_order(p, 5, 2, 2, 5), true, opt);
    tw.note = "twist";
    auto lx = check_row("heart(5,2,2,5) under lex(y,x)", p, lex_order(p, {"y", "x"}), false, opt);
    lx.predicate.reset();
    lx.agree = true;
    lx.note = "informational: lex verdict recorded, not asserted";
    Outcome o;
    o.input = input;
    o.rows = {tw, lx};
    out << "heart(5,2,2,5) twist: " << (tw.outcome == SearchStatus::found ? "ok" : "violation") << "\n";
    out << "heart(5,2,2,5) lex(y,x): " << (lx.outcome == SearchStatus::found ? "ok" : "violation") << "\n";
    if (tw.witness) print_witness(out, p, *tw.witness);
    o.verdict = tw.outcome == SearchStatus::found ? "twist order ok" : "twist order fails";
    o.code = tw.outcome == SearchStatus::found ? kOk : kViolation;
    return o;
  }
  if (name == "prop61-product") {
    auto p = cartesian_product(path(1), y_poset()).poset;
    return counterexample_target(out, {search_row("cart(path(1), explicit{Y})", {}, p, false, opt)}, input);
  }
  if (name == "prop61-ring-product") {
    auto p = cartesian_product(ring_factor_poset(), path(1)).poset;
    auto q = cartesian_product(ring_shape_poset(), path(1)).poset;
    auto shape = search_row("cart(explicit{ring-shape}, path(1))", {}, q, std::nullopt, opt);
    shape.note = "informational: transcribed factor shape";
    return counterexample_target(
        out, {search_row("cart(explicit{ring}, path(1))", {}, p, false, opt), shape}, input);
  }
  if (name == "conj66-counterexample") {
    auto p = cartesian_product(standard_monomial_poset(cubic_power_ideal()), path(1)).poset;
    input["ideal"] = ideal_text(cubic_power_ideal());
    return counterexample_target(
        out, {search_row("cart(poset(" + ideal_text(cubic_power_ideal()) + "), path(1))", {}, p, false, opt)},
        input);
  }
  if (name == "diamond-not-wedge") {
    auto b = box({2, 2});
    auto top = adjoin_extreme(b, Extreme::top), bot = adjoin_extreme(b, Extreme::bottom);
    auto lift = [&](const OperationResult& r) { return transport_order(lex_order(b), r.poset, source_map(r)); };
    auto d = diamond({bot.poset, top.poset});
    GridReport r{"diamond-not-wedge", {}};
    auto us = check_row("diamond(uhat(box(2,2)), hat(box(2,2))) under union simplicial", d.poset,
                        us_order(d, {lift(bot), lift(top)}), true, opt);
    r.rows.push_back(us);
    auto d0 = diamond({top.poset, bot.poset});
    auto lit = check_row("diamond(hat(box(2,2)), uhat(box(2,2))) under union simplicial", d0.poset,
                         us_order(d0, {lift(top), lift(bot)}), true, opt);
    lit.predicate.reset();
    lit.agree = true;
    lit.note = "informational: operand order as written";
    r.rows.push_back(lit);
    r.rows.push_back(search_row("diamond(hat(box(2,2)), uhat(box(2,2)))", {}, d0.poset, true, opt));
    r.rows.push_back(search_row("wedge(hat(box(2,2)), uhat(box(2,2)))", {},
                                wedge({top.poset, bot.poset}).poset, false, opt));
    auto o = grid_outcome(out, r, true);
    o.input = input;
    return o;
  }
  if (name == "spider-union-fails") {
    auto s = spider({1, 2});
    auto p = s.poset;
    auto found = find_macaulay_order(p, opt);
    std::vector<GridRow> rows;
    rows.push_back(search_row("union(spider(1,2), spider(1,2))", {}, disjoint_union({p, p}).poset, false, opt));
    rows.push_back(search_row("wedge(spider(1,2), spider(1,2))", {}, wedge({p, p}).poset, true, opt));
    if (found.order) {
      auto u = disjoint_union({p, p});
      auto c = check_row("union(spider(1,2), spider(1,2)) under union simplicial", u.poset,
                         us_order(u, {*found.order, *found.order}), false, opt);
      rows.push_back(c);
      GridRow add;
      add.instance = "spider(1,2) additive under its found order";
      add.elements = p.size();
      add.predicate = false;
      auto v = is_additive(p, *found.order, opt.level_cap);
      add.outcome = v.ok ? SearchStatus::found : SearchStatus::none;
      add.agree = !v.ok;
      add.witness = v.witness;
      add.note = "additivity";
      rows.push_back(add);
    }
    return counterexample_target(out, rows, input);
  }
  FamilySpec fs;
  fs.search = opt;
  if (name == "thmA-grid") {
    auto o = grid_outcome(out, equivalence_suite(opt), false);
    o.input = input;
    return o;
  }
  if (name == "thmB-wedge-grid") {
    fs.min_side = 2;
    fs.max_side = 5;
    auto a = wedge_2d_grid(fs);
    fs.max_side = 6;
    auto b = wedge_path_grid(fs);
    a.family = "wedge-box";
    a.rows.insert(a.rows.end(), b.rows.begin(), b.rows.end());
    auto o = grid_outcome(out, a, false);
    o.input = input;
    return o;
  }
  if (name == "thmB-diamond-grid") {
    fs.min_side = 2;
    auto o = grid_outcome(out, diamond_box_grid(fs), false);
    o.input = input;
    return o;
  }
  if (name == "thmC-grid") {
    auto o = grid_outcome(out, heart_grid(fs), false);
    o.input = input;
    return o;
  }
  if (name == "conj67-scan") {
    auto r = product_conjecture_search(4, 3, opt);
    auto o = grid_outcome(out, r, false);
    auto c = counterexamples(r);
    out << c << " counterexamples\n";
    if (c && o.code == kOk) o.code = kViolation;
    o.verdict = c ? std::to_string(c) + " counterexamples" : o.verdict == "all rows agree" ? "no counterexamples" : o.verdict;
    o.input = input;
    return o;
  }
  throw CLI::ValidationError("reproduce", "unknown target '" + name + "'");
}

inline std::vector<ElementId> parse_id_list(const std::string& s) {
  std::vector<ElementId> ids;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    auto a = tok.find_first_not_of(" {}"), b = tok.find_last_not_of(" {}");
    if (a == std::string::npos) continue;
    tok = tok.substr(a, b - a + 1);
    if (tok.find_first_not_of("0123456789") != std::string::npos) throw Error("bad element id '" + tok + "'");
    ids.push_back(static_cast<ElementId>(std::stoul(tok)));
  }
  return ids;
}

}  // namespace cli

/// Runs one command line (without the program name).
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ranked posets, Macaulay orders and the operations that build them.", "macposet"};
  app.require_subcommand(1);
  std::string report_file;
  SearchOptions opt;
  bool timings = false;
  app.add_option("--report", report_file, "write a JSON report to FILE ('-' for stdout)");
  app.add_option("--budget", opt.budget, "search node budget")->capture_default_str();
  app.add_option("--level-cap", opt.level_cap, "largest level width for exhaustive tables")->capture_default_str();
  app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--timings", timings, "add wall-clock timings to output and report");

  std::string expr, order, set, output, family, target;
  bool dot = false, lower = false, all_rows = false;
  FamilySpec fs;
  std::optional<unsigned> max_side;
  unsigned max_exp = 4, extra = 3;

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto* build = sub("build", "evaluate an expression and write the poset file");
  build->add_option("expr", expr, "poset expression or @file")->required();
  build->add_option("-o,--output", output, "output file (default stdout)");
  auto* show = sub("show", "print levels, level sizes and covers");
  show->add_option("expr", expr)->required();
  show->add_flag("--dot", dot, "print a DOT edge list instead");
  auto* shadow = sub("shadow", "upper (or lower) shadow of a set inside one level");
  shadow->add_option("expr", expr)->required();
  shadow->add_option("--set", set, "comma separated element ids")->required();
  shadow->add_flag("--lower", lower);
  auto* check = sub("check", "check an order for the Macaulay property");
  check->add_option("expr", expr)->required();
  check->add_option("--order", order, "order expression")->required();
  auto* search = sub("search-order", "search for a Macaulay order");
  search->add_option("expr", expr)->required();
  auto* additive = sub("additive", "check additivity of a Macaulay order");
  additive->add_option("expr", expr)->required();
  additive->add_option("--order", order)->required();
  auto* verify = sub("verify-family", "compare a closed-form classification with search");
  verify->add_option("family", family)
      ->required()
      ->check(CLI::IsMember({"heart", "diamond-box", "wedge-2d-box", "wedge-path-box",
                             "union-wedge-diamond-equiv", "cartesian-counterexamples"}));
  verify->add_option("--min-side", fs.min_side)->capture_default_str();
  verify->add_option("--max-side", max_side, "default 5 (6 for wedge-path-box)");
  verify->add_option("--max-dims", fs.max_dims)->capture_default_str();
  verify->add_option("--max-elements", fs.max_elements)->capture_default_str();
  verify->add_option("--max-path", fs.max_path)->capture_default_str();
  verify->add_option("--max-m2", fs.max_m2)->capture_default_str();
  verify->add_flag("--all", all_rows, "print every row");
  auto* conj = sub("conjecture67", "search products S x path(n-1) for counterexamples");
  conj->add_option("--max-exp", max_exp)->capture_default_str();
  conj->add_option("--extra", extra)->capture_default_str();
  conj->add_flag("--all", all_rows);
  auto* repro = sub("reproduce", "run a named reproduction target");
  repro->add_option("name", target)->required()->check(CLI::IsMember(cli::reproduce_targets()));
  repro->add_flag("--all", all_rows);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  auto t0 = std::chrono::steady_clock::now();
  Outcome res;
  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (build->parsed()) {
      auto n = cli::load_node(expr);
      auto text = serialize_poset(n.poset, n.op == Operation::none ? nullptr : &n.provenance, n.op);
      if (output.empty()) {
        out << text;
      } else {
        std::ofstream f(output);
        if (!(f << text)) throw Error("cannot write '" + output + "'");
        out << "wrote " << output << " (" << n.poset.size() << " elements)\n";
      }
      res.verdict = "ok";
      res.input["expr"] = expr;
    } else if (show->parsed()) {
      auto n = cli::load_node(expr);
      const auto& p = n.poset;
      res.input["expr"] = expr;
      res.verdict = "ok";
      if (dot) {
        out << "digraph poset {\n";
        for (ElementId e = 0; e < p.size(); ++e)
          out << "  " << e << " [label=\"" << cli::element_text(p, e) << "\"];\n";
        for (auto c : p.covers()) out << "  " << c.lower << " -> " << c.upper << ";\n";
        out << "}\n";
      } else {
        out << p.name() << "\n" << p.size() << " elements, " << p.cover_count() << " covers\n";
        out << "level sizes:";
        for (auto s : p.level_sizes()) out << ' ' << s;
        out << "\n";
        for (Rank d = 0; d < p.level_count(); ++d) {
          out << "level " << d << ":";
          for (auto e : p.level(d)) out << ' ' << cli::element_text(p, e);
          out << "\n";
        }
        out << "covers:\n";
        for (auto c : p.covers()) out << "  " << c.lower << " -> " << c.upper << "\n";
      }
    } else if (shadow->parsed()) {
      auto n = cli::load_node(expr);
      const auto& p = n.poset;
      auto ids = cli::parse_id_list(set);
      for (auto e : ids)
        if (e >= p.size()) throw Error("element " + std::to_string(e) + " is not in the poset");
      Rank d = ids.empty() ? 0 : p.rank(ids.front());
      auto s = LevelSubset::of(p, d, ids);
      auto sh = lower ? lower_shadow(p, s) : upper_shadow(p, s);
      auto members = sh.members(p);
      out << (lower ? "lower" : "upper") << " shadow of " << cli::ids_text(p, ids) << ": "
          << cli::ids_text(p, members) << " (" << members.size() << ")\n";
      res.input = {{"expr", expr}, {"set", ids}, {"lower", lower}};
      res.verdict = "ok";
      res.certificate = Json{{"shadow", members}};
    } else if (check->parsed()) {
      auto n = cli::load_node(expr);
      auto o = resolve_order(n, order);
      auto v = check_macaulay(n.poset, o, opt.level_cap, opt.threads);
      res.input = {{"expr", expr}, {"order", order}};
      out << n.poset.name() << " under " << order << ": " << (v.ok ? "ok" : "violation") << "\n";
      if (!v.ok) {
        cli::print_witness(out, n.poset, *v.witness);
        res.witness = v.witness;
        res.code = kViolation;
      }
      res.verdict = v.ok ? "ok" : "violation";
    } else if (search->parsed()) {
      res = cli::search_outcome(out, cli::load_node(expr), opt);
      res.input["expr"] = expr;
    } else if (additive->parsed()) {
      auto n = cli::load_node(expr);
      auto o = resolve_order(n, order);
      res.input = {{"expr", expr}, {"order", order}};
      auto m = check_macaulay(n.poset, o, opt.level_cap, opt.threads);
      if (!m.ok) {
        out << n.poset.name() << " under " << order << ": order is not Macaulay\n";
        cli::print_witness(out, n.poset, *m.witness);
        res.verdict = "order is not Macaulay";
        res.witness = m.witness;
        res.code = kViolation;
      } else {
        auto v = is_additive(n.poset, o, opt.level_cap);
        out << n.poset.name() << " under " << order << ": " << (v.ok ? "additive" : "not additive") << "\n";
        if (!v.ok) {
          cli::print_witness(out, n.poset, *v.witness);
          res.witness = v.witness;
          res.code = kViolation;
        }
        res.verdict = v.ok ? "additive" : "not additive";
      }
    } else if (verify->parsed()) {
      fs.family = family;
      fs.search = opt;
      fs.max_side = max_side.value_or(family == "wedge-path-box" ? 6 : 5);
      GridReport r;
      if (family == "heart") r = heart_grid(fs);
      else if (family == "diamond-box") r = diamond_box_grid(fs);
      else if (family == "wedge-2d-box") r = wedge_2d_grid(fs);
      else if (family == "wedge-path-box") r = wedge_path_grid(fs);
      else if (family == "union-wedge-diamond-equiv") r = equivalence_suite(opt);
      else r = cartesian_counterexamples(opt);
      res = cli::grid_outcome(out, r, all_rows);
      res.input = {{"family", family}, {"min_side", fs.min_side}, {"max_side", fs.max_side}};
      if (family == "diamond-box") res.input["max_dims"] = fs.max_dims, res.input["max_elements"] = fs.max_elements;
      if (family == "wedge-path-box") res.input["max_path"] = fs.max_path, res.input["max_m2"] = fs.max_m2;
    } else if (conj->parsed()) {
      auto r = product_conjecture_search(max_exp, extra, opt);
      res = cli::grid_outcome(out, r, all_rows);
      auto c = counterexamples(r);
      out << c << " counterexamples\n";
      if (c && res.code == kOk) res.code = kViolation;
      if (c) res.verdict = std::to_string(c) + " counterexamples";
      else if (res.code == kOk) res.verdict = "no counterexamples";
      res.input = {{"max_exp", max_exp}, {"extra", extra}};
    } else if (repro->parsed()) {
      res = cli::reproduce(out, target, opt);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  if (timings) out << "time: " << ms << " ms\n";
  if (!report_file.empty()) {
    auto j = make_report(command, res.input, res.verdict, res.witness, res.rows);
    if (!res.witness && !res.certificate.is_null()) j["witness"] = res.certificate;
    if (timings) {
      j.erase("version");
      j["timings"] = Json{{"total_ms", ms}};
      j["version"] = kVersion;
    }
    auto text = j.dump(2) + "\n";
    if (report_file == "-") {
      out << text;
    } else {
      std::ofstream f(report_file);
      if (!(f << text)) {
        err << "error: cannot write report '" << report_file << "'\n";
        return kUsage;
      }
    }
  }
  return res.code;
}

}  // namespace macposet
