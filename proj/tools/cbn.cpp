// cbn: call-by-need class checks for left-linear rewrite systems.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbn/cbn_nf.hpp"
#include "cbn/cbn_rs.hpp"
#include "cbn/error.hpp"
#include "cbn/oracle.hpp"
#include "cbn/recognizers.hpp"

using json = nlohmann::ordered_json;
using namespace cbn;

namespace {

enum Exit { kInClass = 0, kNotInClass = 1, kInputError = 2, kResourceCap = 3, kInternal = 4 };

struct Options {
  std::string file;
  std::string cls = "nf";
  std::string approx = "g";
  std::string approx_a = "g";
  std::string approx_b = "g";
  std::string saturate = "semi-naive";
  std::string mode = "pruned";
  std::string term;
  std::string which;
  bool stats = false;
  bool as_json = false;
  bool root = false;
  bool explore = false;
  bool inject_fault = false;
  unsigned depth = 3;
  std::size_t fuel = 100;
};

Trs load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_trs(ss.str());
}

Approx approx_of(const std::string& s) {
  auto a = parse_approx(s);
  if (!a) throw Error("unknown approximation '" + s + "' (expected s, nv or g)");
  return *a;
}

SaturationMode saturation_of(const std::string& s) {
  if (s == "semi-naive") return SaturationMode::semi_naive;
  if (s == "naive") return SaturationMode::naive;
  throw Error("unknown saturation mode '" + s + "'");
}

ExploreMode mode_of(const std::string& s) {
  if (s == "pruned") return ExploreMode::pruned;
  if (s == "exhaustive") return ExploreMode::exhaustive;
  throw Error("unknown exploration mode '" + s + "'");
}

std::size_t max_states() {
  const char* env = std::getenv("CBN_MAX_STATES");
  if (env == nullptr || *env == '\0') return 100000;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw Error(std::string("CBN_MAX_STATES is not a number: ") + env);
  }
}

void warn_overlaps(const Trs& trs) {
  if (!trs.left_linear() || is_orthogonal(trs)) return;
  std::cerr << "warning: the system has overlapping rules; neededness does not guarantee optimal reduction\n";
}

Term read_term(const Trs& trs, const std::string& text) {
  if (text.empty()) throw Error("--term is required");
  return parse_term(text, {}, trs.signature());
}

using Clock = std::chrono::steady_clock;
long long ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

json evidence_json(const std::vector<Evidence>& ev) {
  json out = json::array();
  for (const Evidence& e : ev)
    out.push_back({{"position", e.position.str()}, {"variant", e.variant.str()}, {"accepted", e.accepted}});
  return out;
}

json saturation_json(const SaturationStats& s) {
  return {{"rounds", s.rounds}, {"rule_examinations", s.rule_examinations}, {"candidate_tests", s.candidate_tests},
          {"rules_added", s.rules_added}};
}

void print_metrics(const json& m, const std::string& prefix = "") {
  for (const auto& [k, v] : m.items()) {
    if (v.is_object())
      print_metrics(v, prefix + k + ".");
    else
      std::cout << "  " << prefix << k << " = " << v.dump() << "\n";
  }
}

int report_verdict(const Options& o, const Verdict& v, json header, json metrics, bool rs) {
  header["in_class"] = v.in_class;
  if (v.witness) header["witness"] = v.witness->str();
  header["evidence"] = evidence_json(v.evidence);
  metrics["pair_states"] = v.stats.pair_states;
  metrics["pair_states_alive"] = v.stats.alive;
  metrics["s_components"] = v.stats.s_components;
  metrics["tuples"] = v.stats.tuples;
  if (o.as_json) {
    if (o.stats) header["metrics"] = metrics;
    std::cout << header.dump(2) << "\n";
  } else {
    std::cout << (v.in_class ? "IN CLASS" : "NOT IN CLASS") << "\n";
    if (v.witness) {
      std::cout << "witness: " << v.witness->str() << "\n";
      const char* target = rs ? "reaches a root-stable term" : "reaches a normal form";
      for (const Evidence& e : v.evidence)
        std::cout << "  redex at " << e.position.str() << ": " << e.variant.str() << " "
                  << (e.accepted ? target : "is blocked") << "\n";
    }
    if (o.stats) {
      std::cout << "metrics:\n";
      print_metrics(metrics);
    }
  }
  return v.in_class ? kInClass : kNotInClass;
}

int cmd_check(const Options& o) {
  Trs trs = load(o.file);
  warn_overlaps(trs);
  SaturationMode sat = saturation_of(o.saturate);
  ExploreMode mode = mode_of(o.mode);
  auto t0 = Clock::now();
  if (o.cls == "nf") {
    NfAnalyzer an(trs, approx_of(o.approx), sat);
    auto built = ms_since(t0);
    Verdict v = an.decide(mode, max_states());
    NfMetrics m = an.metrics();
    json metrics = {{"trs_size", m.trs_size},       {"rule_count", m.rule_count},     {"max_arity", m.max_arity},
                    {"nf_states", m.nf_states},     {"b_states", m.b_states},         {"c_states", m.c_states},
                    {"cprime_states", m.cprime_states}, {"c_rules", m.c_rules},       {"cprime_rules", m.cprime_rules},
                    {"saturation", saturation_json(m.saturation)}};
    metrics["time_ms"] = {{"construct", built}, {"explore", ms_since(t0) - built}};
    json header = {{"class", "nf"}, {"approx", to_string(an.approx())}};
    return report_verdict(o, v, header, metrics, false);
  }
  if (o.cls == "rs") {
    RsAnalyzer an(trs, approx_of(o.approx_a), approx_of(o.approx_b), sat);
    auto built = ms_since(t0);
    Verdict v = an.decide(mode, max_states());
    RsMetrics m = an.metrics();
    json metrics = {{"trs_size", trs.size()},
                    {"rule_count", trs.rule_count()},
                    {"max_arity", trs.signature().max_arity()},
                    {"rs_states", m.rs_states},
                    {"redex_closure_states", m.redex_closure_states},
                    {"c_rs_states", m.c_rs_states},
                    {"c_redex_states", m.c_redex_states},
                    {"cprime_states", m.cprime_states},
                    {"cprime_rules", m.cprime_rules},
                    {"inner_saturation_rounds", m.inner_saturation_rounds},
                    {"rs_saturation", saturation_json(m.rs_saturation)},
                    {"redex_saturation", saturation_json(m.redex_saturation)}};
    metrics["time_ms"] = {{"construct", built}, {"explore", ms_since(t0) - built}};
    json header = {{"class", "rs"}, {"approx_a", o.approx_a}, {"approx_b", o.approx_b}};
    return report_verdict(o, v, header, metrics, true);
  }
  throw Error("unknown class '" + o.cls + "' (expected nf or rs)");
}

int cmd_analyze(const Options& o) {
  Trs trs = load(o.file);
  warn_overlaps(trs);
  Term t = read_term(trs, o.term);
  std::vector<NeededRedex> rows;
  if (o.root) {
    RsAnalyzer an(trs, approx_of(o.approx_a), approx_of(o.approx_b));
    rows = an.root_needed_redexes(t);
    if (!o.as_json && !an.non_root_stable(t)) std::cout << "note: the term is root-stable\n";
  } else {
    NfAnalyzer an(trs, approx_of(o.approx));
    rows = an.needed_redexes(t);
  }
  const char* column = o.root ? "root-needed" : "needed";
  if (o.as_json) {
    json arr = json::array();
    for (const NeededRedex& r : rows)
      arr.push_back({{"position", r.position.str()}, {"redex", subterm_at(t, r.position).str()}, {column, r.needed}});
    std::cout << json{{"term", t.str()}, {"redexes", arr}}.dump(2) << "\n";
    return 0;
  }
  if (rows.empty()) {
    std::cout << "no redexes\n";
    return 0;
  }
  std::size_t wp = 8, wr = 5;
  for (const NeededRedex& r : rows) {
    wp = std::max(wp, r.position.str().size());
    wr = std::max(wr, subterm_at(t, r.position).str().size());
  }
  auto pad = [](std::string s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
  std::cout << pad("position", wp) << "  " << pad("redex", wr) << "  " << column << "\n";
  for (const NeededRedex& r : rows)
    std::cout << pad(r.position.str(), wp) << "  " << pad(subterm_at(t, r.position).str(), wr) << "  "
              << (r.needed ? "yes" : "no") << "\n";
  return 0;
}

int cmd_dump(const Options& o) {
  Trs trs = load(o.file);
  const std::string& w = o.which;
  if (w == "redex") {
    std::cout << build_redex_automaton(trs, false).automaton.dump();
    return 0;
  }
  if (w == "rs") {
    std::cout << build_rs_automaton(approximate(trs, approx_of(o.approx_b))).dump();
    return 0;
  }
  if (w == "b" || w == "nf" || w == "c" || w == "cprime" || w == "d") {
    NfAnalyzer an(trs, approx_of(o.approx), saturation_of(o.saturate));
    if (w == "b") std::cout << an.pattern_automaton().automaton.dump();
    if (w == "nf") std::cout << an.nf_automaton().dump();
    if (w == "c") std::cout << an.c().dump();
    if (w == "cprime") std::cout << an.cprime().automaton.dump();
    if (w == "d") {
      if (o.explore) an.engine().explore(mode_of(o.mode), max_states(), false);
      std::cout << an.engine().dump();
    }
    return 0;
  }
  if (w == "dprime") {
    RsAnalyzer an(trs, approx_of(o.approx_a), approx_of(o.approx_b), saturation_of(o.saturate));
    if (o.explore) an.engine().explore(mode_of(o.mode), max_states(), false);
    std::cout << an.engine().dump();
    return 0;
  }
  throw Error("unknown automaton '" + w + "' (expected b, nf, redex, rs, c, cprime, d or dprime)");
}

int cmd_selfcheck(const Options& o) {
  Trs trs = load(o.file);
  SelfcheckOptions opts;
  opts.depth = o.depth;
  opts.inject_fault = o.inject_fault;
  bool pass = true;
  json arr = json::array();
  for (const OracleReport& r : selfcheck(trs, opts)) {
    pass = pass && r.pass();
    if (o.as_json) {
      json d = json::array();
      for (const Disagreement& x : r.disagreements)
        d.push_back({{"term", x.term.str()}, {"expected", x.expected}, {"got", x.got}});
      arr.push_back({{"name", r.name},
                     {"checked", r.checked},
                     {"agreements", r.agreements},
                     {"inconclusive", r.inconclusive},
                     {"disagreements", d}});
      continue;
    }
    std::cout << r.summary() << "\n";
    for (std::size_t i = 0; i < r.disagreements.size() && i < 5; ++i)
      std::cout << "  " << r.disagreements[i].term.str() << ": expected " << r.disagreements[i].expected << ", got "
                << r.disagreements[i].got << "\n";
  }
  if (o.as_json)
    std::cout << json{{"pass", pass}, {"reports", arr}}.dump(2) << "\n";
  else
    std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

int cmd_normalize(const Options& o) {
  Trs trs = load(o.file);
  warn_overlaps(trs);
  Term t = read_term(trs, o.term);
  NfAnalyzer an(trs, approx_of(o.approx));
  NormalizeResult r = normalize_by_need(an, t, o.fuel);
  if (o.as_json) {
    json steps = json::array();
    for (const NormalizeStep& s : r.trace)
      steps.push_back({{"position", s.position.str()}, {"rule", s.rule_index + 1}, {"term", s.result.str()}});
    std::cout << json{{"start", t.str()}, {"result", r.term.str()}, {"status", to_string(r.status)}, {"trace", steps}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << t.str() << "\n";
    for (const NormalizeStep& s : r.trace)
      std::cout << "  -> " << s.result.str() << "   [rule " << s.rule_index + 1 << " at " << s.position.str() << "]\n";
    std::cout << "result: " << r.term.str() << " (" << to_string(r.status) << ")\n";
  }
  return r.status == NormalizeResult::Status::normal_form ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Call-by-need class membership for left-linear rewrite systems"};
  app.require_subcommand(1);
  Options o;
  auto approx_check = CLI::IsMember({"s", "nv", "g"});

  auto* check = app.add_subcommand("check", "Decide CBN-NF or CBN-RS membership");
  check->add_option("file", o.file, "Rewrite system (.trs)")->required();
  check->add_option("--class", o.cls, "nf or rs")->check(CLI::IsMember({"nf", "rs"}));
  check->add_option("--approx", o.approx, "Approximation for nf")->check(approx_check);
  check->add_option("--approx-a", o.approx_a, "Reduction approximation for rs")->check(approx_check);
  check->add_option("--approx-b", o.approx_b, "Root-stability approximation for rs")->check(approx_check);
  check->add_option("--saturate", o.saturate, "semi-naive or naive")->check(CLI::IsMember({"semi-naive", "naive"}));
  check->add_option("--mode", o.mode, "pruned or exhaustive")->check(CLI::IsMember({"pruned", "exhaustive"}));
  check->add_flag("--stats", o.stats, "Print sizes and counters");
  check->add_flag("--json", o.as_json, "JSON output");

  auto* analyze = app.add_subcommand("analyze", "Mark needed or root-needed redexes of a term");
  analyze->add_option("file", o.file, "Rewrite system (.trs)")->required();
  analyze->add_option("--term", o.term, "Ground term")->required();
  analyze->add_option("--approx", o.approx, "Approximation for neededness")->check(approx_check);
  analyze->add_flag("--root", o.root, "Root-neededness");
  analyze->add_option("--approx-a", o.approx_a)->check(approx_check);
  analyze->add_option("--approx-b", o.approx_b)->check(approx_check);
  analyze->add_flag("--json", o.as_json);

  auto* dump = app.add_subcommand("dump-automaton", "Print one of the constructed automata");
  dump->add_option("file", o.file, "Rewrite system (.trs)")->required();
  dump->add_option("--which", o.which, "b, nf, redex, rs, c, cprime, d or dprime")->required();
  dump->add_option("--approx", o.approx)->check(approx_check);
  dump->add_option("--approx-a", o.approx_a)->check(approx_check);
  dump->add_option("--approx-b", o.approx_b)->check(approx_check);
  dump->add_option("--saturate", o.saturate)->check(CLI::IsMember({"semi-naive", "naive"}));
  dump->add_option("--mode", o.mode)->check(CLI::IsMember({"pruned", "exhaustive"}));
  dump->add_flag("--explore", o.explore, "Explore pair states before dumping d or dprime");

  auto* self = app.add_subcommand("selfcheck", "Compare the automata with brute-force oracles");
  self->add_option("file", o.file, "Rewrite system (.trs)")->required();
  self->add_option("--depth", o.depth, "Term height bound")->check(CLI::Range(1, 6));
  self->add_flag("--inject-fault", o.inject_fault, "Check the unsaturated automaton instead");
  self->add_flag("--json", o.as_json);

  auto* norm = app.add_subcommand("normalize", "Reduce needed redexes until a normal form");
  norm->add_option("file", o.file, "Rewrite system (.trs)")->required();
  norm->add_option("--term", o.term, "Ground term")->required();
  norm->add_option("--approx", o.approx)->check(approx_check);
  norm->add_option("--fuel", o.fuel, "Maximum number of steps");
  norm->add_flag("--json", o.as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*check) return cmd_check(o);
    if (*analyze) return cmd_analyze(o);
    if (*dump) return cmd_dump(o);
    if (*self) return cmd_selfcheck(o);
    if (*norm) return cmd_normalize(o);
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResourceCap;
  } catch (const ValidationError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << o.file << ": " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
