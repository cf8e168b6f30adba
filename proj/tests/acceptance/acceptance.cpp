// Acceptance suite: one PASS/FAIL line per criterion.

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cbn/cbn_nf.hpp"
#include "cbn/cbn_rs.hpp"
#include "cbn/error.hpp"
#include "cbn/oracle.hpp"

using namespace cbn;

namespace {

const char* kCatalog = CBN_CATALOG_DIR;
const char* kCli = CBN_CLI_PATH;

Trs load(const std::string& name) {
  std::ifstream in(std::string(kCatalog) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_trs(ss.str());
}

Term parse(const Trs& trs, const std::string& text) {
  Signature sig = trs.signature();
  sig.add(Symbol::bullet());
  return parse_term(text, {}, sig, {true});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.notes.push_back(std::string("exception: ") + e.what());
  }
  if (!o.pass) ++failures;
  std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << "\n";
  for (const std::string& n : o.notes) std::cout << "    " << n << "\n";
}

// Independent redex test by direct matching of left-linear lhs.
bool matches(const Term& pat, const Term& t) {
  if (pat.is_var()) return true;
  if (t.is_var() || pat.symbol() != t.symbol()) return false;
  for (std::size_t i = 0; i < pat.args().size(); ++i)
    if (!matches(pat.arg(i), t.arg(i))) return false;
  return true;
}

bool has_redex(const Trs& trs, const Term& t) {
  for (const Rule& r : trs.rules())
    if (matches(r.lhs, t)) return true;
  for (const Term& a : t.args())
    if (has_redex(trs, a)) return true;
  return false;
}

bool no_redex_no_bullet(const Trs& trs, const Term& t) {
  if (t.symbol().is_bullet()) return false;
  for (const Rule& r : trs.rules())
    if (matches(r.lhs, t)) return false;
  for (const Term& a : t.args())
    if (!no_redex_no_bullet(trs, a)) return false;
  return true;
}

void redex_positions_into(const Trs& trs, const Term& t, Position at, std::vector<Position>& out) {
  for (const Rule& r : trs.rules())
    if (matches(r.lhs, t)) {
      out.push_back(at);
      break;
    }
  for (unsigned i = 0; i < t.args().size(); ++i) redex_positions_into(trs, t.arg(i), at.child(i + 1), out);
}

std::vector<Position> independent_redexes(const Trs& trs, const Term& t) {
  std::vector<Position> out;
  redex_positions_into(trs, t, Position{}, out);
  return out;
}

// Reduct search: does t[#]_p reach a normal form of the original system?
Reach variant_normalizes(const Trs& original, const Trs& approx, const Term& t, const Position& p) {
  Term v = replace_at(t, p, Term::constant(Symbol::bullet()));
  return reaches(approx, v, [&](const Term& s) { return no_redex_no_bullet(original, s); });
}

std::string run_cli(const std::string& args) {
  std::string cmd = std::string(kCli) + " " + args + " 2>&1; echo \"exit=$?\"";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return "popen failed";
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  pclose(p);
  return out;
}

// Wall-clock fields are the only nondeterministic output.
std::string strip_times(const std::string& s) {
  std::istringstream in(s);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.find("time_ms") != std::string::npos || line.find("\"construct\"") != std::string::npos ||
        line.find("\"explore\"") != std::string::npos)
      continue;
    out += line + "\n";
  }
  return out;
}

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

const std::vector<std::string> kCatalogFiles = {"example.trs", "berry.trs", "a_to_b.trs", "constants.trs",
                                                "broken.trs"};
const std::vector<std::string> kLeftLinear = {"example.trs", "berry.trs", "a_to_b.trs", "constants.trs"};

std::string sample_term(const std::string& file) {
  if (file == "example.trs") return "f(f(a,a),g(f(a,a),f(a,a)))";
  if (file == "berry.trs") return "f(c,c,c)";
  if (file == "broken.trs") return "f(f(x,x),x)";
  return "a";
}

constexpr std::array<Approx, 3> kApprox = {Approx::S, Approx::NV, Approx::G};

}  // namespace

int main() {
  std::cout << std::unitbuf;
  const Trs e = load("example.trs");

  report(1, "example system: nf verdicts nv = NOT IN CLASS, g = IN CLASS", [&](Outcome& o) {
    for (Approx a : {Approx::NV, Approx::G}) {
      auto t0 = std::chrono::steady_clock::now();
      Verdict v = decide_cbn_nf(e, a);
      double secs = seconds_since(t0);
      bool expected_in = a == Approx::G;
      o.require(v.in_class == expected_in, to_string(a) + " verdict");
      o.require(secs < 10.0, to_string(a) + " under 10 s");
      std::ostringstream s;
      s << to_string(a) << ": " << (v.in_class ? "IN CLASS" : "NOT IN CLASS") << " in " << secs << " s";
      o.note(s.str());
    }
  });

  report(2, "example system: nv witness re-validates and the worked-example term is accepted", [&](Outcome& o) {
    NfAnalyzer an(e, Approx::NV);
    Verdict v = an.decide();
    o.require(v.witness.has_value(), "a witness is returned");
    if (!v.witness) return;
    const Term& w = *v.witness;
    o.note("witness " + w.str());
    o.require(has_redex(e, w), "witness is reducible");
    auto ps = independent_redexes(e, w);
    o.require(!ps.empty(), "witness has redexes");
    for (const Position& p : ps) {
      Term variant = replace_at(w, p, Term::constant(Symbol::bullet()));
      o.require(an.cprime().automaton.accepts(variant), "C' accepts " + variant.str());
      o.require(variant_normalizes(e, an.approximated(), w, p) == Reach::yes,
                variant.str() + " reaches a normal form by search");
    }
    Term delta = parse(e, "f(f(a,a),g(f(a,a),f(a,a)))");
    o.require(an.engine().accepts(delta, ExploreMode::exhaustive), "exhaustive D accepts " + delta.str());
    o.note("exhaustive D accepts " + delta.str() + " (Delta = f(a,a))");
    Term literal = parse(e, "f(g(a,a),g(g(a,a),g(a,a)))");
    o.note("with Delta = g(a,a) the term " + literal.str() + " is a normal form (" +
           (has_redex(e, literal) ? "reducible" : "no redex") + "), exhaustive D accepts it: " +
           (an.engine().accepts(literal, ExploreMode::exhaustive) ? "yes" : "no"));
  });

  report(3, "B(R): five pattern states, reachability matches instances to depth 4 over F + {#}", [&](Outcome& o) {
    auto t0 = std::chrono::steady_clock::now();
    Trs eb = extend_bullet(e);
    PatternAutomaton b = build_pattern_automaton(e, eb.signature());
    std::set<std::string> labels;
    for (StateId q = 0; q < b.automaton.state_count(); ++q) labels.insert(b.automaton.label(q).str());
    o.require(labels == std::set<std::string>{"<x>", "<a>", "<b>", "<g(x,a)>", "<g(a,x)>"}, "state set");
    OracleReport r = check_pattern_automaton(e, eb.signature(), 4);
    double secs = seconds_since(t0);
    o.require(r.pass(), "no disagreements");
    o.require(secs < 5.0, "under 5 s");
    std::ostringstream s;
    s << r.summary() << " in " << secs << " s";
    o.note(s.str());
  });

  report(4, "A_NF agrees with the no-redex-no-# test to depth 4", [&](Outcome& o) {
    OracleReport r = check_nf_automaton(e, 4);
    o.require(r.pass(), "no disagreements");
    o.require(r.checked >= 600, "at least 600 terms");
    // Spot-check the automaton against the local predicate as well.
    TreeAutomaton nf = build_nf_automaton(e);
    std::size_t local = 0, mismatch = 0;
    for (const Term& t : enumerate_terms(extend_bullet(e).signature(), 3)) {
      ++local;
      if (nf.accepts(t) != no_redex_no_bullet(e, t)) ++mismatch;
    }
    o.require(mismatch == 0, "local predicate agreement at depth 3");
    o.note(r.summary() + "; local check " + std::to_string(local) + " terms");
  });

  report(5, "saturation: C sound and complete for s, nv, g at depth 3; backward closure", [&](Outcome& o) {
    ReachCaps caps;
    caps.max_term_size = 14;
    caps.max_steps = 10;
    const Signature g = extend_bullet(e).signature();
    auto nf = [&](const Term& t) { return no_redex_no_bullet(e, t); };
    for (Approx a : kApprox) {
      NfAnalyzer an(e, a);
      OracleReport s = check_c_soundness(an.approximated(), an.c(), nf, g, 3, caps);
      OracleReport b = check_backward_closure(an.approximated(), an.c(), g, 3, caps);
      o.require(s.pass(), "soundness " + to_string(a));
      o.require(b.pass(), "backward closure " + to_string(a));
      o.note(s.summary() + " [" + to_string(a) + "]");
      o.note(b.summary() + " [" + to_string(a) + "]");
    }
  });

  report(6, "D characterization at depth 3; pruned and exhaustive emptiness agree on the catalog", [&](Outcome& o) {
    for (Approx a : kApprox) {
      OracleReport r = check_d_characterization(e, a, 3);
      o.require(r.pass(), "example " + to_string(a));
      o.note(r.summary() + " [example]");
    }
    OracleReport ab = check_d_characterization(load("a_to_b.trs"), Approx::S, 3);
    o.require(ab.pass(), "a_to_b");
    o.note(ab.summary() + " [a_to_b]");
    for (const std::string& f : kLeftLinear) {
      Trs t = load(f);
      for (Approx a : kApprox) {
        NfAnalyzer p(t, a), x(t, a);
        bool vp = p.decide(ExploreMode::pruned).in_class;
        bool vx = x.decide(ExploreMode::exhaustive).in_class;
        o.require(vp == vx, f + " " + to_string(a) + " pruned vs exhaustive");
      }
    }
    o.note("pruned/exhaustive agreement on " + std::to_string(kLeftLinear.size()) + " systems x 3 approximations");
  });

  report(7, "Berry system NOT IN CLASS for s with validated witness; a -> b IN CLASS for all", [&](Outcome& o) {
    Trs berry = load("berry.trs");
    Trs bs = approximate(berry, Approx::S);
    // Oracle first: f(c,c,c) has no s-needed redex.
    Term fccc = parse(berry, "f(c,c,c)");
    bool oracle_no_needed = has_redex(berry, fccc);
    for (const Position& p : independent_redexes(berry, fccc))
      oracle_no_needed = oracle_no_needed && variant_normalizes(berry, bs, fccc, p) == Reach::yes;
    o.require(oracle_no_needed, "search confirms f(c,c,c) has no s-needed redex");

    Verdict v = decide_cbn_nf(berry, Approx::S);
    o.require(!v.in_class, "s verdict NOT IN CLASS");
    if (v.witness) {
      o.note("witness " + v.witness->str());
      bool valid = has_redex(berry, *v.witness);
      for (const Position& p : independent_redexes(berry, *v.witness))
        valid = valid && variant_normalizes(berry, bs, *v.witness, p) == Reach::yes;
      o.require(valid, "witness validated by search");
    }

    Trs ab = load("a_to_b.trs");
    for (Approx a : kApprox) {
      o.require(decide_cbn_nf(ab, a).in_class, "a_to_b " + to_string(a));
      Trs approx = approximate(ab, a);
      for (const Term& t : enumerate_terms(ab.signature(), 3)) {
        if (!has_redex(ab, t)) continue;
        bool some_needed = false;
        for (const Position& p : independent_redexes(ab, t))
          some_needed = some_needed || variant_normalizes(ab, approx, t, p) == Reach::no;
        o.require(some_needed, "search finds a needed redex in " + t.str() + " under " + to_string(a));
      }
    }
  });

  report(8, "D' characterization at depth 3 for a -> b (s,s) and the example (g,g)", [&](Outcome& o) {
    const Trs ab = load("a_to_b.trs");
    OracleReport r1 = check_dprime_characterization(ab, Approx::S, Approx::S, 3);
    OracleReport r2 = check_dprime_characterization(e, Approx::G, Approx::G, 3);
    o.require(r1.pass(), "a_to_b (s,s)");
    o.require(r2.pass(), "example (g,g)");
    o.note(r1.summary());
    o.note(r2.summary());
    for (auto [t, a, b] : {std::tuple{&ab, Approx::S, Approx::S}, std::tuple{&e, Approx::G, Approx::G},
                           std::tuple{&e, Approx::S, Approx::S}}) {
      RsAnalyzer an(*t, a, b);
      Verdict v = an.decide();
      std::string tag = to_string(a) + "," + to_string(b);
      o.note(tag + ": " + (v.in_class ? "IN CLASS" : "NOT IN CLASS, witness " + v.witness->str()));
      if (v.witness) o.require(an.characterization(*v.witness), "witness re-validates (" + tag + ")");
    }
  });

  report(9, "determinism: repeated CLI runs give identical output", [&](Outcome& o) {
    std::size_t runs = 0;
    for (const std::string& f : kCatalogFiles) {
      std::string path = shell_quote(std::string(kCatalog) + "/" + f);
      std::vector<std::string> cmds;
      for (const char* a : {"s", "nv", "g"}) {
        cmds.push_back("check " + path + " --approx " + a + " --stats --json");
        cmds.push_back("check " + path + " --class rs --approx-a " + a + " --approx-b " + a + " --stats");
        cmds.push_back("analyze " + path + " --approx " + a + " --term " + shell_quote(sample_term(f)));
        cmds.push_back("normalize " + path + " --approx " + a + " --term " + shell_quote(sample_term(f)));
      }
      cmds.push_back("analyze " + path + " --root --term " + shell_quote(sample_term(f)));
      for (const char* w : {"b", "nf", "redex", "rs", "c", "cprime", "d", "dprime"})
        cmds.push_back("dump-automaton " + path + " --which " + w + " --explore");
      cmds.push_back("selfcheck " + path + " --depth 2");
      for (const std::string& c : cmds) {
        std::string first = strip_times(run_cli(c));
        std::string second = strip_times(run_cli(c));
        ++runs;
        o.require(first == second, "identical output for: cbn " + c);
      }
    }
    o.note(std::to_string(runs) + " commands run twice");
  });

  report(10, "resources: saturation terminates and exploration stays under 1e5 pair states", [&](Outcome& o) {
    std::size_t worst = 0, worst_rounds = 0;
    for (const std::string& f : kLeftLinear) {
      Trs t = load(f);
      for (Approx a : kApprox) {
        NfAnalyzer an(t, a);
        Verdict v = an.decide(ExploreMode::pruned, 100000);
        NfMetrics m = an.metrics();
        worst = std::max(worst, v.stats.pair_states);
        worst_rounds = std::max(worst_rounds, m.saturation.rounds);
        o.require(m.saturation.rounds >= 1, f + " saturation rounds reported");
        o.require(v.stats.pair_states > 0 && v.stats.pair_states < 100000, f + " pair states");
        for (Approx b : kApprox) {
          RsAnalyzer rs(t, a, b);
          Verdict vr = rs.decide(ExploreMode::pruned, 100000);
          worst = std::max(worst, vr.stats.pair_states);
          worst_rounds = std::max(worst_rounds, rs.metrics().rs_saturation.rounds);
          o.require(vr.stats.pair_states > 0 && vr.stats.pair_states < 100000, f + " rs pair states");
        }
      }
    }
    o.note("max pair states " + std::to_string(worst) + ", max saturation rounds " + std::to_string(worst_rounds));
  });

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << "\n";
  return failures == 0 ? 0 : 1;
}
