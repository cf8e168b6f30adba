#include "cbn/oracle.hpp"

#include <algorithm>
#include <sstream>

#include "cbn/error.hpp"
#include "cbn/recognizers.hpp"

namespace cbn {

// ---------------------------------------------------------------------------
// Enumeration

void for_each_term(const Signature& sig, unsigned depth,
                   const std::function<void(const Term&, std::span<const std::size_t> children)>& fn) {
  if (depth == 0) return;
  // Materialized terms of height < depth with their visit index and height.
  std::vector<Term> stored;
  std::vector<unsigned> height;
  std::size_t visited = 0;

  for (Symbol c : sig.symbols()) {
    if (c.arity() != 0) continue;
    Term t = Term::constant(c);
    fn(t, {});
    if (depth > 1) {
      stored.push_back(t);
      height.push_back(1);
    }
    ++visited;
  }
  for (unsigned h = 2; h <= depth; ++h) {
    const std::size_t pool = stored.size();  // all terms of height < h
    for (Symbol f : sig.symbols()) {
      const unsigned n = f.arity();
      if (n == 0 || pool == 0) continue;
      std::vector<std::size_t> idx(n, 0);
      std::vector<Term> args(n);
      for (;;) {
        bool top = false;
        for (unsigned i = 0; i < n; ++i) top = top || height[idx[i]] == h - 1;
        if (top) {
          for (unsigned i = 0; i < n; ++i) args[i] = stored[idx[i]];
          Term t = Term::app(f, args);
          fn(t, idx);
          if (h < depth) {
            stored.push_back(std::move(t));
            height.push_back(h);
          }
          ++visited;
        }
        int i = static_cast<int>(n) - 1;
        while (i >= 0 && ++idx[i] == pool) idx[i--] = 0;
        if (i < 0) break;
      }
    }
  }
}

std::vector<Term> enumerate_terms(const Signature& sig, unsigned depth) {
  std::vector<Term> out;
  for_each_term(sig, depth, [&](const Term& t, std::span<const std::size_t>) { out.push_back(t); });
  return out;
}

std::optional<std::uint64_t> count_terms(const Signature& sig, unsigned depth) {
  unsigned __int128 n = 0;
  const unsigned __int128 limit = ~std::uint64_t{0};
  for (unsigned d = 1; d <= depth; ++d) {
    unsigned __int128 next = 0;
    for (Symbol f : sig.symbols()) {
      unsigned __int128 p = 1;
      for (unsigned i = 0; i < f.arity(); ++i) {
        p *= n;
        if (p > limit) return std::nullopt;
      }
      next += p;
      if (next > limit) return std::nullopt;
    }
    n = next;
  }
  return static_cast<std::uint64_t>(n);
}

// ---------------------------------------------------------------------------
// Bounded rewriting

namespace {

struct Searcher {
  const Trs& trs;
  const ReachCaps& caps;
  Trs fresh_rules;
  std::vector<Term> pool;

  Searcher(const Trs& t, const ReachCaps& c) : trs(t), caps(c) {
    std::vector<Rule> fresh;
    for (const Rule& r : trs.rules()) {
      auto lv = variables(r.lhs);
      for (const std::string& x : variables(r.rhs))
        if (std::find(lv.begin(), lv.end(), x) == lv.end()) {
          fresh.push_back(r);
          break;
        }
    }
    if (!fresh.empty()) {
      fresh_rules = Trs(trs.signature(), fresh);
      pool = enumerate_terms(trs.signature().without_bullet().without_circled(), caps.instantiation_depth);
    }
  }

  /// Returns true as soon as `on_new` returns true.
  bool run(const Term& t, std::unordered_set<Term, TermHash>& seen, bool& saturated,
           const std::function<bool(const Term&)>& on_new) {
    seen.insert(t);
    if (on_new(t)) return true;
    std::vector<Term> frontier{t};
    for (std::size_t step = 0; step < caps.max_steps && !frontier.empty(); ++step) {
      std::vector<Term> next;
      for (const Term& u : frontier) {
        if (!fresh_rules.rules().empty() && is_reducible(fresh_rules, u)) saturated = false;
        for (Term& v : rewrite_step(trs, u, pool)) {
          if (v.size() > caps.max_term_size) {
            saturated = false;
            continue;
          }
          if (!seen.insert(v).second) continue;
          if (on_new(v)) return true;
          if (seen.size() > caps.max_frontier) {
            saturated = false;
            return false;
          }
          next.push_back(std::move(v));
        }
      }
      frontier = std::move(next);
    }
    if (!frontier.empty()) saturated = false;
    return false;
  }
};

}  // namespace

ReachResult bounded_reach(const Trs& trs, const Term& t, const ReachCaps& caps) {
  ReachResult r;
  Searcher s(trs, caps);
  s.run(t, r.terms, r.saturated, [](const Term&) { return false; });
  return r;
}

Reach reaches(const Trs& trs, const Term& t, const std::function<bool(const Term&)>& goal, const ReachCaps& caps) {
  std::unordered_set<Term, TermHash> seen;
  bool saturated = true;
  Searcher s(trs, caps);
  if (s.run(t, seen, saturated, goal)) return Reach::yes;
  return saturated ? Reach::no : Reach::unknown;
}

bool is_normal_form(const Trs& trs, const Term& t) { return bullet_free(t) && !is_reducible(trs, t); }

// ---------------------------------------------------------------------------
// Reports

void OracleReport::merge(const OracleReport& other) {
  checked += other.checked;
  agreements += other.agreements;
  inconclusive += other.inconclusive;
  disagreements.insert(disagreements.end(), other.disagreements.begin(), other.disagreements.end());
}

std::string OracleReport::summary() const {
  std::ostringstream out;
  out << name << ": checked " << checked << ", agree " << agreements << ", inconclusive " << inconclusive
      << ", disagree " << disagreements.size();
  return out.str();
}

namespace {

const char* yes_no(bool b) { return b ? "yes" : "no"; }

void record(OracleReport& rep, const Term& t, bool expected, bool got, const char* what) {
  ++rep.checked;
  if (expected == got) {
    ++rep.agreements;
  } else {
    rep.disagreements.push_back({t, std::string(what) + " " + yes_no(expected), std::string(what) + " " + yes_no(got)});
  }
}

}  // namespace

OracleReport check_pattern_automaton(const Trs& trs, const Signature& sig, unsigned depth) {
  OracleReport rep;
  rep.name = "pattern automaton";
  PatternAutomaton b = build_pattern_automaton(trs, sig);
  std::vector<StateSet> runs;
  for_each_term(sig, depth, [&](const Term& s, std::span<const std::size_t> kids) {
    std::vector<StateSet> args;
    for (std::size_t k : kids) args.push_back(runs[k]);
    StateSet here = b.automaton.step(s.symbol(), args);
    bool all_ok = true;
    for (const auto& [pattern, q] : b.states) {
      bool expected = match_pattern(pattern, s).has_value();
      bool got = here.contains(q);
      if (expected != got) {
        all_ok = false;
        rep.disagreements.push_back({s, "instance of " + pattern.str() + ": " + yes_no(expected),
                                     "reaches " + b.automaton.label(q).str() + ": " + yes_no(got)});
      }
    }
    ++rep.checked;
    if (all_ok) ++rep.agreements;
    runs.push_back(s.height() < depth ? std::move(here) : StateSet{});
  });
  return rep;
}

OracleReport check_nf_automaton(const Trs& trs, unsigned depth) {
  OracleReport rep;
  rep.name = "normal-form automaton";
  TreeAutomaton nf = build_nf_automaton(trs);
  std::vector<StateSet> runs;
  std::vector<bool> normal;
  for_each_term(nf.signature(), depth, [&](const Term& s, std::span<const std::size_t> kids) {
    std::vector<StateSet> args;
    bool expected = !s.symbol().is_bullet();
    for (std::size_t k : kids) {
      args.push_back(runs[k]);
      expected = expected && normal[k];
    }
    expected = expected && !is_redex(trs, s);
    StateSet here = nf.step(s.symbol(), args);
    record(rep, s, expected, here.intersects(nf.finals()), "normal form");
    bool keep = s.height() < depth;
    runs.push_back(keep ? std::move(here) : StateSet{});
    normal.push_back(keep && expected);
  });
  return rep;
}

OracleReport check_c_soundness(const Trs& trs_approx, const TreeAutomaton& c,
                               const std::function<bool(const Term&)>& base_lang, const Signature& sig,
                               unsigned depth, const ReachCaps& caps) {
  OracleReport rep;
  rep.name = "saturation";
  for (const Term& t : enumerate_terms(sig, depth)) {
    bool acc = c.accepts(t);
    Reach r = reaches(trs_approx, t, base_lang, caps);
    ++rep.checked;
    if (r == Reach::yes && !acc) {
      rep.disagreements.push_back({t, "reaches the base language, accepted", "rejected"});
    } else if (r == Reach::no && acc) {
      rep.disagreements.push_back({t, "cannot reach the base language, rejected", "accepted"});
    } else if (r == Reach::unknown && acc) {
      ++rep.inconclusive;
    } else {
      ++rep.agreements;
    }
  }
  return rep;
}

OracleReport check_backward_closure(const Trs& trs_approx, const TreeAutomaton& c, const Signature& sig,
                                    unsigned depth, const ReachCaps& caps) {
  OracleReport rep;
  rep.name = "backward closure";
  std::vector<Term> pool;
  bool fresh = std::any_of(trs_approx.rules().begin(), trs_approx.rules().end(), [](const Rule& r) {
    auto lv = variables(r.lhs);
    auto rv = variables(r.rhs);
    return std::any_of(rv.begin(), rv.end(),
                       [&](const std::string& x) { return std::find(lv.begin(), lv.end(), x) == lv.end(); });
  });
  if (fresh)
    pool = enumerate_terms(trs_approx.signature().without_bullet().without_circled(), caps.instantiation_depth);
  for (const Term& s : enumerate_terms(sig, depth)) {
    bool acc = c.accepts(s);
    for (const Term& v : rewrite_step(trs_approx, s, pool)) {
      ++rep.checked;
      if (c.accepts(v) && !acc)
        rep.disagreements.push_back({s, "accepted (reduct " + v.str() + " is accepted)", "rejected"});
      else
        ++rep.agreements;
    }
  }
  return rep;
}

namespace {

template <class Analyzer>
OracleReport characterization_report(const Analyzer& an, const PairEngine& engine, unsigned depth,
                                     const std::string& name) {
  OracleReport rep;
  rep.name = name;
  for (const Term& t : enumerate_terms(an.original().signature(), depth)) {
    bool expected = an.characterization(t);
    ++rep.checked;
    try {
      bool exhaustive = engine.accepts(t, ExploreMode::exhaustive);
      bool pruned = engine.accepts(t, ExploreMode::pruned);
      if (exhaustive != expected)
        rep.disagreements.push_back({t, std::string("characterization ") + yes_no(expected),
                                     std::string("exhaustive run ") + yes_no(exhaustive)});
      else if (pruned != expected)
        rep.disagreements.push_back({t, std::string("characterization ") + yes_no(expected),
                                     std::string("pruned run ") + yes_no(pruned)});
      else
        ++rep.agreements;
    } catch (const ResourceLimit&) {
      ++rep.inconclusive;
    }
  }
  return rep;
}

}  // namespace

OracleReport check_d_characterization(const NfAnalyzer& analyzer, unsigned depth) {
  return characterization_report(analyzer, analyzer.engine(), depth,
                                 "D characterization (" + to_string(analyzer.approx()) + ")");
}

OracleReport check_d_characterization(const Trs& trs, Approx a, unsigned depth) {
  NfAnalyzer an(trs, a);
  return check_d_characterization(an, depth);
}

OracleReport check_dprime_characterization(const RsAnalyzer& analyzer, unsigned depth) {
  return characterization_report(analyzer, analyzer.engine(), depth, "D' characterization");
}

OracleReport check_dprime_characterization(const Trs& trs, Approx a, Approx b, unsigned depth) {
  RsAnalyzer an(trs, a, b);
  OracleReport rep = check_dprime_characterization(an, depth);
  rep.name = "D' characterization (" + to_string(a) + "," + to_string(b) + ")";
  return rep;
}

OracleReport check_rs_automaton(const RsAnalyzer& analyzer, unsigned depth, const ReachCaps& caps) {
  OracleReport rep;
  rep.name = "root-stable automaton";
  const Trs& circled = analyzer.rs_construction().circled;
  const TreeAutomaton& rs = analyzer.rs_automaton();
  auto is_root_redex = [&](const Term& u) { return is_redex(circled, u); };
  for (const Term& t : enumerate_terms(circled.signature(), depth)) {
    bool acc = rs.accepts(t);
    Reach r = reaches(circled, t, is_root_redex, caps);
    ++rep.checked;
    if (r == Reach::yes && acc)
      rep.disagreements.push_back({t, "reaches a redex, not root-stable", "accepted as root-stable"});
    else if (r == Reach::no && !acc)
      rep.disagreements.push_back({t, "root-stable", "rejected"});
    else if (r == Reach::unknown && !acc)
      ++rep.inconclusive;
    else
      ++rep.agreements;
  }
  return rep;
}

std::vector<OracleReport> selfcheck(const Trs& trs, const SelfcheckOptions& opts) {
  std::vector<OracleReport> out;
  Trs bulleted = extend_bullet(trs);
  out.push_back(check_pattern_automaton(trs, bulleted.signature(), opts.depth));
  out.push_back(check_nf_automaton(trs, opts.depth));
  auto nf = [&](const Term& t) { return is_normal_form(trs, t); };
  for (Approx a : {Approx::S, Approx::NV, Approx::G}) {
    NfAnalyzer an(trs, a);
    const TreeAutomaton& c = opts.inject_fault ? an.base() : an.c();
    OracleReport sat = check_c_soundness(an.approximated(), c, nf, bulleted.signature(), opts.depth, opts.caps);
    sat.name += " (" + to_string(a) + ")";
    out.push_back(std::move(sat));
    OracleReport back = check_backward_closure(an.approximated(), c, bulleted.signature(), opts.depth, opts.caps);
    back.name += " (" + to_string(a) + ")";
    out.push_back(std::move(back));
    out.push_back(check_d_characterization(an, opts.depth));
  }
  return out;
}

}  // namespace cbn
