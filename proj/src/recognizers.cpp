#include "cbn/recognizers.hpp"

#include <algorithm>
#include <set>

#include "cbn/error.hpp"
#include "cbn/saturation.hpp"

namespace cbn {

namespace {

const Term& var_x() {
  static const Term x = Term::var("x");
  return x;
}

void collect_subterms(const Term& t, std::set<Term>& out) {
  out.insert(canonical_pattern(t));
  if (t.is_var()) return;
  for (const Term& a : t.args()) collect_subterms(a, out);
}

void require_left_linear(const Trs& trs, const char* what) {
  if (!trs.left_linear()) throw TrsError(std::string(what) + " requires a left-linear rewrite system");
}

StateId lookup(const PatternStates& states, const Term& t) {
  auto it = states.find(canonical_pattern(t));
  if (it == states.end()) throw AutomatonError("no pattern state for " + t.str());
  return it->second;
}

}  // namespace

PatternIndex pattern_index(const Trs& trs) {
  PatternIndex idx;
  std::set<Term> subs;
  for (const Rule& r : trs.rules()) {
    for (const Term& a : r.lhs.args()) {
      Term c = canonical_pattern(a);
      if (std::find(idx.lhs_arguments.begin(), idx.lhs_arguments.end(), c) == idx.lhs_arguments.end())
        idx.lhs_arguments.push_back(c);
      collect_subterms(a, subs);
    }
  }
  subs.erase(var_x());
  idx.subterms.push_back(var_x());
  std::vector<Term> rest(subs.begin(), subs.end());
  std::stable_sort(rest.begin(), rest.end(), [](const Term& a, const Term& b) {
    if (a.height() != b.height()) return a.height() < b.height();
    return a.str() < b.str();
  });
  idx.subterms.insert(idx.subterms.end(), rest.begin(), rest.end());
  return idx;
}

PatternStates PatternAutomaton::shifted(StateId offset) const {
  PatternStates out;
  for (const auto& [t, q] : states) out.emplace(t, q + offset);
  return out;
}

PatternAutomaton build_pattern_automaton(const Trs& trs, const std::optional<Signature>& sig) {
  require_left_linear(trs, "the pattern automaton");
  PatternAutomaton out{TreeAutomaton(sig.value_or(trs.signature())), {}, 0};
  PatternIndex idx = pattern_index(trs);
  for (const Term& t : idx.subterms) out.states.emplace(t, out.automaton.add_state(StateLabel::pattern_class(t)));
  out.x_state = out.states.at(var_x());
  for (const Term& t : idx.subterms) {
    if (t.is_var()) continue;
    std::vector<StateId> ch;
    for (const Term& a : t.args()) ch.push_back(lookup(out.states, a));
    out.automaton.add_rule(t.symbol(), std::move(ch), out.states.at(t));
  }
  for (Symbol f : out.automaton.signature().symbols())
    out.automaton.add_rule(f, std::vector<StateId>(f.arity(), out.x_state), out.x_state);
  return out;
}

namespace {

RedexAutomaton redex_core(const Trs& trs, bool circled, const std::optional<Signature>& sig, StateLabel sink_label) {
  PatternAutomaton b = build_pattern_automaton(trs, sig);
  RedexAutomaton out{std::move(b.automaton), std::move(b.states), b.x_state, 0};
  out.sink = out.automaton.add_state(std::move(sink_label), true);
  for (const Rule& r : trs.rules()) {
    std::vector<StateId> ch;
    for (const Term& a : r.lhs.args()) ch.push_back(lookup(out.states, a));
    out.automaton.add_rule(r.lhs.symbol(), ch, out.sink);
    if (circled && r.lhs.symbol().decoration() == Decoration::plain) {
      Symbol fc = r.lhs.symbol().circled();
      if (!out.automaton.signature().contains(fc))
        throw AutomatonError("circled redex automaton needs '" + fc.str() + "' in its signature");
      out.automaton.add_rule(fc, ch, out.sink);
    }
  }
  return out;
}

}  // namespace

RedexAutomaton build_redex_automaton(const Trs& trs, bool circled, const std::optional<Signature>& sig) {
  require_left_linear(trs, "the redex automaton");
  return redex_core(trs, circled, sig, StateLabel::redex_final());
}

RedexAutomaton build_reducible_automaton(const Trs& trs, const std::optional<Signature>& sig) {
  require_left_linear(trs, "the reducible-term automaton");
  RedexAutomaton out = redex_core(trs, false, sig, StateLabel::redex_sink());
  for (Symbol f : out.automaton.signature().symbols()) {
    for (unsigned i = 0; i < f.arity(); ++i) {
      std::vector<StateId> ch(f.arity(), out.x_state);
      ch[i] = out.sink;
      out.automaton.add_rule(f, std::move(ch), out.sink);
    }
  }
  return out;
}

TreeAutomaton build_nf_automaton(const Trs& trs) {
  require_left_linear(trs, "the normal-form automaton");
  Trs bulleted = extend_bullet(trs);
  RedexAutomaton reducible = build_reducible_automaton(bulleted);
  TreeAutomaton nf = trim_accessible(complement_finals(determinize_complete(reducible.automaton))).automaton;
  nf.set_scope("nf");
  return nf;
}

RedexDetection extend_with_redex_detection(const TreeAutomaton& c, const Trs& trs, StateId x_state, bool with_sink) {
  require_left_linear(trs, "redex detection");
  if (x_state >= c.state_count() || c.label(x_state).kind != StateLabel::Kind::pattern ||
      c.label(x_state).pattern != var_x())
    throw AutomatonError("redex detection needs the <x> state of the embedded pattern automaton");

  RedexDetection out{c, std::nullopt, x_state, {}, {}};
  TreeAutomaton& aut = out.automaton;
  PatternIndex idx = pattern_index(trs);
  out.primed.emplace(var_x(), x_state);
  for (const Term& t : idx.subterms)
    if (!t.is_var()) out.primed.emplace(t, aut.add_state(StateLabel::primed_pattern(t)));
  for (const Term& t : idx.subterms) {
    if (t.is_var()) continue;
    std::vector<StateId> ch;
    for (const Term& a : t.args()) ch.push_back(lookup(out.primed, a));
    aut.add_rule(t.symbol(), std::move(ch), out.primed.at(t));
  }
  for (const Rule& r : trs.rules()) {
    std::vector<StateId> ch;
    for (const Term& a : r.lhs.args()) ch.push_back(lookup(out.primed, a));
    out.lhs_primed.push_back(ch);
  }
  if (with_sink) {
    StateId q_r = aut.add_state(StateLabel::redex_sink());
    out.q_r = q_r;
    for (std::size_t i = 0; i < trs.rules().size(); ++i)
      aut.add_rule(trs.rules()[i].lhs.symbol(), out.lhs_primed[i], q_r);
    for (Symbol f : aut.signature().symbols()) {
      for (unsigned i = 0; i < f.arity(); ++i) {
        std::vector<StateId> ch(f.arity(), x_state);
        ch[i] = q_r;
        aut.add_rule(f, std::move(ch), q_r);
      }
    }
  }
  return out;
}

RsConstruction build_rs_construction(const Trs& s_trs) {
  if (!s_trs.linear() || !s_trs.growing())
    throw TrsError("the root-stable automaton requires a linear growing rewrite system");
  RsConstruction out;
  out.circled = extend_circle(s_trs);
  const Signature& sig = out.circled.signature();
  RedexAutomaton redex = build_redex_automaton(out.circled, false, sig);
  redex.automaton.set_scope("redex");
  PatternAutomaton b = build_pattern_automaton(out.circled, sig);
  b.automaton.set_scope("B");
  auto offset = static_cast<StateId>(redex.automaton.state_count());
  TreeAutomaton base = disjoint_union(redex.automaton, b.automaton);
  SaturationResult sat = saturate(base, out.circled, b.shifted(offset));
  out.saturation_rounds = sat.stats.rounds;
  out.saturation_rules_added = sat.stats.rules_added;
  out.redex_closure = std::move(sat.automaton);
  out.rs = trim_accessible(complement_finals(determinize_complete(out.redex_closure))).automaton;
  out.rs.set_scope("rs");
  return out;
}

TreeAutomaton build_rs_automaton(const Trs& s_trs) { return build_rs_construction(s_trs).rs; }

}  // namespace cbn
