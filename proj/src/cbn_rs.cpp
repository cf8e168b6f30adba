#include "cbn/cbn_rs.hpp"

#include "cbn/error.hpp"

namespace cbn {

Term circle_root(const Term& t) {
  if (t.is_var()) throw TrsError("cannot circle a variable");
  return Term::app(t.symbol().circled(), {t.args().begin(), t.args().end()});
}

RsAnalyzer::RsAnalyzer(const Trs& trs, Approx alpha, Approx beta, SaturationMode mode) : original_(trs) {
  if (!trs.left_linear()) throw TrsError("root-neededness analysis requires a left-linear rewrite system");
  r_ = approximate(trs, alpha);
  s_ = approximate(trs, beta);
  rs_ = build_rs_construction(s_);
  const Signature& g = rs_.rs.signature();

  // (→*_{R_α})[RS_{S@}]
  PatternAutomaton b = build_pattern_automaton(r_, g);
  b.automaton.set_scope("B");
  auto b_offset = static_cast<StateId>(rs_.rs.state_count());
  SaturationResult sat = saturate(disjoint_union(rs_.rs, b.automaton), r_, b.shifted(b_offset), mode);
  c_rs_ = std::move(sat.automaton);
  rs_sat_ = sat.stats;

  // Non-root-stable terms of R_β.
  RedexAutomaton redex = build_redex_automaton(s_, false, g);
  redex.automaton.set_scope("redex");
  PatternAutomaton bs = build_pattern_automaton(s_, g);
  bs.automaton.set_scope("Bs");
  auto bs_offset = static_cast<StateId>(redex.automaton.state_count());
  SaturationResult rsat = saturate(disjoint_union(redex.automaton, bs.automaton), s_, bs.shifted(bs_offset), mode);
  c_redex_ = std::move(rsat.automaton);
  redex_sat_ = rsat.stats;

  RedexDetection det = extend_with_redex_detection(c_rs_, r_, b.x_state + b_offset, false);
  auto redex_offset = static_cast<StateId>(det.automaton.state_count());
  cprime_ = disjoint_union(det.automaton, c_redex_);

  PairSpec spec;
  spec.automaton = &cprime_;
  spec.signature = trs.signature();
  spec.p_finals = c_rs_.finals();
  c_redex_.finals().for_each([&](StateId q) { spec.s_finals.insert(q + redex_offset); });
  for (std::size_t i = 0; i < r_.rules().size(); ++i) spec.patterns.push_back({r_.rules()[i].lhs.symbol(), det.lhs_primed[i]});
  spec.marker = PairSpec::Marker::circled;
  spec.x_state = det.x_state;
  engine_ = std::make_unique<PairEngine>(std::move(spec));
}

std::vector<Evidence> RsAnalyzer::evidence(const Term& t) const {
  std::vector<Evidence> out;
  for (const Position& p : redex_positions(original_, t)) {
    Term v = replace_at(t, p, circle_root(subterm_at(t, p)));
    out.push_back({p, v, c_rs_.accepts(v)});
  }
  return out;
}

bool RsAnalyzer::characterization(const Term& t) const {
  if (!non_root_stable(t)) return false;
  for (const Evidence& e : evidence(t))
    if (!e.accepted) return false;
  return true;
}

Verdict RsAnalyzer::decide(ExploreMode mode, std::size_t max_states) {
  ExploreResult r = engine_->explore(mode, max_states, true);
  Verdict v;
  v.stats = r.stats;
  if (!r.found_final) return v;
  v.in_class = false;
  v.witness = r.witness;
  v.evidence = evidence(*r.witness);
  if (!characterization(*r.witness))
    throw ValidationError("witness " + r.witness->str() + " fails the direct root-neededness check");
  return v;
}

std::vector<NeededRedex> RsAnalyzer::root_needed_redexes(const Term& t) const {
  for (const Position& p : positions(t)) {
    const Term& s = subterm_at(t, p);
    if (s.is_var()) throw TrsError("expected a ground term, got variable " + s.var_name());
    if (!original_.signature().contains(s.symbol()))
      throw TrsError("symbol '" + s.symbol().str() + "' is not in the signature");
  }
  std::vector<NeededRedex> out;
  for (const Evidence& e : evidence(t)) out.push_back({e.position, !e.accepted});
  return out;
}

RsMetrics RsAnalyzer::metrics() const {
  RsMetrics m;
  m.rs_states = rs_.rs.state_count();
  m.redex_closure_states = rs_.redex_closure.state_count();
  m.c_rs_states = c_rs_.state_count();
  m.c_redex_states = c_redex_.state_count();
  m.cprime_states = cprime_.state_count();
  m.cprime_rules = cprime_.rules().size();
  m.rs_saturation = rs_sat_;
  m.redex_saturation = redex_sat_;
  m.inner_saturation_rounds = rs_.saturation_rounds;
  return m;
}

Verdict decide_cbn_rs(const Trs& trs, Approx alpha, Approx beta, ExploreMode mode, std::size_t max_states) {
  RsAnalyzer an(trs, alpha, beta);
  return an.decide(mode, max_states);
}

std::vector<NeededRedex> root_needed_redexes(const Trs& trs, Approx alpha, Approx beta, const Term& t) {
  RsAnalyzer an(trs, alpha, beta);
  return an.root_needed_redexes(t);
}

}  // namespace cbn
