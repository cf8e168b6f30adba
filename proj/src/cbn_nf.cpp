#include "cbn/cbn_nf.hpp"

#include "cbn/error.hpp"

namespace cbn {

namespace {

void require_ground_input(const Signature& sig, const Term& t) {
  if (t.is_var()) throw TrsError("expected a ground term, got variable " + t.var_name());
  if (!sig.contains(t.symbol())) throw TrsError("symbol '" + t.symbol().str() + "' is not in the signature");
  for (const Term& a : t.args()) require_ground_input(sig, a);
}

}  // namespace

NfAnalyzer::NfAnalyzer(const Trs& trs, Approx approx, SaturationMode mode)
    : original_(trs), approx_(approx) {
  if (!trs.left_linear()) throw TrsError("call-by-need analysis requires a left-linear rewrite system");
  approx_trs_ = approximate(trs, approx);
  nf_ = build_nf_automaton(trs);
  b_ = build_pattern_automaton(approx_trs_, nf_.signature());
  b_.automaton.set_scope("B");
  auto offset = static_cast<StateId>(nf_.state_count());
  base_ = disjoint_union(nf_, b_.automaton);
  SaturationResult sat = saturate(base_, approx_trs_, b_.shifted(offset), mode);
  c_ = std::move(sat.automaton);
  sat_stats_ = sat.stats;
  cprime_ = extend_with_redex_detection(c_, approx_trs_, b_.x_state + offset, true);

  PairSpec spec;
  spec.automaton = &cprime_.automaton;
  spec.signature = trs.signature();
  spec.p_finals = c_.finals();
  spec.s_finals = StateSet::singleton(*cprime_.q_r);
  for (std::size_t i = 0; i < approx_trs_.rules().size(); ++i)
    spec.patterns.push_back({approx_trs_.rules()[i].lhs.symbol(), cprime_.lhs_primed[i]});
  spec.marker = PairSpec::Marker::bullet;
  spec.x_state = cprime_.x_state;
  engine_ = std::make_unique<PairEngine>(std::move(spec));
}

std::vector<Evidence> NfAnalyzer::evidence(const Term& t) const {
  std::vector<Evidence> out;
  Term hole = Term::constant(Symbol::bullet());
  for (const Position& p : redex_positions(original_, t)) {
    Term v = replace_at(t, p, hole);
    out.push_back({p, v, cprime_.automaton.accepts(v)});
  }
  return out;
}

bool NfAnalyzer::characterization(const Term& t) const {
  auto ev = evidence(t);
  if (ev.empty()) return false;
  for (const Evidence& e : ev)
    if (!e.accepted) return false;
  return true;
}

Verdict NfAnalyzer::decide(ExploreMode mode, std::size_t max_states) {
  ExploreResult r = engine_->explore(mode, max_states, true);
  Verdict v;
  v.stats = r.stats;
  if (!r.found_final) return v;
  v.in_class = false;
  v.witness = r.witness;
  v.evidence = evidence(*r.witness);
  if (!characterization(*r.witness))
    throw ValidationError("witness " + r.witness->str() + " fails the direct neededness check");
  return v;
}

std::vector<NeededRedex> NfAnalyzer::needed_redexes(const Term& t) const {
  require_ground_input(original_.signature(), t);
  std::vector<NeededRedex> out;
  for (const Evidence& e : evidence(t)) out.push_back({e.position, !e.accepted});
  return out;
}

NfMetrics NfAnalyzer::metrics() const {
  NfMetrics m;
  m.trs_size = original_.size();
  m.rule_count = original_.rule_count();
  m.max_arity = original_.signature().max_arity();
  m.nf_states = nf_.state_count();
  m.b_states = b_.automaton.state_count();
  m.c_states = c_.state_count();
  m.cprime_states = cprime_.automaton.state_count();
  m.c_rules = c_.rules().size();
  m.cprime_rules = cprime_.automaton.rules().size();
  m.saturation = sat_stats_;
  return m;
}

Verdict decide_cbn_nf(const Trs& trs, Approx a, ExploreMode mode, std::size_t max_states) {
  NfAnalyzer an(trs, a);
  return an.decide(mode, max_states);
}

std::vector<NeededRedex> needed_redexes(const Trs& trs, Approx a, const Term& t) {
  NfAnalyzer an(trs, a);
  return an.needed_redexes(t);
}

std::string to_string(NormalizeResult::Status s) {
  switch (s) {
    case NormalizeResult::Status::normal_form: return "normal form";
    case NormalizeResult::Status::fuel_exhausted: return "fuel exhausted";
    case NormalizeResult::Status::no_needed_redex: return "no needed redex";
  }
  return "?";
}

NormalizeResult normalize_by_need(const NfAnalyzer& analyzer, const Term& t, std::size_t fuel) {
  const Trs& trs = analyzer.original();
  NormalizeResult res{t, {}, NormalizeResult::Status::normal_form};
  for (;;) {
    auto needed = analyzer.needed_redexes(res.term);
    if (needed.empty()) return res;
    if (res.trace.size() >= fuel) {
      res.status = NormalizeResult::Status::fuel_exhausted;
      return res;
    }
    const NeededRedex* pick = nullptr;
    for (const NeededRedex& n : needed)
      if (n.needed) {
        pick = &n;
        break;
      }
    if (pick == nullptr) {
      res.status = NormalizeResult::Status::no_needed_redex;
      return res;
    }
    Term sub = subterm_at(res.term, pick->position);
    std::size_t rule = 0;
    while (!match_pattern(trs.rules()[rule].lhs, sub)) ++rule;
    res.term = contract(trs, res.term, pick->position, rule);
    res.trace.push_back({pick->position, rule, res.term});
  }
}

}  // namespace cbn
