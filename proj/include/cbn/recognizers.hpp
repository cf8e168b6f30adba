#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cbn/automaton.hpp"
#include "cbn/trs.hpp"

namespace cbn {

/// A_R (lhs arguments) and S_R (their subterms), both as canonical
/// representatives modulo variable renaming. Variables collapse to "x".
struct PatternIndex {
  std::vector<Term> lhs_arguments;
  std::vector<Term> subterms;  // includes x; ordered by height, then text
};

PatternIndex pattern_index(const Trs& trs);

/// Canonical pattern -> state.
using PatternStates = std::map<Term, StateId>;

/// B(R) together with the states it introduced.
struct PatternAutomaton {
  TreeAutomaton automaton;
  PatternStates states;
  StateId x_state = 0;

  /// Shifts every recorded state id by `offset` (after a disjoint union that
  /// placed this automaton second).
  PatternStates shifted(StateId offset) const;
};

/// Matching and propagation rules over `sig` (defaults to the TRS signature).
/// Requires a left-linear TRS.
PatternAutomaton build_pattern_automaton(const Trs& trs, const std::optional<Signature>& sig = std::nullopt);

struct RedexAutomaton {
  TreeAutomaton automaton;
  PatternStates states;
  StateId x_state = 0;
  StateId sink = 0;  // q_f (redex automaton) or q_r (reducible automaton)
};

/// B(R) plus a final q_f reached by every lhs instance. With `circled`, each
/// plain lhs root also gets its circled copy f@(<l1>,...,<ln>) -> q_f, which
/// requires the circled symbols in `sig`.
RedexAutomaton build_redex_automaton(const Trs& trs, bool circled, const std::optional<Signature>& sig = std::nullopt);

/// Redex automaton with the sink named q_r plus contagion rules
/// f(<x>,...,q_r,...,<x>) -> q_r; accepts the reducible ground terms.
RedexAutomaton build_reducible_automaton(const Trs& trs, const std::optional<Signature>& sig = std::nullopt);

/// Deterministic complete automaton over F ∪ {#} accepting the ground normal
/// forms of R_bullet. `trs` may be R or R_bullet.
TreeAutomaton build_nf_automaton(const Trs& trs);

/// C' = C plus a primed copy of B(R) (with <x>' identified with `x_state`),
/// and, if `with_sink`, q_r with lhs and contagion rules.
struct RedexDetection {
  TreeAutomaton automaton;
  std::optional<StateId> q_r;
  StateId x_state = 0;
  PatternStates primed;
  /// Per rule of the TRS, the primed states of its lhs arguments.
  std::vector<std::vector<StateId>> lhs_primed;
};

RedexDetection extend_with_redex_detection(const TreeAutomaton& c, const Trs& trs, StateId x_state,
                                           bool with_sink = true);

/// Root-stable ground terms of S° over F ∪ F°, for a linear growing S over F.
TreeAutomaton build_rs_automaton(const Trs& s_trs);

/// Intermediate products of build_rs_automaton, kept for dumps and metrics.
struct RsConstruction {
  Trs circled;                  // S°
  TreeAutomaton redex_closure;  // saturated A_REDEX(S°) ∪ B(S°); final q_f
  std::size_t saturation_rounds = 0;
  std::size_t saturation_rules_added = 0;
  TreeAutomaton rs;             // subsets of redex_closure without q_f are final
};

RsConstruction build_rs_construction(const Trs& s_trs);

}  // namespace cbn
