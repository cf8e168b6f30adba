#pragma once

#include <cstddef>
#include <vector>

#include "cbn/automaton.hpp"
#include "cbn/recognizers.hpp"
#include "cbn/trs.hpp"

namespace cbn {

enum class SaturationMode {
  /// Re-examine a rewrite rule only when a transition was added for a symbol
  /// occurring in its rhs.
  semi_naive,
  /// Re-examine every rewrite rule in every round.
  naive,
};

struct SaturationStats {
  std::size_t rounds = 0;
  std::size_t rule_examinations = 0;
  std::size_t candidate_tests = 0;  // theta evaluations
  std::size_t rules_added = 0;
};

struct SaturationResult {
  TreeAutomaton automaton;
  SaturationStats stats;
};

/// Closes the transitions of `base` under
///
///   f(l1..ln) -> r in R,  r·theta ->* q   ⟹   f(q1..qn) -> q
///
/// with q_i = theta(l_i) if l_i is a variable of r, and <l_i> otherwise.
/// `patterns` maps canonical lhs arguments to their B(R) states inside
/// `base`. Requires `trs` linear and growing with non-variable lhs. No state
/// is ever added.
SaturationResult saturate(const TreeAutomaton& base, const Trs& trs, const PatternStates& patterns,
                          SaturationMode mode = SaturationMode::semi_naive);

struct CandidateTransition {
  Symbol symbol;
  std::vector<StateId> children;
  StateId target;
};

/// Conclusions of one application of the inference rule to every premise of
/// `trs` against the current transitions of `aut`, excluding transitions
/// already present.
std::vector<CandidateTransition> find_new_transitions(const TreeAutomaton& aut, const Trs& trs,
                                                      const PatternStates& patterns);

}  // namespace cbn
