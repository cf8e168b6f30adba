#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cbn/state_set.hpp"
#include "cbn/term.hpp"

namespace cbn {

/// Provenance of a state. Labels are informational; identity is the StateId.
struct StateLabel {
  enum class Kind { pattern, primed, redex_sink, redex_final, named, subset };

  Kind kind = Kind::named;
  Term pattern;                  // pattern, primed: canonical representative
  std::vector<StateId> members;  // subset: ids in the source automaton
  std::string name;              // named
  std::string scope;             // optional component tag, printed as "scope:"

  static StateLabel pattern_class(Term t) { return {Kind::pattern, std::move(t), {}, {}, {}}; }
  static StateLabel primed_pattern(Term t) { return {Kind::primed, std::move(t), {}, {}, {}}; }
  static StateLabel redex_sink() { return {Kind::redex_sink, {}, {}, {}, {}}; }
  static StateLabel redex_final() { return {Kind::redex_final, {}, {}, {}, {}}; }
  static StateLabel named_state(std::string n) { return {Kind::named, {}, {}, std::move(n), {}}; }
  static StateLabel subset(std::vector<StateId> m) { return {Kind::subset, {}, std::move(m), {}, {}}; }

  /// "<g(x,a)>", "<a>'", "q_r", "q_f", "{0,3}", with "scope:" prefix if set.
  std::string str() const;
};

struct Transition {
  Symbol symbol;
  std::vector<StateId> children;
  StateId target;
};

/// Variable -> state set, for runs on terms with state leaves.
using StateBinding = std::unordered_map<std::string, StateSet>;

/// Finite bottom-up tree automaton without epsilon transitions.
class TreeAutomaton {
 public:
  TreeAutomaton() = default;
  explicit TreeAutomaton(Signature sig) : sig_(std::move(sig)) {}

  const Signature& signature() const { return sig_; }

  StateId add_state(StateLabel label, bool final = false);
  void set_final(StateId q, bool final = true);
  void set_finals(StateSet finals) { finals_ = std::move(finals); }
  /// Adds f(children) -> target. Returns false if the rule already exists.
  /// `added` marks rules introduced by saturation (dump shows them with "+").
  bool add_rule(Symbol f, std::vector<StateId> children, StateId target, bool added = false);
  bool has_rule(Symbol f, std::span<const StateId> children, StateId target) const;

  std::size_t state_count() const { return labels_.size(); }
  StateSet all_states() const { return StateSet::full(labels_.size()); }
  const StateLabel& label(StateId q) const { return labels_.at(q); }
  StateLabel& label(StateId q) { return labels_.at(q); }
  const StateSet& finals() const { return finals_; }
  bool is_final(StateId q) const { return finals_.contains(q); }
  const std::vector<Transition>& rules() const { return rules_; }
  bool is_added(std::size_t rule_index) const { return added_.at(rule_index); }
  std::size_t added_count() const;

  /// Tags every label with `scope`.
  void set_scope(const std::string& scope);
  std::optional<StateId> find_state(const StateLabel& label) const;

  /// f(S1,...,Sn)↓: targets of rules f(q1..qn) -> q with each qi in Si.
  StateSet step(Symbol f, std::span<const StateSet> children) const;
  /// States reachable from a ground term.
  StateSet run(const Term& t) const;
  /// Variables are leaves standing for the bound state sets (Q(t) expansion).
  StateSet run(const Term& t, const StateBinding& binding) const;
  bool accepts(const Term& t) const { return run(t).intersects(finals_); }

  bool is_deterministic_complete() const;

  /// One line per state then one per rule, in a fixed order.
  std::string dump() const;

 private:
  static std::uint64_t index_key(Symbol f, StateId first) {
    return (static_cast<std::uint64_t>(f.id()) << 32) | first;
  }
  static constexpr StateId kNoChild = 0xffffffffU;

  struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const;
  };

  Signature sig_;
  std::vector<StateLabel> labels_;
  StateSet finals_;
  std::vector<Transition> rules_;
  std::vector<bool> added_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_first_;
  std::unordered_set<std::vector<std::uint32_t>, VecHash> rule_keys_;
};

/// Copies `b` after `a`: states of `a` keep their ids, states of `b` are
/// shifted by `a.state_count()`. Signatures must agree.
TreeAutomaton disjoint_union(const TreeAutomaton& a, const TreeAutomaton& b);

/// Bottom-up subset construction restricted to realizable subsets. The
/// result is deterministic and complete over its reachable subsets; its
/// labels are Subset(members of the source automaton).
TreeAutomaton determinize_complete(const TreeAutomaton& aut);

/// Inverts the final states of a deterministic complete automaton.
TreeAutomaton complement_finals(const TreeAutomaton& det);

struct Trimmed {
  TreeAutomaton automaton;
  /// representatives[q] is a ground term of minimal height reaching q.
  std::vector<Term> representatives;
  /// old id -> new id, or nullopt for removed states.
  std::vector<std::optional<StateId>> renaming;
};

/// Accessible states with minimal-height representative terms, computed
/// layer by layer; ties go to the first rule in insertion order.
struct Accessibility {
  StateSet accessible;
  std::vector<std::optional<Term>> representative;
  std::vector<unsigned> layer;  // 1-based height of first discovery
};
Accessibility accessible_states(const TreeAutomaton& aut);

Trimmed trim_accessible(const TreeAutomaton& aut);

/// A minimal-height accepted term, or nullopt if the language is empty.
std::optional<Term> emptiness_witness(const TreeAutomaton& aut);

}  // namespace cbn
