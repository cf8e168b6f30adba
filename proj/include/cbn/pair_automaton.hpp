#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cbn/automaton.hpp"
#include "cbn/state_set.hpp"
#include "cbn/term.hpp"

namespace cbn {

enum class ExploreMode {
  /// Minimal P components only, with per-S subsumption.
  pruned,
  /// Every admissible P component.
  exhaustive,
};

struct PairState {
  StateSet S;
  StateSet P;

  friend bool operator==(const PairState&, const PairState&) = default;
};

/// Parameters shared by D and D'.
struct PairSpec {
  enum class Marker {
    bullet,   // P2 = {<x>} when a redex pattern fires
    circled,  // P2 ranges over non-empty subsets of f@(S1..Sn)↓
  };
  struct Pattern {
    Symbol root;
    std::vector<StateId> children;  // primed lhs argument states
  };

  const TreeAutomaton* automaton = nullptr;
  Signature signature;    // input signature F
  StateSet p_finals;      // Q_f: final pairs need P ⊆ Q_f
  StateSet s_finals;      // final pairs need S ∩ s_finals ≠ ∅
  std::vector<Pattern> patterns;
  Marker marker = Marker::bullet;
  StateId x_state = 0;
};

struct ExploreStats {
  std::size_t pair_states = 0;   // created
  std::size_t alive = 0;         // not subsumed at the end
  std::size_t s_components = 0;  // distinct S among created pairs
  std::size_t tuples = 0;        // child tuples examined
};

struct ExploreResult {
  bool found_final = false;
  std::optional<Term> witness;
  ExploreStats stats;
};

/// Lazily explored pair-state automaton. Memo tables are caches; the
/// engine is not thread-safe.
class PairEngine {
 public:
  explicit PairEngine(PairSpec spec);

  const PairSpec& spec() const { return spec_; }
  bool is_final(const PairState& s) const;

  /// All targets of f([S1,P1],...,[Sn,Pn]). Pruned mode returns only the
  /// inclusion-minimal P components.
  std::vector<PairState> transition(Symbol f, std::span<const PairState> children, ExploreMode mode) const;

  /// Pair states reachable from a ground term over F.
  std::vector<PairState> run(const Term& t, ExploreMode mode) const;
  bool accepts(const Term& t, ExploreMode mode) const;

  /// Explores reachable pair states from the constants upward. Throws
  /// ResourceLimit once more than `max_states` pairs are created.
  ExploreResult explore(ExploreMode mode, std::size_t max_states, bool stop_at_final = true);

  /// Explored pairs, one per line: "pair <id> S={..} P={..} [final] [dead] <- f(ids)".
  std::string dump() const;
  std::size_t explored_count() const { return nodes_.size(); }
  /// Ground term that reaches explored pair `id`.
  Term rebuild(std::size_t id) const;

  /// Caps on the candidate set from which P components are drawn.
  static constexpr std::size_t kMaxPrunedUniverse = 64;
  static constexpr std::size_t kMaxExhaustiveUniverse = 22;

 private:
  using Key = std::vector<std::uint32_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  struct Node {
    std::uint32_t sid;
    StateSet P;
    bool alive = true;
    bool final = false;
    Symbol symbol;
    std::vector<std::uint32_t> children;
  };

  std::uint32_t intern(const StateSet& s) const;
  std::uint32_t step_id(Symbol f, std::span<const std::uint32_t> sids) const;
  const StateSet& constraint(Symbol f, std::span<const std::uint32_t> sids, std::size_t i, StateId q) const;
  bool pattern_fires(Symbol f, std::span<const std::uint32_t> sids) const;

  struct Expansion {
    std::uint32_t sid;
    std::vector<StateSet> P;
  };
  std::optional<Expansion> expand(Symbol f, std::span<const std::uint32_t> sids,
                                  std::span<const StateSet* const> child_p, ExploreMode mode) const;

  bool add_node(Node node, ExploreMode mode);

  PairSpec spec_;

  mutable std::vector<StateSet> sets_;
  mutable std::unordered_map<StateSet, std::uint32_t, StateSetHash> set_ids_;
  mutable std::unordered_map<Key, std::uint32_t, KeyHash> step_memo_;
  mutable std::unordered_map<Key, StateSet, KeyHash> constraint_memo_;

  std::vector<Node> nodes_;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> by_sid_;
  std::unordered_map<Key, std::uint32_t, KeyHash> exact_;
};

}  // namespace cbn
