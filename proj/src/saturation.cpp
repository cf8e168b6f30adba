#include "cbn/saturation.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <unordered_set>

#include "cbn/error.hpp"

namespace cbn {

namespace {

/// One rewrite rule prepared as a premise of the inference rule.
struct Premise {
  Symbol head;
  Term rhs;
  std::vector<std::string> shared;  // Var(l) ∩ Var(r), enumerated by theta
  std::vector<std::string> fresh;   // Var(r) \ Var(l), range over all states
  /// Per lhs argument: index into `shared`, or the fixed state <l_i>.
  std::vector<std::optional<std::size_t>> slot;
  std::vector<StateId> fixed;
  std::unordered_set<std::uint32_t> rhs_symbols;
};

void collect_symbols(const Term& t, std::unordered_set<std::uint32_t>& out) {
  if (t.is_var()) return;
  out.insert(t.symbol().id());
  for (const Term& a : t.args()) collect_symbols(a, out);
}

std::vector<Premise> prepare(const Trs& trs, const PatternStates& patterns) {
  if (!trs.linear() || !trs.growing()) throw TrsError("saturation requires a linear growing rewrite system");
  std::vector<Premise> out;
  for (const Rule& r : trs.rules()) {
    Premise p;
    p.head = r.lhs.symbol();
    p.rhs = r.rhs;
    auto lvars = variables(r.lhs);
    for (const std::string& x : variables(r.rhs)) {
      if (std::find(lvars.begin(), lvars.end(), x) != lvars.end())
        p.shared.push_back(x);
      else
        p.fresh.push_back(x);
    }
    for (const Term& li : r.lhs.args()) {
      if (li.is_var()) {
        auto it = std::find(p.shared.begin(), p.shared.end(), li.var_name());
        if (it != p.shared.end()) {
          p.slot.emplace_back(static_cast<std::size_t>(it - p.shared.begin()));
          p.fixed.push_back(0);
          continue;
        }
      }
      auto st = patterns.find(canonical_pattern(li));
      if (st == patterns.end())
        throw AutomatonError("saturation: no state for lhs argument " + li.str() + " of rule " + r.str());
      p.slot.emplace_back(std::nullopt);
      p.fixed.push_back(st->second);
    }
    collect_symbols(r.rhs, p.rhs_symbols);
    out.push_back(std::move(p));
  }
  return out;
}

/// Calls `emit(children, target)` for every conclusion of `p` against the
/// current transitions of `aut`.
void evaluate(const Premise& p, const TreeAutomaton& aut, SaturationStats& stats,
              const std::function<void(std::vector<StateId>, StateId)>& emit) {
  auto n_states = static_cast<StateId>(aut.state_count());
  if (n_states == 0) return;
  StateBinding binding;
  StateSet all = aut.all_states();
  for (const std::string& y : p.fresh) binding[y] = all;
  std::vector<StateId> theta(p.shared.size(), 0);
  for (;;) {
    for (std::size_t k = 0; k < theta.size(); ++k) binding[p.shared[k]] = StateSet::singleton(theta[k]);
    ++stats.candidate_tests;
    StateSet targets = aut.run(p.rhs, binding);
    if (!targets.empty()) {
      std::vector<StateId> children(p.slot.size());
      for (std::size_t i = 0; i < p.slot.size(); ++i) children[i] = p.slot[i] ? theta[*p.slot[i]] : p.fixed[i];
      targets.for_each([&](StateId q) { emit(children, q); });
    }
    std::size_t k = 0;
    while (k < theta.size() && ++theta[k] == n_states) theta[k++] = 0;
    if (k == theta.size()) break;
  }
}

}  // namespace

SaturationResult saturate(const TreeAutomaton& base, const Trs& trs, const PatternStates& patterns,
                          SaturationMode mode) {
  std::vector<Premise> premises = prepare(trs, patterns);
  SaturationResult res{base, {}};
  TreeAutomaton& aut = res.automaton;
  std::unordered_set<std::uint32_t> dirty;
  for (;;) {
    ++res.stats.rounds;
    std::unordered_set<std::uint32_t> next_dirty;
    std::size_t added_this_round = 0;
    for (const Premise& p : premises) {
      if (mode == SaturationMode::semi_naive && res.stats.rounds > 1) {
        bool affected = std::any_of(p.rhs_symbols.begin(), p.rhs_symbols.end(),
                                    [&](std::uint32_t f) { return dirty.count(f) != 0; });
        if (!affected) continue;
      }
      ++res.stats.rule_examinations;
      evaluate(p, aut, res.stats, [&](std::vector<StateId> children, StateId q) {
        if (aut.add_rule(p.head, std::move(children), q, true)) {
          ++added_this_round;
          next_dirty.insert(p.head.id());
        }
      });
    }
    res.stats.rules_added += added_this_round;
    if (added_this_round == 0) break;
    dirty = std::move(next_dirty);
  }
  return res;
}

std::vector<CandidateTransition> find_new_transitions(const TreeAutomaton& aut, const Trs& trs,
                                                      const PatternStates& patterns) {
  std::vector<Premise> premises = prepare(trs, patterns);
  SaturationStats stats;
  std::vector<CandidateTransition> out;
  for (const Premise& p : premises) {
    evaluate(p, aut, stats, [&](std::vector<StateId> children, StateId q) {
      if (aut.has_rule(p.head, children, q)) return;
      bool dup = std::any_of(out.begin(), out.end(), [&](const CandidateTransition& c) {
        return c.symbol == p.head && c.children == children && c.target == q;
      });
      if (!dup) out.push_back({p.head, std::move(children), q});
    });
  }
  return out;
}

}  // namespace cbn
