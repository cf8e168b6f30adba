#include "cbn/automaton.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "cbn/error.hpp"

namespace cbn {

std::string StateLabel::str() const {
  std::string body;
  switch (kind) {
    case Kind::pattern: body = "<" + pattern.str() + ">"; break;
    case Kind::primed: body = "<" + pattern.str() + ">'"; break;
    case Kind::redex_sink: body = "q_r"; break;
    case Kind::redex_final: body = "q_f"; break;
    case Kind::named: body = name; break;
    case Kind::subset: {
      body = "{";
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) body += ',';
        body += std::to_string(members[i]);
      }
      body += "}";
      break;
    }
  }
  return scope.empty() ? body : scope + ":" + body;
}

namespace {
bool same_label(const StateLabel& a, const StateLabel& b) {
  return a.kind == b.kind && a.scope == b.scope && a.name == b.name && a.members == b.members &&
         a.pattern.valid() == b.pattern.valid() && (!a.pattern.valid() || a.pattern == b.pattern);
}
}  // namespace

std::size_t TreeAutomaton::VecHash::operator()(const std::vector<std::uint32_t>& v) const {
  std::size_t h = v.size();
  for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

StateId TreeAutomaton::add_state(StateLabel label, bool final) {
  auto q = static_cast<StateId>(labels_.size());
  labels_.push_back(std::move(label));
  if (final) finals_.insert(q);
  return q;
}

void TreeAutomaton::set_final(StateId q, bool final) {
  if (q >= labels_.size()) throw AutomatonError("set_final: unknown state " + std::to_string(q));
  if (final)
    finals_.insert(q);
  else
    finals_.erase(q);
}

bool TreeAutomaton::add_rule(Symbol f, std::vector<StateId> children, StateId target, bool added) {
  if (!sig_.contains(f)) throw AutomatonError("symbol '" + f.str() + "' is not in the automaton signature");
  if (children.size() != f.arity()) throw AutomatonError("arity mismatch in rule for '" + f.str() + "'");
  for (StateId q : children)
    if (q >= labels_.size()) throw AutomatonError("rule refers to unknown state " + std::to_string(q));
  if (target >= labels_.size()) throw AutomatonError("rule refers to unknown state " + std::to_string(target));
  std::vector<std::uint32_t> key;
  key.reserve(children.size() + 2);
  key.push_back(f.id());
  key.insert(key.end(), children.begin(), children.end());
  key.push_back(target);
  if (!rule_keys_.insert(std::move(key)).second) return false;
  auto idx = static_cast<std::uint32_t>(rules_.size());
  by_first_[index_key(f, children.empty() ? kNoChild : children[0])].push_back(idx);
  rules_.push_back({f, std::move(children), target});
  added_.push_back(added);
  return true;
}

bool TreeAutomaton::has_rule(Symbol f, std::span<const StateId> children, StateId target) const {
  std::vector<std::uint32_t> key;
  key.push_back(f.id());
  key.insert(key.end(), children.begin(), children.end());
  key.push_back(target);
  return rule_keys_.count(key) != 0;
}

std::size_t TreeAutomaton::added_count() const {
  return static_cast<std::size_t>(std::count(added_.begin(), added_.end(), true));
}

void TreeAutomaton::set_scope(const std::string& scope) {
  for (auto& l : labels_) l.scope = scope;
}

std::optional<StateId> TreeAutomaton::find_state(const StateLabel& label) const {
  for (StateId q = 0; q < labels_.size(); ++q)
    if (same_label(labels_[q], label)) return q;
  return std::nullopt;
}

StateSet TreeAutomaton::step(Symbol f, std::span<const StateSet> children) const {
  StateSet out;
  if (f.arity() == 0) {
    if (auto it = by_first_.find(index_key(f, kNoChild)); it != by_first_.end())
      for (auto idx : it->second) out.insert(rules_[idx].target);
    return out;
  }
  for (const StateSet& c : children)
    if (c.empty()) return out;
  children[0].for_each([&](StateId q) {
    auto it = by_first_.find(index_key(f, q));
    if (it == by_first_.end()) return;
    for (auto idx : it->second) {
      const Transition& r = rules_[idx];
      bool ok = true;
      for (std::size_t j = 1; j < r.children.size() && ok; ++j) ok = children[j].contains(r.children[j]);
      if (ok) out.insert(r.target);
    }
  });
  return out;
}

StateSet TreeAutomaton::run(const Term& t, const StateBinding& binding) const {
  if (t.is_var()) {
    auto it = binding.find(t.var_name());
    if (it == binding.end()) throw AutomatonError("unbound variable '" + t.var_name() + "' in run");
    return it->second;
  }
  if (!sig_.contains(t.symbol()))
    throw AutomatonError("symbol '" + t.symbol().str() + "' is not in the automaton signature");
  auto args = t.args();
  if (args.empty()) return step(t.symbol(), {});
  std::vector<StateSet> children;
  children.reserve(args.size());
  for (const Term& a : args) {
    children.push_back(run(a, binding));
    if (children.back().empty()) return {};
  }
  return step(t.symbol(), children);
}

StateSet TreeAutomaton::run(const Term& t) const {
  static const StateBinding empty;
  return run(t, empty);
}

bool TreeAutomaton::is_deterministic_complete() const {
  for (Symbol f : sig_.symbols()) {
    std::unordered_map<std::vector<std::uint32_t>, int, VecHash> counts;
    for (const auto& r : rules_)
      if (r.symbol == f) ++counts[std::vector<std::uint32_t>(r.children.begin(), r.children.end())];
    for (const auto& [k, n] : counts)
      if (n != 1) return false;
    std::size_t expected = 1;
    for (unsigned i = 0; i < f.arity(); ++i) expected *= labels_.size();
    if (counts.size() != expected) return false;
  }
  return true;
}

std::string TreeAutomaton::dump() const {
  std::ostringstream out;
  for (StateId q = 0; q < labels_.size(); ++q) {
    out << "state " << q << " " << labels_[q].str();
    if (is_final(q)) out << " final";
    out << "\n";
  }
  std::vector<std::size_t> order(rules_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = rules_[x];
    const auto& b = rules_[y];
    if (added_[x] != added_[y]) return !added_[x];
    if (a.symbol != b.symbol) return symbol_less(a.symbol, b.symbol);
    if (a.children != b.children) return a.children < b.children;
    return a.target < b.target;
  });
  for (std::size_t idx : order) {
    const auto& r = rules_[idx];
    if (added_[idx]) out << "+ ";
    out << r.symbol.str();
    if (!r.children.empty()) {
      out << "(";
      for (std::size_t i = 0; i < r.children.size(); ++i) out << (i ? "," : "") << r.children[i];
      out << ")";
    }
    out << " -> " << r.target << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

TreeAutomaton disjoint_union(const TreeAutomaton& a, const TreeAutomaton& b) {
  if (!a.signature().same_symbols(b.signature()))
    throw AutomatonError("disjoint_union: signature mismatch " + a.signature().str() + " vs " + b.signature().str());
  TreeAutomaton out(a.signature());
  for (StateId q = 0; q < a.state_count(); ++q) out.add_state(a.label(q), a.is_final(q));
  auto shift = static_cast<StateId>(a.state_count());
  for (StateId q = 0; q < b.state_count(); ++q) out.add_state(b.label(q), b.is_final(q));
  for (std::size_t i = 0; i < a.rules().size(); ++i) {
    const auto& r = a.rules()[i];
    out.add_rule(r.symbol, r.children, r.target, a.is_added(i));
  }
  for (std::size_t i = 0; i < b.rules().size(); ++i) {
    const auto& r = b.rules()[i];
    std::vector<StateId> ch = r.children;
    for (auto& q : ch) q += shift;
    out.add_rule(r.symbol, std::move(ch), r.target + shift, b.is_added(i));
  }
  return out;
}

TreeAutomaton determinize_complete(const TreeAutomaton& aut) {
  std::deque<StateSet> subsets;
  std::unordered_map<StateSet, StateId, StateSetHash> ids;
  std::vector<Transition> rules;
  auto intern = [&](StateSet s) {
    auto [it, inserted] = ids.emplace(s, static_cast<StateId>(subsets.size()));
    if (inserted) subsets.push_back(std::move(s));
    return it->second;
  };

  const auto& symbols = aut.signature().symbols();
  for (Symbol f : symbols)
    if (f.arity() == 0) rules.push_back({f, {}, intern(aut.step(f, {}))});

  std::vector<StateSet> children;
  for (StateId k = 0; k < subsets.size(); ++k) {
    for (Symbol f : symbols) {
      unsigned n = f.arity();
      if (n == 0) continue;
      // Tuples over {0..k} containing k, indexed by the first position holding k.
      for (unsigned first = 0; first < n; ++first) {
        if (first > 0 && k == 0) break;
        std::vector<StateId> tuple(n, 0);
        tuple[first] = k;
        auto limit = [&](unsigned i) -> StateId { return i < first ? k : k + 1; };  // exclusive
        for (;;) {
          children.clear();
          for (unsigned i = 0; i < n; ++i) children.push_back(subsets[tuple[i]]);
          rules.push_back({f, tuple, intern(aut.step(f, children))});
          unsigned i = 0;
          for (; i < n; ++i) {
            if (i == first) continue;
            if (++tuple[i] < limit(i)) break;
            tuple[i] = 0;
          }
          if (i == n) break;
        }
      }
    }
  }

  TreeAutomaton out(aut.signature());
  for (const StateSet& s : subsets) out.add_state(StateLabel::subset(s.to_vector()), s.intersects(aut.finals()));
  for (auto& r : rules) out.add_rule(r.symbol, std::move(r.children), r.target);
  return out;
}

TreeAutomaton complement_finals(const TreeAutomaton& det) {
  if (!det.is_deterministic_complete())
    throw AutomatonError("complement_finals requires a deterministic complete automaton");
  TreeAutomaton out = det;
  out.set_finals(det.all_states() - det.finals());
  return out;
}

Accessibility accessible_states(const TreeAutomaton& aut) {
  Accessibility acc;
  acc.representative.assign(aut.state_count(), std::nullopt);
  acc.layer.assign(aut.state_count(), 0);
  for (unsigned layer = 1;; ++layer) {
    StateSet fresh;
    for (const auto& r : aut.rules()) {
      if (acc.accessible.contains(r.target) || fresh.contains(r.target)) continue;
      bool ready = std::all_of(r.children.begin(), r.children.end(),
                               [&](StateId q) { return acc.accessible.contains(q); });
      if (!ready) continue;
      std::vector<Term> args;
      for (StateId q : r.children) args.push_back(*acc.representative[q]);
      acc.representative[r.target] = Term::app(r.symbol, std::move(args));
      acc.layer[r.target] = layer;
      fresh.insert(r.target);
    }
    if (fresh.empty()) break;
    acc.accessible |= fresh;
  }
  return acc;
}

Trimmed trim_accessible(const TreeAutomaton& aut) {
  Accessibility acc = accessible_states(aut);
  Trimmed out{TreeAutomaton(aut.signature()), {}, std::vector<std::optional<StateId>>(aut.state_count())};
  for (StateId q = 0; q < aut.state_count(); ++q) {
    if (!acc.accessible.contains(q)) continue;
    out.renaming[q] = out.automaton.add_state(aut.label(q), aut.is_final(q));
    out.representatives.push_back(*acc.representative[q]);
  }
  for (std::size_t i = 0; i < aut.rules().size(); ++i) {
    const auto& r = aut.rules()[i];
    if (!out.renaming[r.target]) continue;
    std::vector<StateId> ch;
    bool ok = true;
    for (StateId q : r.children) {
      if (!out.renaming[q]) {
        ok = false;
        break;
      }
      ch.push_back(*out.renaming[q]);
    }
    if (ok) out.automaton.add_rule(r.symbol, std::move(ch), *out.renaming[r.target], aut.is_added(i));
  }
  return out;
}

std::optional<Term> emptiness_witness(const TreeAutomaton& aut) {
  Accessibility acc = accessible_states(aut);
  std::optional<StateId> best;
  (acc.accessible & aut.finals()).for_each([&](StateId q) {
    if (!best || acc.layer[q] < acc.layer[*best]) best = q;
  });
  if (!best) return std::nullopt;
  return acc.representative[*best];
}

}  // namespace cbn
