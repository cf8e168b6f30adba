#include "cbn/pair_automaton.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "cbn/error.hpp"

namespace cbn {

namespace {

std::string set_str(const StateSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](StateId q) {
    if (!first) out += ",";
    out += std::to_string(q);
    first = false;
  });
  return out + "}";
}

/// Keeps the inclusion-minimal masks, in ascending popcount order.
void minimize(std::vector<std::uint64_t>& masks) {
  std::sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<std::uint64_t> kept;
  for (std::uint64_t m : masks) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](std::uint64_t k) { return (k & m) == k; });
    if (!dominated) kept.push_back(m);
  }
  masks = std::move(kept);
}

void minimize(std::vector<StateSet>& sets) {
  std::sort(sets.begin(), sets.end(), [](const StateSet& a, const StateSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<StateSet> kept;
  for (StateSet& s : sets) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](const StateSet& k) { return k.is_subset_of(s); });
    if (!dominated) kept.push_back(std::move(s));
  }
  sets = std::move(kept);
}

void dedupe(std::vector<StateSet>& sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
}

}  // namespace

std::size_t PairEngine::KeyHash::operator()(const Key& k) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (std::uint32_t v : k) h = (h ^ v) * 0x100000001b3ULL;
  return h;
}

PairEngine::PairEngine(PairSpec spec) : spec_(std::move(spec)) {
  if (spec_.automaton == nullptr) throw AutomatonError("pair engine needs an automaton");
  for (Symbol f : spec_.signature.symbols()) {
    if (f.is_bullet() || f.is_circled()) throw AutomatonError("pair engine input signature must be plain");
    if (spec_.marker == PairSpec::Marker::circled && !spec_.automaton->signature().contains(f.circled()))
      throw AutomatonError("pair engine needs '" + f.circled().str() + "' in the automaton signature");
  }
}

bool PairEngine::is_final(const PairState& s) const {
  return s.S.intersects(spec_.s_finals) && s.P.is_subset_of(spec_.p_finals);
}

std::uint32_t PairEngine::intern(const StateSet& s) const {
  auto it = set_ids_.find(s);
  if (it != set_ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(sets_.size());
  sets_.push_back(s);
  set_ids_.emplace(s, id);
  return id;
}

std::uint32_t PairEngine::step_id(Symbol f, std::span<const std::uint32_t> sids) const {
  Key key{f.id()};
  key.insert(key.end(), sids.begin(), sids.end());
  auto it = step_memo_.find(key);
  if (it != step_memo_.end()) return it->second;
  std::vector<StateSet> args;
  for (std::uint32_t s : sids) args.push_back(sets_[s]);
  std::uint32_t id = intern(spec_.automaton->step(f, args));
  step_memo_.emplace(std::move(key), id);
  return id;
}

const StateSet& PairEngine::constraint(Symbol f, std::span<const std::uint32_t> sids, std::size_t i,
                                       StateId q) const {
  Key key{f.id()};
  key.insert(key.end(), sids.begin(), sids.end());
  key.push_back(static_cast<std::uint32_t>(i));
  key.push_back(q);
  auto it = constraint_memo_.find(key);
  if (it != constraint_memo_.end()) return it->second;
  std::vector<StateSet> args;
  for (std::uint32_t s : sids) args.push_back(sets_[s]);
  args[i] = StateSet::singleton(q);
  return constraint_memo_.emplace(std::move(key), spec_.automaton->step(f, args)).first->second;
}

bool PairEngine::pattern_fires(Symbol f, std::span<const std::uint32_t> sids) const {
  for (const PairSpec::Pattern& pat : spec_.patterns) {
    if (pat.root != f) continue;
    bool ok = true;
    for (std::size_t i = 0; i < pat.children.size() && ok; ++i) ok = sets_[sids[i]].contains(pat.children[i]);
    if (ok) return true;
  }
  return false;
}

std::optional<PairEngine::Expansion> PairEngine::expand(Symbol f, std::span<const std::uint32_t> sids,
                                                        std::span<const StateSet* const> child_p,
                                                        ExploreMode mode) const {
  const bool pruned = mode == ExploreMode::pruned;
  Expansion out{step_id(f, sids), {}};

  // Hitting constraints f(S1,..,{q},..,Sn)↓ for q in Pi.
  std::vector<StateSet> constraints;
  for (std::size_t i = 0; i < child_p.size(); ++i) {
    bool empty_hit = false;
    child_p[i]->for_each([&](StateId q) {
      if (empty_hit) return;
      StateSet h = constraint(f, sids, i, q);
      if (h.empty()) empty_hit = true;
      constraints.push_back(std::move(h));
    });
    if (empty_hit) return std::nullopt;
  }
  dedupe(constraints);

  StateSet universe;
  for (const StateSet& h : constraints) universe |= h;
  std::vector<StateId> u = universe.to_vector();
  std::size_t cap = pruned ? kMaxPrunedUniverse : kMaxExhaustiveUniverse;
  if (u.size() > cap)
    throw ResourceLimit("pair transition on '" + f.str() + "' draws from " + std::to_string(u.size()) +
                        " states (limit " + std::to_string(cap) + ")");
  auto to_mask = [&](const StateSet& s) {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (s.contains(u[k])) m |= std::uint64_t{1} << k;
    return m;
  };
  auto from_mask = [&](std::uint64_t m) {
    StateSet s;
    for (std::size_t k = 0; k < u.size(); ++k)
      if ((m >> k) & 1U) s.insert(u[k]);
    return s;
  };
  std::vector<std::uint64_t> hs;
  for (const StateSet& h : constraints) hs.push_back(to_mask(h));

  std::vector<std::uint64_t> p1;
  if (pruned) {
    minimize(hs);  // hitting a subset constraint hits its supersets
    p1.push_back(0);
    for (std::uint64_t h : hs) {
      std::vector<std::uint64_t> next;
      for (std::uint64_t t : p1) {
        if ((t & h) != 0) {
          next.push_back(t);
          continue;
        }
        for (std::uint64_t rest = h; rest != 0; rest &= rest - 1) next.push_back(t | (rest & (~rest + 1)));
      }
      minimize(next);
      p1 = std::move(next);
    }
  } else {
    std::uint64_t limit = std::uint64_t{1} << u.size();
    for (std::uint64_t m = 0; m < limit; ++m) {
      bool hits = std::all_of(hs.begin(), hs.end(), [&](std::uint64_t h) { return (m & h) != 0; });
      if (hits) p1.push_back(m);
    }
  }

  std::vector<StateSet> p2;
  if (!pattern_fires(f, sids)) {
    p2.emplace_back();
  } else if (spec_.marker == PairSpec::Marker::bullet) {
    p2.push_back(StateSet::singleton(spec_.x_state));
  } else {
    std::vector<StateSet> args;
    for (std::uint32_t s : sids) args.push_back(sets_[s]);
    StateSet circled = spec_.automaton->step(f.circled(), args);
    if (circled.empty()) return std::nullopt;
    if (pruned) {
      circled.for_each([&](StateId q) { p2.push_back(StateSet::singleton(q)); });
    } else {
      std::vector<StateId> c = circled.to_vector();
      if (c.size() > kMaxExhaustiveUniverse)
        throw ResourceLimit("circled redex set on '" + f.str() + "' has " + std::to_string(c.size()) + " states");
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << c.size()); ++m) {
        StateSet s;
        for (std::size_t k = 0; k < c.size(); ++k)
          if ((m >> k) & 1U) s.insert(c[k]);
        p2.push_back(std::move(s));
      }
    }
  }

  for (std::uint64_t m : p1) {
    StateSet base = from_mask(m);
    for (const StateSet& extra : p2) out.P.push_back(base | extra);
  }
  if (pruned)
    minimize(out.P);
  else
    dedupe(out.P);
  return out;
}

std::vector<PairState> PairEngine::transition(Symbol f, std::span<const PairState> children,
                                              ExploreMode mode) const {
  if (!spec_.signature.contains(f)) throw AutomatonError("symbol '" + f.str() + "' is not in the input signature");
  if (children.size() != f.arity())
    throw AutomatonError("'" + f.str() + "' expects " + std::to_string(f.arity()) + " children");
  std::vector<std::uint32_t> sids;
  std::vector<const StateSet*> ps;
  for (const PairState& c : children) {
    sids.push_back(intern(c.S));
    ps.push_back(&c.P);
  }
  std::vector<PairState> out;
  auto e = expand(f, sids, ps, mode);
  if (!e) return out;
  for (StateSet& p : e->P) out.push_back({sets_[e->sid], std::move(p)});
  return out;
}

std::vector<PairState> PairEngine::run(const Term& t, ExploreMode mode) const {
  if (t.is_var()) throw AutomatonError("pair automaton runs on ground terms only");
  if (!spec_.signature.contains(t.symbol()))
    throw AutomatonError("symbol '" + t.symbol().str() + "' is not in the input signature");
  // All pairs reached by one term share S = t↓, so only P varies.
  std::vector<std::uint32_t> sids;
  std::vector<std::vector<StateSet>> child_ps;
  for (const Term& a : t.args()) {
    std::vector<PairState> r = run(a, mode);
    if (r.empty()) return {};
    sids.push_back(intern(r.front().S));
    std::vector<StateSet> ps;
    for (PairState& s : r) ps.push_back(std::move(s.P));
    child_ps.push_back(std::move(ps));
  }
  std::vector<StateSet> results;
  std::vector<std::size_t> idx(child_ps.size(), 0);
  std::vector<const StateSet*> cur(child_ps.size());
  std::optional<std::uint32_t> sid;
  std::size_t combos = 0;
  for (;;) {
    if (++combos > 4'000'000) throw ResourceLimit("too many pair combinations while running " + t.str());
    for (std::size_t i = 0; i < idx.size(); ++i) cur[i] = &child_ps[i][idx[i]];
    if (auto e = expand(t.symbol(), sids, cur, mode)) {
      sid = e->sid;
      for (StateSet& p : e->P) results.push_back(std::move(p));
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == child_ps[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  if (mode == ExploreMode::pruned)
    minimize(results);
  else
    dedupe(results);
  std::vector<PairState> out;
  for (StateSet& p : results) out.push_back({sets_[*sid], std::move(p)});
  return out;
}

bool PairEngine::accepts(const Term& t, ExploreMode mode) const {
  auto states = run(t, mode);
  return std::any_of(states.begin(), states.end(), [&](const PairState& s) { return is_final(s); });
}

bool PairEngine::add_node(Node node, ExploreMode mode) {
  auto& bucket = by_sid_[node.sid];
  if (mode == ExploreMode::pruned) {
    for (std::uint32_t id : bucket)
      if (nodes_[id].alive && nodes_[id].P.is_subset_of(node.P)) return false;
    for (std::uint32_t id : bucket)
      if (nodes_[id].alive && node.P.is_subset_of(nodes_[id].P)) nodes_[id].alive = false;
  } else {
    Key key{node.sid};
    for (StateId q : node.P.to_vector()) key.push_back(q);
    if (!exact_.emplace(std::move(key), static_cast<std::uint32_t>(nodes_.size())).second) return false;
  }
  node.final = is_final({sets_[node.sid], node.P});
  bucket.push_back(static_cast<std::uint32_t>(nodes_.size()));
  nodes_.push_back(std::move(node));
  return true;
}

ExploreResult PairEngine::explore(ExploreMode mode, std::size_t max_states, bool stop_at_final) {
  nodes_.clear();
  by_sid_.clear();
  exact_.clear();
  ExploreResult res;

  std::optional<std::size_t> final_id;
  auto offer = [&](Symbol f, std::span<const std::uint32_t> kids) -> bool {
    ++res.stats.tuples;
    std::vector<std::uint32_t> sids;
    std::vector<const StateSet*> ps;
    for (std::uint32_t k : kids) {
      sids.push_back(nodes_[k].sid);
      ps.push_back(&nodes_[k].P);
    }
    auto e = expand(f, sids, ps, mode);
    if (!e) return false;
    for (StateSet& p : e->P) {
      Node n{e->sid, std::move(p), true, false, f, {kids.begin(), kids.end()}};
      if (!add_node(std::move(n), mode)) continue;
      if (nodes_.size() > max_states)
        throw ResourceLimit("pair-state exploration exceeded " + std::to_string(max_states) + " states");
      if (nodes_.back().final && !final_id) {
        final_id = nodes_.size() - 1;
        if (stop_at_final) return true;
      }
    }
    return false;
  };

  bool stop = false;
  for (Symbol f : spec_.signature.symbols())
    if (f.arity() == 0 && !stop) stop = offer(f, {});

  std::vector<std::uint32_t> processed;
  for (std::size_t k = 0; k < nodes_.size() && !stop; ++k) {
    if (!nodes_[k].alive) continue;
    processed.push_back(static_cast<std::uint32_t>(k));
    std::vector<std::uint32_t> pool;
    for (std::uint32_t id : processed)
      if (nodes_[id].alive) pool.push_back(id);
    std::vector<std::uint32_t> below;
    for (std::uint32_t id : pool)
      if (id < k) below.push_back(id);

    for (Symbol f : spec_.signature.symbols()) {
      const unsigned n = f.arity();
      if (n == 0) continue;
      for (unsigned j = 0; j < n && !stop; ++j) {
        // positions before j draw from `below`, j is k, after j from `pool`
        std::vector<const std::vector<std::uint32_t>*> ranges(n);
        bool empty = false;
        for (unsigned i = 0; i < n; ++i) {
          ranges[i] = i < j ? &below : &pool;
          if (i != j && ranges[i]->empty()) empty = true;
        }
        if (empty) continue;
        std::vector<std::size_t> idx(n, 0);
        std::vector<std::uint32_t> kids(n);
        for (;;) {
          bool live = nodes_[k].alive;
          for (unsigned i = 0; i < n && live; ++i) {
            kids[i] = i == j ? static_cast<std::uint32_t>(k) : (*ranges[i])[idx[i]];
            live = nodes_[kids[i]].alive;
          }
          if (live && offer(f, kids)) {
            stop = true;
            break;
          }
          unsigned i = 0;
          for (; i < n; ++i) {
            if (i == j) continue;
            if (++idx[i] < ranges[i]->size()) break;
            idx[i] = 0;
          }
          if (i == n) break;
        }
      }
      if (stop) break;
    }
  }

  res.found_final = final_id.has_value();
  if (final_id) res.witness = rebuild(*final_id);
  res.stats.pair_states = nodes_.size();
  std::vector<bool> seen(sets_.size(), false);
  for (const Node& n : nodes_) {
    if (n.alive) ++res.stats.alive;
    if (!seen[n.sid]) {
      seen[n.sid] = true;
      ++res.stats.s_components;
    }
  }
  return res;
}

Term PairEngine::rebuild(std::size_t id) const {
  const Node& n = nodes_.at(id);
  std::vector<Term> args;
  for (std::uint32_t c : n.children) args.push_back(rebuild(c));
  return Term::app(n.symbol, std::move(args));
}

std::string PairEngine::dump() const {
  std::ostringstream out;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    out << "pair " << id << " S=" << set_str(sets_[n.sid]) << " P=" << set_str(n.P);
    if (n.final) out << " final";
    if (!n.alive) out << " dead";
    out << " <- " << n.symbol.str();
    if (!n.children.empty()) {
      out << "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) out << (i ? "," : "") << n.children[i];
      out << ")";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace cbn
