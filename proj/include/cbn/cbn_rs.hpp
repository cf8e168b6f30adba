#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "cbn/automaton.hpp"
#include "cbn/cbn_nf.hpp"
#include "cbn/pair_automaton.hpp"
#include "cbn/recognizers.hpp"
#include "cbn/saturation.hpp"
#include "cbn/trs.hpp"

namespace cbn {

struct RsMetrics {
  std::size_t rs_states = 0;          // A_RS over F ∪ F@
  std::size_t redex_closure_states = 0;
  std::size_t c_rs_states = 0;
  std::size_t c_redex_states = 0;     // non-root-stable detector for R_β
  std::size_t cprime_states = 0;
  std::size_t cprime_rules = 0;
  SaturationStats rs_saturation;      // R_α over A_RS ∪ B(R_α)
  SaturationStats redex_saturation;   // R_β over A_REDEX ∪ B(R_β)
  std::size_t inner_saturation_rounds = 0;  // inside A_RS
};

/// Fresh copy of `t` whose root symbol is circled.
Term circle_root(const Term& t);

/// The automata behind CBN-RS_{α,β}.
class RsAnalyzer {
 public:
  RsAnalyzer(const Trs& trs, Approx alpha, Approx beta, SaturationMode mode = SaturationMode::semi_naive);
  RsAnalyzer(const RsAnalyzer&) = delete;
  RsAnalyzer& operator=(const RsAnalyzer&) = delete;

  const Trs& original() const { return original_; }
  const Trs& r_alpha() const { return r_; }
  const Trs& r_beta() const { return s_; }

  const RsConstruction& rs_construction() const { return rs_; }
  const TreeAutomaton& rs_automaton() const { return rs_.rs; }
  /// Accepts (→*_{R_α})[RS] over F ∪ F@; finals Q_f.
  const TreeAutomaton& c_rs() const { return c_rs_; }
  /// Accepts the non-root-stable terms of R_β; finals Q_f'.
  const TreeAutomaton& c_redex() const { return c_redex_; }
  /// C_RS + primed B(R_α) + C_REDEX, with the finals of both parts.
  const TreeAutomaton& cprime() const { return cprime_; }
  PairEngine& engine() { return *engine_; }
  const PairEngine& engine() const { return *engine_; }

  bool non_root_stable(const Term& t) const { return c_redex_.accepts(t); }
  std::vector<Evidence> evidence(const Term& t) const;
  /// Non-root-stable for R_β and every t[(t|p)@]_p reaches a root-stable term.
  bool characterization(const Term& t) const;

  Verdict decide(ExploreMode mode = ExploreMode::pruned, std::size_t max_states = 100000);
  std::vector<NeededRedex> root_needed_redexes(const Term& t) const;

  RsMetrics metrics() const;

 private:
  Trs original_;
  Trs r_;
  Trs s_;
  RsConstruction rs_;
  TreeAutomaton c_rs_;
  TreeAutomaton c_redex_;
  TreeAutomaton cprime_;
  SaturationStats rs_sat_;
  SaturationStats redex_sat_;
  std::unique_ptr<PairEngine> engine_;
};

Verdict decide_cbn_rs(const Trs& trs, Approx alpha, Approx beta, ExploreMode mode = ExploreMode::pruned,
                      std::size_t max_states = 100000);

std::vector<NeededRedex> root_needed_redexes(const Trs& trs, Approx alpha, Approx beta, const Term& t);

}  // namespace cbn
