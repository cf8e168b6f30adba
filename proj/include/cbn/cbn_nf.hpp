#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cbn/automaton.hpp"
#include "cbn/pair_automaton.hpp"
#include "cbn/recognizers.hpp"
#include "cbn/saturation.hpp"
#include "cbn/trs.hpp"

namespace cbn {

/// One redex position of a witness and the variant term checked for it.
struct Evidence {
  Position position;
  Term variant;   // t[#]_p, or t[(t|p)@]_p for root-neededness
  bool accepted;  // the variant still reaches the target language
};

struct Verdict {
  bool in_class = true;
  std::optional<Term> witness;
  std::vector<Evidence> evidence;
  ExploreStats stats;
};

struct NeededRedex {
  Position position;
  bool needed;
};

struct NfMetrics {
  std::size_t trs_size = 0;
  std::size_t rule_count = 0;
  unsigned max_arity = 0;
  std::size_t nf_states = 0;
  std::size_t b_states = 0;
  std::size_t c_states = 0;
  std::size_t cprime_states = 0;
  std::size_t c_rules = 0;
  std::size_t cprime_rules = 0;
  SaturationStats saturation;
};

/// The automata behind CBN-NF_α for one system and one approximation.
class NfAnalyzer {
 public:
  NfAnalyzer(const Trs& trs, Approx approx, SaturationMode mode = SaturationMode::semi_naive);
  NfAnalyzer(const NfAnalyzer&) = delete;
  NfAnalyzer& operator=(const NfAnalyzer&) = delete;

  const Trs& original() const { return original_; }
  const Trs& approximated() const { return approx_trs_; }
  Approx approx() const { return approx_; }

  const TreeAutomaton& nf_automaton() const { return nf_; }
  const PatternAutomaton& pattern_automaton() const { return b_; }
  /// A_NF ∪ B(R_α) before saturation.
  const TreeAutomaton& base() const { return base_; }
  /// C: the saturated automaton; accepts (→*)[NF].
  const TreeAutomaton& c() const { return c_; }
  const RedexDetection& cprime() const { return cprime_; }
  PairEngine& engine() { return *engine_; }
  const PairEngine& engine() const { return *engine_; }

  /// Reducible and every t[#]_p reaches a normal form.
  bool characterization(const Term& t) const;
  std::vector<Evidence> evidence(const Term& t) const;

  /// Emptiness of D. A witness is re-checked against `characterization`
  /// and ValidationError is thrown if it fails.
  Verdict decide(ExploreMode mode = ExploreMode::pruned, std::size_t max_states = 100000);

  std::vector<NeededRedex> needed_redexes(const Term& t) const;

  NfMetrics metrics() const;

 private:
  Trs original_;
  Approx approx_;
  Trs approx_trs_;
  TreeAutomaton nf_;
  PatternAutomaton b_;
  TreeAutomaton base_;
  TreeAutomaton c_;
  SaturationStats sat_stats_;
  RedexDetection cprime_;
  std::unique_ptr<PairEngine> engine_;
};

Verdict decide_cbn_nf(const Trs& trs, Approx a, ExploreMode mode = ExploreMode::pruned,
                      std::size_t max_states = 100000);

std::vector<NeededRedex> needed_redexes(const Trs& trs, Approx a, const Term& t);

struct NormalizeStep {
  Position position;
  std::size_t rule_index;
  Term result;
};

struct NormalizeResult {
  enum class Status { normal_form, fuel_exhausted, no_needed_redex };
  Term term;
  std::vector<NormalizeStep> trace;
  Status status = Status::normal_form;
};

std::string to_string(NormalizeResult::Status s);

/// Contracts the first needed redex in pre-order with the first matching
/// rule of the original system until a normal form is reached, the fuel runs
/// out, or a reducible term has no needed redex.
NormalizeResult normalize_by_need(const NfAnalyzer& analyzer, const Term& t, std::size_t fuel);

}  // namespace cbn
