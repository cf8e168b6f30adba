#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "cbn/automaton.hpp"
#include "cbn/cbn_nf.hpp"
#include "cbn/cbn_rs.hpp"
#include "cbn/term.hpp"
#include "cbn/trs.hpp"

namespace cbn {

// ---------------------------------------------------------------------------
// Enumeration

/// Visits every ground term of height <= depth exactly once, lower heights
/// first. `children` are the visit indices of the arguments.
void for_each_term(const Signature& sig, unsigned depth,
                   const std::function<void(const Term&, std::span<const std::size_t> children)>& fn);

std::vector<Term> enumerate_terms(const Signature& sig, unsigned depth);

/// Number of ground terms of height <= depth; nullopt on overflow.
std::optional<std::uint64_t> count_terms(const Signature& sig, unsigned depth);

// ---------------------------------------------------------------------------
// Bounded rewriting

struct ReachCaps {
  std::size_t max_term_size = 14;
  std::size_t max_steps = 10;
  std::size_t max_frontier = 5000;
  unsigned instantiation_depth = 2;  // fresh rhs variables range over terms up to this height
};

struct ReachResult {
  std::unordered_set<Term, TermHash> terms;
  /// The set is exactly the reducts of t reachable through terms within the
  /// size cap. False whenever a cap binds or a fresh-variable rule fires.
  bool saturated = true;
};

ReachResult bounded_reach(const Trs& trs, const Term& t, const ReachCaps& caps = {});

enum class Reach { yes, no, unknown };

/// Breadth-first search for a reduct satisfying `goal`; stops at the first hit.
Reach reaches(const Trs& trs, const Term& t, const std::function<bool(const Term&)>& goal,
              const ReachCaps& caps = {});

/// Ground normal forms of R_bullet: no redex of `trs` and no bullet.
bool is_normal_form(const Trs& trs, const Term& t);

// ---------------------------------------------------------------------------
// Reports

struct Disagreement {
  Term term;
  std::string expected;
  std::string got;
};

struct OracleReport {
  std::string name;
  std::size_t checked = 0;
  std::size_t agreements = 0;
  std::size_t inconclusive = 0;
  std::vector<Disagreement> disagreements;

  bool pass() const { return disagreements.empty(); }
  void merge(const OracleReport& other);
  /// "name: checked N, agree A, inconclusive I, disagree D".
  std::string summary() const;
};

/// ⟨t⟩ reachable in B(trs) iff s is an instance of t, for every pattern
/// state and every ground s over `sig` up to `depth`.
OracleReport check_pattern_automaton(const Trs& trs, const Signature& sig, unsigned depth);

/// A_NF accepts exactly the bullet-free terms without redexes (over F ∪ {#}).
OracleReport check_nf_automaton(const Trs& trs, unsigned depth);

/// L(c) = (→*)[base_lang]: accepted terms must reach base_lang and terms
/// reaching it must be accepted. Unsaturated negative searches count as
/// inconclusive.
OracleReport check_c_soundness(const Trs& trs_approx, const TreeAutomaton& c,
                               const std::function<bool(const Term&)>& base_lang, const Signature& sig,
                               unsigned depth, const ReachCaps& caps = {});

/// s → s' and c accepts s' imply c accepts s, for every enumerated s.
OracleReport check_backward_closure(const Trs& trs_approx, const TreeAutomaton& c, const Signature& sig,
                                    unsigned depth, const ReachCaps& caps = {});

/// Exhaustive D acceptance versus "reducible and every t[#]_p accepted by
/// C'", plus pruned-mode acceptance versus the same predicate.
OracleReport check_d_characterization(const NfAnalyzer& analyzer, unsigned depth);
OracleReport check_d_characterization(const Trs& trs, Approx a, unsigned depth);

/// Same for D' against "non-root-stable for R_β and every t[(t|p)@]_p
/// accepted by the root-stable reachability automaton".
OracleReport check_dprime_characterization(const RsAnalyzer& analyzer, unsigned depth);
OracleReport check_dprime_characterization(const Trs& trs, Approx a, Approx b, unsigned depth);

/// Root-stable automaton versus bounded search for a reachable redex of S@.
OracleReport check_rs_automaton(const RsAnalyzer& analyzer, unsigned depth, const ReachCaps& caps = {});

struct SelfcheckOptions {
  unsigned depth = 3;
  ReachCaps caps;
  /// Checks the unsaturated base in place of C, which must be caught.
  bool inject_fault = false;
};

/// Every battery above for each approximation.
std::vector<OracleReport> selfcheck(const Trs& trs, const SelfcheckOptions& opts = {});

}  // namespace cbn
