#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbn/term.hpp"

namespace cbn {

struct Rule {
  Term lhs;
  Term rhs;

  std::string str() const { return lhs.str() + " -> " + rhs.str(); }
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Rewrite system over a signature, with syntactic class flags computed at
/// construction.
class Trs {
 public:
  Trs() = default;
  /// Validates that every rule is over `sig` and that no lhs is a variable.
  /// Extra rhs variables are permitted here; `parse_trs` rejects them for
  /// user input.
  Trs(Signature sig, std::vector<Rule> rules);

  const Signature& signature() const { return sig_; }
  const std::vector<Rule>& rules() const { return rules_; }

  bool left_linear() const { return left_linear_; }
  bool right_linear() const { return right_linear_; }
  bool linear() const { return left_linear_ && right_linear_; }
  bool growing() const { return growing_; }

  /// |R|: sum of lhs and rhs sizes.
  std::size_t size() const;
  std::size_t rule_count() const { return rules_.size(); }

  std::string str() const;

 private:
  Signature sig_;
  std::vector<Rule> rules_;
  bool left_linear_ = true;
  bool right_linear_ = true;
  bool growing_ = true;
};

enum class Approx { S, NV, G };

std::string to_string(Approx a);
/// Accepts "s", "nv", "g" (case-insensitive).
std::optional<Approx> parse_approx(std::string_view text);

/// Reads the `(VAR ...) (RULES ...)` format. Rules are separated by commas or
/// whitespace; `;` starts a comment; `(COMMENT ...)` sections are skipped.
Trs parse_trs(std::string_view text);

/// True iff every variable shared between the sides of a rule occurs only at
/// depth 1 in the lhs.
bool is_growing(const Trs& trs);
bool is_growing(const Rule& rule);

Trs approximate(const Trs& trs, Approx a);

/// R ∪ {# -> #} over F ∪ {#}.
Trs extend_bullet(const Trs& trs);
/// R ∪ {f@(l1..ln) -> r} over F ∪ {f@ | f ∈ F}.
Trs extend_circle(const Trs& trs);

/// Redex positions of a ground term, pre-order (outermost before inner,
/// left before right).
std::vector<Position> redex_positions(const Trs& trs, const Term& t);
bool is_redex(const Trs& trs, const Term& t);
bool is_reducible(const Trs& trs, const Term& t);

/// All one-step successors of a ground term, deduplicated, in a
/// deterministic order. Rhs variables not bound by the lhs range over
/// `instantiations`; throws TrsError if such a rule applies and the pool is
/// empty.
std::vector<Term> rewrite_step(const Trs& trs, const Term& t, std::span<const Term> instantiations = {});

/// Rewrites at position `p` with rule `rule_index`, which must match there.
/// The rule must not have extra rhs variables.
Term contract(const Trs& trs, const Term& t, const Position& p, std::size_t rule_index);

struct Overlap {
  std::size_t outer_rule;
  std::size_t inner_rule;
  Position position;  // in the outer lhs
};

/// Critical overlaps between left-linear lhs (excluding a rule with itself
/// at the root).
std::vector<Overlap> overlaps(const Trs& trs);
bool is_orthogonal(const Trs& trs);

}  // namespace cbn
