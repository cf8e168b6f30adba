#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbn {

enum class Decoration : std::uint8_t { plain, bullet, circled };

namespace detail {
struct SymbolRecord;
}

/// Function symbol handle. Symbols are interned process-wide, so equality is
/// identity of (name, arity, decoration).
class Symbol {
 public:
  Symbol() = default;

  static Symbol get(std::string_view name, unsigned arity, Decoration deco = Decoration::plain);
  /// The hole symbol used by R_bullet; arity 0, prints as "#".
  static Symbol bullet();

  bool valid() const { return rec_ != nullptr; }
  const std::string& name() const;
  unsigned arity() const;
  Decoration decoration() const;
  std::uint32_t id() const;

  bool is_bullet() const { return valid() && decoration() == Decoration::bullet; }
  bool is_circled() const { return valid() && decoration() == Decoration::circled; }

  /// f -> f°. Only valid on plain symbols.
  Symbol circled() const;
  /// f° -> f; identity on plain symbols.
  Symbol plain() const;

  /// "f", "f@" for f°, "#" for the bullet.
  std::string str() const;

  friend bool operator==(Symbol a, Symbol b) { return a.rec_ == b.rec_; }

 private:
  explicit Symbol(const detail::SymbolRecord* rec) : rec_(rec) {}
  const detail::SymbolRecord* rec_ = nullptr;
};

/// Orders by printed name, then arity. Used for deterministic output.
bool symbol_less(Symbol a, Symbol b);

struct SymbolHash {
  std::size_t operator()(Symbol s) const { return s.id(); }
};

/// Finite signature in insertion order.
class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<Symbol> symbols);

  /// Adds `f` if absent; throws if a different arity is already registered
  /// under the same (name, decoration).
  void add(Symbol f);
  bool contains(Symbol f) const;
  std::optional<Symbol> find(std::string_view name, Decoration deco = Decoration::plain) const;

  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  unsigned max_arity() const { return max_arity_; }
  bool has_constant() const;
  bool has_bullet() const;
  /// Plain and bullet symbols only (drops circled copies).
  Signature without_circled() const;
  /// Drops the bullet.
  Signature without_bullet() const;

  /// Set equality, order-insensitive.
  bool same_symbols(const Signature& other) const;

  std::string str() const;

 private:
  std::vector<Symbol> symbols_;
  std::vector<bool> member_;  // indexed by Symbol::id()
  unsigned max_arity_ = 0;
};

/// Immutable first-order term with structural equality and hashing.
class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term app(Symbol f, std::vector<Term> args);
  static Term constant(Symbol c) { return app(c, {}); }

  bool valid() const { return node_ != nullptr; }
  bool is_var() const;
  const std::string& var_name() const;
  Symbol symbol() const;
  std::span<const Term> args() const;
  /// 0-based argument access.
  const Term& arg(std::size_t i) const { return args()[i]; }

  std::size_t size() const;
  unsigned height() const;
  bool ground() const;
  std::size_t hash() const;

  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Sequence of 1-based argument indices; the empty sequence is the root.
class Position {
 public:
  Position() = default;
  Position(std::initializer_list<unsigned> steps) : steps_(steps) {}
  explicit Position(std::vector<unsigned> steps) : steps_(std::move(steps)) {}

  bool is_root() const { return steps_.empty(); }
  std::size_t depth() const { return steps_.size(); }
  const std::vector<unsigned>& steps() const { return steps_; }
  Position child(unsigned i) const;
  /// "ε" for the root, otherwise "2.1".
  std::string str() const;

  friend auto operator<=>(const Position&, const Position&) = default;

 private:
  std::vector<unsigned> steps_;
};

using Substitution = std::map<std::string, Term>;

/// All positions of `t` in pre-order (parents before children, left to right).
std::vector<Position> positions(const Term& t);
bool is_valid_position(const Term& t, const Position& p);
/// Throws std::out_of_range on an invalid position.
const Term& subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, const Term& u);

/// Distinct variables in left-to-right first-occurrence order.
std::vector<std::string> variables(const Term& t);
/// Variable occurrence counts.
std::map<std::string, unsigned> variable_occurrences(const Term& t);
bool is_linear(const Term& t);
/// Depths (root = 0) at which variable `x` occurs in `t`.
std::vector<unsigned> variable_depths(const Term& t, const std::string& x);

Term apply(const Term& t, const Substitution& sigma);
/// Matching of `pattern` against a ground `subject`. For non-linear patterns
/// the repeated variables must bind equal subterms.
std::optional<Substitution> match_pattern(const Term& pattern, const Term& subject);

/// Representative of `t` modulo variable renaming: variables are renamed in
/// left-to-right order to x, y, z, x4, x5, ...
Term canonical_pattern(const Term& t);

/// True if no node of `t` uses the bullet symbol.
bool bullet_free(const Term& t);

struct TermSyntax {
  /// Accept "#" for the bullet and "f@" for circled symbols.
  bool allow_decorated = false;
};

/// Parses `text` against a fixed signature. Identifiers in `declared_vars`
/// are variables; every other identifier must be a symbol of `sig` used with
/// its declared arity.
Term parse_term(std::string_view text, const std::set<std::string>& declared_vars, const Signature& sig,
                TermSyntax syntax = {});

}  // namespace cbn
