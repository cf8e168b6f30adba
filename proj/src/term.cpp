#include "cbn/term.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "cbn/error.hpp"
#include "lexer.hpp"

namespace cbn {

namespace detail {
struct SymbolRecord {
  std::string name;
  unsigned arity;
  Decoration deco;
  std::uint32_t id;
  std::string printed;
};
}  // namespace detail

namespace {

struct Registry {
  std::mutex mu;
  std::deque<detail::SymbolRecord> records;
  std::map<std::tuple<std::string, unsigned, Decoration>, const detail::SymbolRecord*> index;
};

Registry& registry() {
  static Registry r;
  return r;
}

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

// ---------------------------------------------------------------------------
// Symbol

Symbol Symbol::get(std::string_view name, unsigned arity, Decoration deco) {
  if (deco == Decoration::bullet && arity != 0) throw Error("the bullet symbol is a constant");
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  auto key = std::make_tuple(std::string(name), arity, deco);
  if (auto it = reg.index.find(key); it != reg.index.end()) return Symbol(it->second);
  std::string printed = deco == Decoration::bullet    ? std::string("#")
                        : deco == Decoration::circled ? std::string(name) + "@"
                                                      : std::string(name);
  reg.records.push_back({std::string(name), arity, deco, static_cast<std::uint32_t>(reg.records.size()), printed});
  const detail::SymbolRecord* rec = &reg.records.back();
  reg.index.emplace(std::move(key), rec);
  return Symbol(rec);
}

Symbol Symbol::bullet() {
  static const Symbol b = get("#", 0, Decoration::bullet);
  return b;
}

const std::string& Symbol::name() const { return rec_->name; }
unsigned Symbol::arity() const { return rec_->arity; }
Decoration Symbol::decoration() const { return rec_->deco; }
std::uint32_t Symbol::id() const { return rec_->id; }
std::string Symbol::str() const { return rec_ ? rec_->printed : std::string("<null>"); }

Symbol Symbol::circled() const {
  if (decoration() != Decoration::plain) throw Error("only plain symbols have circled copies: " + str());
  return get(name(), arity(), Decoration::circled);
}

Symbol Symbol::plain() const {
  if (decoration() == Decoration::circled) return get(name(), arity(), Decoration::plain);
  return *this;
}

bool symbol_less(Symbol a, Symbol b) {
  return std::forward_as_tuple(a.str(), a.arity()) < std::forward_as_tuple(b.str(), b.arity());
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::initializer_list<Symbol> symbols) {
  for (Symbol f : symbols) add(f);
}

void Signature::add(Symbol f) {
  if (contains(f)) return;
  if (auto other = find(f.name(), f.decoration()))
    throw Error("symbol '" + f.str() + "' used with arities " + std::to_string(other->arity()) + " and " +
                std::to_string(f.arity()));
  if (member_.size() <= f.id()) member_.resize(f.id() + 1, false);
  member_[f.id()] = true;
  symbols_.push_back(f);
  max_arity_ = std::max(max_arity_, f.arity());
}

bool Signature::contains(Symbol f) const { return f.valid() && f.id() < member_.size() && member_[f.id()]; }

std::optional<Symbol> Signature::find(std::string_view name, Decoration deco) const {
  for (Symbol f : symbols_)
    if (f.decoration() == deco && f.name() == name) return f;
  return std::nullopt;
}

bool Signature::has_constant() const {
  return std::any_of(symbols_.begin(), symbols_.end(), [](Symbol f) { return f.arity() == 0; });
}

bool Signature::has_bullet() const { return contains(Symbol::bullet()); }

Signature Signature::without_circled() const {
  Signature out;
  for (Symbol f : symbols_)
    if (!f.is_circled()) out.add(f);
  return out;
}

Signature Signature::without_bullet() const {
  Signature out;
  for (Symbol f : symbols_)
    if (!f.is_bullet()) out.add(f);
  return out;
}

bool Signature::same_symbols(const Signature& other) const {
  if (size() != other.size()) return false;
  return std::all_of(symbols_.begin(), symbols_.end(), [&](Symbol f) { return other.contains(f); });
}

std::string Signature::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (i) out += ", ";
    out += symbols_[i].str() + "/" + std::to_string(symbols_[i].arity());
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Symbol sym;
  std::string var;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
  unsigned height = 1;
  bool ground = true;
};

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->hash = mix(0x51ed27, std::hash<std::string>{}(name));
  n->var = std::move(name);
  n->ground = false;
  return Term(std::move(n));
}

Term Term::app(Symbol f, std::vector<Term> args) {
  if (!f.valid()) throw Error("invalid symbol");
  if (args.size() != f.arity())
    throw Error("symbol '" + f.str() + "' has arity " + std::to_string(f.arity()) + " but is applied to " +
                std::to_string(args.size()) + " arguments");
  auto n = std::make_shared<Node>();
  n->sym = f;
  std::size_t h = mix(0xa11ce, f.id());
  unsigned height = 0;
  for (const Term& a : args) {
    h = mix(h, a.hash());
    n->size += a.size();
    height = std::max(height, a.height());
    n->ground = n->ground && a.ground();
  }
  n->height = height + 1;
  n->hash = h;
  n->args = std::move(args);
  return Term(std::move(n));
}

bool Term::is_var() const { return !node_->sym.valid(); }
const std::string& Term::var_name() const { return node_->var; }
Symbol Term::symbol() const { return node_->sym; }
std::span<const Term> Term::args() const { return node_->args; }
std::size_t Term::size() const { return node_->size; }
unsigned Term::height() const { return node_->height; }
bool Term::ground() const { return node_->ground; }
std::size_t Term::hash() const { return node_->hash; }

std::string Term::str() const {
  if (!node_) return "<null>";
  if (is_var()) return var_name();
  std::string out = symbol().str();
  if (!node_->args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < node_->args.size(); ++i) {
      if (i) out += ',';
      out += node_->args[i].str();
    }
    out += ')';
  }
  return out;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  if (a.is_var() || b.is_var()) return a.is_var() && b.is_var() && a.var_name() == b.var_name();
  if (a.symbol() != b.symbol()) return false;
  auto xs = a.args(), ys = b.args();
  return std::equal(xs.begin(), xs.end(), ys.begin(), ys.end());
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_var()) return a.var_name() <=> b.var_name();
  if (a.symbol() != b.symbol()) return symbol_less(a.symbol(), b.symbol()) ? std::strong_ordering::less
                                                                           : std::strong_ordering::greater;
  auto xs = a.args(), ys = b.args();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (auto c = xs[i] <=> ys[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Positions

Position Position::child(unsigned i) const {
  Position p = *this;
  p.steps_.push_back(i);
  return p;
}

std::string Position::str() const {
  if (steps_.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(steps_[i]);
  }
  return out;
}

namespace {
void collect_positions(const Term& t, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  if (t.is_var()) return;
  auto args = t.args();
  for (unsigned i = 0; i < args.size(); ++i) {
    Position next = cur.child(i + 1);
    collect_positions(args[i], next, out);
  }
}
}  // namespace

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  Position root;
  collect_positions(t, root, out);
  return out;
}

bool is_valid_position(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (unsigned i : p.steps()) {
    if (cur->is_var() || i == 0 || i > cur->args().size()) return false;
    cur = &cur->args()[i - 1];
  }
  return true;
}

const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (unsigned i : p.steps()) {
    if (cur->is_var() || i == 0 || i > cur->args().size())
      throw std::out_of_range("invalid position " + p.str() + " in " + t.str());
    cur = &cur->args()[i - 1];
  }
  return *cur;
}

namespace {
Term replace_rec(const Term& t, const std::vector<unsigned>& steps, std::size_t k, const Term& u) {
  if (k == steps.size()) return u;
  unsigned i = steps[k];
  if (t.is_var() || i == 0 || i > t.args().size()) throw std::out_of_range("invalid position in " + t.str());
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[i - 1] = replace_rec(args[i - 1], steps, k + 1, u);
  return Term::app(t.symbol(), std::move(args));
}
}  // namespace

Term replace_at(const Term& t, const Position& p, const Term& u) { return replace_rec(t, p.steps(), 0, u); }

// ---------------------------------------------------------------------------
// Variables, matching

namespace {
void visit_vars(const Term& t, unsigned depth, const std::function<void(const std::string&, unsigned)>& fn) {
  if (t.is_var()) {
    fn(t.var_name(), depth);
    return;
  }
  for (const Term& a : t.args()) visit_vars(a, depth + 1, fn);
}
}  // namespace

std::vector<std::string> variables(const Term& t) {
  std::vector<std::string> out;
  visit_vars(t, 0, [&](const std::string& x, unsigned) {
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  });
  return out;
}

std::map<std::string, unsigned> variable_occurrences(const Term& t) {
  std::map<std::string, unsigned> out;
  visit_vars(t, 0, [&](const std::string& x, unsigned) { ++out[x]; });
  return out;
}

bool is_linear(const Term& t) {
  auto occ = variable_occurrences(t);
  return std::all_of(occ.begin(), occ.end(), [](const auto& kv) { return kv.second == 1; });
}

std::vector<unsigned> variable_depths(const Term& t, const std::string& x) {
  std::vector<unsigned> out;
  visit_vars(t, 0, [&](const std::string& y, unsigned d) {
    if (y == x) out.push_back(d);
  });
  return out;
}

Term apply(const Term& t, const Substitution& sigma) {
  if (t.is_var()) {
    auto it = sigma.find(t.var_name());
    return it == sigma.end() ? t : it->second;
  }
  if (t.ground()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(cbn::apply(a, sigma));
  return Term::app(t.symbol(), std::move(args));
}

namespace {
bool match_rec(const Term& pattern, const Term& subject, Substitution& sigma) {
  if (pattern.is_var()) {
    auto [it, inserted] = sigma.emplace(pattern.var_name(), subject);
    return inserted || it->second == subject;
  }
  if (subject.is_var() || pattern.symbol() != subject.symbol()) return false;
  auto ps = pattern.args(), ss = subject.args();
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (!match_rec(ps[i], ss[i], sigma)) return false;
  return true;
}
}  // namespace

std::optional<Substitution> match_pattern(const Term& pattern, const Term& subject) {
  Substitution sigma;
  if (!match_rec(pattern, subject, sigma)) return std::nullopt;
  return sigma;
}

Term canonical_pattern(const Term& t) {
  static const char* const base[] = {"x", "y", "z"};
  Substitution ren;
  unsigned k = 0;
  for (const std::string& x : variables(t)) {
    std::string name = k < 3 ? base[k] : "x" + std::to_string(k + 1);
    ren.emplace(x, Term::var(name));
    ++k;
  }
  return cbn::apply(t, ren);
}

bool bullet_free(const Term& t) {
  if (t.is_var()) return true;
  if (t.symbol().is_bullet()) return false;
  return std::all_of(t.args().begin(), t.args().end(), [](const Term& a) { return bullet_free(a); });
}

// ---------------------------------------------------------------------------
// Parsing

Term parse_term(std::string_view text, const std::set<std::string>& declared_vars, const Signature& sig,
                TermSyntax syntax) {
  detail::Lexer lex(text, syntax.allow_decorated, false);
  auto is_var = [&](const std::string& name) { return declared_vars.count(name) != 0; };
  auto resolve = [&](const detail::Token& tok, unsigned arity, detail::Lexer& lx) -> Symbol {
    std::optional<Symbol> f =
        tok.deco == Decoration::bullet ? (sig.has_bullet() ? std::optional(Symbol::bullet()) : std::nullopt)
                                       : sig.find(tok.text, tok.deco);
    if (!f) lx.fail("unknown symbol '" + tok.text + (tok.deco == Decoration::circled ? "@" : "") + "'", tok.offset);
    if (f->arity() != arity)
      lx.fail("arity mismatch: '" + f->str() + "' expects " + std::to_string(f->arity()) + " arguments, got " +
                  std::to_string(arity),
              tok.offset);
    return *f;
  };
  Term t = detail::read_term(lex, is_var, resolve);
  if (lex.peek().kind != detail::Tok::end) lex.fail("trailing input" + detail::Lexer::describe(lex.peek()), lex.peek().offset);
  return t;
}

}  // namespace cbn
