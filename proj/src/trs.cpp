#include "cbn/trs.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <unordered_set>

#include "cbn/error.hpp"
#include "lexer.hpp"

namespace cbn {

namespace {

void check_over_signature(const Term& t, const Signature& sig, const Rule& rule) {
  if (t.is_var()) return;
  if (!sig.contains(t.symbol()))
    throw TrsError("rule '" + rule.str() + "' uses symbol '" + t.symbol().str() + "' outside the signature");
  for (const Term& a : t.args()) check_over_signature(a, sig, rule);
}

}  // namespace

Trs::Trs(Signature sig, std::vector<Rule> rules) : sig_(std::move(sig)), rules_(std::move(rules)) {
  for (const Rule& r : rules_) {
    if (r.lhs.is_var()) throw TrsError("variable left-hand side in rule '" + r.str() + "'");
    check_over_signature(r.lhs, sig_, r);
    check_over_signature(r.rhs, sig_, r);
    left_linear_ = left_linear_ && is_linear(r.lhs);
    right_linear_ = right_linear_ && is_linear(r.rhs);
    growing_ = growing_ && is_growing(r);
  }
}

std::size_t Trs::size() const {
  std::size_t n = 0;
  for (const Rule& r : rules_) n += r.lhs.size() + r.rhs.size();
  return n;
}

std::string Trs::str() const {
  std::string out;
  for (const Rule& r : rules_) out += r.str() + "\n";
  return out;
}

std::string to_string(Approx a) {
  switch (a) {
    case Approx::S: return "s";
    case Approx::NV: return "nv";
    case Approx::G: return "g";
  }
  return "?";
}

std::optional<Approx> parse_approx(std::string_view text) {
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "s") return Approx::S;
  if (lower == "nv") return Approx::NV;
  if (lower == "g") return Approx::G;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// .trs parsing

namespace {

bool reserved_name(const std::string& name) {
  if (name.size() < 3 || name[0] != '_' || name[1] != 'v') return false;
  return std::all_of(name.begin() + 2, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

/// Blanks out `(COMMENT ...)` sections, keeping byte offsets intact.
std::string strip_comment_sections(std::string_view text) {
  std::string out(text);
  std::size_t i = 0;
  while (i < out.size()) {
    if (out[i] == ';') {
      while (i < out.size() && out[i] != '\n') ++i;
      continue;
    }
    if (out[i] == '(') {
      std::size_t j = i + 1;
      while (j < out.size() && std::isspace(static_cast<unsigned char>(out[j]))) ++j;
      if (out.compare(j, 7, "COMMENT") == 0) {
        int depth = 0;
        std::size_t k = i;
        for (; k < out.size(); ++k) {
          if (out[k] == '(') ++depth;
          if (out[k] == ')' && --depth == 0) break;
          if (out[k] != '\n') out[k] = ' ';
        }
        if (k < out.size()) out[k] = ' ';
        i = k + 1;
        continue;
      }
    }
    ++i;
  }
  return out;
}

}  // namespace

Trs parse_trs(std::string_view text) {
  std::string cleaned = strip_comment_sections(text);
  detail::Lexer lex(cleaned, false, true);
  std::set<std::string> vars;
  std::map<std::string, unsigned> arities;
  Signature sig;
  std::vector<Rule> rules;
  bool seen_rules = false;

  auto is_var = [&](const std::string& name) { return vars.count(name) != 0; };
  auto resolve = [&](const detail::Token& tok, unsigned arity, detail::Lexer& lx) -> Symbol {
    if (reserved_name(tok.text)) lx.fail("identifier '" + tok.text + "' uses the reserved prefix _v", tok.offset);
    auto [it, inserted] = arities.emplace(tok.text, arity);
    if (!inserted && it->second != arity)
      lx.fail("arity mismatch: '" + tok.text + "' used with " + std::to_string(it->second) + " and " +
                  std::to_string(arity) + " arguments",
              tok.offset);
    Symbol f = Symbol::get(tok.text, arity);
    sig.add(f);
    return f;
  };

  while (lex.peek().kind != detail::Tok::end) {
    lex.expect(detail::Tok::lparen, "'('");
    detail::Token section = lex.expect(detail::Tok::ident, "a section name");
    if (section.text == "VAR") {
      if (seen_rules) lex.fail("VAR section must precede RULES", section.offset);
      while (lex.peek().kind == detail::Tok::ident) {
        detail::Token v = lex.next();
        if (reserved_name(v.text)) lex.fail("variable '" + v.text + "' uses the reserved prefix _v", v.offset);
        vars.insert(v.text);
      }
      lex.expect(detail::Tok::rparen, "')'");
    } else if (section.text == "RULES") {
      seen_rules = true;
      while (lex.peek().kind != detail::Tok::rparen) {
        std::size_t rule_offset = lex.peek().offset;
        Term lhs = detail::read_term(lex, is_var, resolve);
        lex.expect(detail::Tok::arrow, "'->'");
        Term rhs = detail::read_term(lex, is_var, resolve);
        Rule rule{lhs, rhs};
        if (lhs.is_var()) lex.fail("variable left-hand side in rule '" + rule.str() + "'", rule_offset);
        auto lvars = variables(lhs);
        for (const std::string& x : variables(rhs))
          if (std::find(lvars.begin(), lvars.end(), x) == lvars.end())
            lex.fail("variable '" + x + "' occurs on the right-hand side of '" + rule.str() + "' but not on the left",
                     rule_offset);
        rules.push_back(std::move(rule));
        if (lex.peek().kind == detail::Tok::comma) lex.next();
      }
      lex.expect(detail::Tok::rparen, "')'");
    } else {
      lex.fail("unsupported section '" + section.text + "'", section.offset);
    }
  }

  if (!sig.has_constant()) {
    std::string name = "c";
    for (int k = 0; arities.count(name) || vars.count(name); ++k) name = "c" + std::to_string(k);
    sig.add(Symbol::get(name, 0));
  }
  return Trs(std::move(sig), std::move(rules));
}

// ---------------------------------------------------------------------------
// Classes and approximations

bool is_growing(const Rule& rule) {
  auto lvars = variables(rule.lhs);
  for (const std::string& x : variables(rule.rhs)) {
    if (std::find(lvars.begin(), lvars.end(), x) == lvars.end()) continue;
    for (unsigned d : variable_depths(rule.lhs, x))
      if (d != 1) return false;
  }
  return true;
}

bool is_growing(const Trs& trs) {
  return std::all_of(trs.rules().begin(), trs.rules().end(), [](const Rule& r) { return is_growing(r); });
}

namespace {

class FreshVars {
 public:
  explicit FreshVars(const Trs& trs) {
    for (const Rule& r : trs.rules())
      for (const Term* t : {&r.lhs, &r.rhs})
        for (const std::string& x : variables(*t))
          if (reserved_name(x)) next_ = std::max(next_, static_cast<unsigned>(std::stoul(x.substr(2))) + 1);
  }
  Term next() { return Term::var("_v" + std::to_string(next_++)); }

 private:
  unsigned next_ = 0;
};

/// Rebuilds `t`, replacing each variable occurrence for which `rename`
/// returns true by a fresh variable.
Term rename_occurrences(const Term& t, FreshVars& fresh, const std::function<bool(const std::string&)>& rename) {
  if (t.is_var()) return rename(t.var_name()) ? fresh.next() : t;
  if (t.ground()) return t;
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(rename_occurrences(a, fresh, rename));
  return Term::app(t.symbol(), std::move(args));
}

}  // namespace

Trs approximate(const Trs& trs, Approx a) {
  if (!trs.left_linear()) throw TrsError("approximation requires a left-linear rewrite system");
  FreshVars fresh(trs);
  std::vector<Rule> out;
  for (const Rule& r : trs.rules()) {
    switch (a) {
      case Approx::S: out.push_back({r.lhs, fresh.next()}); break;
      case Approx::NV:
        out.push_back({r.lhs, rename_occurrences(r.rhs, fresh, [](const std::string&) { return true; })});
        break;
      case Approx::G: {
        auto lvars = variables(r.lhs);
        std::set<std::string> seen;
        auto rename = [&](const std::string& x) {
          if (!seen.insert(x).second) return true;  // repeated rhs occurrence
          if (std::find(lvars.begin(), lvars.end(), x) == lvars.end()) return false;
          auto depths = variable_depths(r.lhs, x);
          return std::any_of(depths.begin(), depths.end(), [](unsigned d) { return d != 1; });
        };
        out.push_back({r.lhs, rename_occurrences(r.rhs, fresh, rename)});
        break;
      }
    }
  }
  return Trs(trs.signature(), std::move(out));
}

Trs extend_bullet(const Trs& trs) {
  Signature sig = trs.signature();
  std::vector<Rule> rules = trs.rules();
  Term hole = Term::constant(Symbol::bullet());
  if (!sig.has_bullet()) sig.add(Symbol::bullet());
  if (std::find(rules.begin(), rules.end(), Rule{hole, hole}) == rules.end()) rules.push_back({hole, hole});
  return Trs(std::move(sig), std::move(rules));
}

Trs extend_circle(const Trs& trs) {
  Signature sig;
  for (Symbol f : trs.signature().symbols()) sig.add(f);
  for (Symbol f : trs.signature().symbols())
    if (f.decoration() == Decoration::plain) sig.add(f.circled());
  std::vector<Rule> rules = trs.rules();
  for (const Rule& r : trs.rules()) {
    if (r.lhs.symbol().decoration() != Decoration::plain) continue;
    std::vector<Term> args(r.lhs.args().begin(), r.lhs.args().end());
    rules.push_back({Term::app(r.lhs.symbol().circled(), std::move(args)), r.rhs});
  }
  return Trs(std::move(sig), std::move(rules));
}

// ---------------------------------------------------------------------------
// Redexes and rewriting

bool is_redex(const Trs& trs, const Term& t) {
  if (t.is_var()) return false;
  return std::any_of(trs.rules().begin(), trs.rules().end(),
                     [&](const Rule& r) { return match_pattern(r.lhs, t).has_value(); });
}

std::vector<Position> redex_positions(const Trs& trs, const Term& t) {
  std::vector<Position> out;
  for (const Position& p : positions(t))
    if (is_redex(trs, subterm_at(t, p))) out.push_back(p);
  return out;
}

bool is_reducible(const Trs& trs, const Term& t) {
  if (is_redex(trs, t)) return true;
  if (t.is_var()) return false;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return is_reducible(trs, a); });
}

std::vector<Term> rewrite_step(const Trs& trs, const Term& t, std::span<const Term> instantiations) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  auto emit = [&](Term s) {
    if (seen.insert(s).second) out.push_back(std::move(s));
  };
  for (const Position& p : positions(t)) {
    const Term& sub = subterm_at(t, p);
    for (const Rule& r : trs.rules()) {
      auto sigma = match_pattern(r.lhs, sub);
      if (!sigma) continue;
      std::vector<std::string> extra;
      for (const std::string& x : variables(r.rhs))
        if (!sigma->count(x)) extra.push_back(x);
      if (extra.empty()) {
        emit(replace_at(t, p, cbn::apply(r.rhs, *sigma)));
        continue;
      }
      if (instantiations.empty())
        throw TrsError("rule '" + r.str() + "' has unbound right-hand side variables and no instantiation pool");
      std::vector<std::size_t> idx(extra.size(), 0);
      for (;;) {
        Substitution full = *sigma;
        for (std::size_t k = 0; k < extra.size(); ++k) full[extra[k]] = instantiations[idx[k]];
        emit(replace_at(t, p, cbn::apply(r.rhs, full)));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == instantiations.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
  }
  return out;
}

Term contract(const Trs& trs, const Term& t, const Position& p, std::size_t rule_index) {
  const Rule& r = trs.rules().at(rule_index);
  auto sigma = match_pattern(r.lhs, subterm_at(t, p));
  if (!sigma) throw TrsError("rule '" + r.str() + "' does not match at position " + p.str());
  for (const std::string& x : variables(r.rhs))
    if (!sigma->count(x)) throw TrsError("rule '" + r.str() + "' has unbound right-hand side variables");
  return replace_at(t, p, cbn::apply(r.rhs, *sigma));
}

namespace {
/// Unifiability of two linear terms with disjoint variables.
bool compatible(const Term& s, const Term& t) {
  if (s.is_var() || t.is_var()) return true;
  if (s.symbol() != t.symbol()) return false;
  for (std::size_t i = 0; i < s.args().size(); ++i)
    if (!compatible(s.args()[i], t.args()[i])) return false;
  return true;
}
}  // namespace

std::vector<Overlap> overlaps(const Trs& trs) {
  std::vector<Overlap> out;
  const auto& rules = trs.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (const Position& p : positions(rules[i].lhs)) {
      const Term& sub = subterm_at(rules[i].lhs, p);
      if (sub.is_var()) continue;
      for (std::size_t j = 0; j < rules.size(); ++j) {
        if (i == j && p.is_root()) continue;
        if (compatible(sub, rules[j].lhs)) out.push_back({i, j, p});
      }
    }
  }
  return out;
}

bool is_orthogonal(const Trs& trs) { return trs.left_linear() && overlaps(trs).empty(); }

}  // namespace cbn
