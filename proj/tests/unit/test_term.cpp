#include <doctest.h>

#include "cbn/error.hpp"
#include "cbn/term.hpp"

using namespace cbn;

namespace {

Signature fg() { return {Symbol::get("f", 2), Symbol::get("g", 1), Symbol::get("a", 0), Symbol::get("b", 0)}; }

}  // namespace

TEST_CASE("symbols are interned by name, arity and decoration") {
  CHECK(Symbol::get("f", 2) == Symbol::get("f", 2));
  CHECK_FALSE(Symbol::get("f", 2) == Symbol::get("f", 1));
  Symbol fc = Symbol::get("f", 2).circled();
  CHECK(fc.is_circled());
  CHECK(fc.plain() == Symbol::get("f", 2));
  CHECK(fc.str() == "f@");
  CHECK(Symbol::bullet().str() == "#");
}

TEST_CASE("parse and print round trip") {
  Term t = parse_term("f(g(a), f(x, b))", {"x"}, fg());
  CHECK(t.str() == "f(g(a),f(x,b))");
  CHECK(t.size() == 6);
  CHECK(t.height() == 3);
  CHECK_FALSE(t.ground());
  CHECK(parse_term(t.str(), {"x"}, fg()) == t);
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_term("f(a,\n  h(b))", {}, fg());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_term("f(a)", {}, fg()), ParseError);
  CHECK_THROWS_AS(parse_term("#", {}, fg()), ParseError);
}

TEST_CASE("positions are pre-order") {
  Term t = parse_term("f(g(a),b)", {}, fg());
  std::vector<std::string> got;
  for (const Position& p : positions(t)) got.push_back(p.str());
  CHECK(got == std::vector<std::string>{"ε", "1", "1.1", "2"});
  CHECK(subterm_at(t, Position{1, 1}).str() == "a");
  CHECK(replace_at(t, Position{1}, parse_term("b", {}, fg())).str() == "f(b,b)");
  CHECK_THROWS(subterm_at(t, Position{3}));
}

TEST_CASE("matching respects repeated variables") {
  Signature sig = fg();
  Term pat = parse_term("f(x,x)", {"x"}, sig);
  CHECK(match_pattern(pat, parse_term("f(a,a)", {}, sig)).has_value());
  CHECK_FALSE(match_pattern(pat, parse_term("f(a,b)", {}, sig)).has_value());
  auto s = match_pattern(parse_term("f(x,g(y))", {"x", "y"}, sig), parse_term("f(b,g(a))", {}, sig));
  REQUIRE(s.has_value());
  CHECK(s->at("x").str() == "b");
  CHECK(s->at("y").str() == "a");
  CHECK(cbn::apply(parse_term("f(y,x)", {"x", "y"}, sig), *s).str() == "f(a,b)");
}

TEST_CASE("canonical patterns identify renamings") {
  Signature sig = fg();
  Term t1 = parse_term("f(u,g(v))", {"u", "v"}, sig);
  Term t2 = parse_term("f(p,g(q))", {"p", "q"}, sig);
  CHECK(canonical_pattern(t1) == canonical_pattern(t2));
  CHECK(canonical_pattern(t1).str() == "f(x,g(y))");
  CHECK(variable_depths(t1, "v") == std::vector<unsigned>{2});
  CHECK(is_linear(t1));
  CHECK_FALSE(is_linear(parse_term("f(x,x)", {"x"}, sig)));
}

TEST_CASE("decorated syntax") {
  Signature sig = fg();
  sig.add(Symbol::bullet());
  sig.add(Symbol::get("f", 2).circled());
  Term t = parse_term("f@(#,a)", {}, sig, {true});
  CHECK(t.symbol().is_circled());
  CHECK(t.arg(0).symbol().is_bullet());
  CHECK_FALSE(bullet_free(t));
  CHECK(t.str() == "f@(#,a)");
}
