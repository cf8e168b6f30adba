#include <doctest.h>

#include <set>

#include "cbn/oracle.hpp"
#include "cbn/recognizers.hpp"
#include "support.hpp"

using namespace cbn;
using testing::load_catalog;
using testing::term;

TEST_CASE("pattern index of the example") {
  PatternIndex idx = pattern_index(load_catalog("example.trs"));
  std::set<std::string> subs;
  for (const Term& t : idx.subterms) subs.insert(t.str());
  CHECK(subs == std::set<std::string>{"x", "a", "b", "g(x,a)", "g(a,x)"});
  CHECK(idx.lhs_arguments.size() == 5);
}

TEST_CASE("B(R) reaches exactly the matching patterns") {
  Trs e = load_catalog("example.trs");
  PatternAutomaton b = build_pattern_automaton(e);
  CHECK(b.automaton.state_count() == 5);
  CHECK(b.automaton.label(b.x_state).str() == "<x>");
  StateSet r = b.automaton.run(term(e, "g(a,a)"));
  CHECK(r.contains(b.x_state));
  CHECK(r.contains(b.states.at(canonical_pattern(parse_term("g(x,a)", {"x"}, e.signature())))));
  CHECK(r.contains(b.states.at(canonical_pattern(parse_term("g(a,x)", {"x"}, e.signature())))));
  CHECK_FALSE(r.contains(b.states.at(parse_term("b", {}, e.signature()))));
}

TEST_CASE("redex and reducible automata") {
  Trs e = load_catalog("example.trs");
  RedexAutomaton red = build_redex_automaton(e, false);
  CHECK(red.automaton.accepts(term(e, "f(b,a)")));
  CHECK_FALSE(red.automaton.accepts(term(e, "g(f(b,a),a)")));
  RedexAutomaton redu = build_reducible_automaton(e);
  CHECK(redu.automaton.accepts(term(e, "g(f(b,a),a)")));
  CHECK_FALSE(redu.automaton.accepts(term(e, "g(a,b)")));
  CHECK(redu.automaton.label(redu.sink).str() == "q_r");
}

TEST_CASE("normal form automaton") {
  Trs e = load_catalog("example.trs");
  TreeAutomaton nf = build_nf_automaton(e);
  CHECK(nf.is_deterministic_complete());
  CHECK(nf.signature().has_bullet());
  CHECK(nf.accepts(term(e, "f(a,g(a,b))")));
  CHECK_FALSE(nf.accepts(term(e, "f(a,g(b,a))")));
  CHECK_FALSE(nf.accepts(term(e, "g(#,a)", true)));
  OracleReport rep = check_nf_automaton(e, 3);
  CHECK(rep.pass());
  CHECK(rep.checked > 0);
}

TEST_CASE("redex detection copy") {
  Trs e = load_catalog("example.trs");
  PatternAutomaton b = build_pattern_automaton(e);
  RedexDetection det = extend_with_redex_detection(b.automaton, e, b.x_state);
  REQUIRE(det.q_r.has_value());
  CHECK(det.lhs_primed.size() == 4);
  CHECK(det.automaton.state_count() == b.automaton.state_count() + 4 + 1);
  CHECK(det.automaton.run(term(e, "g(f(b,a),a)")).contains(*det.q_r));
  CHECK_FALSE(det.automaton.run(term(e, "g(a,a)")).contains(*det.q_r));
}

TEST_CASE("root-stable automaton") {
  Trs ab = load_catalog("a_to_b.trs");
  TreeAutomaton rs = build_rs_automaton(ab);
  CHECK(rs.accepts(term(ab, "b")));
  CHECK_FALSE(rs.accepts(term(ab, "a")));
  CHECK_FALSE(rs.accepts(term(ab, "a@", true)));

  Trs e = load_catalog("example.trs");
  TreeAutomaton rse = build_rs_automaton(e);
  CHECK(rse.accepts(term(e, "g(a,a)")));
  CHECK_FALSE(rse.accepts(term(e, "g(f(b,a),b)")));
  CHECK_FALSE(rse.accepts(term(e, "g@(b,b)", true)));
  CHECK(rse.accepts(term(e, "g@(a,b)", true)));
  CHECK_FALSE(rse.accepts(term(e, "f(a,g(a,a))")));
}
