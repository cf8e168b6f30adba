#include <doctest.h>

#include "cbn/automaton.hpp"

using namespace cbn;

namespace {

Symbol a() { return Symbol::get("a", 0); }
Symbol b() { return Symbol::get("b", 0); }
Symbol g() { return Symbol::get("g", 1); }

// Terms g^n(a) with n even, plus anything over b; nondeterministic on purpose.
TreeAutomaton even_g() {
  TreeAutomaton aut(Signature{a(), b(), g()});
  StateId even = aut.add_state(StateLabel::named_state("even"), true);
  StateId odd = aut.add_state(StateLabel::named_state("odd"));
  StateId any = aut.add_state(StateLabel::named_state("any"));
  aut.add_rule(a(), {}, even);
  aut.add_rule(a(), {}, any);
  aut.add_rule(b(), {}, any);
  aut.add_rule(g(), {even}, odd);
  aut.add_rule(g(), {odd}, even);
  aut.add_rule(g(), {any}, any);
  return aut;
}

Term gn(unsigned n) {
  Term t = Term::constant(a());
  for (unsigned i = 0; i < n; ++i) t = Term::app(g(), {t});
  return t;
}

}  // namespace

TEST_CASE("runs and acceptance") {
  TreeAutomaton aut = even_g();
  CHECK(aut.accepts(gn(0)));
  CHECK_FALSE(aut.accepts(gn(1)));
  CHECK(aut.accepts(gn(4)));
  CHECK(aut.run(gn(3)) == StateSet{1, 2});
  CHECK_FALSE(aut.add_rule(a(), {}, 0));
  CHECK(aut.has_rule(g(), std::vector<StateId>{0}, 1));
  CHECK_FALSE(aut.is_deterministic_complete());
  StateSet kids[] = {StateSet{0, 2}};
  CHECK(aut.step(g(), kids) == StateSet{1, 2});
}

TEST_CASE("determinize, complement and emptiness") {
  TreeAutomaton det = determinize_complete(even_g());
  CHECK(det.is_deterministic_complete());
  TreeAutomaton co = complement_finals(det);
  for (unsigned n = 0; n < 7; ++n) {
    CHECK(det.accepts(gn(n)) == (n % 2 == 0));
    CHECK(co.accepts(gn(n)) == (n % 2 == 1));
  }
  auto w = emptiness_witness(co);
  REQUIRE(w.has_value());
  CHECK(w->height() == 1);
  CHECK(co.accepts(*w));

  TreeAutomaton none(Signature{a(), g()});
  StateId q = none.add_state(StateLabel::named_state("q"), true);
  none.add_rule(g(), {q}, q);
  CHECK_FALSE(emptiness_witness(none).has_value());
}

TEST_CASE("accessibility and trimming") {
  TreeAutomaton aut = even_g();
  StateId dead = aut.add_state(StateLabel::named_state("dead"), true);
  aut.add_rule(g(), {dead}, dead);
  Accessibility acc = accessible_states(aut);
  CHECK(acc.accessible == StateSet{0, 1, 2});
  CHECK(acc.layer[1] == 2);
  REQUIRE(acc.representative[1].has_value());
  CHECK(acc.representative[1]->str() == "g(a)");
  Trimmed tr = trim_accessible(aut);
  CHECK(tr.automaton.state_count() == 3);
  CHECK_FALSE(tr.renaming[dead].has_value());
  CHECK(tr.representatives.size() == 3);
}

TEST_CASE("disjoint union shifts the second operand") {
  TreeAutomaton u = disjoint_union(even_g(), even_g());
  CHECK(u.state_count() == 6);
  CHECK(u.finals() == StateSet{0, 3});
  CHECK(u.run(gn(2)) == StateSet{0, 2, 3, 5});
}

TEST_CASE("dump is stable and marks added rules") {
  TreeAutomaton aut = even_g();
  aut.add_rule(b(), {}, 0, true);
  std::string d = aut.dump();
  CHECK(d == aut.dump());
  CHECK(d.find("+") != std::string::npos);
  aut.set_scope("E");
  CHECK(aut.label(0).str() == "E:even");
  CHECK(aut.find_state(aut.label(1)) == StateId{1});
}
