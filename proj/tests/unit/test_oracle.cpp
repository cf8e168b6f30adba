#include <doctest.h>

#include "cbn/oracle.hpp"
#include "support.hpp"

using namespace cbn;
using testing::load_catalog;
using testing::term;

TEST_CASE("enumeration sizes") {
  Trs e = load_catalog("example.trs");
  const Signature& sig = e.signature();
  CHECK(count_terms(sig, 1) == 2u);
  CHECK(count_terms(sig, 2) == 2u + 2 * 4);
  CHECK(enumerate_terms(sig, 2).size() == 10);
  std::size_t n = 0;
  unsigned max_h = 0;
  for_each_term(sig, 3, [&](const Term& t, std::span<const std::size_t>) {
    ++n;
    CHECK(t.height() >= max_h);
    max_h = t.height();
  });
  CHECK(n == count_terms(sig, 3));
}

TEST_CASE("bounded reachability") {
  Trs e = load_catalog("example.trs");
  auto nf = [&](const Term& t) { return is_normal_form(e, t); };
  CHECK(reaches(e, term(e, "f(f(a,a),g(b,b))"), nf) == Reach::yes);
  ReachResult r = bounded_reach(e, term(e, "g(f(b,a),f(b,a))"));
  CHECK(r.saturated);
  CHECK(r.terms.count(term(e, "a")) == 1);
  CHECK(r.terms.size() == 5);
  Trs s = approximate(e, Approx::S);
  CHECK_FALSE(bounded_reach(s, term(e, "f(b,a)")).saturated);
  CHECK(is_normal_form(e, term(e, "f(g(a,a),g(g(a,a),g(a,a)))")));
  CHECK_FALSE(is_normal_form(e, term(e, "g(#,a)", true)));
}

TEST_CASE("report bookkeeping") {
  OracleReport a{"x", 3, 2, 1, {}};
  OracleReport b{"x", 2, 1, 0, {{Term::constant(Symbol::get("a", 0)), "yes", "no"}}};
  a.merge(b);
  CHECK(a.checked == 5);
  CHECK_FALSE(a.pass());
  CHECK(a.summary() == "x: checked 5, agree 3, inconclusive 1, disagree 1");
}

TEST_CASE("selfcheck passes and catches an injected fault") {
  Trs ab = load_catalog("a_to_b.trs");
  SelfcheckOptions opt;
  opt.depth = 2;
  for (const OracleReport& r : selfcheck(ab, opt)) CHECK_MESSAGE(r.pass(), r.summary());
  opt.inject_fault = true;
  Trs e = load_catalog("example.trs");
  bool caught = false;
  for (const OracleReport& r : selfcheck(e, opt)) caught = caught || !r.pass();
  CHECK(caught);
}

TEST_CASE("characterization oracles on small systems") {
  CHECK(check_d_characterization(load_catalog("constants.trs"), Approx::S, 2).pass());
  CHECK(check_dprime_characterization(load_catalog("a_to_b.trs"), Approx::G, Approx::G, 2).pass());
  RsAnalyzer an(load_catalog("constants.trs"), Approx::S, Approx::S);
  CHECK(check_rs_automaton(an, 2).pass());
}
