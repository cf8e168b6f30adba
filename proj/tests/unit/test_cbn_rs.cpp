#include <doctest.h>

#include "cbn/cbn_rs.hpp"
#include "cbn/oracle.hpp"
#include "support.hpp"

using namespace cbn;
using testing::load_catalog;
using testing::term;

TEST_CASE("circle_root") {
  Trs e = load_catalog("example.trs");
  CHECK(circle_root(term(e, "f(a,b)")).str() == "f@(a,b)");
  CHECK_THROWS(circle_root(Term::var("x")));
}

TEST_CASE("rs verdicts") {
  Trs e = load_catalog("example.trs");
  CHECK(decide_cbn_rs(e, Approx::G, Approx::G).in_class);
  Verdict ss = decide_cbn_rs(e, Approx::S, Approx::S);
  CHECK_FALSE(ss.in_class);
  REQUIRE(ss.witness.has_value());
  RsAnalyzer an(e, Approx::S, Approx::S);
  CHECK(an.characterization(*ss.witness));
  CHECK(an.non_root_stable(*ss.witness));

  Trs ab = load_catalog("a_to_b.trs");
  for (Approx a : {Approx::S, Approx::NV, Approx::G})
    for (Approx b : {Approx::S, Approx::NV, Approx::G}) CHECK(decide_cbn_rs(ab, a, b).in_class);
}

TEST_CASE("root-needed redexes") {
  Trs ab = load_catalog("a_to_b.trs");
  auto r = root_needed_redexes(ab, Approx::S, Approx::S, term(ab, "a"));
  REQUIRE(r.size() == 1);
  CHECK(r[0].needed);

  Trs e = load_catalog("example.trs");
  RsAnalyzer an(e, Approx::G, Approx::G);
  auto rows = an.root_needed_redexes(term(e, "g(f(b,a),f(b,a))"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].needed);
  CHECK(rows[1].needed);
}

TEST_CASE("pruned and exhaustive rs exploration agree on small systems") {
  for (const char* f : {"a_to_b.trs", "constants.trs"}) {
    Trs t = load_catalog(f);
    for (Approx a : {Approx::S, Approx::G}) {
      RsAnalyzer p(t, a, a), x(t, a, a);
      CHECK(p.decide(ExploreMode::pruned).in_class == x.decide(ExploreMode::exhaustive).in_class);
    }
  }
}

TEST_CASE("rs metrics") {
  RsAnalyzer an(load_catalog("example.trs"), Approx::G, Approx::G);
  an.decide();
  RsMetrics m = an.metrics();
  CHECK(m.cprime_states == an.cprime().state_count());
  CHECK(m.rs_saturation.rounds >= 1);
  CHECK(m.inner_saturation_rounds >= 1);
}
