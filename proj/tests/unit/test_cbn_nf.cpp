#include <doctest.h>

#include "cbn/cbn_nf.hpp"
#include "cbn/error.hpp"
#include "cbn/oracle.hpp"
#include "support.hpp"

using namespace cbn;
using testing::load_catalog;
using testing::term;

TEST_CASE("example verdicts") {
  Trs e = load_catalog("example.trs");
  for (Approx a : {Approx::S, Approx::NV}) {
    Verdict v = decide_cbn_nf(e, a);
    CHECK_FALSE(v.in_class);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->str() == "f(f(a,a),g(f(a,a),f(a,a)))");
    CHECK(v.evidence.size() == 3);
    for (const Evidence& ev : v.evidence) CHECK(ev.accepted);
  }
  Verdict g = decide_cbn_nf(e, Approx::G);
  CHECK(g.in_class);
  CHECK_FALSE(g.witness.has_value());
}

TEST_CASE("pruned and exhaustive exploration agree") {
  for (const char* f : {"example.trs", "a_to_b.trs", "constants.trs"}) {
    Trs t = load_catalog(f);
    for (Approx a : {Approx::S, Approx::NV, Approx::G}) {
      CAPTURE(f);
      CAPTURE(to_string(a));
      NfAnalyzer p(t, a), x(t, a);
      Verdict vp = p.decide(ExploreMode::pruned);
      Verdict vx = x.decide(ExploreMode::exhaustive);
      CHECK(vp.in_class == vx.in_class);
      CHECK(vp.stats.pair_states <= vx.stats.pair_states);
    }
  }
}

TEST_CASE("needed redexes") {
  Trs e = load_catalog("example.trs");
  Term t = term(e, "f(f(a,a),g(f(a,a),f(a,a)))");
  auto g = needed_redexes(e, Approx::G, t);
  REQUIRE(g.size() == 3);
  CHECK(g[0].position.str() == "1");
  CHECK(g[0].needed);
  for (const NeededRedex& r : needed_redexes(e, Approx::NV, t)) CHECK_FALSE(r.needed);
  CHECK(needed_redexes(e, Approx::G, term(e, "g(a,b)")).empty());
  CHECK_THROWS(needed_redexes(e, Approx::G, term(e, "g(#,b)", true)));
}

TEST_CASE("engine dump and run") {
  Trs e = load_catalog("example.trs");
  NfAnalyzer an(e, Approx::NV);
  Term t = term(e, "f(f(a,a),g(f(a,a),f(a,a)))");
  CHECK(an.engine().accepts(t, ExploreMode::exhaustive));
  CHECK(an.engine().accepts(t, ExploreMode::pruned));
  CHECK_FALSE(an.engine().accepts(term(e, "f(a,g(a,b))"), ExploreMode::exhaustive));
  an.engine().explore(ExploreMode::pruned, 100000, false);
  std::string d = an.engine().dump();
  CHECK(d.find("final") != std::string::npos);
  NfAnalyzer again(e, Approx::NV);
  again.engine().explore(ExploreMode::pruned, 100000, false);
  CHECK(again.engine().dump() == d);
}

TEST_CASE("resource cap") {
  NfAnalyzer an(load_catalog("example.trs"), Approx::G);
  CHECK_THROWS_AS(an.decide(ExploreMode::pruned, 3), ResourceLimit);
}

TEST_CASE("normalization by need") {
  Trs e = load_catalog("example.trs");
  NfAnalyzer an(e, Approx::G);
  NormalizeResult r = normalize_by_need(an, term(e, "f(f(a,a),g(f(a,a),f(a,a)))"), 20);
  CHECK(r.status == NormalizeResult::Status::normal_form);
  CHECK(r.term.str() == "b");
  CHECK(r.trace.size() == 3);
  CHECK(r.trace[0].position.str() == "1");
  NormalizeResult short_run = normalize_by_need(an, term(e, "f(f(a,a),g(f(a,a),f(a,a)))"), 1);
  CHECK(short_run.status == NormalizeResult::Status::fuel_exhausted);
  NfAnalyzer nv(e, Approx::NV);
  NormalizeResult stuck = normalize_by_need(nv, term(e, "f(f(a,a),g(f(a,a),f(a,a)))"), 20);
  CHECK(stuck.status == NormalizeResult::Status::no_needed_redex);
}

TEST_CASE("berry system") {
  Trs berry = load_catalog("berry.trs");
  Verdict s = decide_cbn_nf(berry, Approx::S);
  CHECK_FALSE(s.in_class);
  REQUIRE(s.witness.has_value());
  CHECK(s.witness->str() == "f(c,c,c)");
  CHECK(decide_cbn_nf(berry, Approx::G).in_class);
}
