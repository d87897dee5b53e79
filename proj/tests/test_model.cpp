#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "lpfd/generators.hpp"
#include "lpfd/model.hpp"
#include "lpfd/semantics.hpp"

using namespace lpfd;

namespace {

vocab_ptr two_var_vocab() {
  return std::make_shared<vocabulary>(std::vector<std::string>{"x", "y"},
                                      std::vector<predicate_info>{{"p", 1}},
                                      std::vector<std::string>{});
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("validation catches broken relations and valuations") {
  vocab_ptr voc = two_var_vocab();
  rpd_model m(voc, {"w0", "w1"});
  for (var_id v = 0; v < 2; ++v) {
    m.sim(v) = bit_rel(2, true);
    m.leq(v) = bit_rel(2, true);
  }
  CHECK(m.validate().empty());

  // Break symmetry of an agreement relation.
  rpd_model broken = m;
  broken.sim(0).set(0, 1);
  auto problems = broken.validate();
  REQUIRE(!problems.empty());
  CHECK(problems[0].find("symmetry") != std::string::npos);

  // Break valuation invariance: x-agreeing points must agree on p(x).
  rpd_model unstable = m;
  unstable.sim(0).set(0, 1);
  unstable.sim(0).set(1, 0);
  unstable.set_atom(atom_key{0, {0}}, {true, false});
  problems = unstable.validate();
  REQUIRE(!problems.empty());
  CHECK(problems[0].find("invariant") != std::string::npos);

  // Preference relations only need reflexivity and transitivity; two
  // incomparable points are fine.
  rpd_model partial = m;
  partial.leq(0) = bit_rel(2, true);
  CHECK(partial.validate().empty());
}

TEST_CASE("sim_set intersects agreement and defaults to the full relation") {
  vocab_ptr voc = two_var_vocab();
  rpd_model m(voc, {"w0", "w1", "w2"});
  for (var_id v = 0; v < 2; ++v) {
    m.sim(v) = bit_rel(3, true);
    m.leq(v) = bit_rel(3, true);
  }
  m.sim(0).set(0, 1);
  m.sim(0).set(1, 0);
  m.sim(1).set(1, 2);
  m.sim(1).set(2, 1);

  bit_rel both = m.sim_set(voc->all_vars());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(both.at(i, j) == (m.sim(0).at(i, j) && m.sim(1).at(i, j)));

  bit_rel none = m.sim_set(var_set());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(none.at(i, j));
}

TEST_CASE("assignment agreement in concrete models") {
  vocab_ptr voc = two_var_vocab();
  pd_model m(voc, {"o0", "o1"}, {"a", "b", "c"});
  m.set_assignment(0, 0, 0);
  m.set_assignment(0, 1, 0);
  m.set_assignment(1, 0, 0);
  m.set_assignment(1, 1, 1);
  m.set_assignment(2, 0, 1);
  m.set_assignment(2, 1, 1);
  for (var_id v = 0; v < 2; ++v) m.pref(v) = bit_rel(3, true);

  CHECK(m.eq_on(0, 1, var_set::single(0)));
  CHECK(!m.eq_on(0, 1, var_set::single(1)));
  CHECK(m.eq_on(0, 0, voc->all_vars()));
  CHECK(m.eq_on(0, 2, var_set()));

  bit_rel on_x = m.eq_rel(var_set::single(0));
  CHECK(on_x.at(0, 1));
  CHECK(!on_x.at(1, 2));
  CHECK(m.validate().empty());
}

TEST_CASE("concrete-to-relational translation preserves structure") {
  gen_params gp;
  generator gen(501);
  for (int trial = 0; trial < 100; ++trial) {
    pd_model pd = gen.random_pd(gp);
    rpd_model r = pd_to_rpd(pd);
    REQUIRE(r.validate().empty());
    REQUIRE(r.point_count() == pd.assignment_count());
    // Agreement in the image is assignment agreement in the source.
    for (var_id v = 0; v < pd.voc()->var_limit(); ++v)
      for (point_id a = 0; a < pd.assignment_count(); ++a)
        for (point_id b = 0; b < pd.assignment_count(); ++b) {
          CHECK(r.sim(v).at(a, b) == pd.eq_on(a, b, var_set::single(v)));
          CHECK(r.leq(v).at(a, b) == pd.pref(v).at(a, b));
        }
  }
}

TEST_CASE("relational-to-concrete translation collapses duplicate points only") {
  gen_params gp;
  generator gen(502);
  for (int trial = 0; trial < 100; ++trial) {
    // Generated relational models separate points by full agreement, so the
    // translation is a bijection on points.
    rpd_model r = gen.random_rpd(gp);
    pd_model pd = rpd_to_pd(r);
    REQUIRE(pd.validate().empty());
    CHECK(pd.assignment_count() == r.point_count());
    for (var_id v = 0; v < r.voc()->var_limit(); ++v)
      for (point_id a = 0; a < r.point_count(); ++a)
        for (point_id b = 0; b < r.point_count(); ++b)
          CHECK(pd.eq_on(a, b, var_set::single(v)) == r.sim(v).at(a, b));
  }
}

TEST_CASE("partition enumeration matches the Bell numbers") {
  auto universe2 = var_set(0b11u);
  auto universe3 = var_set(0b111u);
  auto universe4 = var_set(0b1111u);
  CHECK(all_partitions(universe2).size() == 2);
  CHECK(all_partitions(universe3).size() == 5);
  CHECK(all_partitions(universe4).size() == 15);

  auto parts = all_partitions(universe3);
  // Finest first, coarsest last.
  CHECK(parts.front().size() == 3);
  CHECK(parts.back().size() == 1);
  for (const var_partition& pi : parts) {
    CHECK(is_partition_of(pi, universe3));
    CHECK(refines(parts.front(), pi));
    CHECK(refines(pi, parts.back()));
  }
  // All distinct.
  std::set<std::string> seen;
  auto voc = std::make_shared<vocabulary>(
      std::vector<std::string>{"x", "y", "z", "w"},
      std::vector<predicate_info>{}, std::vector<std::string>{});
  for (const var_partition& pi : parts) seen.insert(render_partition(*voc, pi));
  CHECK(seen.size() == parts.size());
}

TEST_CASE("refinement is the containment of blocks") {
  var_partition fine{var_set(0b001u), var_set(0b010u), var_set(0b100u)};
  var_partition mid{var_set(0b011u), var_set(0b100u)};
  var_partition coarse{var_set(0b111u)};
  var_partition other{var_set(0b101u), var_set(0b010u)};
  CHECK(refines(fine, mid));
  CHECK(refines(mid, coarse));
  CHECK(refines(fine, coarse));
  CHECK(!refines(mid, fine));
  CHECK(!refines(mid, other));
  CHECK(!refines(other, mid));
  CHECK(normalize_partition({var_set(0b100u), var_set(0b011u)}) == mid);
}

TEST_CASE("full profile condition detects product assignment spaces") {
  vocab_ptr voc = two_var_vocab();
  // Diagonal space: values (0,0) and (1,1) only.
  pd_model diag(voc, {"o0", "o1"}, {"a", "b"});
  diag.set_assignment(0, 0, 0);
  diag.set_assignment(0, 1, 0);
  diag.set_assignment(1, 0, 1);
  diag.set_assignment(1, 1, 1);
  for (var_id v = 0; v < 2; ++v) diag.pref(v) = bit_rel(2, true);
  CHECK(!full_profile_condition(diag));

  // Full product space over one object is trivially full.
  pd_model tiny(voc, {"o0"}, {"a"});
  tiny.set_assignment(0, 0, 0);
  tiny.set_assignment(0, 1, 0);
  for (var_id v = 0; v < 2; ++v) tiny.pref(v) = bit_rel(1, true);
  CHECK(full_profile_condition(tiny));
}

}
