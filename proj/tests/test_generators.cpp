#include <string>
#include <vector>

#include "doctest.h"
#include "lpfd/generators.hpp"
#include "lpfd/model_io.hpp"
#include "lpfd/parser.hpp"

using namespace lpfd;

TEST_SUITE("generators") {

TEST_CASE("the same seed reproduces the same draws") {
  gen_params gp;
  generator g1(42), g2(42);
  for (int trial = 0; trial < 25; ++trial) {
    rpd_model m1 = g1.random_rpdn(gp);
    rpd_model m2 = g2.random_rpdn(gp);
    CHECK(save_model_text(m1) == save_model_text(m2));
    formula f1 = g1.random_formula(m1.voc(), 3, true, true);
    formula f2 = g2.random_formula(m2.voc(), 3, true, true);
    CHECK(render(f1) == render(f2));
    cpd_model c1 = g1.random_cpd(gp);
    cpd_model c2 = g2.random_cpd(gp);
    CHECK(save_model_text(c1) == save_model_text(c2));
  }
  generator g3(43);
  bool any_diff = false;
  generator g4(42);
  for (int trial = 0; trial < 5 && !any_diff; ++trial)
    any_diff = save_model_text(g3.random_rpd(gp)) != save_model_text(g4.random_rpd(gp));
  CHECK(any_diff);
}

TEST_CASE("generated relational models are structurally valid and separated") {
  gen_params gp;
  generator gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    rpd_model m = gen.random_rpd(gp);
    CHECK(m.validate().empty());
    CHECK(m.point_count() >= 1);
    CHECK(m.point_count() <= gp.max_points);
    // Distinct points are separated by agreement on the full vocabulary, so
    // the assignment view of the model identifies them.
    bit_rel all = m.sim_set(m.voc()->all_vars());
    for (point_id w = 0; w < m.point_count(); ++w)
      for (point_id v = 0; v < m.point_count(); ++v)
        if (w != v) CHECK(!all.at(w, v));
  }
}

TEST_CASE("named model generation covers every nominal") {
  gen_params gp;
  generator gen(8);
  for (int trial = 0; trial < 60; ++trial) {
    rpd_model m = gen.random_rpdn(gp);
    CHECK(m.validate().empty());
    CHECK(m.fully_named());
  }
}

TEST_CASE("generated assignment models are valid") {
  gen_params gp;
  generator gen(9);
  for (int trial = 0; trial < 100; ++trial) {
    pd_model m = gen.random_pd(gp);
    CHECK(m.validate().empty());
    CHECK(m.object_count() <= gp.max_objects);
  }
}

TEST_CASE("generated formulas respect depth and nominal restrictions") {
  gen_params gp;
  generator gen(10);
  for (int trial = 0; trial < 200; ++trial) {
    vocab_ptr voc = gen.random_vocab(gp, trial % 2 == 0);
    bool allow_noms = trial % 2 == 0;
    formula f = gen.random_formula(voc, 3, allow_noms, true);
    CHECK(modal_depth(f) <= 3);
    if (!allow_noms) CHECK(!mentions_nominal(f));
    // Everything generated parses back.
    CHECK(parse_formula(render(f), voc) == f);
  }
}

TEST_CASE("reduced coalitional models have clean recovery everywhere") {
  gen_params gp;
  generator gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    cpd_model m = gen.random_rcpd(gp);
    CHECK(m.validate_cpd().empty());
    CHECK(m.rcpd_violations().empty());
    for (profile_id a = 0; a < m.profile_count(); ++a) {
      CHECK(m.realizable(a));
      CHECK(m.p_recoverable(a));
    }
  }
}

TEST_CASE("subset and partition draws stay inside the universe") {
  generator gen(12);
  var_set universe(0b10110u);
  for (int trial = 0; trial < 200; ++trial) {
    var_set s = gen.random_subset(universe);
    CHECK(s.subset_of(universe));
    var_partition pi = gen.random_partition(universe);
    CHECK(is_partition_of(pi, universe));
  }
  // Non-empty draws honor the flag.
  for (int trial = 0; trial < 50; ++trial)
    CHECK(!gen.random_subset(universe, false).empty());
}

}
