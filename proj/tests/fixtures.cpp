#include "fixtures.hpp"

namespace fixtures {

using namespace lpfd;

cpd_model make_example1() {
  cpd_model m({"1", "2", "3"}, {"alpha", "beta", "gamma"},
              {"a", "ap", "app", "a3p", "a4p", "a5p", "a6p", "a7p", "a8p",
               "a9p", "a10p", "a11p"});
  const strat_id al = 0, be = 1, ga = 2;
  auto solo = [&](var_id i, strat_id s) {
    return m.intern_choice({var_set::single(i), {s}});
  };
  auto pair12 = [&](strat_id s1, strat_id s2) {
    return m.intern_choice({var_set(0b011u), {s1, s2}});
  };
  auto pair13 = [&](strat_id s1, strat_id s3) {
    return m.intern_choice({var_set(0b101u), {s1, s3}});
  };
  auto pair23 = [&](strat_id s2, strat_id s3) {
    return m.intern_choice({var_set(0b110u), {s2, s3}});
  };
  auto grand = [&](strat_id s1, strat_id s2, strat_id s3) {
    return m.intern_choice({var_set(0b111u), {s1, s2, s3}});
  };

  // a: everyone solo, playing (alpha, beta, alpha).
  m.set_choice(0, 0, solo(0, al));
  m.set_choice(0, 1, solo(1, be));
  m.set_choice(0, 2, solo(2, al));
  // ap: players 1 and 2 team up on (alpha, beta); 3 solo on alpha.
  m.set_choice(1, 0, pair12(al, be));
  m.set_choice(1, 1, pair12(al, be));
  m.set_choice(1, 2, solo(2, al));
  // app: 1 and 2 on (alpha, gamma); 3 solo on beta.
  m.set_choice(2, 0, pair12(al, ga));
  m.set_choice(2, 1, pair12(al, ga));
  m.set_choice(2, 2, solo(2, be));
  // a3p: 1 solo on alpha; 2 and 3 on (beta, alpha).
  m.set_choice(3, 0, solo(0, al));
  m.set_choice(3, 1, pair23(be, al));
  m.set_choice(3, 2, pair23(be, al));
  // a4p: 1 solo on beta; 2 and 3 on (beta, gamma).
  m.set_choice(4, 0, solo(0, be));
  m.set_choice(4, 1, pair23(be, ga));
  m.set_choice(4, 2, pair23(be, ga));
  // a5p: 1 and 3 on (alpha, alpha); 2 solo on beta.
  m.set_choice(5, 0, pair13(al, al));
  m.set_choice(5, 1, solo(1, be));
  m.set_choice(5, 2, pair13(al, al));
  // a6p: 1 and 3 on (gamma, alpha); 2 solo on alpha.
  m.set_choice(6, 0, pair13(ga, al));
  m.set_choice(6, 1, solo(1, al));
  m.set_choice(6, 2, pair13(ga, al));
  // a7p..a11p: the grand coalition on five assignments.
  const strat_id grid[5][3] = {
      {al, be, al}, {al, ga, be}, {be, be, ga}, {ga, al, al}, {ga, ga, ga}};
  for (profile_id a = 7; a < 12; ++a)
    for (var_id i = 0; i < 3; ++i)
      m.set_choice(a, i, grand(grid[a - 7][0], grid[a - 7][1], grid[a - 7][2]));

  m.set_utilities({{{al, be, al}, {0, 0, 0}},
                   {{al, ga, be}, {0, 0, 0}},
                   {{be, be, ga}, {0, 0, 0}},
                   {{ga, al, al}, {0, 0, 0}},
                   {{ga, ga, ga}, {0, 0, 0}}});
  return m;
}

cpd_model make_example2() {
  cpd_model m({"1", "2"}, {"alpha", "beta"},
              {"a", "ap", "app", "a3p", "a4p", "a5p", "a6p", "a7p"});
  const strat_id al = 0, be = 1;
  auto solo = [&](var_id i, strat_id s) {
    return m.intern_choice({var_set::single(i), {s}});
  };
  auto both = [&](strat_id s1, strat_id s2) {
    return m.intern_choice({var_set(0b11u), {s1, s2}});
  };
  const strat_id grid[4][2] = {{al, al}, {al, be}, {be, al}, {be, be}};
  for (profile_id a = 0; a < 4; ++a) {
    m.set_choice(a, 0, solo(0, grid[a][0]));
    m.set_choice(a, 1, solo(1, grid[a][1]));
    m.set_choice(a + 4, 0, both(grid[a][0], grid[a][1]));
    m.set_choice(a + 4, 1, both(grid[a][0], grid[a][1]));
  }
  m.set_utilities({{{al, al}, {9, 9}},
                   {{al, be}, {0, 10}},
                   {{be, al}, {10, 0}},
                   {{be, be}, {1, 1}}});
  return m;
}

}  // namespace fixtures
