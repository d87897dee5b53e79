#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "lpfd/calculus.hpp"
#include "lpfd/generators.hpp"
#include "lpfd/semantics.hpp"

using namespace lpfd;

namespace {

vocab_ptr test_vocab() {
  return std::make_shared<vocabulary>(
      std::vector<std::string>{"x", "y"},
      std::vector<predicate_info>{{"p", 1}},
      std::vector<std::string>{"i", "j"});
}

std::vector<std::string> ids_of(calculus_id system) {
  std::vector<std::string> out;
  for (const axiom_schema& s : schemas(system)) out.push_back(s.id);
  return out;
}

}  // namespace

TEST_SUITE("calculus") {

TEST_CASE("both schema tables list each axiom once, in a stable order") {
  CHECK(ids_of(calculus_id::lpfd) ==
        std::vector<std::string>{"Tau", "K", "Ord-a", "Ord-b", "Ord-c", "Ord-d",
                                 "Ord-e", "Dep-a", "Dep-b", "Dep-c", "Dep-d"});
  CHECK(ids_of(calculus_id::hlpfd) ==
        std::vector<std::string>{"Tau", "K", "Dep", "Nom", "DD-1", "DD-2",
                                 "Ord-1", "Ord-2", "Ord-3", "Ord-4", "Ord-5"});
  for (calculus_id system : {calculus_id::lpfd, calculus_id::hlpfd})
    for (const axiom_schema& s : schemas(system)) {
      CHECK(s.system == system);
      CHECK(!s.display.empty());
      CHECK(&find_schema(system, s.id) == &s);
    }
  CHECK_THROWS(find_schema(calculus_id::lpfd, "Nope"));
  CHECK(to_string(calculus_id::lpfd) == "lpfd");
  CHECK(to_string(calculus_id::hlpfd) == "hlpfd");
}

TEST_CASE("atom membership follows the fragment") {
  vocab_ptr voc = test_vocab();
  var_set x_only = var_set::single(0);
  formula px = pred(voc, "p", {"x"});
  formula py = pred(voc, "p", {"y"});
  formula dxy = dep(voc, {"x"}, "y");
  formula dxx = dep(voc, {"x"}, "x");

  CHECK(in_atom_set(px, x_only, calculus_id::lpfd));
  CHECK(!in_atom_set(py, x_only, calculus_id::lpfd));
  // Dependence atoms with subscript inside X count in the base calculus...
  CHECK(in_atom_set(dxy, x_only, calculus_id::lpfd));
  CHECK(in_atom_set(dxx, x_only, calculus_id::lpfd));
  // ...but the hybrid fragment restricts the set to predicate atoms.
  CHECK(!in_atom_set(dxy, x_only, calculus_id::hlpfd));
  CHECK(in_atom_set(px, x_only, calculus_id::hlpfd));
  // Compounds never qualify.
  CHECK(!in_atom_set(land(px, px), voc->all_vars(), calculus_id::lpfd));
}

TEST_CASE("instantiation enforces the schema provisos") {
  vocab_ptr voc = test_vocab();

  // Monotonicity requires the first box's sets inside the second box's sets.
  const axiom_schema& ord_c = find_schema(calculus_id::lpfd, "Ord-c");
  bindings good;
  good.voc = voc;
  good.sets = {{"X", var_set::single(0)}, {"Y", {}}, {"Z", {}},
               {"X2", voc->all_vars()}, {"Y2", {}}, {"Z2", {}}};
  good.formulas = {{"phi", pred(voc, "p", {"x"})}};
  formula inst = instantiate(ord_c, good);
  CHECK(inst.kind() == fkind::implies);

  bindings bad = good;
  bad.sets["X2"] = var_set();  // X no longer within X2
  CHECK_THROWS_AS(instantiate(ord_c, bad), side_condition_error);

  // Atom invariance requires the formula slot to hold an atom over X.
  const axiom_schema& dep_b = find_schema(calculus_id::lpfd, "Dep-b");
  bindings atom_ok;
  atom_ok.voc = voc;
  atom_ok.sets = {{"X", var_set::single(0)}};
  atom_ok.formulas = {{"phi", pred(voc, "p", {"x"})}};
  CHECK(instantiate(dep_b, atom_ok).kind() == fkind::implies);

  bindings atom_bad = atom_ok;
  atom_bad.formulas["phi"] = land(pred(voc, "p", {"x"}), pred(voc, "p", {"x"}));
  CHECK_THROWS_AS(instantiate(dep_b, atom_bad), side_condition_error);

  // Missing slots are reported as side-condition failures too.
  bindings empty;
  empty.voc = voc;
  CHECK_THROWS_AS(instantiate(ord_c, empty), side_condition_error);
}

TEST_CASE("random instances of every schema hold in random models") {
  gen_params gp;
  gp.max_nominals = 2;
  generator gen(4242);
  for (calculus_id system : {calculus_id::lpfd, calculus_id::hlpfd}) {
    for (const axiom_schema& schema : schemas(system)) {
      for (int trial = 0; trial < 30; ++trial) {
        rpd_model m = gen.random_rpdn(gp);
        bindings b = random_bindings(schema, m.voc(), gen, 2);
        formula inst = instantiate(schema, b);
        point_id ce = 0;
        bool ok = valid_in_model(m, inst, &ce);
        CAPTURE(schema.id);
        CAPTURE(render(inst));
        CAPTURE(trial);
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("the fuzzer reports its trial counts and stays clean") {
  gen_params gp;
  fuzz_report r1 = soundness_fuzz(gp, calculus_id::lpfd, 25, 99);
  CHECK(r1.trials_per_schema == 25);
  CHECK(r1.per_schema.size() == schemas(calculus_id::lpfd).size());
  std::uint64_t sum = 0;
  for (const auto& [id, n] : r1.per_schema) {
    CHECK(n == 25);
    sum += n;
  }
  CHECK(r1.total_trials == sum);
  CHECK(r1.counterexamples.empty());

  // Same seed, same traversal.
  fuzz_report r2 = soundness_fuzz(gp, calculus_id::lpfd, 25, 99);
  CHECK(r2.per_schema == r1.per_schema);
  CHECK(r2.total_trials == r1.total_trials);

  fuzz_report rh = soundness_fuzz(gp, calculus_id::hlpfd, 25, 99);
  CHECK(rh.counterexamples.empty());
  CHECK(rh.per_schema.size() == schemas(calculus_id::hlpfd).size());
}

TEST_CASE("inference rules preserve validity where promised") {
  gen_params gp;
  generator gen(777);
  for (int trial = 0; trial < 100; ++trial) {
    rpd_model m = gen.random_rpdn(gp);
    formula phi = gen.random_formula(m.voc(), 2, true, true);
    formula psi = gen.random_formula(m.voc(), 2, true, true);
    var_set xs = gen.random_subset(m.voc()->all_vars());
    var_set ys = gen.random_subset(m.voc()->all_vars());
    var_set zs = gen.random_subset(m.voc()->all_vars());

    CHECK(rule_check(rule_id::mp, {implies(phi, psi), phi}, psi, m));
    CHECK(rule_check(rule_id::nec, {phi}, box(xs, ys, zs, phi), m));
  }

  // Shape violations are rejected before any evaluation happens.
  rpd_model m = generator(1).random_rpdn(gp);
  formula phi = pred(m.voc(), m.voc()->predicate(0).name,
                     std::vector<std::string>(m.voc()->predicate(0).arity,
                                              m.voc()->var_name(0)));
  CHECK_THROWS_AS(rule_check(rule_id::mp, {phi}, phi, m), side_condition_error);
  CHECK_THROWS_AS(rule_check(rule_id::nec, {phi, phi}, phi, m),
                  side_condition_error);
}

TEST_CASE("naming rule needs a fresh nominal and a named model") {
  auto voc = test_vocab();
  rpd_model m(voc, {"w0", "w1"});
  for (var_id v = 0; v < 2; ++v) {
    m.sim(v) = bit_rel(2, true);
    m.leq(v) = bit_rel(2, true);
  }
  m.set_atom(atom_key{0, {0}}, {true, true});
  m.name_point(0, 0);
  m.name_point(1, 1);
  REQUIRE(m.validate().empty());

  formula px = pred(voc, "p", {"x"});
  // i -> p(x) is valid here (p(x) holds everywhere), and so is p(x).
  CHECK(rule_check(rule_id::name, {implies(nominal(voc, "i"), px)}, px, m));
  // The named nominal must not occur in the conclusion.
  CHECK_THROWS_AS(rule_check(rule_id::name,
                             {implies(nominal(voc, "i"), nominal(voc, "i"))},
                             nominal(voc, "i"), m),
                  side_condition_error);

  // A failing premise makes the application vacuously acceptable.
  m.set_atom(atom_key{0, {0}}, {false, false});
  formula q = lnot(px);
  CHECK(rule_check(rule_id::name, {implies(nominal(voc, "i"), px)}, px, m));
  CHECK(rule_check(rule_id::paste,
                   {implies(at(voc, "i", dia({}, {}, {}, nominal(voc, "j"))),
                            at(voc, "j", q))},
                   at(voc, "i", box({}, {}, {}, q)), m));
}

}
