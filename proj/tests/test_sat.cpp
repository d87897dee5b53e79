#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "lpfd/calculus.hpp"
#include "lpfd/generators.hpp"
#include "lpfd/parser.hpp"
#include "lpfd/sat.hpp"
#include "lpfd/semantics.hpp"

using namespace lpfd;

namespace {

vocab_ptr xy_vocab() {
  return std::make_shared<vocabulary>(
      std::vector<std::string>{"x", "y"},
      std::vector<predicate_info>{{"p", 1}}, std::vector<std::string>{});
}

formula parse_xy(const std::string& text) { return parse_formula(text, xy_vocab()); }

bool is_atom_over(const formula& f, var_set xs) {
  if (f.kind() == fkind::pred) {
    for (var_id a : f.node().args)
      if (!xs.contains(a)) return false;
    return true;
  }
  return f.kind() == fkind::dep && f.node().xs.subset_of(xs);
}

// Checks one truth assignment over the closure against the coherence rules,
// written out longhand from the definitions.  Used to cross-check the
// backtracking enumerator on small closures.
bool coherent(const closure_set& c, const std::vector<bool>& val) {
  const auto& ms = c.members();
  const std::size_t n = c.size();

  for (std::size_t i = 0; i < n; ++i) {
    const formula& f = ms[i].f;
    // Complement pairing.
    if (val[i] == val[c.complement(i)]) return false;
    // Conjunction coherence.
    if (f.kind() == fkind::conj &&
        val[i] != (val[*ms[i].lhs] && val[*ms[i].rhs]))
      return false;
    // A dependence whose target sits in its own subscript is a tautology.
    if (f.kind() == fkind::dep && f.node().xs.contains(f.node().target) &&
        !val[i])
      return false;
  }

  auto box_index = [&](var_set xs, var_set ys, var_set zs,
                       std::size_t body) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < n; ++i) {
      const formula& f = ms[i].f;
      if (f.kind() == fkind::box && f.node().xs == xs && f.node().ys == ys &&
          f.node().zs == zs && *ms[i].lhs == body)
        return i;
    }
    return std::nullopt;
  };
  auto dep_index = [&](var_set xs, var_id target) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < n; ++i) {
      const formula& f = ms[i].f;
      if (f.kind() == fkind::dep && f.node().xs == xs && f.node().target == target)
        return i;
    }
    return std::nullopt;
  };
  auto subsets = [](var_set s) {
    std::vector<var_set> out;
    std::uint32_t bits = s.bits(), sub = 0;
    while (true) {
      out.push_back(var_set(sub));
      if (sub == bits) break;
      sub = (sub - bits) & bits;
    }
    return out;
  };

  for (std::size_t b = 0; b < n; ++b) {
    if (ms[b].f.kind() != fkind::box) continue;
    const fnode& nb = ms[b].f.node();
    std::size_t body = *ms[b].lhs;

    // Reflexivity: a box without strict indices reaches its own point.
    if (nb.zs.empty() && val[b] && !val[body]) return false;

    // Atoms over the index set spread to the whole agreement cell.
    if (nb.ys.empty() && nb.zs.empty() && is_atom_over(ms[body].f, nb.xs) &&
        val[body] && !val[b])
      return false;

    // Monotonicity and dependence-guarded transfer against other boxes.
    for (std::size_t b2 = 0; b2 < n; ++b2) {
      if (b2 == b || ms[b2].f.kind() != fkind::box) continue;
      const fnode& n2 = ms[b2].f.node();
      if (*ms[b2].lhs != body) continue;
      if (nb.xs.subset_of(n2.xs) && nb.ys.subset_of(n2.ys | n2.zs) &&
          nb.zs.subset_of(n2.zs) && val[b] && !val[b2])
        return false;
      if (nb.ys == n2.ys && nb.zs == n2.zs && !(nb.xs == n2.xs)) {
        bool deps_true = true;
        nb.xs.for_each([&](var_id s) {
          auto d = dep_index(n2.xs, s);
          deps_true = deps_true && d.has_value() && val[*d];
        });
        if (deps_true && val[b] && !val[b2]) return false;
      }
    }

    // Every refuted box needs a present, refuted, saturated repartition.
    if (!val[b]) {
      var_set span = nb.ys | nb.zs;
      bool found = false;
      for (var_set t : subsets(span)) {
        var_set u = span - t;
        auto rep = box_index(nb.xs, t, u, body);
        if (!rep || val[*rep]) continue;
        bool saturated = true, complete = true;
        t.for_each([&](var_id y) {
          auto probe = box_index(nb.xs, t, u | var_set::single(y), body);
          if (!probe) complete = false;
          else saturated = saturated && val[*probe];
        });
        if (complete && saturated) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  }

  // Set-level dependence transitivity.
  for (std::size_t i = 0; i < n; ++i) {
    if (ms[i].f.kind() != fkind::dep) continue;
    const var_set cs = ms[i].f.node().xs;
    const var_id d = ms[i].f.node().target;
    if (!val[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (ms[j].f.kind() != fkind::dep) continue;
      const var_set as = ms[j].f.node().xs;
      bool all_cs = true;
      cs.for_each([&](var_id cvar) {
        auto q = dep_index(as, cvar);
        all_cs = all_cs && q.has_value() && val[*q];
      });
      if (!all_cs) continue;
      auto target = dep_index(as, d);
      if (target && !val[*target]) return false;
    }
  }
  return true;
}

// All coherent assignments by brute force over the complement classes.
std::set<std::vector<bool>> brute_candidates(const closure_set& c) {
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i < c.complement(i)) reps.push_back(i);
  std::set<std::vector<bool>> out;
  REQUIRE(reps.size() <= 16);
  for (std::uint32_t mask = 0; mask < (1u << reps.size()); ++mask) {
    std::vector<bool> val(c.size());
    for (std::size_t k = 0; k < reps.size(); ++k) {
      bool v = (mask >> k) & 1;
      val[reps[k]] = v;
      val[c.complement(reps[k])] = !v;
    }
    if (coherent(c, val)) out.insert(val);
  }
  return out;
}

}  // namespace

TEST_SUITE("sat") {

TEST_CASE("the closure pairs every member with its complement") {
  formula f = parse_xy("p(x) & <{};{x};{}>~p(x)");
  closure_set c = closure_set::build(f);
  CHECK(c.size() == 2 * c.class_count());
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t comp = c.complement(i);
    CHECK(comp != i);
    CHECK(c.complement(comp) == i);
    // One of the pair is the negation of the other.
    const formula& a = c.members()[i].f;
    const formula& b = c.members()[comp].f;
    CHECK((render(a) == render(lnot(b)) || render(b) == render(lnot(a))));
  }
  // The designated member is the whole formula.
  CHECK(render(c.root()) == render(expand(f)));
}

TEST_CASE("depth-zero formulas are anchored by a trivial box") {
  formula f = parse_xy("p(x)");
  closure_set c = closure_set::build(f);
  CHECK(c.class_count() == 4);  // wrap, p(x), the box, and its tautology body
  CHECK(c.find(parse_xy("p(x)")).has_value());
  CHECK(c.find(parse_xy("D{x}x")).has_value());
  CHECK(c.find(parse_xy("[{};{};{}]D{x}x")).has_value());
}

TEST_CASE("the closure carries the full preference grid of every box") {
  formula f = parse_xy("[{};{x};{y}]p(x)");
  closure_set c = closure_set::build(f);
  // Boxes over every (t, u) pair of subsets of {x, y} with the same body.
  for (var_set t : {var_set(), var_set(0b01u), var_set(0b10u), var_set(0b11u)})
    for (var_set u : {var_set(), var_set(0b01u), var_set(0b10u), var_set(0b11u)}) {
      formula grid_box = box(var_set(), t, u, parse_xy("p(x)"));
      CHECK(c.find(grid_box).has_value());
    }
}

TEST_CASE("the enumerator agrees with brute force over small closures") {
  for (const char* text :
       {"p(x)", "p(x) & ~p(x)", "D{x}y", "~D{}y", "[{};{x};{}]p(x)",
        "p(x) & <{};{x};{}>~p(x)", "D{x}y -> D{x,y}y", "<{x};{};{y}>p(y)"}) {
    CAPTURE(text);
    closure_set c = closure_set::build(parse_xy(text));
    if (c.class_count() > 16) continue;
    sat_params p;
    p.max_closure = 32;
    std::vector<hintikka_set> fast = enumerate_hintikka(c, p);
    std::set<std::vector<bool>> expected = brute_candidates(c);
    CHECK(fast.size() == expected.size());
    for (const auto& h : fast) CHECK(expected.count(h) == 1);
  }
}

TEST_CASE("elimination output does not depend on candidate order") {
  formula f = parse_xy("p(x) & <{};{x};{}>(~p(x) & <{};{};{y}>p(y))");
  closure_set c = closure_set::build(f);
  sat_params p;
  p.max_closure = 32;
  std::vector<hintikka_set> base = enumerate_hintikka(c, p);
  std::set<std::vector<bool>> reference;
  for (auto& h : eliminate(c, base)) reference.insert(h);

  std::mt19937 rng(5);
  for (int round = 0; round < 10; ++round) {
    std::vector<hintikka_set> shuffled = base;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::set<std::vector<bool>> got;
    for (auto& h : eliminate(c, shuffled)) got.insert(h);
    CHECK(got == reference);
  }
  // Elimination never invents sets.
  std::set<std::vector<bool>> pool(base.begin(), base.end());
  for (const auto& h : reference) CHECK(pool.count(h) == 1);
}

TEST_CASE("decision verdicts on hand-picked formulas") {
  auto status_of = [](const std::string& text) {
    return decide_sat(parse_xy(text)).status;
  };
  CHECK(status_of("p(x)") == sat_status::sat_verified);
  CHECK(status_of("~D{}y") == sat_status::sat_verified);
  CHECK(status_of("p(x) & <{};{x};{}>~p(x)") == sat_status::sat_verified);
  CHECK(status_of("p(x) & ~p(x)") == sat_status::unsat);
  CHECK(status_of("~D{x}x") == sat_status::unsat);
  CHECK(status_of("~([{x,y};{y};{}]p(x) -> p(x))") == sat_status::unsat);
  CHECK(status_of("~([{};{};{}](p(x) -> p(x)))") == sat_status::unsat);
  CHECK(status_of("D{x}y & ~D{x}y") == sat_status::unsat);
}

TEST_CASE("satisfiable verdicts come with checkable certificates") {
  for (const char* text :
       {"p(x)", "~D{}y", "~D{x}y & p(x)", "p(x) & <{};{x};{}>~p(x)",
        "<{x};{};{y}>p(y)", "D{x}y | D{y}x"}) {
    CAPTURE(text);
    formula f = parse_xy(text);
    sat_result r = decide_sat(f);
    REQUIRE(r.status == sat_status::sat_verified);
    REQUIRE(r.certificate.has_value());
    REQUIRE(r.root_point.has_value());
    CHECK(r.certificate->validate().empty());
    CHECK(eval(*r.certificate, *r.root_point, f));
    CHECK(verify_certificate(*r.certificate, f, *r.root_point));
  }
}

TEST_CASE("a longer path bound never flips a satisfiable verdict") {
  for (const char* text :
       {"p(x)", "~D{}y", "p(x) & <{};{x};{}>~p(x)", "<{x};{};{y}>p(y)"}) {
    CAPTURE(text);
    formula f = parse_xy(text);
    for (std::size_t bound : {1u, 2u, 4u, 6u}) {
      sat_params p;
      p.path_bound = bound;
      sat_result r = decide_sat(f, p);
      CHECK((r.status == sat_status::sat_verified ||
             r.status == sat_status::sat_unverified));
    }
  }
}

TEST_CASE("an infinity-forcing formula is satisfiable but defeats small models") {
  // Over a single variable z, assert that some strictly-better point exists
  // and keeps existing: satisfiable on an infinite ascending chain, but no
  // finite model fits, so the certificate stays unverified.
  auto voc = std::make_shared<vocabulary>(std::vector<std::string>{"z"},
                                          std::vector<predicate_info>{},
                                          std::vector<std::string>{});
  formula bot_z = lnot(dep(voc, {"z"}, "z"));
  var_set z = var_set::single(0);
  formula always_more =
      lnot(lor(box({}, {}, z, bot_z),
               dia({}, {}, z, box({}, {}, z, bot_z))));
  sat_result r = decide_sat(always_more);
  CHECK(r.status == sat_status::sat_unverified);

  // The exhaustive search confirms no model with up to 4 points exists.
  CHECK(!bounded_model_search(always_more, 4).has_value());
}

TEST_CASE("the bounded search finds small models when they exist") {
  for (const char* text : {"p(x)", "~D{}y", "p(x) & <{};{x};{}>~p(x)"}) {
    CAPTURE(text);
    formula f = parse_xy(text);
    auto hit = bounded_model_search(f, 3);
    REQUIRE(hit.has_value());
    CHECK(hit->first.validate().empty());
    CHECK(eval(hit->first, hit->second, f));
  }
  CHECK(!bounded_model_search(parse_xy("p(x) & ~p(x)"), 3).has_value());
  CHECK(!bounded_model_search(parse_xy("~D{x}x"), 4).has_value());
}

TEST_CASE("resource limits surface as resource verdicts, not wrong answers") {
  sat_params tiny;
  tiny.max_closure = 2;
  sat_result r = decide_sat(parse_xy("p(x) & <{};{x};{}>~p(x)"), tiny);
  CHECK(r.status == sat_status::resource);
  CHECK(!r.detail.empty());

  CHECK_THROWS_AS(bounded_model_search(parse_xy("~D{}y"), 3, 1),
                  sat_resource_error);

  // Formulas with nominals are outside the decision fragment.
  auto voc = std::make_shared<vocabulary>(std::vector<std::string>{"x"},
                                          std::vector<predicate_info>{},
                                          std::vector<std::string>{"i"});
  CHECK_THROWS_AS(decide_sat(nominal(voc, "i")), std::invalid_argument);
}

TEST_CASE("negated axiom instances from both calculi are unsatisfiable") {
  gen_params gp;
  gp.max_vars = 2;
  gp.max_preds = 1;
  gp.max_arity = 1;
  generator gen(31337);
  sat_params p;
  p.max_closure = 64;
  int done = 0;
  for (const axiom_schema& schema : schemas(calculus_id::lpfd)) {
    for (int attempt = 0; attempt < 40 && done < 24; ++attempt) {
      vocab_ptr voc = gen.random_vocab(gp, false);
      bindings b = random_bindings(schema, voc, gen, 1);
      formula inst;
      try {
        inst = instantiate(schema, b);
      } catch (const side_condition_error&) {
        continue;
      }
      if (modal_depth(expand(inst)) > 2) continue;
      closure_set probe = closure_set::build(lnot(inst));
      if (probe.class_count() > p.max_closure) continue;
      CAPTURE(schema.id);
      CAPTURE(render(inst));
      sat_result r = decide_sat(lnot(inst), p);
      CHECK(r.status == sat_status::unsat);
      ++done;
      break;
    }
  }
  CHECK(done >= 10);
}

}
