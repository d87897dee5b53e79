#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "lpfd/generators.hpp"
#include "lpfd/model_io.hpp"
#include "lpfd/semantics.hpp"

using namespace lpfd;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("relational models round-trip exactly through text") {
  gen_params gp;
  generator gen(31);
  for (int trial = 0; trial < 40; ++trial) {
    rpd_model m = gen.random_rpdn(gp);
    std::string text = save_model_text(m);
    loaded_model back = load_model_from_string(text, "trip");
    REQUIRE(back.kind == model_kind::rpd);
    CHECK(back.warnings.empty());
    CHECK(back.validate().empty());
    // Canonical form is a fixed point of save/load.
    CHECK(save_model_text(back) == text);
    // Structure survives: same points, relations, atoms, naming.
    const rpd_model& r = *back.rpd;
    REQUIRE(r.point_count() == m.point_count());
    for (var_id v = 0; v < m.voc()->var_limit(); ++v) {
      CHECK(r.sim(v) == m.sim(v));
      CHECK(r.leq(v) == m.leq(v));
    }
    CHECK(r.atoms() == m.atoms());
    CHECK(r.naming() == m.naming());
  }
}

TEST_CASE("assignment models round-trip exactly through text") {
  gen_params gp;
  generator gen(32);
  for (int trial = 0; trial < 40; ++trial) {
    pd_model m = gen.random_pd(gp);
    std::string text = save_model_text(m);
    loaded_model back = load_model_from_string(text, "trip");
    REQUIRE(back.kind == model_kind::pd);
    CHECK(back.warnings.empty());
    CHECK(back.validate().empty());
    CHECK(save_model_text(back) == text);
    const pd_model& p = *back.pd;
    REQUIRE(p.assignment_count() == m.assignment_count());
    for (point_id a = 0; a < m.assignment_count(); ++a)
      CHECK(p.assignment(a) == m.assignment(a));
    CHECK(p.interpretation() == m.interpretation());
  }
}

TEST_CASE("coalitional models round-trip exactly through text") {
  gen_params gp;
  generator gen(33);
  for (int trial = 0; trial < 40; ++trial) {
    cpd_model m = gen.random_cpd(gp);
    std::string text = save_model_text(m);
    loaded_model back = load_model_from_string(text, "trip");
    REQUIRE(back.kind == model_kind::cpd);
    CHECK(back.warnings.empty());
    CHECK(save_model_text(back) == text);
    const cpd_model& c = *back.cpd;
    REQUIRE(c.profile_count() == m.profile_count());
    for (profile_id a = 0; a < m.profile_count(); ++a) {
      CHECK(c.profile_name(a) == m.profile_name(a));
      for (var_id i = 0; i < m.voc()->var_limit(); ++i) {
        const choice& lhs = c.choice_at(a, i);
        const choice& rhs = m.choice_at(a, i);
        CHECK(lhs.coalition == rhs.coalition);
        CHECK(lhs.strategy == rhs.strategy);
      }
      CHECK(c.dom_partition(a) == m.dom_partition(a));
    }
  }
}

TEST_CASE("missing diagonal pairs are repaired with a warning") {
  // A two-point relational model whose preference rows omit reflexive pairs.
  const char* text = R"({
    "kind": "rpd",
    "vocabulary": {"variables": ["x"], "predicates": [], "nominals": []},
    "points": ["w0", "w1"],
    "relations": {
      "sim": {"x": [["w0", "w0"], ["w1", "w1"]]},
      "leq": {"x": [["w0", "w1"]]}
    },
    "valuation": {},
    "naming": {}
  })";
  loaded_model m = load_model_from_string(text, "inline");
  REQUIRE(m.kind == model_kind::rpd);
  REQUIRE(!m.warnings.empty());
  CHECK(m.warnings[0].find("reflexive closure") != std::string::npos);
  CHECK(m.validate().empty());
  CHECK(m.rpd->leq(0).at(0, 0));
  CHECK(m.rpd->leq(0).at(0, 1));
}

TEST_CASE("malformed input reports the offending file") {
  CHECK_THROWS_AS(load_model_from_string("{", "broken"), model_io_error);
  CHECK_THROWS_AS(load_model_from_string(R"({"kind": "nope"})", "broken"),
                  model_io_error);
  try {
    load_model_from_string(R"({"kind": "rpd"})", "somefile");
    CHECK(false);
  } catch (const model_io_error& e) {
    CHECK(std::string(e.what()).find("somefile") != std::string::npos);
  }
}

TEST_CASE("atom rendering and parsing invert each other") {
  auto voc = std::make_shared<vocabulary>(
      std::vector<std::string>{"x", "y"},
      std::vector<predicate_info>{{"p", 1}, {"q", 2}},
      std::vector<std::string>{});
  atom_key k{1, {0, 1}};
  std::string text = render_atom(*voc, k);
  CHECK(text == "q(x,y)");
  CHECK(parse_atom(*voc, text) == k);
  CHECK(parse_atom(*voc, render_atom(*voc, atom_key{0, {1}})) == atom_key{0, {1}});
}

TEST_CASE("committed example files match their builders byte for byte") {
  // The two bundled model files are the canonical serialization of the
  // builders in fixtures.cpp; this guards against either side drifting.
  cpd_model e1 = fixtures::make_example1();
  cpd_model e2 = fixtures::make_example2();
  CHECK(save_model_text(e1) == slurp(std::string(LPFD_FIXTURE_DIR) + "/example1.json"));
  CHECK(save_model_text(e2) == slurp(std::string(LPFD_FIXTURE_DIR) + "/example2.json"));

  loaded_model l1 = load_model(std::string(LPFD_FIXTURE_DIR) + "/example1.json");
  loaded_model l2 = load_model(std::string(LPFD_FIXTURE_DIR) + "/example2.json");
  REQUIRE(l1.kind == model_kind::cpd);
  REQUIRE(l2.kind == model_kind::cpd);
  CHECK(l1.warnings.empty());
  CHECK(l2.warnings.empty());
  CHECK(l1.cpd->profile_count() == 12);
  CHECK(l2.cpd->profile_count() == 8);
}

}
