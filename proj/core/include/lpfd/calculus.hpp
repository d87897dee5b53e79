#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpfd/formula.hpp"
#include "lpfd/generators.hpp"
#include "lpfd/model.hpp"

namespace lpfd {

// Raised when an instantiation or rule application breaks the schema's side
// conditions (subset provisos, atom restrictions, nominal occurrence).
struct side_condition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class calculus_id { lpfd, hlpfd };

std::string to_string(calculus_id system);

// Metavariable assignment used to instantiate a schema: formula slots (phi,
// psi, chi), set slots (X, Y, Z, X2, Y2, Z2, S, T), variable slots (v, s, y),
// nominal slots (i, j) and free-form selector slots (tautology template).
struct bindings {
  vocab_ptr voc;
  std::map<std::string, formula> formulas;
  std::map<std::string, var_set> sets;
  std::map<std::string, var_id> vars;
  std::map<std::string, std::size_t> noms;
  std::map<std::string, std::size_t> choices;
};

struct axiom_schema {
  std::string id;       // Ord-b, Dep-d, DD-2, Nom, Ord-4, ...
  calculus_id system;
  std::string display;  // shape with metavariables, concrete syntax
  std::function<formula(const bindings&)> build;
};

// The full schema tables; stable order, one entry per identifier.
const std::vector<axiom_schema>& schemas(calculus_id system);
const axiom_schema& find_schema(calculus_id system, const std::string& id);

// Membership in Atom(X): predicate atoms with arguments inside X, plus (for
// the base calculus only) single-target dependence atoms with subscript
// inside X.
bool in_atom_set(const formula& f, var_set xs, calculus_id system);

// Builds the instance; throws side_condition_error when the bindings violate
// the schema's provisos, naming the failed condition.
formula instantiate(const axiom_schema& schema, const bindings& b);

// Draws legal bindings for the schema over the vocabulary; formula slots are
// filled up to the given connective depth.
bindings random_bindings(const axiom_schema& schema, const vocab_ptr& voc,
                         generator& gen, int formula_depth = 2);

struct fuzz_counterexample {
  std::string schema_id;
  std::uint64_t trial = 0;
  formula instance;
  rpd_model model;
  std::string point;
};

struct fuzz_report {
  calculus_id system = calculus_id::lpfd;
  std::uint64_t trials_per_schema = 0;
  std::uint64_t total_trials = 0;
  std::map<std::string, std::uint64_t> per_schema;
  std::vector<fuzz_counterexample> counterexamples;
};

// For every schema of the system: `trials` rounds of (random model, random
// legal instance, validity check).  Models are relational, at most
// params.max_points points; the hybrid system draws fully named models.
// Counterexamples are findings — the expected count is zero.
fuzz_report soundness_fuzz(const gen_params& params, calculus_id system,
                           std::uint64_t trials, std::uint64_t seed);

enum class rule_id { mp, nec, name, paste };

// Validity-preservation witness check on one model: false exactly when every
// premise is valid in the model but the conclusion is not.  The premises and
// conclusion must fit the rule's shape and side conditions; violations raise
// side_condition_error.  Note that only mp and nec preserve validity
// model-by-model in general; name and paste are sound over the model class,
// and this check reports what happens on the given model.
bool rule_check(rule_id rule, const std::vector<formula>& premises,
                const formula& conclusion, const rpd_model& m);

}  // namespace lpfd
