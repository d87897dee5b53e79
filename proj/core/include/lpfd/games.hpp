#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lpfd/cpd.hpp"
#include "lpfd/model.hpp"
#include "lpfd/semantics.hpp"

namespace lpfd {

struct game_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- solution concepts by definition (deviation enumeration) -------------
// A profile s is kept when no deviation of the required shape exists:
//   Nash: no t agreeing with s outside {x} that x strictly prefers, per x;
//   weak Pareto: no t agreeing outside X strictly better for all of X;
//   strong Pareto: no such t weakly better for all and strictly for one.
// The coalition must be a non-empty subset of the variable set.
std::vector<point_id> nash_bruteforce(const pd_model& m, var_set coalition);
std::vector<point_id> wpo_bruteforce(const pd_model& m, var_set coalition);
std::vector<point_id> spo_bruteforce(const pd_model& m, var_set coalition);

// ---- solution concepts by formula (evaluating the box forms) -------------
bool nash_formula(model_checker& mc, var_set coalition, point_id s);
bool wpo_formula(model_checker& mc, var_set coalition, point_id s);
bool spo_formula(model_checker& mc, var_set coalition, point_id s);
// One-shot variants building the relational view internally.
bool nash_formula(const pd_model& m, var_set coalition, point_id s);
bool wpo_formula(const pd_model& m, var_set coalition, point_id s);
bool spo_formula(const pd_model& m, var_set coalition, point_id s);

struct optimality_mismatch {
  std::string concept_name;  // nash | wpo | spo
  var_set coalition;
  std::string coalition_name;
  point_id profile = 0;
  bool brute = false;
  bool formula = false;
};

// Compares the definition-level and formula-level answers for every concept,
// every non-empty coalition, and every profile.  Empty result = agreement.
std::vector<optimality_mismatch> cross_validate_optimality(const pd_model& m);

// ---- the core over coalitional models -------------------------------------
// A profile is in the core when its structure is the grand coalition and no
// coalition (a block of any profile's structure) can force a strictly better
// outcome for all of its members against every completion.
std::vector<profile_id> core_bruteforce(const cpd_model& m);

// Formula-level core membership: evaluates the Core formula for the grand
// coalition at the profile, named by its own nominal.  Requires a reduced
// model (no two complementary blocks determining each other).
bool core_formula(const cpd_model& m, profile_id a);
// Same with the coalition relativized to X, or to every block of a partition.
bool core_relativized(const cpd_model& m, var_set coalition, profile_id a);
bool core_partition(const cpd_model& m, const var_partition& pi, profile_id a);

// Recovers the coalition structure of a profile purely by evaluating the
// coalition-atom formulas p_X; throws game_error when the true sets do not
// form a partition (possible when a block determines outside players).
var_partition coalition_partition_of(const cpd_model& m, profile_id a);

// ---- bundled analysis ------------------------------------------------------
struct check_outcome {
  std::string name;     // e.g. optimality-formulas, core-formula
  bool applicable = true;  // false: skipped, reason in detail
  bool passed = false;
  std::string detail;   // skip reason or mismatch witness
};

struct analysis_report {
  std::string model_name;
  bool coalitional = false;
  std::vector<std::string> profiles;

  struct concept_row {
    var_set coalition;
    std::string coalition_name;
    std::vector<bool> by_profile;  // aligned with `profiles`
  };
  std::vector<concept_row> nash, wpo, spo;

  std::vector<std::string> core;             // coalitional models only
  std::vector<std::string> rcpd_violations;  // blocks determining each other
  std::vector<std::string> unrecoverable;    // structure recovery unsound here

  std::vector<check_outcome> checks;
  std::vector<optimality_mismatch> mismatches;

  bool ok() const;
};

// Full report over a coalitional model: per-coalition solution concepts with
// formula/definition cross-validation, the core by both routes, structure
// recovery, and the identity/implication checks tying them together.
// Formula-based core checks run only when structure recovery is sound at
// every profile; otherwise they are reported as skipped.
analysis_report analyze(const cpd_model& m, const std::string& model_name = "");
// Assignment-model variant: solution concepts and their identities only.
analysis_report analyze(const pd_model& m, const std::string& model_name = "");

std::string render_report(const analysis_report& r);
std::string report_to_json(const analysis_report& r);

}  // namespace lpfd
