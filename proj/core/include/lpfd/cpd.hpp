#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpfd/model.hpp"
#include "lpfd/vocabulary.hpp"

namespace lpfd {

using strat_id = std::size_t;
using choice_id = std::size_t;
using profile_id = std::size_t;

// A committed choice: a coalition together with one strategy per member
// (parallel to the coalition's members in ascending order).
struct choice {
  var_set coalition;
  std::vector<strat_id> strategy;

  bool operator==(const choice&) const = default;
  strat_id strategy_for(var_id i) const;
};

// --------------------------------------------------------------------------
// Coalitional preference-dependence model: players pick (coalition, joint
// strategy) choices; a profile assigns one interned choice per player.
// Profile names double as nominals of the vocabulary, so every profile can be
// addressed inside formulas.
// --------------------------------------------------------------------------
class cpd_model {
public:
  cpd_model() = default;
  cpd_model(std::vector<std::string> players, std::vector<std::string> strategies,
            std::vector<std::string> profile_names);

  const vocab_ptr& voc() const { return voc_; }
  std::size_t player_count() const { return voc_->var_count(); }
  var_set players() const { return voc_->all_vars(); }

  const std::vector<std::string>& strategy_names() const { return strategies_; }
  std::optional<strat_id> find_strategy(const std::string& name) const;
  strat_id require_strategy(const std::string& name) const;

  std::size_t profile_count() const { return profiles_.size(); }
  const std::vector<std::string>& profile_names() const { return profile_names_; }
  const std::string& profile_name(profile_id a) const { return profile_names_[a]; }
  std::optional<profile_id> find_profile(const std::string& name) const;
  profile_id require_profile(const std::string& name) const;

  choice_id intern_choice(choice c);
  const choice& choice_ref(choice_id c) const { return pool_[c]; }
  void set_choice(profile_id a, var_id i, choice_id c) { profiles_[a][i] = c; }
  choice_id choice_id_at(profile_id a, var_id i) const { return profiles_[a][i]; }
  const choice& choice_at(profile_id a, var_id i) const {
    return pool_[profiles_[a][i]];
  }

  bit_rel& pref(var_id i) { return pref_[i]; }
  const bit_rel& pref(var_id i) const { return pref_[i]; }

  // Utilities are attached to merged strategy assignments; preferences are
  // the induced total preorders.  Every profile's merged assignment must be
  // covered.
  void set_utilities(std::map<std::vector<strat_id>, std::vector<double>> u);
  bool has_utilities() const { return !utilities_.empty(); }
  const std::map<std::vector<strat_id>, std::vector<double>>& utilities() const {
    return utilities_;
  }
  std::optional<double> utility(profile_id a, var_id i) const;

  // -- profile structure ----------------------------------------------------
  // A profile is realizable when every player belongs to their own choice's
  // coalition and all members of that coalition committed to the same choice.
  bool realizable(profile_id a, std::string* why = nullptr) const;
  // The total strategy assignment obtained by merging the profile's choices.
  std::vector<strat_id> merged(profile_id a) const;
  // The coalition structure the profile realizes.
  var_partition dom_partition(profile_id a) const;
  // All merged assignments realized with coalition structure pi, sorted.
  std::vector<std::vector<strat_id>> sigma(const var_partition& pi) const;

  // Choice-level agreement: same committed choices on all of xs.
  bool eq_choice(profile_id a, profile_id b, var_set xs) const;
  // Choice-level functional dependence: every profile agreeing with a on xs
  // also agrees on j.
  bool dep_at(profile_id a, var_set xs, var_id j) const;

  // -- validation -----------------------------------------------------------
  // Structural conditions of a coalitional model: realizability, every
  // coalition structure realized, merged-assignment sets monotone under
  // coarsening, merged-equal profiles indifferent for everyone, total
  // preorder preferences.
  std::vector<std::string> validate_cpd() const;
  // Reducedness on top: at every two-block profile, the blocks must not
  // functionally determine each other (see rcpd_violations).
  std::vector<std::string> validate_rcpd() const;
  // Two-block profiles whose blocks each functionally determine the other's
  // choices; these are exactly the profiles where coalition recovery by
  // formula breaks down.
  std::vector<profile_id> rcpd_violations() const;
  // True when no block of the profile's structure functionally determines an
  // outside player; coalition recovery via the p_X formula is exact here.
  bool p_recoverable(profile_id a) const;

  // -- translations ----------------------------------------------------------
  // Assignment view: objects are choices, assignments are the profiles.  With
  // full_object_space, the object set is every partial function from a
  // coalition to strategies (capped; falls back to just the used choices).
  pd_model to_pd(bool full_object_space = false) const;
  rpd_model to_rpd() const;

  std::string render_choice(const choice& c) const;  // {(1,c),(2,d)}

private:
  vocab_ptr voc_;  // variables = players, nominals = profile names
  std::vector<std::string> strategies_;
  std::vector<choice> pool_;
  std::vector<std::string> profile_names_;
  std::vector<std::vector<choice_id>> profiles_;  // per profile, per player
  std::vector<bit_rel> pref_;
  std::map<std::vector<strat_id>, std::vector<double>> utilities_;
};

// --------------------------------------------------------------------------
// Constructing coalitional models from strategic-game data.
// --------------------------------------------------------------------------
struct game_spec {
  std::vector<std::string> players;
  std::vector<std::string> strategies;
  // Admissible merged strategy assignments per coalition structure.  Must
  // cover every partition of the player set, and coarsening a partition must
  // not lose assignments.
  std::vector<std::pair<var_partition, std::vector<std::vector<strat_id>>>> table;
  // One utility per player per admissible merged assignment.
  std::map<std::vector<strat_id>, std::vector<double>> utilities;
};

// One profile per (partition, admissible assignment) pair, named a0, a1, ...
// in table order; throws std::invalid_argument when the inputs cannot form a
// valid coalitional model.
cpd_model build_cpd_from_game(const game_spec& g);

// Same admissible assignment set for every partition.
cpd_model build_uniform_cpd(const std::vector<std::string>& players,
                            const std::vector<std::string>& strategies,
                            const std::vector<std::vector<strat_id>>& admissible,
                            const std::map<std::vector<strat_id>, std::vector<double>>& utilities);

}  // namespace lpfd
