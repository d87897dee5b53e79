#pragma once

#include <cstdint>
#include <random>

#include "lpfd/cpd.hpp"
#include "lpfd/formula.hpp"
#include "lpfd/model.hpp"

namespace lpfd {

// Size knobs for random instances; counts are upper bounds, at least one of
// everything structural is always produced.
struct gen_params {
  std::size_t max_points = 6;
  std::size_t max_vars = 3;
  std::size_t max_objects = 3;
  std::size_t max_preds = 2;
  int max_arity = 2;
  std::size_t max_nominals = 2;
  std::size_t max_strategies = 3;
};

// Seeded source of random vocabularies, models, and formulas.  The same seed
// reproduces the same sequence of draws.
class generator {
public:
  explicit generator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t pick(std::size_t lo, std::size_t hi);  // inclusive bounds
  bool coin(double p = 0.5);
  var_set random_subset(var_set universe, bool allow_empty = true);
  var_partition random_partition(var_set universe);

  vocab_ptr random_vocab(const gen_params& p, bool with_nominals);

  // Relational model with equivalence + preorder relations and a valuation
  // respecting agreement-invariance.  Points are pairwise separated by
  // agreement on the full variable set, so the assignment view is faithful.
  rpd_model random_rpd(const gen_params& p, vocab_ptr voc = nullptr);
  // Same, plus every nominal of the vocabulary names some point.
  rpd_model random_rpdn(const gen_params& p);

  pd_model random_pd(const gen_params& p, vocab_ptr voc = nullptr);

  // Coalitional model meeting the structural conditions by construction:
  // monotone admissible-assignment sets, utility-induced preferences.
  cpd_model random_cpd(const gen_params& p);
  // Also reduced: no coalition block functionally determines an outside
  // player at any profile, so coalition structures are formula-recoverable.
  cpd_model random_rcpd(const gen_params& p);

  // Random formula of the given connective depth.  Sugar operators (derived
  // connectives and game abbreviations) appear only when allowed.
  formula random_formula(const vocab_ptr& voc, int depth, bool allow_nominals,
                         bool allow_sugar = false);

private:
  bit_rel random_equivalence(std::size_t n);
  bit_rel random_preorder(std::size_t n);

  std::mt19937_64 rng_;
};

}  // namespace lpfd
