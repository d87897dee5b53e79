#pragma once

#include "lpfd/cpd.hpp"

namespace fixtures {

// Three players over strategies {alpha, beta, gamma}; twelve profiles that
// realize five strategy assignments under varying coalition structures.
// Every player is indifferent between all outcomes.
lpfd::cpd_model make_example1();

// Two players in a prisoner's-dilemma payoff matrix over {alpha, beta}.
// Profiles a..a3p let the players move solo; a4p..a7p pair them into the
// grand coalition over the same four strategy combinations.
lpfd::cpd_model make_example2();

}  // namespace fixtures
