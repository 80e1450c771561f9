#pragma once

#include <cstdint>

#include "spider/config_set.hpp"
#include "spider/env.hpp"

namespace spider {

// Pseudo-random validated environment specs and restriction sets for batch
// checks. Deterministic in the seed.

// Two-atom spec passing all model conditions (negative drift, nestling,
// ellipticity), with delta set to the tightest bound the atoms allow.
EnvironmentSpec random_env_spec(uint64_t seed);

// Connected, anchored restriction set with at most max_size configurations
// and 1..max_legs legs. Rejection-samples until validate() succeeds.
LocalConfigSet random_config_set(uint64_t seed, int max_legs = 3, int max_size = 4);

}  // namespace spider
