#pragma once

#include <cstdint>
#include <utility>

#include "casched/metrics.hpp"
#include "casched/model.hpp"

namespace casched {

// Admission in arrival order with no eviction: each user gets a uniformly
// drawn set of slots_required distinct capacity-feasible slots inside its
// widest deadline window, or is rejected if fewer exist. Payment follows the
// tightest deadline met by the drawn completion slot. Draws come from a
// per-user stream derived from `seed`, so results do not depend on how other
// users fared. Throws std::invalid_argument on invalid instances.
std::pair<Schedule, RunReport> run_random(const Instance& inst, std::uint64_t seed);

// Admission in arrival order with no eviction: each user tries its options
// from highest price (ties: earlier deadline) and takes the earliest
// slots_required residual-feasible slots inside that option's window; the
// first option that fits wins. Throws std::invalid_argument on invalid
// instances.
std::pair<Schedule, RunReport> run_greedy(const Instance& inst);

}  // namespace casched
