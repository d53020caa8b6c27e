#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "casched/experiments.hpp"
#include "casched/workload.hpp"

namespace casched {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

// key = value lines; '#' starts a comment; blank lines skipped
std::vector<KeyValue> parse_key_values(const std::string& text);

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// "7" or "3..12" (inclusive)
IntRange parse_range(const std::string& text);

struct GenerateRequest {
    GeneratorSpec spec;      // num_users mirrors users.lo
    IntRange users{50, 50};  // a range requests one instance per value
};

// Generator spec schema: users, resources, options, horizon, slots, demand,
// base_price, decay_milli, slack, seed. slots/demand/base_price/users accept
// ranges; slack is a comma list. Unknown keys raise ConfigError naming the
// key and line.
GenerateRequest parse_generator_config(const std::string& text);

// Sweep schema: repetitions, base_seed, algorithms, workers, out_dir, timing,
// oracle_max_users, oracle_max_nodes, oracle_timeout_ms, plus the generator
// keys horizon, slots, demand, base_price, decay_milli, slack for the cell
// template. users/resources/options/seed are fixed by the experiment grid and
// rejected here.
void apply_sweep_overrides(const std::string& text, SweepConfig& cfg);

}  // namespace casched
