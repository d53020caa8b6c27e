#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "casched/model.hpp"

namespace casched {

struct WorkloadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// spec cannot produce a valid instance (e.g. horizon shorter than the
// longest admissible job)
struct InfeasibleSpec : WorkloadError {
    using WorkloadError::WorkloadError;
};

// a trace row fails to parse or carries out-of-range values
struct MalformedRow : WorkloadError {
    using WorkloadError::WorkloadError;
};

// a trace contains no data rows
struct EmptyTrace : WorkloadError {
    using WorkloadError::WorkloadError;
};

struct GeneratorSpec {
    int num_users = 50;
    int num_resources = 2;
    int num_options = 3;
    int horizon = 24;
    int slots_min = 1;
    int slots_max = 12;
    int demand_min = 100;   // milli-units per resource per slot
    int demand_max = 1000;
    std::int64_t base_price_min = 50;
    std::int64_t base_price_max = 1000;
    int decay_milli = 800;  // price of option j+1 = (price_j * decay + 500) / 1000
    std::vector<int> slack; // extra slots granted by option j; empty = 2, 6, 10, ...
    std::uint64_t seed = 0;
};

// Draws each user from an independent sub-stream of `spec.seed`, so changing
// num_options or num_users leaves the remaining users' arrivals, sizes,
// demands and base prices untouched. Users are labelled 0..U-1 in arrival
// order. Throws InfeasibleSpec on bad parameters.
Instance generate(const GeneratorSpec& spec);

struct TraceConfig {
    int horizon = 0;        // 0 = derive from the latest task end
    int num_options = 3;
    std::vector<int> slack; // as in GeneratorSpec
    int decay_milli = 800;
    std::uint64_t seed = 0; // drives synthetic price factors
};

// Builds an instance from a task CSV with columns
// task_id,arrival_time,duration,cpu,ram (header optional): arrival and
// duration are minutes mapped onto 5-minute slots, cpu and ram are fractions
// of one machine mapped to milli-units. Prices are synthesized from job mass
// with a per-task random factor. Tasks that cannot finish inside a fixed
// horizon are dropped. Throws MalformedRow or EmptyTrace.
Instance ingest_trace(const std::string& csv, const TraceConfig& cfg = {});

}  // namespace casched
