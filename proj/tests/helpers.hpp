#pragma once

#include <cstdlib>
#include <string>

#include "casched/model.hpp"

namespace casched::testing {

// Two users competing for one 1000-unit resource over 5 slots; the worked
// example used across the suite. Optimum welfare is 15: user 0 runs slots
// {1,2} for 10, user 1 runs {3,4} for 5.
inline Instance instance_x() {
    Instance inst;
    inst.horizon = 5;
    inst.num_resources = 1;
    inst.capacities = {1000};
    inst.seed = 0;

    Bid u0;
    u0.user_id = 0;
    u0.arrival = 1;
    u0.slots_required = 2;
    u0.demand.amounts = {600};
    u0.options = {{2, 10}, {4, 6}};

    Bid u1;
    u1.user_id = 1;
    u1.arrival = 1;
    u1.slots_required = 2;
    u1.demand.amounts = {600};
    u1.options = {{3, 8}, {5, 5}};

    inst.bids = {u0, u1};
    return inst;
}

inline Bid simple_bid(int user_id, int arrival, int slots, std::vector<int> demand,
                      std::vector<DeadlineOption> options) {
    Bid b;
    b.user_id = user_id;
    b.arrival = arrival;
    b.slots_required = slots;
    b.demand.amounts = std::move(demand);
    b.options = std::move(options);
    return b;
}

inline std::string data_dir() {
    const char* env = std::getenv("CASCHED_DATA");
    return env ? env : "tests/data";
}

inline std::string cli_path() {
    const char* env = std::getenv("CASCHED_CLI");
    return env ? env : "";
}

}  // namespace casched::testing
