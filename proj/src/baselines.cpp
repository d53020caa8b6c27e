#include "casched/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "casched/online.hpp"
#include "casched/rng.hpp"

namespace casched {

namespace {

class SlotGrid {
public:
    explicit SlotGrid(const Instance& inst)
        : inst_(inst), usage_(inst.horizon + 1, std::vector<int>(inst.num_resources, 0)) {}

    bool fits(int t, const ResourceDemand& d) const {
        for (int m = 0; m < inst_.num_resources; ++m)
            if (usage_[t][m] + d.amounts[m] > inst_.capacities[m]) return false;
        return true;
    }

    void occupy(int t, const ResourceDemand& d) {
        for (int m = 0; m < inst_.num_resources; ++m) usage_[t][m] += d.amounts[m];
    }

private:
    const Instance& inst_;
    std::vector<std::vector<int>> usage_;
};

std::vector<int> arrival_order(const Instance& inst) {
    std::vector<int> order(inst.bids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (inst.bids[a].arrival != inst.bids[b].arrival)
            return inst.bids[a].arrival < inst.bids[b].arrival;
        return inst.bids[a].user_id < inst.bids[b].user_id;
    });
    return order;
}

void require_valid(const Instance& inst) {
    const auto violations = validate_instance(inst);
    if (has_errors(violations))
        throw std::invalid_argument("invalid instance: " + describe(violations));
}

}  // namespace

std::pair<Schedule, RunReport> run_random(const Instance& inst, std::uint64_t seed) {
    require_valid(inst);
    Schedule sched = Schedule::empty(inst.num_users());
    SlotGrid grid(inst);

    for (int k : arrival_order(inst)) {
        const Bid& bid = inst.bids[k];
        std::vector<int> eligible;
        for (int t = bid.arrival; t <= bid.latest_deadline(); ++t)
            if (grid.fits(t, bid.demand)) eligible.push_back(t);
        if (static_cast<int>(eligible.size()) < bid.slots_required) continue;

        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(bid.user_id)));
        std::vector<int> slots =
            rng.sample(std::move(eligible), static_cast<std::size_t>(bid.slots_required));
        std::sort(slots.begin(), slots.end());
        for (int t : slots) grid.occupy(t, bid.demand);

        const int completion = slots.back();
        const auto settled = settle_payment(bid, completion);
        // completion never exceeds the widest deadline, so an option matches
        sched.outcomes[bid.user_id] =
            WonOutcome{settled->option_index, completion, settled->payment};
        sched.assignments[bid.user_id] = std::move(slots);
    }

    return {sched, make_report(inst, sched, 0, 0, 0.0)};
}

std::pair<Schedule, RunReport> run_greedy(const Instance& inst) {
    require_valid(inst);
    Schedule sched = Schedule::empty(inst.num_users());
    SlotGrid grid(inst);

    for (int k : arrival_order(inst)) {
        const Bid& bid = inst.bids[k];
        std::vector<int> opts(bid.options.size());
        std::iota(opts.begin(), opts.end(), 0);
        std::sort(opts.begin(), opts.end(), [&](int a, int b) {
            if (bid.options[a].price != bid.options[b].price)
                return bid.options[a].price > bid.options[b].price;
            return bid.options[a].deadline < bid.options[b].deadline;
        });

        for (int j : opts) {
            std::vector<int> slots;
            for (int t = bid.arrival;
                 t <= bid.options[j].deadline &&
                 static_cast<int>(slots.size()) < bid.slots_required;
                 ++t)
                if (grid.fits(t, bid.demand)) slots.push_back(t);
            if (static_cast<int>(slots.size()) < bid.slots_required) continue;

            for (int t : slots) grid.occupy(t, bid.demand);
            sched.outcomes[bid.user_id] =
                WonOutcome{j, slots.back(), bid.options[j].price};
            sched.assignments[bid.user_id] = std::move(slots);
            break;
        }
    }

    return {sched, make_report(inst, sched, 0, 0, 0.0)};
}

}  // namespace casched
