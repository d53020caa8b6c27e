#include "casched/evaluators.hpp"

#include <algorithm>
#include <cassert>

namespace casched {

std::optional<ValueAssessment> assess(const Instance& inst, const Bid& bid, int t,
                                      int slots_done) {
    assert(t >= bid.arrival && t <= inst.horizon);
    assert(slots_done < bid.slots_required);
    const int remaining = bid.slots_required - slots_done;
    const int earliest_completion = t + remaining - 1;

    int best = -1;
    for (int j = 0; j < static_cast<int>(bid.options.size()); ++j) {
        const DeadlineOption& o = bid.options[j];
        if (o.deadline < earliest_completion) continue;
        if (best < 0 || o.price > bid.options[best].price ||
            (o.price == bid.options[best].price && o.deadline < bid.options[best].deadline))
            best = j;
    }
    if (best < 0) return std::nullopt;

    const DeadlineOption& o = bid.options[best];
    ValueAssessment va;
    va.user_id = bid.user_id;
    va.active_option = best;
    // window length clamped to >= 1; the only degenerate case is s=1, e=a
    const std::int64_t window = std::max(1, o.deadline - bid.arrival);
    va.unit_time_value = Rational(o.price, window);
    va.per_resource_density.reserve(bid.demand.amounts.size());
    for (int r : bid.demand.amounts)
        va.per_resource_density.push_back(va.unit_time_value.over(r));
    va.total_demand = bid.demand.total();
    va.weighted_density = va.unit_time_value.over(va.total_demand);
    return va;
}

namespace {

// Shared argmin loop; key(cand) yields the candidate's comparison value.
template <typename KeyFn>
EvictionChoice pick_min(const std::vector<ValueAssessment>& assessments, Strategy tag,
                        KeyFn key) {
    assert(!assessments.empty());
    EvictionChoice choice;
    choice.strategy_tag = tag;
    bool first = true;
    int best_demand = 0;
    for (const ValueAssessment& va : assessments) {
        const Rational k = key(va);
        bool better = false;
        if (first) {
            better = true;
        } else if (k < choice.minimum_value) {
            better = true;
        } else if (k == choice.minimum_value) {
            // tie: evict the larger footprint, then the larger user id
            if (va.total_demand > best_demand ||
                (va.total_demand == best_demand && va.user_id > choice.victim_user_id))
                better = true;
        }
        if (better) {
            choice.minimum_value = k;
            choice.victim_user_id = va.user_id;
            best_demand = va.total_demand;
            first = false;
        }
    }
    return choice;
}

}  // namespace

EvictionChoice select_victim_truem(const std::vector<ValueAssessment>& assessments) {
    return pick_min(assessments, Strategy::TRuem, [](const ValueAssessment& va) {
        Rational m = va.per_resource_density.front();
        for (const Rational& v : va.per_resource_density)
            if (v < m) m = v;
        return m;
    });
}

EvictionChoice select_victim_trwaem(const std::vector<ValueAssessment>& assessments) {
    return pick_min(assessments, Strategy::TRwaem,
                    [](const ValueAssessment& va) { return va.weighted_density; });
}

}  // namespace casched
