#ifndef CASCHED_EVALUATORS_HPP
#define CASCHED_EVALUATORS_HPP

#include <optional>
#include <vector>

#include "casched/model.hpp"
#include "casched/rational.hpp"

namespace casched {

// Per-user valuation at one slot: the unit-time value of the best
// still-achievable option and the densities derived from it.
struct ValueAssessment {
    int user_id = 0;
    int active_option = 0;             // option index the valuation is based on
    Rational unit_time_value;          // u = p / max(1, e - a)
    std::vector<Rational> per_resource_density;  // v^m = u / r^m
    Rational weighted_density;         // v' = u / sum_m r^m
    int total_demand = 0;              // sum_m r^m, the weight W
};

enum class Strategy { TRuem, TRwaem };

struct EvictionChoice {
    int victim_user_id = -1;
    Strategy strategy_tag = Strategy::TRuem;
    Rational minimum_value;  // the v_min / v'_min the victim attained
};

// Values a user at slot t given slots_done completed slots. The active option
// is the highest-price option whose deadline still admits the remaining work
// when running every slot from t on (ties: smallest deadline). Returns nullopt
// when every deadline is unreachable, i.e. the caller must reject the user.
std::optional<ValueAssessment> assess(const Instance& inst, const Bid& bid, int t,
                                      int slots_done);

// Single-resource-density eviction: the victim attains the minimum v^m over
// all candidates and resources. Ties go to the larger total demand, then the
// larger user id.
EvictionChoice select_victim_truem(const std::vector<ValueAssessment>& assessments);

// Weighted-average eviction: the victim attains the minimum v' = u / W.
// Same tie rule.
EvictionChoice select_victim_trwaem(const std::vector<ValueAssessment>& assessments);

}  // namespace casched

#endif  // CASCHED_EVALUATORS_HPP
