#ifndef CASCHED_METRICS_HPP
#define CASCHED_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "casched/model.hpp"
#include "casched/oracle.hpp"

namespace casched {

// Outcome summary of one algorithm run on one instance.
struct RunReport {
    std::int64_t welfare = 0;
    int accepted_count = 0;
    int rejected_count = 0;
    std::int64_t move_count = 0;      // postponements (evictions that re-enter)
    std::int64_t eviction_count = 0;  // all evictions, including terminal ones
    std::vector<double> utilization;  // per-resource mean usage fraction over 1..S
    std::vector<std::int64_t> settlements;  // per-user payment, 0 if rejected
    double runtime_ms = 0.0;
    std::uint64_t digest = 0;  // instance digest
};

RunReport make_report(const Instance& inst, const Schedule& sched,
                      std::int64_t move_count, std::int64_t eviction_count,
                      double runtime_ms);

struct CompetitiveReport {
    double ratio = 0.0;  // welfare / optimum, in [0,1]; 1 when optimum is 0
    std::int64_t algorithm_welfare = 0;
    std::int64_t oracle_welfare = 0;
    OracleStatus oracle_status = OracleStatus::Optimal;

    bool included() const { return oracle_status == OracleStatus::Optimal; }
};

// Pairs a run with its oracle result. Throws std::invalid_argument when the
// two were not computed on the same instance (digest mismatch).
CompetitiveReport competitive_ratio(const RunReport& run, const OracleResult& oracle);

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    int n = 0;
    int n_excluded = 0;
};

// Aggregates included ratios; LimitExceeded reports only count toward
// n_excluded. Throws std::runtime_error when everything is excluded.
Summary aggregate(const std::vector<CompetitiveReport>& reports);

// Order-independent stats over raw values (used for welfare aggregation in
// the no-oracle sweeps).
Summary stats(std::vector<double> values);

}  // namespace casched

#endif  // CASCHED_METRICS_HPP
