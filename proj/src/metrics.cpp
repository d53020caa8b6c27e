#include "casched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "casched/io.hpp"

namespace casched {

RunReport make_report(const Instance& inst, const Schedule& sched,
                      std::int64_t move_count, std::int64_t eviction_count,
                      double runtime_ms) {
    RunReport rep;
    rep.move_count = move_count;
    rep.eviction_count = eviction_count;
    rep.runtime_ms = runtime_ms;
    rep.digest = instance_digest(inst);

    const int U = inst.num_users();
    const int M = inst.num_resources;
    rep.settlements.assign(U, 0);
    std::vector<std::int64_t> used(M, 0);  // summed milli-unit-slots per resource

    const std::vector<int> idx = user_index(inst);
    for (int u = 0; u < U; ++u) {
        const Outcome& oc = sched.outcomes[u];
        if (oc) {
            ++rep.accepted_count;
            rep.settlements[u] = oc->payment;
            rep.welfare += oc->payment;
            const Bid& bid = inst.bids[idx[u]];
            for (int m = 0; m < M; ++m)
                used[m] += static_cast<std::int64_t>(bid.demand.amounts[m]) *
                           static_cast<std::int64_t>(sched.assignments[u].size());
        } else {
            ++rep.rejected_count;
        }
    }
    rep.utilization.assign(M, 0.0);
    for (int m = 0; m < M; ++m)
        if (inst.horizon > 0)
            rep.utilization[m] = static_cast<double>(used[m]) /
                                 (static_cast<double>(inst.horizon) * inst.capacities[m]);
    return rep;
}

CompetitiveReport competitive_ratio(const RunReport& run, const OracleResult& oracle) {
    if (run.digest != oracle.digest)
        throw std::invalid_argument("competitive_ratio: instance digests differ");
    CompetitiveReport cr;
    cr.algorithm_welfare = run.welfare;
    cr.oracle_welfare = oracle.optimum_welfare;
    cr.oracle_status = oracle.status;
    if (oracle.optimum_welfare == 0) {
        cr.ratio = 1.0;  // 0/0 convention: an unservable instance penalizes no one
    } else {
        cr.ratio = static_cast<double>(run.welfare) /
                   static_cast<double>(oracle.optimum_welfare);
    }
    return cr;
}

Summary stats(std::vector<double> values) {
    if (values.empty()) throw std::runtime_error("stats: no values");
    // sort first so the floating sums do not depend on input order
    std::sort(values.begin(), values.end());
    Summary s;
    s.n = static_cast<int>(values.size());
    s.min = values.front();
    s.max = values.back();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.n;
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = s.n > 1 ? std::sqrt(sq / s.n) : 0.0;
    return s;
}

Summary aggregate(const std::vector<CompetitiveReport>& reports) {
    std::vector<double> ratios;
    int excluded = 0;
    for (const CompetitiveReport& r : reports) {
        if (r.included())
            ratios.push_back(r.ratio);
        else
            ++excluded;
    }
    if (ratios.empty()) throw std::runtime_error("aggregate: all reports excluded");
    Summary s = stats(std::move(ratios));
    s.n_excluded = excluded;
    return s;
}

}  // namespace casched
