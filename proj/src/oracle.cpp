#include "casched/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "casched/baselines.hpp"
#include "casched/engine.hpp"
#include "casched/io.hpp"
#include <cstdio>
#include <cstdlib>

namespace casched {

namespace {

struct ChosenJob {
    int user_id = 0;
    int option_index = 0;
    int arrival = 0;
    int deadline = 0;
    int slots_required = 0;
    const std::vector<int>* demand = nullptr;
    std::vector<int> slots;
};

// ---- exhaustive enumeration -------------------------------------------------
//
// Tries every option combination; feasibility of each is decided by a plain
// recursive packing in input order. Deliberately naive: this is the
// cross-check for the branch-and-bound solver below and shares no code with it.

class ExhaustivePacker {
public:
    ExhaustivePacker(const Instance& inst)
        : inst_(inst), usage_(inst.horizon + 1, std::vector<int>(inst.num_resources, 0)) {}

    bool pack(std::vector<ChosenJob>& jobs) {
        for (auto& row : usage_) std::fill(row.begin(), row.end(), 0);
        return place_job(jobs, 0);
    }

private:
    bool fits(int t, const std::vector<int>& demand) const {
        for (int m = 0; m < inst_.num_resources; ++m)
            if (usage_[t][m] + demand[m] > inst_.capacities[m]) return false;
        return true;
    }

    void occupy(int t, const std::vector<int>& demand, int sign) {
        for (int m = 0; m < inst_.num_resources; ++m) usage_[t][m] += sign * demand[m];
    }

    bool place_job(std::vector<ChosenJob>& jobs, std::size_t k) {
        if (k == jobs.size()) return true;
        jobs[k].slots.clear();
        return place_slots(jobs, k, jobs[k].arrival, jobs[k].slots_required);
    }

    bool place_slots(std::vector<ChosenJob>& jobs, std::size_t k, int from, int needed) {
        if (needed == 0) return place_job(jobs, k + 1);
        ChosenJob& job = jobs[k];
        for (int t = from; t <= job.deadline; ++t) {
            if (!fits(t, *job.demand)) continue;
            occupy(t, *job.demand, +1);
            job.slots.push_back(t);
            if (place_slots(jobs, k, t + 1, needed - 1)) return true;
            job.slots.pop_back();
            occupy(t, *job.demand, -1);
        }
        return false;
    }

    const Instance& inst_;
    std::vector<std::vector<int>> usage_;
};

Schedule schedule_from_jobs(const Instance& inst, const std::vector<ChosenJob>& jobs) {
    Schedule s = Schedule::empty(inst.num_users());
    const std::vector<int> idx = user_index(inst);
    for (const ChosenJob& j : jobs) {
        std::vector<int> slots = j.slots;
        std::sort(slots.begin(), slots.end());
        const std::int64_t price = inst.bids[idx[j.user_id]].options[j.option_index].price;
        s.outcomes[j.user_id] = WonOutcome{j.option_index, slots.back(), price};
        s.assignments[j.user_id] = std::move(slots);
    }
    return s;
}

}  // namespace

OracleResult solve_exhaustive(const Instance& inst) {
    const auto start = std::chrono::steady_clock::now();
    OracleResult res;
    res.digest = instance_digest(inst);
    res.witness = Schedule::empty(inst.num_users());

    const int U = inst.num_users();
    std::vector<int> choice(U, -1);  // -1 = rejected, else option index
    ExhaustivePacker packer(inst);

    for (;;) {
        ++res.nodes_explored;
        std::vector<ChosenJob> jobs;
        std::int64_t value = 0;
        for (int k = 0; k < U; ++k) {
            if (choice[k] < 0) continue;
            const Bid& b = inst.bids[k];
            const DeadlineOption& o = b.options[choice[k]];
            jobs.push_back(ChosenJob{b.user_id, choice[k], b.arrival, o.deadline,
                                     b.slots_required, &b.demand.amounts, {}});
            value += o.price;
        }
        if (value > res.optimum_welfare && packer.pack(jobs)) {
            res.optimum_welfare = value;
            res.witness = schedule_from_jobs(inst, jobs);
        }
        // odometer over option choices
        int k = 0;
        while (k < U) {
            if (++choice[k] < static_cast<int>(inst.bids[k].options.size())) break;
            choice[k] = -1;
            ++k;
        }
        if (k == U) break;
    }

    res.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    return res;
}

// ---- branch and bound -------------------------------------------------------

namespace {

// Small dedicated max-flow (Dinic) for the slot-count matchings below: jobs
// feed unit edges into the slots of their windows, slots drain with the
// class capacity. Deterministic: edges are added in a fixed order.
class SlotFlow {
public:
    void reset(int nodes) {
        head_.assign(nodes, -1);
        to_.clear();
        cap_.clear();
        next_.clear();
        level_.assign(nodes, 0);
        iter_.assign(nodes, 0);
    }

    void add_edge(int from, int to, int capacity) {
        to_.push_back(to);
        cap_.push_back(capacity);
        next_.push_back(head_[from]);
        head_[from] = static_cast<int>(to_.size()) - 1;
        to_.push_back(from);
        cap_.push_back(0);
        next_.push_back(head_[to]);
        head_[to] = static_cast<int>(to_.size()) - 1;
    }

    int max_flow(int source, int sink) {
        int flow = 0;
        while (bfs(source, sink)) {
            std::copy(head_.begin(), head_.end(), iter_.begin());
            for (;;) {
                const int pushed = dfs(source, sink, std::numeric_limits<int>::max());
                if (pushed == 0) break;
                flow += pushed;
            }
        }
        return flow;
    }

    // saturated forward edges out of `from`, as target node ids
    template <typename F>
    void for_each_saturated(int from, F&& f) const {
        for (int e = head_[from]; e >= 0; e = next_[e])
            if ((e & 1) == 0 && cap_[e] == 0) f(to_[e]);
    }

private:
    bool bfs(int source, int sink) {
        std::fill(level_.begin(), level_.end(), -1);
        std::vector<int> queue{source};
        level_[source] = 0;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const int v = queue[q];
            for (int e = head_[v]; e >= 0; e = next_[e])
                if (cap_[e] > 0 && level_[to_[e]] < 0) {
                    level_[to_[e]] = level_[v] + 1;
                    queue.push_back(to_[e]);
                }
        }
        return level_[sink] >= 0;
    }

    int dfs(int v, int sink, int limit) {
        if (v == sink) return limit;
        for (int& e = iter_[v]; e >= 0; e = next_[e]) {
            const int u = to_[e];
            if (cap_[e] <= 0 || level_[u] != level_[v] + 1) continue;
            const int pushed = dfs(u, sink, std::min(limit, cap_[e]));
            if (pushed > 0) {
                cap_[e] -= pushed;
                cap_[e ^ 1] += pushed;
                return pushed;
            }
        }
        return 0;
    }

    std::vector<int> head_, to_, cap_, next_, level_, iter_;
};

class ExactSolver {
public:
    ExactSolver(const Instance& inst, const OracleLimits& limits)
        : inst_(inst), limits_(limits), start_(std::chrono::steady_clock::now()) {}

    OracleResult run() {
        OracleResult res;
        res.digest = instance_digest(inst_);
        res.witness = Schedule::empty(inst_.num_users());

        const int U = inst_.num_users();
        if (U > limits_.max_users) {
            res.status = OracleStatus::LimitExceeded;
            return res;
        }
        if (U == 0) {
            res.elapsed = elapsed_us();
            return res;
        }

        // Heuristic warm start: every engine schedule is a feasible point of
        // the same ILP, so the incumbent starts at the best of them and the
        // search only has to close the gap upward.
        {
            EngineConfig ec;
            ec.strategy = Strategy::TRwaem;
            auto [tw_sched, tw_rep] = run_offline(inst_, ec);
            best_value_ = tw_rep.welfare;
            warm_schedule_ = std::move(tw_sched);
            ec.strategy = Strategy::TRuem;
            auto [tu_sched, tu_rep] = run_offline(inst_, ec);
            if (tu_rep.welfare > best_value_) {
                best_value_ = tu_rep.welfare;
                warm_schedule_ = std::move(tu_sched);
            }
            auto [gr_sched, gr_rep] = run_greedy(inst_);
            if (gr_rep.welfare > best_value_) {
                best_value_ = gr_rep.welfare;
                warm_schedule_ = std::move(gr_sched);
            }
        }

        // Interval accounting runs over the real resources plus counting
        // dimensions: at most q jobs with demand above c/(q+1) can share a
        // slot, which mass arguments alone cannot see.
        const int M = inst_.num_resources;
        P_ = M;
        pr_cap_.assign(inst_.capacities.begin(), inst_.capacities.end());
        for (int m = 0; m < M; ++m)
            for (int q = 1; q <= 3; ++q) {
                pr_cap_.push_back(q);
                ++P_;
            }
        uidx_ = user_index(inst_);
        ext_dem_.assign(U, {});
        for (int k = 0; k < U; ++k) {
            const Bid& b = inst_.bids[k];
            std::vector<std::int64_t>& v = ext_dem_[k];
            v.reserve(P_);
            for (int m = 0; m < M; ++m) v.push_back(b.demand.amounts[m]);
            for (int m = 0; m < M; ++m)
                for (int q = 1; q <= 3; ++q)
                    v.push_back(static_cast<std::int64_t>(b.demand.amounts[m]) *
                                            (q + 1) >
                                        static_cast<std::int64_t>(inst_.capacities[m])
                                    ? 1
                                    : 0);
        }

        init_orders();
        residual_.assign(inst_.horizon + 1,
                         std::vector<int>(inst_.num_resources, 0));
        for (int t = 1; t <= inst_.horizon; ++t)
            for (int m = 0; m < inst_.num_resources; ++m)
                residual_[t][m] = inst_.capacities[m];
        polish_warm();
        init_lagrangian();

        descend(0, 0);

        if (getenv("ORACLE_DEBUG"))
            fprintf(stderr, "descend=%llu repack_steps=%llu repack_calls=%llu bound_calls=%llu accepts=%llu\n",
                    (unsigned long long)dbg_descend_, (unsigned long long)dbg_repack_,
                    (unsigned long long)dbg_repack_calls_, (unsigned long long)dbg_bounds_,
                    (unsigned long long)dbg_accepts_),
            fprintf(stderr, "fail_calls=%llu fail_steps=%llu ok_steps=%llu worst_call=%llu worst_ok=%d\n",
                    (unsigned long long)dbg_fail_calls_, (unsigned long long)dbg_fail_steps_,
                    (unsigned long long)dbg_ok_steps_, (unsigned long long)dbg_worst_call_, (int)dbg_worst_ok_),
            fprintf(stderr, "warm=%lld lag_root=%.1f lag_prunes=%llu iv_prunes=%llu\n",
                    (long long)dbg_warm_, dbg_lag_root_ / 65536.0,
                    (unsigned long long)dbg_lag_prunes_, (unsigned long long)dbg_iv_prunes_);
        res.optimum_welfare = best_value_;
        res.witness = improved_ ? schedule_from_jobs(inst_, best_jobs_)
                                : std::move(warm_schedule_);
        res.nodes_explored = nodes_;
        res.status = aborted_ ? OracleStatus::LimitExceeded : OracleStatus::Optimal;
        res.elapsed = elapsed_us();
        return res;
    }

private:
    std::chrono::microseconds elapsed_us() const {
        return std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - start_);
    }

    bool over_budget() {
        if (aborted_) return true;
        if (nodes_ > limits_.max_nodes) {
            aborted_ = true;
            return true;
        }
        if ((nodes_ & 0xfff) == 0 && elapsed_us() >= limits_.timeout) {
            aborted_ = true;
            return true;
        }
        return false;
    }

    // Branching visits users in descending price-per-mass order so the first
    // dive is a greedy solution and the fractional bound stays tight.
    void init_orders() {
        const int U = inst_.num_users();
        order_.resize(U);
        std::iota(order_.begin(), order_.end(), 0);
        std::vector<std::int64_t> best_price(U, 0), total_mass(U, 1);
        for (int k = 0; k < U; ++k) {
            const Bid& b = inst_.bids[k];
            for (const DeadlineOption& o : b.options)
                best_price[k] = std::max(best_price[k], o.price);
            total_mass[k] = static_cast<std::int64_t>(b.slots_required) *
                            std::max(1, b.demand.total());
        }
        std::sort(order_.begin(), order_.end(), [&](int a, int b) {
            const __int128 lhs = static_cast<__int128>(best_price[a]) * total_mass[b];
            const __int128 rhs = static_cast<__int128>(best_price[b]) * total_mass[a];
            if (lhs != rhs) return lhs > rhs;
            return inst_.bids[a].user_id < inst_.bids[b].user_id;
        });
        depth_of_.assign(U, 0);
        for (int d = 0; d < U; ++d) depth_of_[order_[d]] = d;
        best_price_ = std::move(best_price);

        suffix_price_.assign(U + 1, 0);
        for (int d = U - 1; d >= 0; --d)
            suffix_price_[d] = suffix_price_[d + 1] + best_price_[order_[d]];

        // One prefix interval [1, T] per distinct option deadline. A job whose
        // chosen window ends at e can spill at most e - T slots past T, so it
        // must place max(0, s - (e - T)) slots inside the interval. Per user
        // the options become (interval mass, price) points; their upper convex
        // hull yields the fractional multiple-choice knapsack relaxation:
        // a zero-mass head value plus segments consumed in density order.
        tset_.clear();
        for (const Bid& b : inst_.bids)
            for (const DeadlineOption& o : b.options) tset_.push_back(o.deadline);
        std::sort(tset_.begin(), tset_.end());
        tset_.erase(std::unique(tset_.begin(), tset_.end()), tset_.end());
        aset_.clear();
        for (const Bid& b : inst_.bids) aset_.push_back(b.arrival);
        std::sort(aset_.begin(), aset_.end());
        aset_.erase(std::unique(aset_.begin(), aset_.end()), aset_.end());

        const std::size_t nt = tset_.size();
        segs_.assign(nt, std::vector<std::vector<Seg>>(P_));
        suffix_head_.assign(nt, std::vector<std::vector<std::int64_t>>(
                                    P_, std::vector<std::int64_t>(U + 1, 0)));
        suffix_need_.assign(nt, std::vector<std::vector<std::int64_t>>(
                                    P_, std::vector<std::int64_t>(U + 1, 0)));
        accepted_need_.assign(aset_.size() * nt * P_, 0);
        std::vector<std::pair<std::int64_t, std::int64_t>> pts, hull;  // (w, p)
        for (std::size_t ti = 0; ti < nt; ++ti) {
            for (int m = 0; m < P_; ++m) {
                std::vector<std::int64_t> head(U, 0), need(U, 0);
                std::vector<Seg>& segs = segs_[ti][m];
                for (int k = 0; k < U; ++k) {
                    const Bid& b = inst_.bids[k];
                    pts.clear();
                    pts.emplace_back(0, 0);  // reject
                    for (const DeadlineOption& o : b.options) {
                        const int slots =
                            min_slots_inside(b.slots_required, o.deadline, tset_[ti]);
                        pts.emplace_back(
                            static_cast<std::int64_t>(slots) * ext_dem_[k][m],
                            o.price);
                    }
                    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first < b.first;
                        return a.second > b.second;
                    });
                    hull.clear();
                    for (const auto& pt : pts) {
                        if (!hull.empty() && pt.second <= hull.back().second) continue;
                        while (hull.size() >= 2) {
                            const auto& p0 = hull[hull.size() - 2];
                            const auto& p1 = hull.back();
                            // pop p1 unless slope(p0,p1) exceeds slope(p1,pt)
                            const __int128 lhs =
                                static_cast<__int128>(p1.second - p0.second) *
                                (pt.first - p1.first);
                            const __int128 rhs =
                                static_cast<__int128>(pt.second - p1.second) *
                                (p1.first - p0.first);
                            if (lhs > rhs) break;
                            hull.pop_back();
                        }
                        hull.push_back(pt);
                    }
                    head[k] = hull.front().second;  // w = 0, the reject point at worst
                    need[k] = hull.back().first;    // mass of the best-price point
                    for (std::size_t h = 1; h < hull.size(); ++h)
                        segs.push_back(Seg{k, hull[h].first - hull[h - 1].first,
                                           hull[h].second - hull[h - 1].second});
                }
                std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) {
                    const __int128 lhs = static_cast<__int128>(a.dp) * b.dw;
                    const __int128 rhs = static_cast<__int128>(b.dp) * a.dw;
                    if (lhs != rhs) return lhs > rhs;
                    if (a.user != b.user) return a.user < b.user;
                    return a.dw < b.dw;
                });
                for (int d = U - 1; d >= 0; --d) {
                    suffix_head_[ti][m][d] = suffix_head_[ti][m][d + 1] + head[order_[d]];
                    suffix_need_[ti][m][d] = suffix_need_[ti][m][d + 1] + need[order_[d]];
                }
            }
        }

        ti_from_slot_.assign(inst_.horizon + 2, nt);
        for (int t = 1; t <= inst_.horizon + 1; ++t)
            ti_from_slot_[t] = static_cast<std::size_t>(
                std::lower_bound(tset_.begin(), tset_.end(), t) - tset_.begin());
    }

    // Lagrangian relaxation of the per-slot capacity rows (real and counting
    // dimensions alike). For any nonnegative multipliers lambda,
    //   sum_{t,p} lambda[t][p] cap[p]
    //     + sum_committed (price - placement cost of the chosen option)
    //     + sum_remaining max(0, best option gain)
    // bounds the best completion, where an option's placement cost is the
    // cheapest choice of its slots inside its window and a gain is the priced
    // option minus that cost. Multipliers are integer-scaled so every bound
    // comparison is exact; a short subgradient run at the root picks them,
    // aiming at the warm-start value.
    void init_lagrangian() {
        const int U = static_cast<int>(order_.size());
        const int T = inst_.horizon;
        lam_.assign(static_cast<std::size_t>(T + 1) * P_, 0);
        std::vector<std::int64_t> best_lam = lam_;
        std::int64_t best_bound = std::numeric_limits<std::int64_t>::max();
        const std::int64_t target = best_value_ * kLagScale;

        std::vector<std::int64_t> usage(lam_.size(), 0);
        std::vector<std::pair<std::int64_t, int>> window;  // (slot cost, slot)
        double theta = 0.8;
        for (int it = 0; it < kLagIters; ++it) {
            std::int64_t bound = 0;
            for (int t = 1; t <= T; ++t)
                for (int p = 0; p < P_; ++p)
                    bound += lam_[static_cast<std::size_t>(t) * P_ + p] * pr_cap_[p];
            std::fill(usage.begin(), usage.end(), 0);
            for (int k = 0; k < U; ++k) {
                const Bid& b = inst_.bids[k];
                std::int64_t best_gain = 0;
                int best_e = -1, best_s = 0;
                for (const DeadlineOption& o : b.options) {
                    const std::int64_t gain =
                        o.price * kLagScale -
                        placement_cost(k, b.arrival, o.deadline, b.slots_required,
                                       window);
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_e = o.deadline;
                        best_s = b.slots_required;
                    }
                }
                bound += best_gain;
                if (best_e < 0) continue;
                // charge the relaxed winner's cheapest slots
                placement_cost(k, b.arrival, best_e, best_s, window);
                for (int s = 0; s < best_s; ++s)
                    for (int p = 0; p < P_; ++p)
                        usage[static_cast<std::size_t>(window[s].second) * P_ + p] +=
                            ext_dem_[k][p];
            }
            if (bound < best_bound) {
                best_bound = bound;
                best_lam = lam_;
            }
            if (best_bound <= target) break;  // the warm start is optimal

            __int128 g2 = 0;
            for (int t = 1; t <= T; ++t)
                for (int p = 0; p < P_; ++p) {
                    const std::int64_t g =
                        usage[static_cast<std::size_t>(t) * P_ + p] - pr_cap_[p];
                    g2 += static_cast<__int128>(g) * g;
                }
            if (g2 == 0) break;  // relaxed winners already fit
            const double step =
                theta * static_cast<double>(bound - target) / static_cast<double>(g2);
            for (int t = 1; t <= T; ++t)
                for (int p = 0; p < P_; ++p) {
                    std::int64_t& lam = lam_[static_cast<std::size_t>(t) * P_ + p];
                    const std::int64_t g =
                        usage[static_cast<std::size_t>(t) * P_ + p] - pr_cap_[p];
                    lam = std::clamp<std::int64_t>(
                        lam + std::llround(step * static_cast<double>(g)), 0, kLagMax);
                }
            theta *= 0.93;
        }

        dbg_lag_root_ = best_bound;
        lam_ = std::move(best_lam);
        lam_const_ = 0;
        for (int t = 1; t <= T; ++t)
            for (int p = 0; p < P_; ++p)
                lam_const_ += lam_[static_cast<std::size_t>(t) * P_ + p] * pr_cap_[p];
        lag_gain_.assign(U, {});
        lag_best_.assign(U, 0);
        for (int k = 0; k < U; ++k) {
            const Bid& b = inst_.bids[k];
            lag_gain_[k].reserve(b.options.size());
            for (const DeadlineOption& o : b.options) {
                const std::int64_t gain =
                    o.price * kLagScale -
                    placement_cost(k, b.arrival, o.deadline, b.slots_required, window);
                lag_gain_[k].push_back(gain);
                lag_best_[k] = std::max(lag_best_[k], gain);
            }
        }
        suffix_lag_.assign(U + 1, 0);
        for (int d = U - 1; d >= 0; --d)
            suffix_lag_[d] = suffix_lag_[d + 1] + lag_best_[order_[d]];
    }

    // Cheapest way to place `slots` distinct slots inside [arrival, deadline]
    // under the current multipliers; `window` keeps the chosen (cost, slot)
    // pairs in front.
    std::int64_t placement_cost(int k, int arrival, int deadline, int slots,
                                std::vector<std::pair<std::int64_t, int>>& window) {
        window.clear();
        for (int t = arrival; t <= deadline; ++t) {
            std::int64_t cost = 0;
            for (int p = 0; p < P_; ++p)
                cost += lam_[static_cast<std::size_t>(t) * P_ + p] * ext_dem_[k][p];
            window.emplace_back(cost, t);
        }
        if (static_cast<int>(window.size()) < slots)
            return kLagMax * 64;  // unachievable option, keep it unattractive
        std::sort(window.begin(), window.end());
        std::int64_t total = 0;
        for (int s = 0; s < slots; ++s) total += window[s].first;
        return total;
    }

    static int min_slots_inside(int slots_required, int deadline, int t) {
        return std::max(0, slots_required - std::max(0, deadline - t));
    }

    // Minimum slots a job with window [a, e] must place inside [t1, t2].
    static int min_slots_between(int slots_required, int a, int e, int t1, int t2) {
        return std::max(0, slots_required - std::max(0, t1 - a) - std::max(0, e - t2));
    }

    // Admissible upper bound on the value still obtainable from users at
    // depth >= d: their best prices, capped per binding prefix interval by the
    // fractional multiple-choice knapsack over precomputed hull segments.
    // Prefix intervals start at the earliest arrival; no job can run sooner.
    std::int64_t remaining_bound(int d) const {
        ++dbg_bounds_;
        std::int64_t bound = suffix_price_[d];
        if (bound == 0) return 0;
        const std::size_t nt = tset_.size();
        for (std::size_t ti = 0; ti < nt; ++ti) {
            for (int m = 0; m < P_; ++m) {
                const std::int64_t cap =
                    static_cast<std::int64_t>(tset_[ti] - aset_.front() + 1) *
                        pr_cap_[m] -
                    accepted_need_[ti * P_ + m];
                if (suffix_need_[ti][m][d] <= cap) continue;  // interval slack
                std::int64_t room = cap;
                std::int64_t value = suffix_head_[ti][m][d];
                if (value >= bound) continue;
                for (const Seg& s : segs_[ti][m]) {
                    if (depth_of_[s.user] < d) continue;
                    if (s.dw <= room) {
                        room -= s.dw;
                        value += s.dp;
                        if (value >= bound) break;  // cannot lower the minimum
                    } else {
                        value += s.dp * room / s.dw;  // floor is admissible
                        break;
                    }
                }
                bound = std::min(bound, value);
                if (bound == 0) return 0;
            }
        }
        return bound;
    }

    // Exact interval mass committed by accepting this option; mirrored on
    // undo. Tracked over every [t1, t2] with t1 an arrival, t2 a deadline.
    void note_accept(int bid_idx, int option_index, int sign) {
        const Bid& b = inst_.bids[bid_idx];
        const int e = b.options[option_index].deadline;
        const std::size_t nt = tset_.size();
        for (std::size_t ai = 0; ai < aset_.size() && aset_[ai] <= e; ++ai) {
            for (std::size_t ti = ti_from_slot_[aset_[ai]]; ti < nt; ++ti) {
                const int slots = min_slots_between(b.slots_required, b.arrival, e,
                                                    aset_[ai], tset_[ti]);
                if (slots == 0) continue;
                for (int m = 0; m < P_; ++m)
                    accepted_need_[(ai * nt + ti) * P_ + m] +=
                        sign * static_cast<std::int64_t>(slots) * ext_dem_[bid_idx][m];
            }
        }
        committed_lag_ += sign * lag_gain_[bid_idx][option_index];
    }

    // Necessary condition for packability, checked before any repack: every
    // interval must still have room for its committed minimum mass.
    bool interval_overflow(int bid_idx, int option_index) const {
        const Bid& b = inst_.bids[bid_idx];
        const int e = b.options[option_index].deadline;
        const std::size_t nt = tset_.size();
        for (std::size_t ai = 0; ai < aset_.size() && aset_[ai] <= e; ++ai) {
            for (std::size_t ti = ti_from_slot_[aset_[ai]]; ti < nt; ++ti) {
                const int slots = min_slots_between(b.slots_required, b.arrival, e,
                                                    aset_[ai], tset_[ti]);
                if (slots == 0) continue;
                const std::int64_t span = tset_[ti] - aset_[ai] + 1;
                for (int m = 0; m < P_; ++m) {
                    const std::int64_t room =
                        span * pr_cap_[m] - accepted_need_[(ai * nt + ti) * P_ + m];
                    if (static_cast<std::int64_t>(slots) * ext_dem_[bid_idx][m] > room)
                        return true;
                }
            }
        }
        return false;
    }

    // Local improvement on the warm schedule before the search: replant the
    // engine's winners with their exact slots, then greedily insert rejected
    // users and move winners onto higher-priced options through the exact
    // packer. A tight incumbent closes more of the tree than any bound.
    void polish_warm() {
        const int U = inst_.num_users();
        std::vector<int> opt_of(U, -1);  // by bid index, -1 = rejected
        std::int64_t value = 0;
        packed_.clear();
        for (int u = 0; u < U; ++u) {
            const Outcome& won = warm_schedule_.outcomes[u];
            if (!won) continue;
            const int k = uidx_[u];
            const Bid& b = inst_.bids[k];
            packed_.push_back(ChosenJob{u, won->option_index, b.arrival,
                                        b.options[won->option_index].deadline,
                                        b.slots_required, &b.demand.amounts,
                                        warm_schedule_.assignments[u]});
            occupy(packed_.back(), +1);
            opt_of[k] = won->option_index;
            value += won->payment;
        }

        const auto by_price = [&](const Bid& bid, std::vector<int>& opts) {
            opts.resize(bid.options.size());
            std::iota(opts.begin(), opts.end(), 0);
            std::sort(opts.begin(), opts.end(), [&](int a, int b) {
                if (bid.options[a].price != bid.options[b].price)
                    return bid.options[a].price > bid.options[b].price;
                return bid.options[a].deadline < bid.options[b].deadline;
            });
        };

        std::vector<int> opts;
        for (int round = 0; round < 3; ++round) {
            bool changed = false;
            for (int k : order_) {  // insert rejected users, best first
                if (opt_of[k] >= 0 || over_budget()) continue;
                const Bid& bid = inst_.bids[k];
                by_price(bid, opts);
                for (int j : opts)
                    if (try_accept(k, j)) {
                        undo_.pop_back();  // commit
                        opt_of[k] = j;
                        value += bid.options[j].price;
                        changed = true;
                        break;
                    }
            }
            for (int k : order_) {  // upgrade winners
                if (opt_of[k] < 0 || over_budget()) continue;
                const Bid& bid = inst_.bids[k];
                by_price(bid, opts);
                for (int j : opts) {
                    if (bid.options[j].price <= bid.options[opt_of[k]].price) break;
                    std::size_t pos = 0;
                    while (packed_[pos].user_id != bid.user_id) ++pos;
                    ChosenJob old = std::move(packed_[pos]);
                    packed_.erase(packed_.begin() + pos);
                    occupy(old, -1);
                    if (try_accept(k, j)) {
                        undo_.pop_back();
                        value += bid.options[j].price - bid.options[opt_of[k]].price;
                        opt_of[k] = j;
                        changed = true;
                        break;
                    }
                    occupy(old, +1);
                    packed_.push_back(std::move(old));
                }
            }
            if (!changed) break;
        }

        best_value_ = value;
        dbg_warm_ = value;
        best_jobs_ = std::move(packed_);
        improved_ = true;

        packed_.clear();
        undo_.clear();
        for (int t = 1; t <= inst_.horizon; ++t)
            for (int m = 0; m < inst_.num_resources; ++m)
                residual_[t][m] = inst_.capacities[m];
    }

    void descend(int d, std::int64_t value) {
        if (over_budget()) return;
        ++nodes_; ++dbg_descend_;
        if (d == static_cast<int>(order_.size())) {
            if (value > best_value_) {
                best_value_ = value;
                best_jobs_ = packed_;
                improved_ = true;
            }
            return;
        }
        if (lam_const_ + committed_lag_ + suffix_lag_[d] <= best_value_ * kLagScale) {
            ++dbg_lag_prunes_;
            return;
        }
        if (value + remaining_bound(d) <= best_value_) { ++dbg_iv_prunes_; return; }

        const int bid_idx = order_[d];
        const Bid& bid = inst_.bids[bid_idx];

        // options in descending price, then the reject branch
        std::vector<int> opts(bid.options.size());
        std::iota(opts.begin(), opts.end(), 0);
        std::sort(opts.begin(), opts.end(), [&](int a, int b) {
            if (bid.options[a].price != bid.options[b].price)
                return bid.options[a].price > bid.options[b].price;
            return bid.options[a].deadline < bid.options[b].deadline;
        });

        // A tighter deadline only shrinks the slot set, so if the loosest
        // option cannot be packed no option can; check it once up front.
        int loosest = 0;
        for (std::size_t j = 1; j < bid.options.size(); ++j)
            if (bid.options[j].deadline > bid.options[loosest].deadline)
                loosest = static_cast<int>(j);
        bool loosest_checked = false;

        for (int j : opts) {
            if (over_budget()) return;
            const std::int64_t child = value + bid.options[j].price;
            if (lam_const_ + committed_lag_ + lag_gain_[bid_idx][j] +
                    suffix_lag_[d + 1] <=
                best_value_ * kLagScale)
                continue;
            if (child + remaining_bound(d + 1) <= best_value_) continue;
            if (interval_overflow(bid_idx, j)) continue;
            if (!loosest_checked && j != loosest) {
                loosest_checked = true;
                if (interval_overflow(bid_idx, loosest)) break;
                if (!try_accept(bid_idx, loosest)) break;
                undo_accept();
            }
            if (try_accept(bid_idx, j)) {
                ++dbg_accepts_;
                note_accept(bid_idx, j, +1);
                descend(d + 1, child);
                note_accept(bid_idx, j, -1);
                undo_accept();
            }
        }
        descend(d + 1, value);  // reject branch
    }

    // ---- packing state ----
    //
    // packed_ holds the committed slot assignment of every accepted user.
    // Accepting greedily extends it when possible; otherwise the whole set
    // is repacked from scratch (deadline-ordered backtracking). Because a
    // repack may move earlier users, each accept snapshots the state it
    // needs to restore.

    bool fits(int t, const std::vector<int>& demand) const {
        for (int m = 0; m < inst_.num_resources; ++m)
            if (demand[m] > residual_[t][m]) return false;
        return true;
    }

    void occupy(const ChosenJob& job, int sign) {
        for (int t : job.slots)
            for (int m = 0; m < inst_.num_resources; ++m)
                residual_[t][m] -= sign * job.demand->at(m);
    }

    bool try_accept(int bid_idx, int option_index) {
        const Bid& b = inst_.bids[bid_idx];
        ChosenJob job{b.user_id, option_index, b.arrival,
                      b.options[option_index].deadline, b.slots_required,
                      &b.demand.amounts, {}};

        // fast path: earliest residual-feasible slots in the window
        for (int t = job.arrival;
             t <= job.deadline && static_cast<int>(job.slots.size()) < job.slots_required;
             ++t)
            if (fits(t, *job.demand)) job.slots.push_back(t);
        if (static_cast<int>(job.slots.size()) == job.slots_required) {
            occupy(job, +1);
            packed_.push_back(std::move(job));
            undo_.push_back({});  // plain removal restores the state
            return true;
        }

        // slow path: full repack of the accepted set including the new job
        job.slots.clear();
        std::vector<ChosenJob> attempt = packed_;
        attempt.push_back(job);
        std::sort(attempt.begin(), attempt.end(), [](const ChosenJob& x, const ChosenJob& y) {
            if (x.deadline != y.deadline) return x.deadline < y.deadline;
            if (x.arrival != y.arrival) return x.arrival < y.arrival;
            return x.user_id < y.user_id;
        });
        std::vector<std::vector<int>> fresh(inst_.horizon + 1,
                                            std::vector<int>(inst_.num_resources, 0));
        for (int t = 1; t <= inst_.horizon; ++t)
            for (int m = 0; m < inst_.num_resources; ++m)
                fresh[t][m] = inst_.capacities[m];
        const std::size_t n = attempt.size();

        // Per counting class the attempt set is a b-matching: unit slot
        // loads, windows, slot capacity q. Max-flow decides each class
        // exactly, refuting sets the interval bounds cannot. When one class
        // spans every job its matching is also a placement candidate; it is
        // only adopted after checking the real demands, so nothing here
        // assumes the counts tell the whole story.
        bool placed = false;
        for (int p = inst_.num_resources; p < P_; ++p) {
            flow_members_.clear();
            int need = 0;
            for (std::size_t k = 0; k < n; ++k)
                if (ext_dem_[uidx_[attempt[k].user_id]][p] != 0) {
                    flow_members_.push_back(static_cast<int>(k));
                    need += attempt[k].slots_required;
                }
            if (flow_members_.empty()) continue;
            const int nm = static_cast<int>(flow_members_.size());
            const int sink = nm + inst_.horizon + 1;
            flow_.reset(sink + 1);
            for (int i = 0; i < nm; ++i) {
                const ChosenJob& jb = attempt[flow_members_[i]];
                flow_.add_edge(0, 1 + i, jb.slots_required);
                for (int t = jb.arrival; t <= jb.deadline; ++t)
                    flow_.add_edge(1 + i, nm + t, 1);
            }
            for (int t = 1; t <= inst_.horizon; ++t)
                flow_.add_edge(nm + t, sink, pr_cap_[p]);
            ++nodes_;
            if (flow_.max_flow(0, sink) != need) return false;
            if (placed || nm != static_cast<int>(n)) continue;
            guide_.assign(n, {});
            for (int i = 0; i < nm; ++i)
                flow_.for_each_saturated(1 + i, [&](int node) {
                    if (node > nm && node < sink) guide_[i].push_back(node - nm);
                });
            use_.assign((inst_.horizon + 1) * inst_.num_resources, 0);
            bool valid = true;
            for (std::size_t k = 0; k < n && valid; ++k)
                for (int t : guide_[k]) {
                    for (int m = 0; m < inst_.num_resources; ++m) {
                        int& u = use_[t * inst_.num_resources + m];
                        u += attempt[k].demand->at(m);
                        if (u > inst_.capacities[m]) valid = false;
                    }
                    if (!valid) break;
                }
            if (!valid) continue;
            for (std::size_t k = 0; k < n; ++k) {
                std::sort(guide_[k].begin(), guide_[k].end());
                attempt[k].slots = std::move(guide_[k]);
            }
            for (int t = 1; t <= inst_.horizon; ++t)
                for (int m = 0; m < inst_.num_resources; ++m)
                    fresh[t][m] -= use_[t * inst_.num_resources + m];
            placed = true;
            // a verified placement exists; the remaining classes cannot
            // refute it, so stop scanning
            break;
        }

        if (!placed) {
            // committed minimum prefix-interval mass of jobs k.., for pruning
            const std::size_t nt = tset_.size();
            suffix_iv_.assign((n + 1) * nt * P_, 0);
            for (std::size_t k = n; k-- > 0;) {
                const ChosenJob& jk = attempt[k];
                const std::vector<std::int64_t>& xd = ext_dem_[uidx_[jk.user_id]];
                for (std::size_t ti = 0; ti < nt; ++ti) {
                    const int slots =
                        min_slots_inside(jk.slots_required, jk.deadline, tset_[ti]);
                    for (int m = 0; m < P_; ++m)
                        suffix_iv_[(k * nt + ti) * P_ + m] =
                            suffix_iv_[((k + 1) * nt + ti) * P_ + m] +
                            static_cast<std::int64_t>(slots) * xd[m];
                }
            }
            used_iv_.assign(nt * P_, 0);
            pack_n_ = static_cast<int>(n);
            pack_words_ = static_cast<int>((n + 63) / 64);
            conf_.assign(n * pack_words_, 0);
            owner_.assign((inst_.horizon + 1) * pack_words_, 0);

            ++dbg_repack_calls_;
            const std::uint64_t steps0 = dbg_repack_;
            const bool packed_ok = repack(attempt, 0, fresh) == pack_n_;
            const std::uint64_t steps = dbg_repack_ - steps0;
            if (steps > dbg_worst_call_) { dbg_worst_call_ = steps; dbg_worst_ok_ = packed_ok; }
            if (packed_ok) dbg_ok_steps_ += steps; else dbg_fail_steps_ += steps;
            if (!packed_ok) { ++dbg_fail_calls_; return false; }
        }

        undo_.push_back(Snapshot{packed_, residual_});
        packed_ = std::move(attempt);
        residual_ = std::move(fresh);
        return true;
    }

    // The repack enumerates EDF-ordered placements with conflict-directed
    // backjumping: when a job exhausts its window, search resumes at the
    // deepest job actually occupying its blocked slots instead of the
    // chronological predecessor. Returns pack_n_ on success, kPackAbort on
    // budget exhaustion, -1 for a failure no earlier job can fix, else the
    // level to resume.
    static constexpr int kPackAbort = -2;

    std::uint64_t* conf(int k) {
        return conf_.data() + static_cast<std::size_t>(k) * pack_words_;
    }
    std::uint64_t* owner(int t) {
        return owner_.data() + static_cast<std::size_t>(t) * pack_words_;
    }

    int repack(std::vector<ChosenJob>& jobs, int k,
               std::vector<std::vector<int>>& residual) {
        if (k == pack_n_) return pack_n_;
        // prune: jobs k.. must still fit their minimum mass into each prefix;
        // an overflow implicates every earlier placement
        const std::size_t nt = tset_.size();
        for (std::size_t ti = 0; ti < nt; ++ti)
            for (int m = 0; m < P_; ++m)
                if (suffix_iv_[(k * nt + ti) * P_ + m] >
                    static_cast<std::int64_t>(tset_[ti] - aset_.front() + 1) *
                            pr_cap_[m] -
                        used_iv_[ti * P_ + m]) {
                    if (k == 0) return -1;
                    std::uint64_t* c = conf(k - 1);
                    for (int j = 0; j < k - 1; ++j) c[j >> 6] |= 1ull << (j & 63);
                    return k - 1;
                }
        jobs[k].slots.clear();
        std::fill(conf(k), conf(k) + pack_words_, 0);
        const int r =
            repack_slots(jobs, k, jobs[k].arrival, jobs[k].slots_required, residual);
        if (r != k) return r;
        // window exhausted: resume at the deepest blocker, carrying the rest
        // of the conflict set up to it
        const std::uint64_t* c = conf(k);
        int j = -1;
        for (int w = pack_words_ - 1; w >= 0 && j < 0; --w)
            if (c[w]) j = w * 64 + 63 - std::countl_zero(c[w]);
        if (j < 0) return -1;
        std::uint64_t* cj = conf(j);
        for (int w = 0; w < pack_words_; ++w) cj[w] |= c[w];
        cj[j >> 6] &= ~(1ull << (j & 63));
        return j;
    }

    int repack_slots(std::vector<ChosenJob>& jobs, int k, int from, int needed,
                     std::vector<std::vector<int>>& residual) {
        if (needed == 0) return repack(jobs, k + 1, residual);
        if (over_budget()) return kPackAbort;
        const std::size_t nt = tset_.size();
        const int M = inst_.num_resources;
        ChosenJob& job = jobs[k];
        const std::int64_t* xd = ext_dem_[uidx_[job.user_id]].data();
        for (int t = from; t + needed - 1 <= job.deadline; ++t) {
            bool ok = true;
            for (int m = 0; m < M; ++m)
                if (job.demand->at(m) > residual[t][m]) {
                    ok = false;
                    break;
                }
            if (!ok) {
                // the jobs holding this slot could release it
                const std::uint64_t* o = owner(t);
                std::uint64_t* c = conf(k);
                for (int w = 0; w < pack_words_; ++w) c[w] |= o[w];
                continue;
            }
            ++nodes_; ++dbg_repack_;
            for (int m = 0; m < M; ++m)
                residual[t][m] -= job.demand->at(m);
            for (std::size_t ti = ti_from_slot_[t]; ti < nt; ++ti)
                for (int m = 0; m < P_; ++m)
                    used_iv_[ti * P_ + m] += xd[m];
            owner(t)[k >> 6] |= 1ull << (k & 63);
            job.slots.push_back(t);
            const int r = repack_slots(jobs, k, t + 1, needed - 1, residual);
            if (r == pack_n_) return r;  // keep the placements
            job.slots.pop_back();
            owner(t)[k >> 6] &= ~(1ull << (k & 63));
            for (std::size_t ti = ti_from_slot_[t]; ti < nt; ++ti)
                for (int m = 0; m < P_; ++m)
                    used_iv_[ti * P_ + m] -= xd[m];
            for (int m = 0; m < M; ++m)
                residual[t][m] += job.demand->at(m);
            if (r != k) return r;  // abort, -1, or a jump past this job
        }
        return k;
    }

    void undo_accept() {
        Snapshot snap = std::move(undo_.back());
        undo_.pop_back();
        if (snap.packed.empty() && snap.residual.empty()) {
            occupy(packed_.back(), -1);
            packed_.pop_back();
        } else {
            packed_ = std::move(snap.packed);
            residual_ = std::move(snap.residual);
        }
    }

    struct Snapshot {
        std::vector<ChosenJob> packed;
        std::vector<std::vector<int>> residual;
    };

    const Instance& inst_;
    OracleLimits limits_;
    std::chrono::steady_clock::time_point start_;

    std::vector<int> order_;          // branching order (indices into bids)
    std::vector<int> depth_of_;       // bid index -> branching depth
    std::vector<std::int64_t> best_price_;
    std::vector<std::int64_t> suffix_price_;  // by branching depth

    struct Seg {
        int user;
        std::int64_t dw, dp;  // hull segment: extra interval mass, extra price
    };

    int P_ = 0;                        // real resources plus counting rows
    std::vector<std::int64_t> pr_cap_;  // per-slot capacity per dimension
    std::vector<std::vector<std::int64_t>> ext_dem_;  // [bid][dimension]
    std::vector<int> uidx_;  // user id -> bid index

    std::vector<int> tset_;  // distinct option deadlines, ascending
    std::vector<int> aset_;  // distinct arrivals, ascending
    std::vector<std::vector<std::vector<Seg>>> segs_;  // [T][m], density order
    std::vector<std::vector<std::vector<std::int64_t>>> suffix_head_;  // [T][m][depth]
    std::vector<std::vector<std::vector<std::int64_t>>> suffix_need_;  // [T][m][depth]
    std::vector<std::int64_t> accepted_need_;  // [t1][t2][m], flattened
    std::vector<std::size_t> ti_from_slot_;  // slot -> first tset_ index >= slot

    // scratch for the repack pruning, valid within one try_accept call
    std::vector<std::int64_t> suffix_iv_;  // [job][T][m] committed minimum mass
    std::vector<std::int64_t> used_iv_;    // [T][m] mass placed so far
    std::vector<std::uint64_t> conf_;      // [job] blocker bitmask words
    std::vector<std::uint64_t> owner_;     // [slot] occupant bitmask words
    int pack_n_ = 0;
    int pack_words_ = 0;

    SlotFlow flow_;
    std::vector<int> flow_members_;       // attempt indices in the class
    std::vector<std::vector<int>> guide_; // matching-derived slots per job
    std::vector<int> use_;                // [slot][resource] scratch load

    static constexpr std::int64_t kLagScale = std::int64_t{1} << 16;
    static constexpr std::int64_t kLagMax = std::int64_t{1} << 33;
    static constexpr int kLagIters = 80;
    std::vector<std::int64_t> lam_;         // [slot][dimension], scaled
    std::int64_t lam_const_ = 0;            // sum of lambda * capacity
    std::vector<std::vector<std::int64_t>> lag_gain_;  // [bid][option], scaled
    std::vector<std::int64_t> lag_best_;    // [bid], floored at reject = 0
    std::vector<std::int64_t> suffix_lag_;  // by branching depth
    std::int64_t committed_lag_ = 0;

    std::vector<std::vector<int>> residual_;
    std::vector<ChosenJob> packed_;
    std::vector<Snapshot> undo_;

    std::int64_t best_value_ = 0;
    std::vector<ChosenJob> best_jobs_;
    Schedule warm_schedule_;
    bool improved_ = false;
    std::uint64_t nodes_ = 0;
    mutable std::uint64_t dbg_descend_ = 0, dbg_repack_ = 0, dbg_repack_calls_ = 0, dbg_bounds_ = 0, dbg_accepts_ = 0;
    mutable std::uint64_t dbg_fail_calls_ = 0, dbg_fail_steps_ = 0, dbg_ok_steps_ = 0, dbg_worst_call_ = 0;
    mutable bool dbg_worst_ok_ = false;
    mutable std::int64_t dbg_lag_root_ = 0, dbg_warm_ = 0;
    mutable std::uint64_t dbg_lag_prunes_ = 0, dbg_iv_prunes_ = 0;
    bool aborted_ = false;
};

}  // namespace

OracleResult solve_exact(const Instance& inst, const OracleLimits& limits) {
    return ExactSolver(inst, limits).run();
}

}  // namespace casched
