#include "casched/engine.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <stdexcept>

#include "casched/online.hpp"

namespace casched {

namespace {

void insert_sorted(std::vector<int>& v, int x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

void erase_value(std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    assert(it != v.end() && *it == x);
    v.erase(it);
}

}  // namespace

Engine::Engine(const Instance& inst, EngineConfig cfg)
    : inst_(&inst), cfg_(std::move(cfg)) {
    const int U = inst.num_users();
    const int S = inst.horizon;
    bid_of_ = user_index(inst);
    state_.users.resize(U);
    state_.usage.assign(S + 1, std::vector<int>(inst.num_resources, 0));
    outcomes_.resize(U);
    arrivals_.resize(S + 2);
    for (const Bid& b : inst.bids) arrivals_[b.arrival].push_back(b.user_id);
    for (auto& bucket : arrivals_) std::sort(bucket.begin(), bucket.end());
}

EvictionChoice Engine::pick_victim(const std::vector<ValueAssessment>& assessments) const {
    if (cfg_.custom_selector) return cfg_.custom_selector(assessments);
    return cfg_.strategy == Strategy::TRuem ? select_victim_truem(assessments)
                                            : select_victim_trwaem(assessments);
}

void Engine::reject_user(int u, int slot) {
    UserProgress& up = state_.users[u];
    const Bid& bid = inst_->bids[bid_of_[u]];
    for (int t : up.assigned)
        for (int m = 0; m < inst_->num_resources; ++m)
            state_.usage[t][m] -= bid.demand.amounts[m];
    up.assigned.clear();
    up.slots_done = 0;
    up.status = UserStatus::Rejected;
    erase_value(active_, u);
    if (cfg_.collect_trace)
        trace_.push_back(TraceEvent{slot, TraceKind::Reject, u, Rational{}, 0});
}

void Engine::step() {
    const int t = state_.current_slot;
    const int S = inst_->horizon;
    assert(t >= 1 && t <= S);
    const int M = inst_->num_resources;

    for (int u : arrivals_[t]) insert_sorted(active_, u);

    // Allocation: tentatively place every live user; users whose last
    // deadline is already unreachable are rejected here.
    std::vector<int> at_slot;
    const std::vector<int> snapshot = active_;
    for (int u : snapshot) {
        const Bid& bid = inst_->bids[bid_of_[u]];
        UserProgress& up = state_.users[u];
        const int remaining = bid.slots_required - up.slots_done;
        if (t + remaining - 1 > bid.latest_deadline()) {
            reject_user(u, t);
            continue;
        }
        at_slot.push_back(u);
        for (int m = 0; m < M; ++m) state_.usage[t][m] += bid.demand.amounts[m];
        if (cfg_.collect_trace)
            trace_.push_back(TraceEvent{t, TraceKind::Allocate, u, Rational{}, 0});
    }

    // Evaluation + Action: evict one victim at a time until the slot fits.
    for (;;) {
        bool overloaded = false;
        for (int m = 0; m < M && !overloaded; ++m)
            overloaded = state_.usage[t][m] > inst_->capacities[m];
        if (!overloaded) break;

        std::vector<ValueAssessment> assessments;
        assessments.reserve(at_slot.size());
        for (int u : at_slot) {
            auto va = assess(*inst_, inst_->bids[bid_of_[u]], t, state_.users[u].slots_done);
            assert(va);  // placement implies at least one achievable option
            assessments.push_back(std::move(*va));
        }
        const EvictionChoice choice = pick_victim(assessments);
        const int u = choice.victim_user_id;
        erase_value(at_slot, u);
        const Bid& bid = inst_->bids[bid_of_[u]];
        for (int m = 0; m < M; ++m) state_.usage[t][m] -= bid.demand.amounts[m];
        ++state_.eviction_count;
        if (cfg_.collect_trace)
            trace_.push_back(TraceEvent{t, TraceKind::Evict, u, choice.minimum_value, 0});

        UserProgress& up = state_.users[u];
        const int remaining = bid.slots_required - up.slots_done;
        const bool reachable = t + 1 <= S && (t + 1) + remaining - 1 <= bid.latest_deadline();
        const bool under_cap =
            !cfg_.max_moves_per_user || up.moves < *cfg_.max_moves_per_user;
        if (reachable && under_cap) {
            ++up.moves;
            ++state_.move_count;  // competes again at t+1
        } else {
            reject_user(u, t);
        }
    }

    // End of slot: surviving users ran here; completed ones settle now.
    for (int u : at_slot) {
        UserProgress& up = state_.users[u];
        up.assigned.push_back(t);
        ++up.slots_done;
        const Bid& bid = inst_->bids[bid_of_[u]];
        if (up.slots_done == bid.slots_required) {
            const auto st = settle_payment(bid, t);
            assert(st);  // the slot was only allocatable with a reachable deadline
            outcomes_[u] = WonOutcome{st->option_index, t, st->payment};
            up.status = UserStatus::Completed;
            erase_value(active_, u);
            if (cfg_.collect_trace)
                trace_.push_back(TraceEvent{t, TraceKind::Complete, u, Rational{}, st->payment});
        }
    }

    ++state_.current_slot;
}

Schedule Engine::schedule() const {
    assert(done());
    assert(active_.empty());
    Schedule s = Schedule::empty(inst_->num_users());
    for (int u = 0; u < inst_->num_users(); ++u) {
        s.outcomes[u] = outcomes_[u];
        if (outcomes_[u]) s.assignments[u] = state_.users[u].assigned;
    }
    return s;
}

std::pair<Schedule, RunReport> run_offline(const Instance& inst, const EngineConfig& cfg,
                                           std::vector<TraceEvent>* trace_out) {
    if (has_errors(validate_instance(inst)))
        throw std::invalid_argument("run_offline: invalid instance");
    EngineConfig local = cfg;
    if (trace_out) local.collect_trace = true;
    const auto start = std::chrono::steady_clock::now();
    Engine engine(inst, std::move(local));
    while (!engine.done()) engine.step();
    Schedule sched = engine.schedule();
    const auto end = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(end - start).count();
    RunReport rep = make_report(inst, sched, engine.state().move_count,
                                engine.state().eviction_count, ms);
    if (trace_out) *trace_out = engine.trace();
    return {std::move(sched), std::move(rep)};
}

std::string trace_to_csv(const std::vector<TraceEvent>& trace) {
    std::string out = "slot,event,user_id,value\n";
    for (const TraceEvent& e : trace) {
        out += std::to_string(e.slot);
        switch (e.kind) {
            case TraceKind::Allocate: out += ",allocate,"; break;
            case TraceKind::Evict: out += ",evict,"; break;
            case TraceKind::Reject: out += ",reject,"; break;
            case TraceKind::Complete: out += ",complete,"; break;
        }
        out += std::to_string(e.user_id);
        out += ',';
        if (e.kind == TraceKind::Evict) out += e.value.str();
        if (e.kind == TraceKind::Complete) out += std::to_string(e.payment);
        out += '\n';
    }
    return out;
}

}  // namespace casched
