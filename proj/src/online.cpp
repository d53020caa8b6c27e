#include "casched/online.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace casched {

std::optional<Settlement> settle_payment(const Bid& bid, int completion_slot) {
    int best = -1;
    for (int j = 0; j < static_cast<int>(bid.options.size()); ++j) {
        const DeadlineOption& o = bid.options[j];
        if (o.deadline < completion_slot) continue;
        if (best < 0 || o.deadline < bid.options[best].deadline) best = j;
    }
    if (best < 0) return std::nullopt;
    return Settlement{best, bid.options[best].price};
}

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Accepted: return "accepted";
        case EventKind::Paused: return "paused";
        case EventKind::Resumed: return "resumed";
        case EventKind::Terminated: return "terminated";
        case EventKind::Completed: return "completed";
        case EventKind::Settled: return "settled";
    }
    return "?";
}

std::string events_to_csv(const std::vector<SoftAcceptEvent>& events) {
    std::string out = "slot,kind,user_id,payment\n";
    for (const SoftAcceptEvent& e : events) {
        out += std::to_string(e.slot);
        out += ',';
        out += event_kind_name(e.kind);
        out += ',' + std::to_string(e.user_id) + ',';
        if (e.kind == EventKind::Settled) out += std::to_string(e.payment);
        out += '\n';
    }
    return out;
}

OnlineResult run_online(const Instance& inst, const EngineConfig& cfg) {
    if (has_errors(validate_instance(inst)))
        throw std::invalid_argument("run_online: invalid instance");

    EngineConfig local = cfg;
    local.collect_trace = true;
    const auto start = std::chrono::steady_clock::now();
    Engine engine(inst, local);

    const int U = inst.num_users();
    std::vector<std::vector<int>> arrivals(inst.horizon + 2);
    for (const Bid& b : inst.bids) arrivals[b.arrival].push_back(b.user_id);
    for (auto& bucket : arrivals) std::sort(bucket.begin(), bucket.end());

    OnlineResult result;
    std::vector<char> paused(U, 0);
    std::size_t cursor = 0;  // into the engine trace

    for (int t = 1; t <= inst.horizon; ++t) {
        for (int u : arrivals[t])
            result.events.push_back(SoftAcceptEvent{t, EventKind::Accepted, u, 0});

        engine.step();
        const auto& trace = engine.trace();

        // users tentatively placed at t and not evicted again actually ran
        std::vector<int> ran;
        std::vector<char> completed_now(U, 0);
        for (std::size_t i = cursor; i < trace.size(); ++i) {
            assert(trace[i].slot == t);
            if (trace[i].kind == TraceKind::Allocate) ran.push_back(trace[i].user_id);
            if (trace[i].kind == TraceKind::Evict)
                ran.erase(std::find(ran.begin(), ran.end(), trace[i].user_id));
        }

        for (; cursor < trace.size(); ++cursor) {
            const TraceEvent& ev = trace[cursor];
            switch (ev.kind) {
                case TraceKind::Allocate:
                    break;
                case TraceKind::Evict:
                    paused[ev.user_id] = 1;
                    result.events.push_back(
                        SoftAcceptEvent{t, EventKind::Paused, ev.user_id, 0});
                    break;
                case TraceKind::Reject:
                    paused[ev.user_id] = 0;
                    result.events.push_back(
                        SoftAcceptEvent{t, EventKind::Terminated, ev.user_id, 0});
                    break;
                case TraceKind::Complete:
                    if (paused[ev.user_id]) {
                        paused[ev.user_id] = 0;
                        result.events.push_back(
                            SoftAcceptEvent{t, EventKind::Resumed, ev.user_id, 0});
                    }
                    completed_now[ev.user_id] = 1;
                    result.events.push_back(
                        SoftAcceptEvent{t, EventKind::Completed, ev.user_id, 0});
                    result.events.push_back(
                        SoftAcceptEvent{t, EventKind::Settled, ev.user_id, ev.payment});
                    break;
            }
        }

        for (int u : ran) {
            if (paused[u] && !completed_now[u]) {
                paused[u] = 0;
                result.events.push_back(SoftAcceptEvent{t, EventKind::Resumed, u, 0});
            }
        }
    }

    result.schedule = engine.schedule();
    const auto end = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(end - start).count();
    result.report = make_report(inst, result.schedule, engine.state().move_count,
                                engine.state().eviction_count, ms);
    return result;
}

}  // namespace casched
