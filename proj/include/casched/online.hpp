#ifndef CASCHED_ONLINE_HPP
#define CASCHED_ONLINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "casched/engine.hpp"
#include "casched/model.hpp"

namespace casched {

struct Settlement {
    int option_index = 0;
    std::int64_t payment = 0;

    friend bool operator==(const Settlement&, const Settlement&) = default;
};

// Settlement is based on the final completion time: the option chosen is the
// tightest deadline actually met. Returns nullopt when no deadline was met,
// meaning the caller must terminate and refund instead.
std::optional<Settlement> settle_payment(const Bid& bid, int completion_slot);

enum class EventKind { Accepted, Paused, Resumed, Terminated, Completed, Settled };

struct SoftAcceptEvent {
    int slot = 0;
    EventKind kind = EventKind::Accepted;
    int user_id = 0;
    std::int64_t payment = 0;  // meaningful only on Settled

    friend bool operator==(const SoftAcceptEvent&, const SoftAcceptEvent&) = default;
};

const char* event_kind_name(EventKind k);

// CSV columns: slot,kind,user_id,payment (payment filled on Settled rows).
std::string events_to_csv(const std::vector<SoftAcceptEvent>& events);

struct OnlineResult {
    Schedule schedule;
    std::vector<SoftAcceptEvent> events;
    RunReport report;
};

// Soft-acceptance protocol: every arriving bid is accepted immediately,
// evictions pause it, re-entry resumes it, rejection terminates it with a
// refund, completion settles by final completion time. Bids become visible
// only at their arrival slot; the resulting schedule is identical to
// run_offline on the same instance.
OnlineResult run_online(const Instance& inst, const EngineConfig& cfg);

}  // namespace casched

#endif  // CASCHED_ONLINE_HPP
