#ifndef CASCHED_ENGINE_HPP
#define CASCHED_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casched/evaluators.hpp"
#include "casched/metrics.hpp"
#include "casched/model.hpp"

namespace casched {

struct EngineConfig {
    Strategy strategy = Strategy::TRwaem;
    // when set, overrides strategy
    std::function<EvictionChoice(const std::vector<ValueAssessment>&)> custom_selector;
    std::optional<std::int64_t> max_moves_per_user;
    bool collect_trace = false;
};

enum class TraceKind { Allocate, Evict, Reject, Complete };

struct TraceEvent {
    int slot = 0;
    TraceKind kind = TraceKind::Allocate;
    int user_id = 0;
    Rational value;             // the compared density, on Evict
    std::int64_t payment = 0;   // on Complete
};

// CSV columns: slot,event,user_id,value (value is the eviction density as an
// exact fraction, or the payment on complete rows).
std::string trace_to_csv(const std::vector<TraceEvent>& trace);

enum class UserStatus { Live, Completed, Rejected };

struct UserProgress {
    UserStatus status = UserStatus::Live;
    int slots_done = 0;
    std::int64_t moves = 0;
    std::vector<int> assigned;  // slots actually run, ascending
};

struct EngineState {
    int current_slot = 1;  // next slot to process; horizon+1 when done
    std::int64_t move_count = 0;
    std::int64_t eviction_count = 0;
    std::vector<UserProgress> users;            // by user id
    std::vector<std::vector<int>> usage;        // [slot][resource], slot 1..S
};

// Slot-by-slot adjustment engine. Each step runs one slot through
// Allocation (tentatively place every live arrived user), Evaluation (while
// some resource is over capacity, evict the strategy's victim) and Action
// (the victim re-enters next slot, or is rejected when no deadline remains).
class Engine {
public:
    Engine(const Instance& inst, EngineConfig cfg);

    void step();
    bool done() const { return state_.current_slot > inst_->horizon; }

    const EngineState& state() const { return state_; }
    const std::vector<TraceEvent>& trace() const { return trace_; }

    // valid once done(); outcomes settle at actual completion slots
    Schedule schedule() const;

private:
    void reject_user(int u, int slot);
    EvictionChoice pick_victim(const std::vector<ValueAssessment>& assessments) const;

    const Instance* inst_;
    EngineConfig cfg_;
    EngineState state_;
    std::vector<TraceEvent> trace_;
    std::vector<int> bid_of_;             // user id -> index into inst.bids
    std::vector<std::vector<int>> arrivals_;  // [slot] -> user ids, ascending
    std::vector<int> active_;             // arrived, unfinished, ascending ids
    std::vector<Outcome> outcomes_;
};

// Runs the engine over the whole horizon. Throws std::invalid_argument when
// validate_instance reports errors.
std::pair<Schedule, RunReport> run_offline(const Instance& inst, const EngineConfig& cfg,
                                           std::vector<TraceEvent>* trace_out = nullptr);

}  // namespace casched

#endif  // CASCHED_ENGINE_HPP
