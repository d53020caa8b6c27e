#ifndef CASCHED_MODEL_HPP
#define CASCHED_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace casched {

// Capacities are normalized: 1000 milli-units == one full resource.
// All feasibility checks are exact integer comparisons.
constexpr int kMilliUnitsPerResource = 1000;

// Per-resource demand of one bid, in milli-units.
struct ResourceDemand {
    std::vector<int> amounts;

    int total() const {
        int sum = 0;
        for (int a : amounts) sum += a;
        return sum;
    }

    friend bool operator==(const ResourceDemand&, const ResourceDemand&) = default;
};

// One (deadline, price) alternative of a bid. Deadlines are 1-based slot
// indices, inclusive: a job completing in slot f meets the option iff f <= deadline.
struct DeadlineOption {
    int deadline = 0;
    std::int64_t price = 0;

    friend bool operator==(const DeadlineOption&, const DeadlineOption&) = default;
};

// A user's auction language: arrival slot, resource demands, slot count and
// an XOR list of deadline alternatives (at most one can win).
struct Bid {
    int user_id = 0;
    int arrival = 0;         // first slot the job may occupy
    int slots_required = 0;  // slots needed, not necessarily contiguous
    ResourceDemand demand;
    std::vector<DeadlineOption> options;

    int latest_deadline() const {
        int e = 0;
        for (const auto& o : options) e = std::max(e, o.deadline);
        return e;
    }

    friend bool operator==(const Bid&, const Bid&) = default;
};

struct Instance {
    int horizon = 0;        // number of slots S, slots are 1..S
    int num_resources = 0;  // M
    std::vector<int> capacities;  // c_m in milli-units
    std::vector<Bid> bids;
    std::uint64_t seed = 0;

    int num_users() const { return static_cast<int>(bids.size()); }

    friend bool operator==(const Instance&, const Instance&) = default;
};

// Position of each user's bid in Instance::bids (user ids are a permutation
// of 0..U-1 but the list may be in any order).
std::vector<int> user_index(const Instance& inst);

struct WonOutcome {
    int option_index = 0;
    int completion_slot = 0;
    std::int64_t payment = 0;

    friend bool operator==(const WonOutcome&, const WonOutcome&) = default;
};

// Rejected users carry no outcome and no assignments.
using Outcome = std::optional<WonOutcome>;

// The y_it decision, indexed by user id. Won users hold exactly
// slots_required assigned slots, sorted ascending.
struct Schedule {
    std::vector<std::vector<int>> assignments;
    std::vector<Outcome> outcomes;

    static Schedule empty(int num_users) {
        Schedule s;
        s.assignments.resize(num_users);
        s.outcomes.resize(num_users);
        return s;
    }

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

enum class Severity { Error, Warning };

struct Violation {
    Severity severity = Severity::Error;
    std::string rule;   // short identifier, e.g. "capacity", "option-unachievable"
    int user_id = -1;   // -1 for instance-level violations
    std::string detail;
};

// Structural validation of an instance. Violations are data, not failures;
// non-increasing prices across options are recommended but only warned about.
std::vector<Violation> validate_instance(const Instance& inst);

// Checks a schedule against the four constraint families (XOR win, deadline
// window, slot count, per-slot capacity) plus outcome consistency.
std::vector<Violation> validate_schedule(const Instance& inst, const Schedule& sched);

inline bool has_errors(const std::vector<Violation>& vs) {
    for (const auto& v : vs)
        if (v.severity == Severity::Error) return true;
    return false;
}

std::string describe(const Violation& v);
std::string describe(const std::vector<Violation>& vs);  // newline-joined

// Sum of payments of winning bids (objective 1a).
std::int64_t welfare(const Instance& inst, const Schedule& sched);

}  // namespace casched

#endif  // CASCHED_MODEL_HPP
