#include "casched/model.hpp"

#include <algorithm>
#include <cassert>

namespace casched {

std::vector<int> user_index(const Instance& inst) {
    std::vector<int> idx(inst.bids.size(), -1);
    for (int k = 0; k < static_cast<int>(inst.bids.size()); ++k) {
        const int u = inst.bids[k].user_id;
        assert(u >= 0 && u < static_cast<int>(idx.size()) && idx[u] == -1);
        idx[u] = k;
    }
    return idx;
}

namespace {

void add(std::vector<Violation>& out, Severity sev, std::string rule, int user,
         std::string detail) {
    out.push_back(Violation{sev, std::move(rule), user, std::move(detail)});
}

}  // namespace

std::vector<Violation> validate_instance(const Instance& inst) {
    std::vector<Violation> out;
    const int S = inst.horizon;
    const int M = inst.num_resources;

    if (S < 0) add(out, Severity::Error, "horizon", -1, "horizon must be >= 0");
    if (M < 0) add(out, Severity::Error, "resources", -1, "num_resources must be >= 0");
    if (static_cast<int>(inst.capacities.size()) != M)
        add(out, Severity::Error, "capacities", -1,
            "capacities length " + std::to_string(inst.capacities.size()) +
                " does not match num_resources " + std::to_string(M));
    for (int m = 0; m < static_cast<int>(inst.capacities.size()); ++m)
        if (inst.capacities[m] <= 0)
            add(out, Severity::Error, "capacities", -1,
                "capacity of resource " + std::to_string(m) + " must be positive");

    // user ids must be 0..U-1 exactly once
    const int U = inst.num_users();
    std::vector<int> seen(U, 0);
    for (const Bid& b : inst.bids) {
        if (b.user_id < 0 || b.user_id >= U)
            add(out, Severity::Error, "user-id", b.user_id, "user_id out of range 0..U-1");
        else if (seen[b.user_id]++)
            add(out, Severity::Error, "user-id", b.user_id, "duplicate user_id");
    }

    for (const Bid& b : inst.bids) {
        const int u = b.user_id;
        if (b.arrival < 1 || b.arrival > S)
            add(out, Severity::Error, "arrival", u,
                "arrival " + std::to_string(b.arrival) + " outside 1.." + std::to_string(S));
        if (b.slots_required < 1)
            add(out, Severity::Error, "slots-required", u, "slots_required must be >= 1");

        if (static_cast<int>(b.demand.amounts.size()) != M)
            add(out, Severity::Error, "demand-length", u,
                "demand has " + std::to_string(b.demand.amounts.size()) +
                    " entries, expected " + std::to_string(M));
        for (int m = 0; m < static_cast<int>(b.demand.amounts.size()); ++m) {
            const int r = b.demand.amounts[m];
            if (r <= 0)
                add(out, Severity::Error, "demand-positive", u,
                    "demand for resource " + std::to_string(m) + " must be positive");
            else if (r > kMilliUnitsPerResource ||
                     (m < static_cast<int>(inst.capacities.size()) && r > inst.capacities[m]))
                add(out, Severity::Error, "demand-exceeds-capacity", u,
                    "demand " + std::to_string(r) + " for resource " + std::to_string(m) +
                        " exceeds capacity");
        }

        if (b.options.empty())
            add(out, Severity::Error, "options-empty", u, "bid has no deadline options");
        int prev_deadline = 0;
        std::int64_t prev_price = -1;
        for (int j = 0; j < static_cast<int>(b.options.size()); ++j) {
            const DeadlineOption& o = b.options[j];
            if (o.deadline > S)
                add(out, Severity::Error, "deadline-horizon", u,
                    "option " + std::to_string(j) + " deadline " + std::to_string(o.deadline) +
                        " beyond horizon " + std::to_string(S));
            if (o.price < 0)
                add(out, Severity::Error, "price-negative", u,
                    "option " + std::to_string(j) + " has negative price");
            if (o.deadline < b.arrival + b.slots_required - 1)
                add(out, Severity::Error, "option-unachievable", u,
                    "option " + std::to_string(j) + " deadline " + std::to_string(o.deadline) +
                        " unachievable before arrival+slots-1 = " +
                        std::to_string(b.arrival + b.slots_required - 1));
            if (j > 0 && o.deadline <= prev_deadline)
                add(out, Severity::Error, "option-order", u,
                    "option deadlines must be strictly increasing");
            if (j > 0 && prev_price >= 0 && o.price > prev_price)
                add(out, Severity::Warning, "price-order", u,
                    "option " + std::to_string(j) + " price increases with deadline");
            prev_deadline = o.deadline;
            prev_price = o.price;
        }
    }
    return out;
}

std::vector<Violation> validate_schedule(const Instance& inst, const Schedule& sched) {
    std::vector<Violation> out;
    const int U = inst.num_users();
    const int S = inst.horizon;
    const int M = inst.num_resources;

    if (static_cast<int>(sched.assignments.size()) != U ||
        static_cast<int>(sched.outcomes.size()) != U) {
        add(out, Severity::Error, "shape", -1, "schedule not sized to U users");
        return out;
    }

    const std::vector<int> idx = user_index(inst);
    std::vector<std::vector<int>> usage(S + 1, std::vector<int>(M, 0));

    for (int u = 0; u < U; ++u) {
        const Bid& bid = inst.bids[idx[u]];
        const auto& slots = sched.assignments[u];
        const Outcome& oc = sched.outcomes[u];

        if (!oc) {
            if (!slots.empty())
                add(out, Severity::Error, "rejected-assignments", u,
                    "rejected user holds assigned slots");
            continue;
        }

        // at most one won option per user is structural here (single index);
        // check the index itself
        if (oc->option_index < 0 || oc->option_index >= static_cast<int>(bid.options.size())) {
            add(out, Severity::Error, "xor", u, "won option index out of range");
            continue;
        }
        const DeadlineOption& opt = bid.options[oc->option_index];

        if (static_cast<int>(slots.size()) != bid.slots_required)
            add(out, Severity::Error, "slot-count", u,
                "won user holds " + std::to_string(slots.size()) + " slots, needs " +
                    std::to_string(bid.slots_required));

        int max_slot = 0;
        int prev = 0;
        for (int t : slots) {
            if (t <= prev)
                add(out, Severity::Error, "slot-order", u,
                    "assigned slots must be strictly increasing");
            prev = t;
            if (t < bid.arrival || t > opt.deadline)
                add(out, Severity::Error, "deadline", u,
                    "slot " + std::to_string(t) + " outside [" + std::to_string(bid.arrival) +
                        "," + std::to_string(opt.deadline) + "]");
            if (t >= 1 && t <= S)
                for (int m = 0; m < M; ++m) usage[t][m] += bid.demand.amounts[m];
            max_slot = std::max(max_slot, t);
        }

        if (oc->completion_slot != max_slot)
            add(out, Severity::Error, "completion-slot", u,
                "completion slot " + std::to_string(oc->completion_slot) +
                    " is not the last assigned slot " + std::to_string(max_slot));
        if (oc->payment != opt.price)
            add(out, Severity::Error, "payment", u,
                "payment " + std::to_string(oc->payment) + " differs from option price " +
                    std::to_string(opt.price));
    }

    for (int t = 1; t <= S; ++t)
        for (int m = 0; m < M; ++m)
            if (usage[t][m] > inst.capacities[m])
                add(out, Severity::Error, "capacity", -1,
                    "capacity exceeded at slot " + std::to_string(t) + ", resource " +
                        std::to_string(m) + " (" + std::to_string(usage[t][m]) + " > " +
                        std::to_string(inst.capacities[m]) + ")");
    return out;
}

std::string describe(const Violation& v) {
    std::string s = v.severity == Severity::Error ? "error" : "warning";
    s += " [" + v.rule + "]";
    if (v.user_id >= 0) s += " user " + std::to_string(v.user_id);
    s += ": " + v.detail;
    return s;
}

std::string describe(const std::vector<Violation>& vs) {
    std::string s;
    for (const Violation& v : vs) {
        s += describe(v);
        s += '\n';
    }
    return s;
}

std::int64_t welfare(const Instance& inst, const Schedule& sched) {
    (void)inst;
    std::int64_t sum = 0;
    for (const Outcome& oc : sched.outcomes)
        if (oc) sum += oc->payment;
    return sum;
}

}  // namespace casched
