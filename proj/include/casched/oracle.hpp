#ifndef CASCHED_ORACLE_HPP
#define CASCHED_ORACLE_HPP

#include <chrono>
#include <cstdint>

#include "casched/model.hpp"

namespace casched {

enum class OracleStatus { Optimal, LimitExceeded };

struct OracleLimits {
    int max_users = 8;
    std::uint64_t max_nodes = 50'000'000;
    std::chrono::milliseconds timeout{60'000};
};

struct OracleResult {
    std::int64_t optimum_welfare = 0;
    Schedule witness;
    std::uint64_t nodes_explored = 0;
    std::chrono::microseconds elapsed{0};
    OracleStatus status = OracleStatus::Optimal;
    std::uint64_t digest = 0;  // instance digest, for pairing with run reports

    bool optimal() const { return status == OracleStatus::Optimal; }
};

// Exact optimum of the winner-determination ILP by branch and bound over
// per-user option choices, with backtracking slot packing as the feasibility
// check. A result that ran into a limit is flagged LimitExceeded and its
// welfare is only a lower bound.
OracleResult solve_exact(const Instance& inst, const OracleLimits& limits = {});

// Plain enumeration of every option combination with a straightforward
// packing search, no bounds. Desk-scale only (U <= 5, S <= 12); kept fully
// independent of solve_exact as its cross-check.
OracleResult solve_exhaustive(const Instance& inst);

}  // namespace casched

#endif  // CASCHED_ORACLE_HPP
