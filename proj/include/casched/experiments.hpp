#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "casched/metrics.hpp"
#include "casched/oracle.hpp"
#include "casched/workload.hpp"

namespace casched {

struct ExperimentCell {
    int users = 0;
    int options = 0;
    int resources = 0;

    bool operator==(const ExperimentCell&) const = default;
};

// Fixed grids: Exp1 U in {10..50 step 10}, B=1, M=2, with oracle.
// Exp2 U in {100,150,200}, B in {3,6,9}, M=2, no oracle.
// Exp3 U in {10..50 step 10}, B in {3,6,9}, M=2, with oracle.
// Exp4 U in {100,150,200}, B=3, M in {2,3,4}, no oracle.
std::vector<ExperimentCell> experiment_grid(int experiment);
bool experiment_uses_oracle(int experiment);

// {trwaem, truem, greedy, random} plus an oracle row when the experiment
// computes optima
std::vector<std::string> default_algorithms(int experiment);

struct SweepConfig {
    int experiment = 1;
    std::uint64_t base_seed = 42;
    int repetitions = 100;
    std::vector<std::string> algorithms;  // empty = default_algorithms(experiment)
    GeneratorSpec base;                   // users/options/resources set per cell
    OracleLimits oracle_limits{250, 50'000'000, std::chrono::milliseconds{10'000}};
    bool timing = false;  // emit wall-clock runtimes (breaks byte-identical reruns)
    int workers = 0;      // 0 = hardware concurrency; CASCHED_WORKERS caps it
    std::string out_dir = "results";
};

struct RunRecord {
    ExperimentCell cell;
    int rep = 0;
    std::uint64_t instance_seed = 0;
    std::string algorithm;
    std::optional<std::int64_t> welfare;         // empty only for excluded oracle rows
    std::optional<std::int64_t> oracle_welfare;  // empty when skipped or excluded
    std::optional<double> ratio;
    bool oracle_excluded = false;
    std::int64_t moves = 0;
    std::int64_t evictions = 0;
    double runtime_ms = 0.0;
};

struct CellSummary {
    int experiment = 0;
    ExperimentCell cell;
    std::string algorithm;
    int n = 0;           // runs contributing ratio stats (all runs when no oracle)
    int n_excluded = 0;  // runs dropped because the oracle hit its limits
    double mean_welfare = 0.0;
    double mean_moves = 0.0;
    std::optional<Summary> ratio;  // empty when the experiment skips the oracle
};

struct ExperimentResult {
    SweepConfig config;
    std::vector<RunRecord> records;      // fixed order: cell, rep, algorithm
    std::vector<CellSummary> summaries;  // fixed order: cell, algorithm
};

// Runs the full grid. Instance seed = mix(base_seed, U, M, rep); the option
// count stays out of the hash so cells that differ only in B share instances
// (paired comparisons across B). Worker threads split the runs; the merged
// output is independent of worker count. Throws on bad config.
ExperimentResult run_experiment(const SweepConfig& cfg);

// Per-run rows for one cell+algorithm; columns
// instance_seed,algorithm,welfare,oracle,ratio,moves,runtime_ms. The runtime
// column stays empty unless timing was set.
std::string records_to_csv(const std::vector<RunRecord>& records, bool timing);

// One row per cell+algorithm; columns experiment,users,bids,resources,
// algorithm,n,n_excluded,mean_welfare,mean_ratio,stddev_ratio,min_ratio,
// max_ratio,mean_moves
std::string summaries_to_csv(const std::vector<CellSummary>& summaries);

// exp<k>_u<U>_b<B>_m<M>_<algo>.csv per cell plus summary.csv, under dir
// (created if missing)
void write_experiment_files(const ExperimentResult& result, const std::string& dir);

// requested if positive, else hardware concurrency; CASCHED_WORKERS caps the
// result; never below 1
int resolve_workers(int requested);

const CellSummary* find_summary(const ExperimentResult& result, int users, int options,
                                int resources, const std::string& algorithm);

}  // namespace casched
