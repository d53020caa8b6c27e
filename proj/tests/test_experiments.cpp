#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "casched/experiments.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace casched;

namespace {

// small everything: the sweep plumbing is under test here, not the solver.
// The node budget, not the wall clock, must be the binding oracle limit or
// reruns would not be byte-identical.
SweepConfig tiny_sweep(int experiment, int reps) {
    SweepConfig cfg;
    cfg.experiment = experiment;
    cfg.repetitions = reps;
    cfg.base_seed = 7;
    cfg.workers = 1;
    cfg.oracle_limits = {250, 200'000, std::chrono::minutes{5}};
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("experiment grids match the published settings") {
    CHECK(experiment_grid(1).size() == 5);
    CHECK(experiment_grid(2).size() == 9);
    CHECK(experiment_grid(3).size() == 15);
    CHECK(experiment_grid(4).size() == 9);
    CHECK_THROWS_AS(experiment_grid(0), std::invalid_argument);
    CHECK_THROWS_AS(experiment_grid(5), std::invalid_argument);

    for (const ExperimentCell& cell : experiment_grid(1)) {
        CHECK(cell.options == 1);
        CHECK(cell.resources == 2);
    }
    std::set<int> exp3_users, exp3_options;
    for (const ExperimentCell& cell : experiment_grid(3)) {
        exp3_users.insert(cell.users);
        exp3_options.insert(cell.options);
    }
    CHECK(exp3_users == std::set<int>{10, 20, 30, 40, 50});
    CHECK(exp3_options == std::set<int>{3, 6, 9});
    for (const ExperimentCell& cell : experiment_grid(4)) CHECK(cell.options == 3);
}

TEST_CASE("oracle participation per experiment") {
    CHECK(experiment_uses_oracle(1));
    CHECK(!experiment_uses_oracle(2));
    CHECK(experiment_uses_oracle(3));
    CHECK(!experiment_uses_oracle(4));
    CHECK(default_algorithms(1) ==
          std::vector<std::string>{"trwaem", "truem", "greedy", "random", "oracle"});
    CHECK(default_algorithms(2) ==
          std::vector<std::string>{"trwaem", "truem", "greedy", "random"});
}

TEST_CASE("exp1 with two repetitions yields 50 records and 25 summary rows") {
    const ExperimentResult result = run_experiment(tiny_sweep(1, 2));
    CHECK(result.records.size() == 5 * 2 * 5);
    CHECK(result.summaries.size() == 5 * 5);
    // records keep a fixed cell-major order
    CHECK(result.records[0].cell.users == 10);
    CHECK(result.records[0].algorithm == "trwaem");
    CHECK(result.records.back().cell.users == 50);
    CHECK(result.records.back().algorithm == "oracle");
    for (const RunRecord& rec : result.records) {
        if (rec.oracle_excluded) continue;
        REQUIRE(rec.welfare.has_value());
        REQUIRE(rec.ratio.has_value());
        CHECK(*rec.ratio <= 1.0 + 1e-12);
        CHECK(*rec.welfare >= 0);
    }
}

TEST_CASE("exp2 skips the oracle entirely") {
    SweepConfig cfg = tiny_sweep(2, 1);
    const ExperimentResult result = run_experiment(cfg);
    CHECK(result.records.size() == 9 * 1 * 4);
    for (const RunRecord& rec : result.records) {
        CHECK(!rec.oracle_welfare.has_value());
        CHECK(!rec.ratio.has_value());
        CHECK(!rec.oracle_excluded);
        REQUIRE(rec.welfare.has_value());
    }
    for (const CellSummary& cs : result.summaries) {
        CHECK(!cs.ratio.has_value());
        CHECK(cs.n == 1);
        CHECK(cs.n_excluded == 0);
    }
    const std::string csv = records_to_csv(result.records, cfg.timing);
    // welfare filled, oracle and ratio columns blank
    CHECK(csv.find(",greedy,") != std::string::npos);
    for (const RunRecord& rec : result.records) {
        const std::string row = std::to_string(rec.instance_seed) + "," +
                                rec.algorithm + "," + std::to_string(*rec.welfare) +
                                ",,," + std::to_string(rec.moves) + ",\n";
        CAPTURE(row);
        CHECK(csv.find(row) != std::string::npos);
    }
}

TEST_CASE("cells differing only in bid count share instance seeds") {
    const ExperimentResult result = run_experiment(tiny_sweep(2, 2));
    auto seed_of = [&](int users, int options, int rep) -> std::uint64_t {
        for (const RunRecord& rec : result.records)
            if (rec.cell.users == users && rec.cell.options == options &&
                rec.rep == rep && rec.algorithm == "greedy")
                return rec.instance_seed;
        FAIL("record not found");
        return 0;
    };
    for (int rep : {0, 1}) {
        CHECK(seed_of(100, 3, rep) == seed_of(100, 6, rep));
        CHECK(seed_of(100, 6, rep) == seed_of(100, 9, rep));
        CHECK(seed_of(100, 3, rep) != seed_of(150, 3, rep));
        CHECK(seed_of(100, 3, 0) != seed_of(100, 3, 1));
    }
}

TEST_CASE("worker count does not change the merged output") {
    SweepConfig serial = tiny_sweep(1, 2);
    SweepConfig parallel = serial;
    parallel.workers = 4;
    const ExperimentResult a = run_experiment(serial);
    const ExperimentResult b = run_experiment(parallel);
    CHECK(records_to_csv(a.records, false) == records_to_csv(b.records, false));
    CHECK(summaries_to_csv(a.summaries) == summaries_to_csv(b.summaries));
}

TEST_CASE("records_to_csv formats blanks and timing") {
    RunRecord rec;
    rec.instance_seed = 12;
    rec.algorithm = "trwaem";
    rec.welfare = 40;
    rec.oracle_welfare = 50;
    rec.ratio = 0.8;
    rec.moves = 3;
    rec.runtime_ms = 1.5;
    RunRecord excluded;
    excluded.instance_seed = 13;
    excluded.algorithm = "oracle";
    excluded.oracle_excluded = true;

    CHECK(records_to_csv({rec, excluded}, false) ==
          "instance_seed,algorithm,welfare,oracle,ratio,moves,runtime_ms\n"
          "12,trwaem,40,50,0.800000,3,\n"
          "13,oracle,,,,0,\n");
    CHECK(records_to_csv({rec}, true) ==
          "instance_seed,algorithm,welfare,oracle,ratio,moves,runtime_ms\n"
          "12,trwaem,40,50,0.800000,3,1.500\n");
}

TEST_CASE("summaries_to_csv formats ratio and ratio-free rows") {
    CellSummary with;
    with.experiment = 1;
    with.cell = {10, 1, 2};
    with.algorithm = "truem";
    with.n = 2;
    with.n_excluded = 1;
    with.mean_welfare = 30.5;
    with.mean_moves = 2.0;
    Summary s;
    s.n = 2;
    s.mean = 0.75;
    s.stddev = 0.05;
    s.min = 0.7;
    s.max = 0.8;
    with.ratio = s;
    CellSummary without;
    without.experiment = 2;
    without.cell = {100, 3, 2};
    without.algorithm = "greedy";
    without.n = 4;
    without.mean_welfare = 12.25;
    without.mean_moves = 0.0;

    CHECK(summaries_to_csv({with, without}) ==
          "experiment,users,bids,resources,algorithm,n,n_excluded,mean_welfare,"
          "mean_ratio,stddev_ratio,min_ratio,max_ratio,mean_moves\n"
          "1,10,1,2,truem,2,1,30.500000,0.750000,0.050000,0.700000,0.800000,"
          "2.000000\n"
          "2,100,3,2,greedy,4,0,12.250000,,,,,0.000000\n");
}

TEST_CASE("write_experiment_files lays out one csv per cell and algorithm") {
    namespace fs = std::filesystem;
    const ExperimentResult result = run_experiment(tiny_sweep(2, 1));
    const fs::path dir = fs::temp_directory_path() / "casched_exp_files";
    fs::remove_all(dir);
    write_experiment_files(result, dir.string());

    int csvs = 0;
    for (const auto& entry : fs::directory_iterator(dir)) ++csvs, (void)entry;
    CHECK(csvs == 9 * 4 + 1);
    CHECK(fs::exists(dir / "exp2_u100_b3_m2_greedy.csv"));
    CHECK(fs::exists(dir / "exp2_u200_b9_m2_random.csv"));
    CHECK(slurp(dir / "summary.csv") == summaries_to_csv(result.summaries));

    const std::string cell_csv = slurp(dir / "exp2_u100_b3_m2_greedy.csv");
    int lines = 0;
    for (char c : cell_csv) lines += c == '\n';
    CHECK(lines == 1 + 1);  // header + one repetition
    fs::remove_all(dir);
}

TEST_CASE("find_summary locates cells and misses politely") {
    const ExperimentResult result = run_experiment(tiny_sweep(2, 1));
    const CellSummary* hit = find_summary(result, 150, 6, 2, "truem");
    REQUIRE(hit != nullptr);
    CHECK(hit->cell.users == 150);
    CHECK(hit->algorithm == "truem");
    CHECK(find_summary(result, 151, 6, 2, "truem") == nullptr);
    CHECK(find_summary(result, 150, 6, 2, "nope") == nullptr);
}

TEST_CASE("resolve_workers honours the env cap") {
    CHECK(resolve_workers(3) == 3);
    CHECK(resolve_workers(0) >= 1);
    setenv("CASCHED_WORKERS", "2", 1);
    CHECK(resolve_workers(8) == 2);
    CHECK(resolve_workers(1) == 1);
    setenv("CASCHED_WORKERS", "0", 1);  // ignored: cap must be at least 1
    CHECK(resolve_workers(3) == 3);
    unsetenv("CASCHED_WORKERS");
}

TEST_CASE("run_experiment rejects bad configs") {
    SweepConfig cfg = tiny_sweep(1, 0);
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg = tiny_sweep(2, 1);
    cfg.algorithms = {"oracle"};
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg = tiny_sweep(2, 1);
    cfg.algorithms = {"simulated-annealing"};
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}
