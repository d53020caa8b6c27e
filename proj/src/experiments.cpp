#include "casched/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "casched/baselines.hpp"
#include "casched/engine.hpp"
#include "casched/io.hpp"
#include "casched/rng.hpp"

namespace casched {

namespace {

constexpr std::uint64_t kRandomBaselineStream = 0x726e64;

std::vector<int> users_small() { return {10, 20, 30, 40, 50}; }
std::vector<int> users_large() { return {100, 150, 200}; }

}  // namespace

std::vector<ExperimentCell> experiment_grid(int experiment) {
    std::vector<ExperimentCell> cells;
    switch (experiment) {
        case 1:
            for (int u : users_small()) cells.push_back({u, 1, 2});
            break;
        case 2:
            for (int u : users_large())
                for (int b : {3, 6, 9}) cells.push_back({u, b, 2});
            break;
        case 3:
            for (int u : users_small())
                for (int b : {3, 6, 9}) cells.push_back({u, b, 2});
            break;
        case 4:
            for (int u : users_large())
                for (int m : {2, 3, 4}) cells.push_back({u, 3, m});
            break;
        default:
            throw std::invalid_argument("experiment must be 1..4");
    }
    return cells;
}

bool experiment_uses_oracle(int experiment) {
    if (experiment < 1 || experiment > 4)
        throw std::invalid_argument("experiment must be 1..4");
    return experiment == 1 || experiment == 3;
}

std::vector<std::string> default_algorithms(int experiment) {
    std::vector<std::string> algos{"trwaem", "truem", "greedy", "random"};
    if (experiment_uses_oracle(experiment)) algos.push_back("oracle");
    return algos;
}

int resolve_workers(int requested) {
    int n = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("CASCHED_WORKERS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

namespace {

struct TaskContext {
    const SweepConfig* cfg;
    const std::vector<ExperimentCell>* cells;
    std::vector<std::string> algorithms;
    bool with_oracle;
    std::vector<RunRecord>* records;
};

void run_task(const TaskContext& ctx, int task) {
    const int reps = ctx.cfg->repetitions;
    const ExperimentCell& cell = (*ctx.cells)[task / reps];
    const int rep = task % reps;

    GeneratorSpec gs = ctx.cfg->base;
    gs.num_users = cell.users;
    gs.num_options = cell.options;
    gs.num_resources = cell.resources;
    // option count deliberately left out: cells differing only in B share users
    gs.seed = mix_seed(ctx.cfg->base_seed, static_cast<std::uint64_t>(cell.users),
                       static_cast<std::uint64_t>(cell.resources),
                       static_cast<std::uint64_t>(rep));
    const Instance inst = generate(gs);

    std::optional<OracleResult> oracle;
    if (ctx.with_oracle) oracle = solve_exact(inst, ctx.cfg->oracle_limits);

    for (std::size_t a = 0; a < ctx.algorithms.size(); ++a) {
        const std::string& algo = ctx.algorithms[a];
        RunRecord rec;
        rec.cell = cell;
        rec.rep = rep;
        rec.instance_seed = gs.seed;
        rec.algorithm = algo;

        const auto t0 = std::chrono::steady_clock::now();
        std::optional<RunReport> report;
        if (algo == "trwaem" || algo == "truem") {
            EngineConfig ec;
            ec.strategy = algo == "trwaem" ? Strategy::TRwaem : Strategy::TRuem;
            auto [sched, rep_] = run_offline(inst, ec);
            report = std::move(rep_);
        } else if (algo == "greedy") {
            report = run_greedy(inst).second;
        } else if (algo == "random") {
            report = run_random(inst, mix_seed(gs.seed, kRandomBaselineStream)).second;
        } else if (algo == "oracle") {
            if (!oracle)
                throw std::invalid_argument(
                    "algorithm 'oracle' requires an oracle-enabled experiment");
        } else {
            throw std::invalid_argument("unknown algorithm: " + algo);
        }
        rec.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();

        if (report) {
            rec.welfare = report->welfare;
            rec.moves = report->move_count;
            rec.evictions = report->eviction_count;
            if (oracle) {
                const CompetitiveReport cr = competitive_ratio(*report, *oracle);
                if (cr.included()) {
                    rec.oracle_welfare = oracle->optimum_welfare;
                    rec.ratio = cr.ratio;
                } else {
                    rec.oracle_excluded = true;
                }
            }
        } else {  // the oracle row itself
            rec.runtime_ms = std::chrono::duration<double, std::micro>(
                                 oracle->elapsed)
                                 .count() /
                             1000.0;
            if (oracle->optimal()) {
                rec.welfare = oracle->optimum_welfare;
                rec.oracle_welfare = oracle->optimum_welfare;
                rec.ratio = 1.0;
            } else {
                rec.oracle_excluded = true;
            }
        }
        (*ctx.records)[static_cast<std::size_t>(task) * ctx.algorithms.size() + a] =
            std::move(rec);
    }
}

double mean_of(std::vector<double> values) {
    return values.empty() ? 0.0 : stats(std::move(values)).mean;
}

}  // namespace

ExperimentResult run_experiment(const SweepConfig& cfg) {
    if (cfg.repetitions < 1)
        throw std::invalid_argument("repetitions must be at least 1");

    ExperimentResult result;
    result.config = cfg;

    TaskContext ctx;
    ctx.cfg = &cfg;
    const std::vector<ExperimentCell> cells = experiment_grid(cfg.experiment);
    ctx.cells = &cells;
    ctx.algorithms =
        cfg.algorithms.empty() ? default_algorithms(cfg.experiment) : cfg.algorithms;
    ctx.with_oracle = experiment_uses_oracle(cfg.experiment);
    result.records.resize(cells.size() * cfg.repetitions * ctx.algorithms.size());
    ctx.records = &result.records;

    const int total = static_cast<int>(cells.size()) * cfg.repetitions;
    const int workers = std::min(resolve_workers(cfg.workers), total);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto drain = [&] {
        for (;;) {
            const int task = next.fetch_add(1);
            if (task >= total) return;
            try {
                run_task(ctx, task);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (const ExperimentCell& cell : cells) {
        for (const std::string& algo : ctx.algorithms) {
            CellSummary cs;
            cs.experiment = cfg.experiment;
            cs.cell = cell;
            cs.algorithm = algo;
            std::vector<double> welfares, moves, ratios;
            for (const RunRecord& rec : result.records) {
                if (!(rec.cell == cell) || rec.algorithm != algo) continue;
                if (rec.welfare) welfares.push_back(static_cast<double>(*rec.welfare));
                moves.push_back(static_cast<double>(rec.moves));
                if (rec.ratio) ratios.push_back(*rec.ratio);
                if (rec.oracle_excluded) ++cs.n_excluded;
            }
            cs.mean_welfare = mean_of(std::move(welfares));
            cs.mean_moves = mean_of(std::move(moves));
            if (ctx.with_oracle) {
                if (!ratios.empty()) cs.ratio = stats(std::move(ratios));
                cs.n = cs.ratio ? cs.ratio->n : 0;
            } else {
                cs.n = cfg.repetitions;
            }
            result.summaries.push_back(std::move(cs));
        }
    }
    return result;
}

namespace {

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records, bool timing) {
    std::string out = "instance_seed,algorithm,welfare,oracle,ratio,moves,runtime_ms\n";
    for (const RunRecord& rec : records) {
        out += std::to_string(rec.instance_seed);
        out += ',';
        out += rec.algorithm;
        out += ',';
        if (rec.welfare) out += std::to_string(*rec.welfare);
        out += ',';
        if (rec.oracle_welfare) out += std::to_string(*rec.oracle_welfare);
        out += ',';
        if (rec.ratio) out += fmt(*rec.ratio);
        out += ',';
        out += std::to_string(rec.moves);
        out += ',';
        if (timing) out += fmt(rec.runtime_ms, 3);
        out += '\n';
    }
    return out;
}

std::string summaries_to_csv(const std::vector<CellSummary>& summaries) {
    std::string out =
        "experiment,users,bids,resources,algorithm,n,n_excluded,mean_welfare,"
        "mean_ratio,stddev_ratio,min_ratio,max_ratio,mean_moves\n";
    for (const CellSummary& cs : summaries) {
        out += std::to_string(cs.experiment);
        out += ',' + std::to_string(cs.cell.users);
        out += ',' + std::to_string(cs.cell.options);
        out += ',' + std::to_string(cs.cell.resources);
        out += ',' + cs.algorithm;
        out += ',' + std::to_string(cs.n);
        out += ',' + std::to_string(cs.n_excluded);
        out += ',' + fmt(cs.mean_welfare);
        out += ',';
        if (cs.ratio) out += fmt(cs.ratio->mean);
        out += ',';
        if (cs.ratio) out += fmt(cs.ratio->stddev);
        out += ',';
        if (cs.ratio) out += fmt(cs.ratio->min);
        out += ',';
        if (cs.ratio) out += fmt(cs.ratio->max);
        out += ',' + fmt(cs.mean_moves);
        out += '\n';
    }
    return out;
}

void write_experiment_files(const ExperimentResult& result, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::vector<std::string> algorithms =
        result.config.algorithms.empty() ? default_algorithms(result.config.experiment)
                                         : result.config.algorithms;
    for (const ExperimentCell& cell : experiment_grid(result.config.experiment)) {
        for (const std::string& algo : algorithms) {
            std::vector<RunRecord> rows;
            for (const RunRecord& rec : result.records)
                if (rec.cell == cell && rec.algorithm == algo) rows.push_back(rec);
            const std::string name = "exp" + std::to_string(result.config.experiment) +
                                     "_u" + std::to_string(cell.users) + "_b" +
                                     std::to_string(cell.options) + "_m" +
                                     std::to_string(cell.resources) + "_" + algo + ".csv";
            write_file((fs::path(dir) / name).string(),
                       records_to_csv(rows, result.config.timing));
        }
    }
    write_file((fs::path(dir) / "summary.csv").string(),
               summaries_to_csv(result.summaries));
}

const CellSummary* find_summary(const ExperimentResult& result, int users, int options,
                                int resources, const std::string& algorithm) {
    for (const CellSummary& cs : result.summaries)
        if (cs.cell.users == users && cs.cell.options == options &&
            cs.cell.resources == resources && cs.algorithm == algorithm)
            return &cs;
    return nullptr;
}

}  // namespace casched
