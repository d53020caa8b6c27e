#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "casched/baselines.hpp"
#include "casched/config.hpp"
#include "casched/engine.hpp"
#include "casched/experiments.hpp"
#include "casched/io.hpp"
#include "casched/online.hpp"
#include "casched/oracle.hpp"
#include "casched/rng.hpp"
#include "casched/workload.hpp"

namespace fs = std::filesystem;
using namespace casched;

namespace {

constexpr std::uint64_t kRandomBaselineStream = 0x726e64;

int fail(const std::string& message, int code = 1) {
    std::cerr << "error: " << message << "\n";
    return code;
}

Instance load_checked(const std::string& path) {
    Instance inst = load_instance(path);
    const auto violations = validate_instance(inst);
    if (has_errors(violations))
        throw std::invalid_argument(path + ": " + describe(violations));
    return inst;
}

void append_report_row(const std::string& report_path, const std::string& row,
                       const std::string& header) {
    if (report_path.empty() || report_path == "-") {
        std::cout << header << row;
        return;
    }
    std::string existing;
    if (fs::exists(report_path)) existing = read_file(report_path);
    if (existing.empty())
        write_file(report_path, header + row);
    else
        write_file(report_path, existing + row);
}

std::string report_row(std::uint64_t seed, const std::string& algorithm,
                       std::optional<std::int64_t> welfare,
                       std::optional<std::int64_t> oracle_welfare,
                       std::optional<double> ratio, std::int64_t moves, double runtime_ms,
                       bool timing) {
    RunRecord rec;
    rec.instance_seed = seed;
    rec.algorithm = algorithm;
    rec.welfare = welfare;
    rec.oracle_welfare = oracle_welfare;
    rec.ratio = ratio;
    rec.moves = moves;
    rec.runtime_ms = runtime_ms;
    const std::string csv = records_to_csv({rec}, timing);
    return csv.substr(csv.find('\n') + 1);  // drop the header line
}

constexpr const char* kReportHeader =
    "instance_seed,algorithm,welfare,oracle,ratio,moves,runtime_ms\n";

struct GenerateArgs {
    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& args) {
    GenerateRequest req = parse_generator_config(read_file(args.config_path));
    if (args.seed) req.spec.seed = *args.seed;

    const auto emit = [](GeneratorSpec spec, const std::string& path) {
        const Instance inst = generate(spec);
        const auto violations = validate_instance(inst);
        if (has_errors(violations))
            throw std::runtime_error("generated instance failed validation: " +
                                     describe(violations));
        save_instance(inst, path);
    };

    if (req.users.lo == req.users.hi) {
        emit(req.spec, args.out);
        std::cout << "wrote " << args.out << "\n";
        return 0;
    }
    fs::create_directories(args.out);
    int count = 0;
    for (std::int64_t u = req.users.lo; u <= req.users.hi; ++u) {
        GeneratorSpec spec = req.spec;
        spec.num_users = static_cast<int>(u);
        emit(spec, (fs::path(args.out) / ("u" + std::to_string(u) + ".inst")).string());
        ++count;
    }
    std::cout << "wrote " << count << " files under " << args.out << "\n";
    return 0;
}

struct RunArgs {
    std::string instance_path;
    std::string algorithm;
    std::string report_path;  // empty = stdout
    std::string trace_path;
    std::string events_path;
    std::optional<std::uint64_t> seed;
    bool timing = false;
    OracleLimits limits;
};

int cmd_run(const RunArgs& args) {
    const Instance inst = load_checked(args.instance_path);
    const std::string& algo = args.algorithm;
    const bool is_engine = algo == "truem" || algo == "trwaem";
    const bool is_online = algo == "online-truem" || algo == "online-trwaem";

    if (!args.trace_path.empty() && !is_engine)
        return fail("--trace is only available for truem and trwaem");
    if (!args.events_path.empty() && !is_online)
        return fail("--events is only available for online-truem and online-trwaem");

    const auto t0 = std::chrono::steady_clock::now();
    std::optional<std::int64_t> welfare, oracle_welfare;
    std::optional<double> ratio;
    std::int64_t moves = 0;

    if (is_engine) {
        EngineConfig ec;
        ec.strategy = algo == "trwaem" ? Strategy::TRwaem : Strategy::TRuem;
        std::vector<TraceEvent> trace;
        auto [sched, report] =
            run_offline(inst, ec, args.trace_path.empty() ? nullptr : &trace);
        if (!args.trace_path.empty()) write_file(args.trace_path, trace_to_csv(trace));
        welfare = report.welfare;
        moves = report.move_count;
    } else if (is_online) {
        EngineConfig ec;
        ec.strategy = algo == "online-trwaem" ? Strategy::TRwaem : Strategy::TRuem;
        const OnlineResult result = run_online(inst, ec);
        if (!args.events_path.empty())
            write_file(args.events_path, events_to_csv(result.events));
        welfare = result.report.welfare;
        moves = result.report.move_count;
    } else if (algo == "greedy") {
        welfare = run_greedy(inst).second.welfare;
    } else if (algo == "random") {
        const std::uint64_t seed =
            args.seed ? *args.seed : mix_seed(inst.seed, kRandomBaselineStream);
        welfare = run_random(inst, seed).second.welfare;
    } else if (algo == "oracle") {
        const OracleResult result = solve_exact(inst, args.limits);
        if (!result.optimal()) {
            std::cerr << "oracle limits exceeded after " << result.nodes_explored
                      << " nodes; best lower bound " << result.optimum_welfare << "\n";
            return 3;
        }
        welfare = result.optimum_welfare;
        oracle_welfare = result.optimum_welfare;
        ratio = 1.0;
    } else {
        return fail("unknown algorithm '" + algo + "'");
    }

    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    append_report_row(args.report_path,
                      report_row(inst.seed, algo, welfare, oracle_welfare, ratio, moves,
                                 ms, args.timing),
                      kReportHeader);
    return 0;
}

struct OracleArgs {
    std::string instance_path;
    bool exhaustive = false;
    bool witness = false;
    bool timing = false;
    OracleLimits limits;
};

int cmd_oracle(const OracleArgs& args) {
    const Instance inst = load_checked(args.instance_path);
    const OracleResult result =
        args.exhaustive ? solve_exhaustive(inst) : solve_exact(inst, args.limits);
    std::cout << "optimum=" << result.optimum_welfare << "\n"
              << "status=" << (result.optimal() ? "optimal" : "limit-exceeded") << "\n"
              << "nodes=" << result.nodes_explored << "\n";
    if (args.timing) std::cout << "elapsed_us=" << result.elapsed.count() << "\n";
    if (args.witness) {
        for (int u = 0; u < inst.num_users(); ++u) {
            const Outcome& oc = result.witness.outcomes[u];
            if (!oc) continue;
            std::cout << "user " << u << ": option " << oc->option_index << " payment "
                      << oc->payment << " slots";
            for (int t : result.witness.assignments[u]) std::cout << ' ' << t;
            std::cout << "\n";
        }
    }
    return result.optimal() ? 0 : 3;
}

struct ExperimentArgs {
    int number = 1;
    std::string config_path;
    std::optional<int> repetitions;
    std::optional<std::uint64_t> base_seed;
    std::optional<std::string> out_dir;
    std::optional<int> workers;
    bool timing = false;
};

int cmd_experiment(const ExperimentArgs& args) {
    SweepConfig cfg;
    cfg.experiment = args.number;
    if (!args.config_path.empty())
        apply_sweep_overrides(read_file(args.config_path), cfg);
    if (args.repetitions) cfg.repetitions = *args.repetitions;
    if (args.base_seed) cfg.base_seed = *args.base_seed;
    if (args.out_dir) cfg.out_dir = *args.out_dir;
    if (args.workers) cfg.workers = *args.workers;
    if (args.timing) cfg.timing = true;

    const ExperimentResult result = run_experiment(cfg);
    write_experiment_files(result, cfg.out_dir);

    int excluded = 0;
    for (const RunRecord& rec : result.records)
        if (rec.oracle_excluded && rec.algorithm == "oracle") ++excluded;
    std::cout << "experiment " << cfg.experiment << ": " << result.records.size()
              << " runs across " << experiment_grid(cfg.experiment).size()
              << " cells; summary at " << (fs::path(cfg.out_dir) / "summary.csv").string()
              << "\n";
    if (excluded > 0)
        std::cout << "oracle limits exceeded on " << excluded
                  << " instance(s); those runs are excluded from ratio stats\n";
    return 0;
}

struct ValidateArgs {
    std::string instance_path;
};

int cmd_validate(const ValidateArgs& args) {
    const Instance inst = load_instance(args.instance_path);
    const auto violations = validate_instance(inst);
    if (violations.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    std::cout << describe(violations);
    return has_errors(violations) ? 1 : 0;
}

void add_oracle_limit_flags(CLI::App* sub, OracleLimits& limits) {
    sub->add_option("--max-users", limits.max_users, "user-count guard for the solver");
    sub->add_option("--max-nodes", limits.max_nodes, "search-node budget");
    auto* timeout = sub->add_option_function<std::int64_t>(
        "--timeout-ms",
        [&limits](std::int64_t v) { limits.timeout = std::chrono::milliseconds(v); },
        "wall-clock budget in milliseconds");
    timeout->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online deadline-auction scheduling toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* sub_gen = app.add_subcommand("generate", "write seeded synthetic instances");
    sub_gen->add_option("--config", gen.config_path, "generator spec file")
        ->required()
        ->check(CLI::ExistingFile);
    sub_gen->add_option("--out", gen.out,
                        "output file, or directory when users is a range")
        ->required();
    std::int64_t gen_seed = 0;
    sub_gen->add_option("--seed", gen_seed, "override the spec seed")
        ->each([&](const std::string&) { gen.seed = static_cast<std::uint64_t>(gen_seed); });

    RunArgs run;
    auto* sub_run = app.add_subcommand("run", "run one algorithm on an instance");
    sub_run->add_option("--instance", run.instance_path, "instance file")
        ->required()
        ->check(CLI::ExistingFile);
    sub_run
        ->add_option("--algorithm", run.algorithm,
                     "truem | trwaem | greedy | random | oracle | online-truem | "
                     "online-trwaem")
        ->required();
    sub_run->add_option("--report", run.report_path,
                        "CSV to append the report row to (default: stdout)");
    sub_run->add_option("--trace", run.trace_path, "step trace CSV (engine runs)");
    sub_run->add_option("--events", run.events_path, "event log CSV (online runs)");
    std::int64_t run_seed = 0;
    sub_run->add_option("--seed", run_seed, "seed for the random baseline")
        ->each([&](const std::string&) { run.seed = static_cast<std::uint64_t>(run_seed); });
    sub_run->add_flag("--timing", run.timing, "fill the runtime_ms column");
    add_oracle_limit_flags(sub_run, run.limits);

    OracleArgs oracle;
    auto* sub_oracle = app.add_subcommand("oracle", "solve an instance exactly");
    sub_oracle->add_option("--instance", oracle.instance_path, "instance file")
        ->required()
        ->check(CLI::ExistingFile);
    sub_oracle->add_flag("--exhaustive", oracle.exhaustive,
                         "use the plain enumerator (tiny instances only)");
    sub_oracle->add_flag("--witness", oracle.witness, "print the optimal assignment");
    sub_oracle->add_flag("--timing", oracle.timing, "print elapsed microseconds");
    add_oracle_limit_flags(sub_oracle, oracle.limits);

    ExperimentArgs exp;
    auto* sub_exp = app.add_subcommand("experiment", "run one of the four sweeps");
    sub_exp->add_option("--number", exp.number, "experiment 1..4")
        ->required()
        ->check(CLI::Range(1, 4));
    sub_exp->add_option("--config", exp.config_path, "sweep config file")
        ->check(CLI::ExistingFile);
    int exp_reps = 0;
    sub_exp->add_option("--repetitions", exp_reps, "runs per cell")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { exp.repetitions = exp_reps; });
    std::int64_t exp_seed = 0;
    sub_exp->add_option("--seed", exp_seed, "base seed")->each([&](const std::string&) {
        exp.base_seed = static_cast<std::uint64_t>(exp_seed);
    });
    std::string exp_dir;
    sub_exp->add_option("--out-dir", exp_dir, "output directory")
        ->each([&](const std::string&) { exp.out_dir = exp_dir; });
    int exp_workers = 0;
    sub_exp->add_option("--workers", exp_workers, "worker threads (CASCHED_WORKERS caps)")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { exp.workers = exp_workers; });
    sub_exp->add_flag("--timing", exp.timing, "fill runtime columns");

    ValidateArgs val;
    auto* sub_val = app.add_subcommand("validate", "check an instance file");
    sub_val->add_option("--instance", val.instance_path, "instance file")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sub_gen->parsed()) return cmd_generate(gen);
        if (sub_run->parsed()) return cmd_run(run);
        if (sub_oracle->parsed()) return cmd_oracle(oracle);
        if (sub_exp->parsed()) return cmd_experiment(exp);
        if (sub_val->parsed()) return cmd_validate(val);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return fail("no subcommand given");
}
