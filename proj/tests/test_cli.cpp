#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "casched/io.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace casched;
using casched::testing::instance_x;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_root() {
    const fs::path dir = fs::temp_directory_path() / "casched_cli_tests";
    fs::create_directories(dir);
    return dir;
}

// per-case working directory, wiped on entry so reruns start clean
fs::path fresh_dir(const std::string& name) {
    const fs::path dir = scratch_root() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Runs the installed binary with both streams captured. CASCHED_CLI is
// exported by the test harness; a manual doctest run without it fails loudly
// rather than silently skipping the whole file.
CliResult cli(const std::string& args) {
    const std::string bin = casched::testing::cli_path();
    REQUIRE_MESSAGE(!bin.empty(), "CASCHED_CLI is not set");
    const std::string out_path = (scratch_root() / "cli_stdout.txt").string();
    const std::string err_path = (scratch_root() / "cli_stderr.txt").string();
    const std::string cmd = bin + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    CliResult r;
#ifdef _WIN32
    r.code = status;
#else
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

// comma split keeping empty fields, so column positions stay meaningful
std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = line.find(',', start);
        if (end == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, end - start));
        start = end + 1;
    }
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("generate writes a valid instance and reruns byte-identically") {
    const fs::path dir = fresh_dir("generate");
    const std::string cfg = (dir / "gen.conf").string();
    const std::string inst = (dir / "out.inst").string();
    write_file(cfg, "users=6\nresources=2\noptions=2\nseed=11\n");

    CliResult r = cli("generate --config " + cfg + " --out " + inst);
    CHECK(r.code == 0);
    CHECK(contains(r.out, "wrote"));
    const std::string first = read_file(inst);
    CHECK(load_instance(inst).num_users() == 6);

    r = cli("validate --instance " + inst);
    CHECK(r.code == 0);
    CHECK(r.out == "ok\n");

    cli("generate --config " + cfg + " --out " + inst);
    CHECK(read_file(inst) == first);

    // the seed override must actually reach the generator
    cli("generate --config " + cfg + " --out " + inst + " --seed 12");
    CHECK(read_file(inst) != first);
}

TEST_CASE("generate expands a user range into one file per count") {
    const fs::path dir = fresh_dir("generate_range");
    const std::string cfg = (dir / "gen.conf").string();
    const fs::path out = dir / "insts";
    write_file(cfg, "users=10..50\nresources=2\noptions=3\nseed=4\n");

    const CliResult r = cli("generate --config " + cfg + " --out " + out.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "41 files"));
    int count = 0;
    for (const auto& entry : fs::directory_iterator(out))
        if (entry.path().extension() == ".inst") ++count;
    CHECK(count == 41);
    CHECK(fs::exists(out / "u10.inst"));
    CHECK(fs::exists(out / "u50.inst"));
    CHECK(load_instance((out / "u37.inst").string()).num_users() == 37);
}

TEST_CASE("generate names the bad key and line in config errors") {
    const fs::path dir = fresh_dir("generate_bad");
    const std::string cfg = (dir / "gen.conf").string();
    write_file(cfg, "users=4\nfrobs=2\n");
    const CliResult r = cli("generate --config " + cfg + " --out " +
                            (dir / "x.inst").string());
    CHECK(r.code != 0);
    CHECK(contains(r.err, "frobs"));
    CHECK(contains(r.err, "line 2"));
}

TEST_CASE("run prints the worked-example report rows") {
    const fs::path dir = fresh_dir("run_x");
    const std::string inst = (dir / "x.inst").string();
    save_instance(instance_x(), inst);

    CliResult r = cli("run --instance " + inst + " --algorithm trwaem");
    CHECK(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "instance_seed,algorithm,welfare,oracle,ratio,moves,runtime_ms");
    auto f = fields_of(lines[1]);
    REQUIRE(f.size() == 7);
    CHECK(f[0] == "0");
    CHECK(f[1] == "trwaem");
    CHECK(f[2] == "15");
    CHECK(f[6] == "");  // runtime stays empty without --timing

    r = cli("run --instance " + inst + " --algorithm oracle");
    CHECK(r.code == 0);
    f = fields_of(lines_of(r.out)[1]);
    CHECK(f[2] == "15");
    CHECK(f[3] == "15");
    CHECK(f[4] == "1.000000");
}

TEST_CASE("empty instances report zero welfare under every algorithm") {
    const fs::path dir = fresh_dir("run_empty");
    const std::string inst = (dir / "empty.inst").string();
    write_file(inst, "5,1,1000,0\n");
    for (const std::string algo : {"trwaem", "truem", "greedy", "random", "oracle"}) {
        const CliResult r = cli("run --instance " + inst + " --algorithm " + algo);
        CHECK(r.code == 0);
        const auto f = fields_of(lines_of(r.out)[1]);
        CHECK(f[2] == "0");
    }
}

TEST_CASE("run rejects unknown algorithms and misplaced flags") {
    const fs::path dir = fresh_dir("run_reject");
    const std::string inst = (dir / "x.inst").string();
    save_instance(instance_x(), inst);

    CliResult r = cli("run --instance " + inst + " --algorithm frobnicate");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "unknown algorithm"));

    r = cli("run --instance " + inst + " --algorithm greedy --trace " +
            (dir / "t.csv").string());
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--trace"));

    r = cli("run --instance " + inst + " --algorithm trwaem --events " +
            (dir / "e.csv").string());
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--events"));
}

TEST_CASE("engine trace and online event logs are written") {
    const fs::path dir = fresh_dir("run_logs");
    const std::string inst = (dir / "x.inst").string();
    save_instance(instance_x(), inst);
    const std::string trace = (dir / "trace.csv").string();
    const std::string events = (dir / "events.csv").string();

    CliResult r = cli("run --instance " + inst + " --algorithm trwaem --trace " + trace);
    CHECK(r.code == 0);
    const std::string trace_text = read_file(trace);
    CHECK(lines_of(trace_text)[0] == "slot,event,user_id,value");
    CHECK(contains(trace_text, ",allocate,"));
    CHECK(contains(trace_text, ",complete,"));

    r = cli("run --instance " + inst + " --algorithm online-trwaem --events " + events);
    CHECK(r.code == 0);
    const std::string events_text = read_file(events);
    CHECK(lines_of(events_text)[0] == "slot,kind,user_id,payment");
    CHECK(contains(events_text, ",accepted,"));
    // settled payments must add up to the reported welfare
    std::int64_t settled = 0;
    for (const std::string& line : lines_of(events_text)) {
        const auto f = fields_of(line);
        if (f.size() == 4 && f[1] == "settled") settled += std::stoll(f[3]);
    }
    const auto report = fields_of(lines_of(r.out)[1]);
    CHECK(std::to_string(settled) == report[2]);
}

TEST_CASE("oracle subcommand reports the optimum and a witness") {
    const fs::path dir = fresh_dir("oracle_x");
    const std::string inst = (dir / "x.inst").string();
    save_instance(instance_x(), inst);

    CliResult r = cli("oracle --instance " + inst + " --witness");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "optimum=15\n"));
    CHECK(contains(r.out, "status=optimal\n"));
    CHECK(contains(r.out, "payment 10"));
    CHECK(contains(r.out, "payment 5"));

    r = cli("oracle --instance " + inst + " --exhaustive");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "optimum=15\n"));
}

TEST_CASE("oracle limit exhaustion exits with code three") {
    const fs::path dir = fresh_dir("oracle_limit");
    const std::string cfg = (dir / "gen.conf").string();
    const std::string inst = (dir / "big.inst").string();
    write_file(cfg, "users=12\nresources=2\noptions=2\nseed=3\n");
    cli("generate --config " + cfg + " --out " + inst);

    CliResult r = cli("oracle --instance " + inst + " --max-users 5");
    CHECK(r.code == 3);
    CHECK(contains(r.out, "status=limit-exceeded"));

    r = cli("run --instance " + inst + " --algorithm oracle --max-users 5");
    CHECK(r.code == 3);
    CHECK(contains(r.err, "oracle limits exceeded"));
}

TEST_CASE("reports append and the random baseline seed is honored") {
    const fs::path dir = fresh_dir("run_report");
    const std::string inst = (dir / "x.inst").string();
    save_instance(instance_x(), inst);
    const std::string report = (dir / "report.csv").string();

    cli("run --instance " + inst + " --algorithm trwaem --report " + report);
    cli("run --instance " + inst + " --algorithm greedy --report " + report);
    const auto lines = lines_of(read_file(report));
    REQUIRE(lines.size() == 3);  // one header, one row per run
    CHECK(fields_of(lines[1])[1] == "trwaem");
    CHECK(fields_of(lines[2])[1] == "greedy");

    const CliResult a = cli("run --instance " + inst + " --algorithm random --seed 7");
    const CliResult b = cli("run --instance " + inst + " --algorithm random --seed 7");
    CHECK(a.out == b.out);
}

TEST_CASE("experiment one runs end to end and reruns byte-identically") {
    const fs::path dir = fresh_dir("experiment");
    const std::string cfg = (dir / "sweep.conf").string();
    // node-bound oracle budget keeps the sweep fast and reruns byte-identical
    write_file(cfg, "oracle_max_nodes=20000\noracle_timeout_ms=600000\n");
    const fs::path out1 = dir / "r1";
    const fs::path out2 = dir / "r2";

    CliResult r = cli("experiment --number 1 --config " + cfg +
                      " --repetitions 2 --seed 9 --workers 2 --out-dir " +
                      out1.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "experiment 1:"));

    const std::string summary = read_file((out1 / "summary.csv").string());
    REQUIRE(lines_of(summary).size() == 26);  // header + 5 cells x 5 algorithms
    CHECK(fs::exists(out1 / "exp1_u10_b1_m2_trwaem.csv"));
    const auto cell = lines_of(read_file((out1 / "exp1_u10_b1_m2_trwaem.csv").string()));
    REQUIRE(cell.size() == 3);  // header + one row per repetition

    r = cli("experiment --number 1 --config " + cfg +
            " --repetitions 2 --seed 9 --workers 1 --out-dir " + out2.string());
    CHECK(r.code == 0);
    CHECK(read_file((out2 / "summary.csv").string()) == summary);
}

TEST_CASE("experiment two never touches the oracle") {
    const fs::path dir = fresh_dir("experiment2");
    const CliResult r = cli("experiment --number 2 --repetitions 1 --seed 5 --out-dir " +
                            (dir / "out").string());
    CHECK(r.code == 0);
    const auto lines = lines_of(read_file((dir / "out" / "summary.csv").string()));
    REQUIRE(lines.size() == 37);  // header + 9 cells x 4 algorithms
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = fields_of(lines[i]);
        CHECK(f[4] != "oracle");
        CHECK(f[8] == "");  // mean_ratio stays empty without an oracle
    }
}
