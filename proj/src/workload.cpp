#include "casched/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "casched/rng.hpp"

namespace casched {

namespace {

constexpr std::uint64_t kUserStream = 0x75736572;   // per-user draws
constexpr std::uint64_t kTraceStream = 0x74726163;  // per-task price factors
constexpr int kMinutesPerSlot = 5;
constexpr int kMaxTraceSlots = 12;

std::vector<int> effective_slack(const std::vector<int>& slack, int num_options,
                                 const char* who) {
    std::vector<int> out = slack;
    if (out.empty())
        for (int j = 0; j < num_options; ++j) out.push_back(4 * j + 2);
    if (static_cast<int>(out.size()) < num_options)
        throw InfeasibleSpec(std::string(who) + ": slack list shorter than option count");
    out.resize(num_options);
    for (int j = 0; j < num_options; ++j) {
        if (out[j] < 0)
            throw InfeasibleSpec(std::string(who) + ": negative slack");
        if (j > 0 && out[j] <= out[j - 1])
            throw InfeasibleSpec(std::string(who) + ": slack must be strictly increasing");
    }
    return out;
}

// deadlines from slack, clamped to the horizon; clamping can collapse
// neighbours onto S, in which case the earlier (pricier) option is kept
std::vector<DeadlineOption> build_options(int arrival, int slots, int horizon,
                                          const std::vector<int>& slack,
                                          std::int64_t base_price, int decay_milli) {
    std::vector<DeadlineOption> options;
    std::int64_t price = base_price;
    for (std::size_t j = 0; j < slack.size(); ++j) {
        if (j > 0) price = (price * decay_milli + 500) / 1000;
        const int deadline = std::min(horizon, arrival + slots - 1 + slack[j]);
        if (!options.empty() && deadline <= options.back().deadline) continue;
        options.push_back(DeadlineOption{deadline, price});
    }
    return options;
}

struct DraftBid {
    Bid bid;
    std::uint64_t tie_key = 0;
};

Instance assemble(int horizon, int num_resources, std::vector<DraftBid> drafts,
                  std::uint64_t seed) {
    std::sort(drafts.begin(), drafts.end(), [](const DraftBid& a, const DraftBid& b) {
        if (a.bid.arrival != b.bid.arrival) return a.bid.arrival < b.bid.arrival;
        if (a.tie_key != b.tie_key) return a.tie_key < b.tie_key;
        return a.bid.user_id < b.bid.user_id;
    });
    Instance inst;
    inst.horizon = horizon;
    inst.num_resources = num_resources;
    inst.capacities.assign(num_resources, kMilliUnitsPerResource);
    inst.seed = seed;
    for (std::size_t i = 0; i < drafts.size(); ++i) {
        drafts[i].bid.user_id = static_cast<int>(i);
        inst.bids.push_back(std::move(drafts[i].bid));
    }
    return inst;
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
    if (spec.num_users < 1) throw InfeasibleSpec("generate: need at least one user");
    if (spec.num_resources < 1) throw InfeasibleSpec("generate: need at least one resource");
    if (spec.num_options < 1) throw InfeasibleSpec("generate: need at least one option");
    if (spec.slots_min < 1 || spec.slots_min > spec.slots_max)
        throw InfeasibleSpec("generate: bad slots range");
    if (spec.horizon - spec.slots_max < 1)
        throw InfeasibleSpec("generate: horizon too short for the longest job");
    if (spec.demand_min < 1 || spec.demand_min > spec.demand_max ||
        spec.demand_max > kMilliUnitsPerResource)
        throw InfeasibleSpec("generate: bad demand range");
    if (spec.base_price_min < 0 || spec.base_price_min > spec.base_price_max)
        throw InfeasibleSpec("generate: bad base price range");
    if (spec.decay_milli < 0 || spec.decay_milli > 1000)
        throw InfeasibleSpec("generate: decay must lie in [0, 1000]");
    const std::vector<int> slack =
        effective_slack(spec.slack, spec.num_options, "generate");

    std::vector<DraftBid> drafts;
    drafts.reserve(spec.num_users);
    for (int i = 0; i < spec.num_users; ++i) {
        Rng rng(mix_seed(spec.seed, kUserStream, static_cast<std::uint64_t>(i)));
        DraftBid d;
        d.bid.user_id = i;
        d.bid.arrival = static_cast<int>(rng.between(1, spec.horizon - spec.slots_max));
        d.bid.slots_required = static_cast<int>(rng.between(spec.slots_min, spec.slots_max));
        for (int m = 0; m < spec.num_resources; ++m)
            d.bid.demand.amounts.push_back(
                static_cast<int>(rng.between(spec.demand_min, spec.demand_max)));
        const std::int64_t base = rng.between(spec.base_price_min, spec.base_price_max);
        d.tie_key = rng.next();
        d.bid.options = build_options(d.bid.arrival, d.bid.slots_required, spec.horizon,
                                      slack, base, spec.decay_milli);
        drafts.push_back(std::move(d));
    }
    return assemble(spec.horizon, spec.num_resources, std::move(drafts), spec.seed);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_fraction(const std::string& field, int line_no, const char* what) {
    const std::string t = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw MalformedRow("trace line " + std::to_string(line_no) + ": bad " + what +
                           " '" + t + "'");
    if (value < 0.0 || value > 1.0)
        throw MalformedRow("trace line " + std::to_string(line_no) + ": " + what +
                           " must lie in [0, 1]");
    return value;
}

double parse_minutes(const std::string& field, int line_no, const char* what) {
    const std::string t = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || value < 0.0)
        throw MalformedRow("trace line " + std::to_string(line_no) + ": bad " + what +
                           " '" + t + "'");
    return value;
}

}  // namespace

Instance ingest_trace(const std::string& csv, const TraceConfig& cfg) {
    const std::vector<int> slack =
        effective_slack(cfg.slack, cfg.num_options, "ingest_trace");

    struct Task {
        int arrival_slot;
        int slots;
        int cpu;
        int ram;
    };
    std::vector<Task> tasks;

    std::istringstream stream(csv);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream fs(t);
        while (std::getline(fs, field, ',')) fields.push_back(field);
        if (line_no == 1 && !fields.empty() && trim(fields[0]) == "task_id") continue;
        if (fields.size() != 5)
            throw MalformedRow("trace line " + std::to_string(line_no) + ": expected 5 fields, got " +
                               std::to_string(fields.size()));

        const double arrival_min = parse_minutes(fields[1], line_no, "arrival_time");
        const double duration_min = parse_minutes(fields[2], line_no, "duration");
        if (duration_min <= 0.0)
            throw MalformedRow("trace line " + std::to_string(line_no) +
                               ": duration must be positive");
        const double cpu = parse_fraction(fields[3], line_no, "cpu");
        const double ram = parse_fraction(fields[4], line_no, "ram");

        Task task;
        task.arrival_slot = static_cast<int>(arrival_min / kMinutesPerSlot) + 1;
        task.slots = std::clamp(
            static_cast<int>(std::ceil(duration_min / kMinutesPerSlot)), 1, kMaxTraceSlots);
        task.cpu = std::max(1, static_cast<int>(std::llround(cpu * kMilliUnitsPerResource)));
        task.ram = std::max(1, static_cast<int>(std::llround(ram * kMilliUnitsPerResource)));
        tasks.push_back(task);
    }
    if (tasks.empty()) throw EmptyTrace("trace has no data rows");

    int horizon = cfg.horizon;
    if (horizon <= 0) {
        for (const Task& task : tasks)
            horizon = std::max(horizon, task.arrival_slot + task.slots - 1 + slack.back());
    }

    std::vector<DraftBid> drafts;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Task& task = tasks[i];
        if (task.arrival_slot + task.slots - 1 > horizon) continue;  // cannot finish
        Rng rng(mix_seed(cfg.seed, kTraceStream, static_cast<std::uint64_t>(i)));
        const std::int64_t factor = rng.between(500, 1500);
        const std::int64_t mass =
            static_cast<std::int64_t>(task.slots) * (task.cpu + task.ram);
        DraftBid d;
        d.bid.user_id = static_cast<int>(i);
        d.bid.arrival = task.arrival_slot;
        d.bid.slots_required = task.slots;
        d.bid.demand.amounts = {task.cpu, task.ram};
        d.tie_key = rng.next();
        d.bid.options = build_options(task.arrival_slot, task.slots, horizon, slack,
                                      std::max<std::int64_t>(1, mass * factor / 100000),
                                      cfg.decay_milli);
        drafts.push_back(std::move(d));
    }
    if (drafts.empty()) throw EmptyTrace("no task fits inside the horizon");
    return assemble(horizon, 2, std::move(drafts), cfg.seed);
}

}  // namespace casched
