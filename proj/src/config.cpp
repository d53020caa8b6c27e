#include "casched/config.hpp"

#include <charconv>

namespace casched {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::int64_t to_int(const std::string& text, const KeyValue& kv) {
    const std::string t = trim(text);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError("line " + std::to_string(kv.line) + ": bad integer '" + t +
                          "' for key '" + kv.key + "'");
    return v;
}

bool to_bool(const KeyValue& kv) {
    const std::string t = trim(kv.value);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw ConfigError("line " + std::to_string(kv.line) + ": bad boolean '" + t +
                      "' for key '" + kv.key + "'");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string piece =
            trim(text.substr(start, comma == std::string::npos ? std::string::npos
                                                               : comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

IntRange range_of(const KeyValue& kv) {
    const std::string t = trim(kv.value);
    const std::size_t dots = t.find("..");
    IntRange r;
    if (dots == std::string::npos) {
        r.lo = r.hi = to_int(t, kv);
    } else {
        r.lo = to_int(t.substr(0, dots), kv);
        r.hi = to_int(t.substr(dots + 2), kv);
    }
    if (r.lo > r.hi)
        throw ConfigError("line " + std::to_string(kv.line) + ": empty range '" + t +
                          "' for key '" + kv.key + "'");
    return r;
}

// keys shared by generator specs and sweep templates
bool apply_template_key(GeneratorSpec& spec, const KeyValue& kv) {
    if (kv.key == "horizon") {
        spec.horizon = static_cast<int>(to_int(kv.value, kv));
    } else if (kv.key == "slots") {
        const IntRange r = range_of(kv);
        spec.slots_min = static_cast<int>(r.lo);
        spec.slots_max = static_cast<int>(r.hi);
    } else if (kv.key == "demand") {
        const IntRange r = range_of(kv);
        spec.demand_min = static_cast<int>(r.lo);
        spec.demand_max = static_cast<int>(r.hi);
    } else if (kv.key == "base_price") {
        const IntRange r = range_of(kv);
        spec.base_price_min = r.lo;
        spec.base_price_max = r.hi;
    } else if (kv.key == "decay_milli") {
        spec.decay_milli = static_cast<int>(to_int(kv.value, kv));
    } else if (kv.key == "slack") {
        spec.slack.clear();
        for (const std::string& piece : split_list(kv.value))
            spec.slack.push_back(static_cast<int>(to_int(piece, kv)));
    } else {
        return false;
    }
    return true;
}

[[noreturn]] void unknown_key(const KeyValue& kv) {
    throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + kv.key +
                      "'");
}

}  // namespace

std::vector<KeyValue> parse_key_values(const std::string& text) {
    std::vector<KeyValue> out;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(
            pos, nl == std::string::npos ? std::string::npos : nl - pos);
        ++line_no;
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;

        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected key = value, got '" + line + "'");
        KeyValue kv;
        kv.key = trim(line.substr(0, eq));
        kv.value = trim(line.substr(eq + 1));
        kv.line = line_no;
        if (kv.key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        out.push_back(std::move(kv));
    }
    return out;
}

IntRange parse_range(const std::string& text) {
    return range_of(KeyValue{"range", text, 0});
}

GenerateRequest parse_generator_config(const std::string& text) {
    GenerateRequest req;
    for (const KeyValue& kv : parse_key_values(text)) {
        if (kv.key == "users") {
            req.users = range_of(kv);
            req.spec.num_users = static_cast<int>(req.users.lo);
        } else if (kv.key == "resources") {
            req.spec.num_resources = static_cast<int>(to_int(kv.value, kv));
        } else if (kv.key == "options") {
            req.spec.num_options = static_cast<int>(to_int(kv.value, kv));
        } else if (kv.key == "seed") {
            req.spec.seed = static_cast<std::uint64_t>(to_int(kv.value, kv));
        } else if (!apply_template_key(req.spec, kv)) {
            unknown_key(kv);
        }
    }
    return req;
}

void apply_sweep_overrides(const std::string& text, SweepConfig& cfg) {
    for (const KeyValue& kv : parse_key_values(text)) {
        if (kv.key == "repetitions") {
            cfg.repetitions = static_cast<int>(to_int(kv.value, kv));
        } else if (kv.key == "base_seed") {
            cfg.base_seed = static_cast<std::uint64_t>(to_int(kv.value, kv));
        } else if (kv.key == "algorithms") {
            cfg.algorithms = split_list(kv.value);
        } else if (kv.key == "workers") {
            cfg.workers = static_cast<int>(to_int(kv.value, kv));
        } else if (kv.key == "out_dir") {
            cfg.out_dir = kv.value;
        } else if (kv.key == "timing") {
            cfg.timing = to_bool(kv);
        } else if (kv.key == "oracle_max_users") {
            cfg.oracle_limits.max_users = static_cast<int>(to_int(kv.value, kv));
        } else if (kv.key == "oracle_max_nodes") {
            cfg.oracle_limits.max_nodes = static_cast<std::uint64_t>(to_int(kv.value, kv));
        } else if (kv.key == "oracle_timeout_ms") {
            cfg.oracle_limits.timeout = std::chrono::milliseconds(to_int(kv.value, kv));
        } else if (!apply_template_key(cfg.base, kv)) {
            unknown_key(kv);
        }
    }
}

}  // namespace casched
