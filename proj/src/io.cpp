#include "casched/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace casched {

namespace {

// Splits a line on commas that are not inside parentheses.
std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : line) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::int64_t parse_int(const std::string& s, int line_no, const char* what) {
    std::int64_t v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s, int line_no, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    return v;
}

}  // namespace

std::string emit_instance(const Instance& inst) {
    std::string out;
    out += std::to_string(inst.horizon);
    out += ',' + std::to_string(inst.num_resources);
    for (int c : inst.capacities) out += ',' + std::to_string(c);
    out += ',' + std::to_string(inst.seed);
    out += '\n';
    for (const Bid& b : inst.bids) {
        out += std::to_string(b.user_id);
        out += ',' + std::to_string(b.arrival);
        out += ',' + std::to_string(b.slots_required);
        for (int r : b.demand.amounts) out += ',' + std::to_string(r);
        out += ',' + std::to_string(b.options.size());
        for (const DeadlineOption& o : b.options)
            out += ",(" + std::to_string(o.deadline) + ',' + std::to_string(o.price) + ')';
        out += '\n';
    }
    return out;
}

Instance parse_instance(const std::string& text) {
    Instance inst;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f = split_fields(line);
        if (!have_header) {
            if (f.size() < 2)
                throw ParseError("line " + std::to_string(line_no) + ": header needs S,M");
            inst.horizon = static_cast<int>(parse_int(f[0], line_no, "horizon"));
            inst.num_resources = static_cast<int>(parse_int(f[1], line_no, "num_resources"));
            const std::size_t want = 2 + static_cast<std::size_t>(inst.num_resources);
            if (f.size() != want && f.size() != want + 1)
                throw ParseError("line " + std::to_string(line_no) + ": header has " +
                                 std::to_string(f.size()) + " fields, expected " +
                                 std::to_string(want) + " (+ optional seed)");
            for (int m = 0; m < inst.num_resources; ++m)
                inst.capacities.push_back(
                    static_cast<int>(parse_int(f[2 + m], line_no, "capacity")));
            if (f.size() == want + 1) inst.seed = parse_u64(f[want], line_no, "seed");
            have_header = true;
            continue;
        }
        Bid b;
        const std::size_t fixed = 3 + static_cast<std::size_t>(inst.num_resources) + 1;
        if (f.size() < fixed)
            throw ParseError("line " + std::to_string(line_no) + ": truncated bid line");
        b.user_id = static_cast<int>(parse_int(f[0], line_no, "user_id"));
        b.arrival = static_cast<int>(parse_int(f[1], line_no, "arrival"));
        b.slots_required = static_cast<int>(parse_int(f[2], line_no, "slots_required"));
        for (int m = 0; m < inst.num_resources; ++m)
            b.demand.amounts.push_back(
                static_cast<int>(parse_int(f[3 + m], line_no, "demand")));
        const std::size_t nb =
            static_cast<std::size_t>(parse_int(f[fixed - 1], line_no, "option count"));
        if (f.size() != fixed + nb)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(nb) + " options, found " +
                             std::to_string(f.size() - fixed));
        for (std::size_t j = 0; j < nb; ++j) {
            const std::string& tok = f[fixed + j];
            if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')')
                throw ParseError("line " + std::to_string(line_no) + ": bad option '" + tok +
                                 "'");
            const std::string body = tok.substr(1, tok.size() - 2);
            const std::size_t comma = body.find(',');
            if (comma == std::string::npos)
                throw ParseError("line " + std::to_string(line_no) + ": bad option '" + tok +
                                 "'");
            DeadlineOption o;
            o.deadline = static_cast<int>(
                parse_int(body.substr(0, comma), line_no, "option deadline"));
            o.price = parse_int(body.substr(comma + 1), line_no, "option price");
            b.options.push_back(o);
        }
        inst.bids.push_back(std::move(b));
    }
    if (!have_header) throw ParseError("empty instance file");
    return inst;
}

Instance load_instance(const std::string& path) {
    try {
        return parse_instance(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_instance(const Instance& inst, const std::string& path) {
    write_file(path, emit_instance(inst));
}

std::uint64_t instance_digest(const Instance& inst) {
    const std::string s = emit_instance(inst);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << content;
    if (!out) throw ParseError("write failed: " + path);
}

}  // namespace casched
