#ifndef CASCHED_IO_HPP
#define CASCHED_IO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "casched/model.hpp"

namespace casched {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance text format, one bid per line:
//   S,M,c_1,...,c_M,seed
//   user_id,arrival,slots_required,demand_1,...,demand_M,B,(e_1,p_1),...,(e_B,p_B)
// emit/parse round-trip bit-exactly; the trailing seed field may be omitted
// in hand-written files (defaults to 0).
std::string emit_instance(const Instance& inst);
Instance parse_instance(const std::string& text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

// FNV-1a over the canonical serialization; used to pair run reports with
// oracle results for the same instance.
std::uint64_t instance_digest(const Instance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace casched

#endif  // CASCHED_IO_HPP
