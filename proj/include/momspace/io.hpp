#ifndef MOMSPACE_IO_HPP
#define MOMSPACE_IO_HPP

#include <json.hpp>
#include <string>

#include "momspace/limits.hpp"
#include "momspace/measures.hpp"

namespace momspace {

inline constexpr const char* kSchema = "moment-spaces/1";

// Shortest round-trip decimal representation of a binary64 value (interchange
// precision of all file outputs).
std::string format_double(double v);

nlohmann::json constraint_to_json(const Constraint& c);
Constraint constraint_from_json(const nlohmann::json& j);

nlohmann::json measure_to_json(const Measure& mu);
Measure measure_from_json(const nlohmann::json& j);

nlohmann::json limit_to_json(const LimitResult& limit);

}  // namespace momspace

#endif
