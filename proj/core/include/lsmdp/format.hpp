#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

namespace lsmdp {

/// Shortest round-trip decimal form; `inf`, `-inf`, `nan` for non-finite.
std::string format_double(double x);

/// Finite doubles as JSON numbers, non-finite ones as the strings above.
nlohmann::json json_number(double x);

/// CSV field, quoted when it holds a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace lsmdp
