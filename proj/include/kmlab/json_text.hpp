#pragma once

#include <string>

#include "json.hpp"

namespace kmlab {

using Json = nlohmann::ordered_json;

/// Serializes with insertion-ordered keys, two-space indent and every
/// floating-point number printed with 17 significant digits. Non-finite
/// numbers become null.
std::string to_json_text(const Json& j, bool pretty = true);

/// %.17g
std::string format_double(double v);

}  // namespace kmlab
