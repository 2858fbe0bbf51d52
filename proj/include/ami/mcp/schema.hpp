// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace ami::mcp {

// Supported JSON-Schema subset for tool parameters:
//   top level: {"type":"object", "properties":{...}, "required":[...]}
//   property:  {"type": string|number|integer|boolean, "enum":[...], "minimum":n, "maximum":n, ...}
// Other keywords (description, default, ...) are carried but not enforced.

/// Throws Error(malformed_schema) describing the first structural problem.
void check_schema(const nlohmann::json& schema);

/// First violation of `schema` by `args`, naming the offending argument; nullopt if valid.
/// Required arguments are checked in declaration order, then properties by name.
std::optional<std::string> validate_arguments(const nlohmann::json& schema, const nlohmann::json& args);

} // namespace ami::mcp
