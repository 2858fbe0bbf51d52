// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/mcp/tool_registry.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace ami::openapi {

/// What the planner is shown for one tool.
struct PlannerToolSpec {
    std::string name;
    std::string description;
    nlohmann::json parameters;

    friend bool operator==(const PlannerToolSpec&, const PlannerToolSpec&) = default;
};

struct DocumentInfo {
    std::string title = "AMI tools";
    std::string version = "0.1.0";
};

/// Parameter schema with the identity parameters removed from `properties` and `required`.
nlohmann::json strip_identity_params(const mcp::ToolDefinition& tool);

/// OpenAPI 3.1 document with one `POST /tools/{name}` per tool, sorted by name.
/// Identity parameters are hidden from the request schema and listed under `x-identity-params`.
nlohmann::json registry_to_openapi(const std::vector<mcp::ToolDefinition>& tools, const DocumentInfo& info = {});

/// One spec per path in document order. Throws Error(malformed_document) naming the path.
std::vector<PlannerToolSpec> openapi_to_planner_specs(const nlohmann::json& document);

} // namespace ami::openapi
