// SPDX-License-Identifier: Apache-2.0
#include "ami/openapi/bridge.hpp"

#include "ami/common/error.hpp"

#include <algorithm>

namespace ami::openapi {

using nlohmann::json;

namespace {

constexpr std::string_view kPrefix = "/tools/";

[[noreturn]] void malformed(const std::string& path, const std::string& what)
{
    throw Error(Errc::malformed_document, "malformed OpenAPI document at path " + path + ": " + what);
}

} // namespace

json strip_identity_params(const mcp::ToolDefinition& tool)
{
    json schema = tool.parameters;
    if (tool.identity_params.empty())
        return schema;
    if (auto props = schema.find("properties"); props != schema.end())
        for (const auto& p : tool.identity_params)
            props->erase(p);
    if (auto req = schema.find("required"); req != schema.end()) {
        json kept = json::array();
        for (const auto& r : *req)
            if (std::find(tool.identity_params.begin(), tool.identity_params.end(), r.get<std::string>())
                == tool.identity_params.end())
                kept.push_back(r);
        *req = std::move(kept);
    }
    return schema;
}

json registry_to_openapi(const std::vector<mcp::ToolDefinition>& tools, const DocumentInfo& info)
{
    std::vector<const mcp::ToolDefinition*> sorted;
    for (const auto& t : tools)
        sorted.push_back(&t);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->name < b->name; });

    json paths = json::object();
    for (const auto* tool : sorted) {
        json operation = {
            {"operationId", tool->name},
            {"summary", tool->name},
            {"description", tool->description},
            {"requestBody",
             {{"required", true}, {"content", {{"application/json", {{"schema", strip_identity_params(*tool)}}}}}}},
            {"responses",
             {{"200",
               {{"description", "Tool result"},
                {"content",
                 {{"application/json",
                   {{"schema",
                     {{"type", "object"},
                      {"properties", {{"content", json::object()}, {"is_error", {{"type", "boolean"}}}}}}}}}}}}}}},
            {"x-identity-params", tool->identity_params},
        };
        paths[std::string(kPrefix) + tool->name] = {{"post", std::move(operation)}};
    }

    return {
        {"openapi", "3.1.0"},
        {"info", {{"title", info.title}, {"version", info.version}}},
        {"paths", std::move(paths)},
    };
}

std::vector<PlannerToolSpec> openapi_to_planner_specs(const json& document)
{
    if (!document.is_object() || !document.contains("paths") || !document["paths"].is_object())
        throw Error(Errc::malformed_document, "malformed OpenAPI document: missing paths object");

    std::vector<PlannerToolSpec> specs;
    for (const auto& [path, item] : document["paths"].items()) {
        if (path.rfind(kPrefix, 0) != 0 || path.size() == kPrefix.size())
            malformed(path, "expected /tools/{name}");
        const auto name = path.substr(kPrefix.size());
        if (!item.is_object() || !item.contains("post") || !item["post"].is_object())
            malformed(path, "missing post operation");
        const auto& op = item["post"];
        if (const auto id = op.find("operationId"); id != op.end() && *id != name)
            malformed(path, "operationId does not match path");
        const auto body = op.find("requestBody");
        if (body == op.end() || !body->is_object())
            malformed(path, "missing requestBody");
        const auto content = body->find("content");
        if (content == body->end() || !content->is_object() || !content->contains("application/json"))
            malformed(path, "requestBody has no application/json content");
        const auto& media = (*content)["application/json"];
        if (!media.is_object() || !media.contains("schema") || !media["schema"].is_object())
            malformed(path, "requestBody has no schema");
        std::string description;
        if (const auto d = op.find("description"); d != op.end()) {
            if (!d->is_string())
                malformed(path, "description must be a string");
            description = d->get<std::string>();
        }
        specs.push_back({name, std::move(description), media["schema"]});
    }
    return specs;
}

} // namespace ami::openapi
