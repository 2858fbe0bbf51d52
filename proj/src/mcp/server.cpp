// SPDX-License-Identifier: Apache-2.0
#include "ami/mcp/server.hpp"

#include "ami/mcp/json_rpc.hpp"
#include "ami/mcp/schema.hpp"
#include "ami/tools/identity.hpp"

#include <istream>
#include <ostream>

namespace ami::mcp {

using nlohmann::json;

std::string to_wire(const json& message)
{
    return message.dump(-1, ' ', false, json::error_handler_t::replace);
}

McpServer::McpServer(const ToolRegistry& registry, ServerInfo info) : registry_(registry), info_(std::move(info)) {}

std::optional<std::string> McpServer::handle_message(std::string_view raw, const std::string& caller) const
{
    json message;
    try {
        message = json::parse(raw);
    } catch (const json::parse_error&) {
        return to_wire(make_error(nullptr, rpc_error::parse_error, "Parse error"));
    }
    auto response = handle(message, caller);
    if (!response)
        return std::nullopt;
    return to_wire(*response);
}

std::optional<json> McpServer::handle(const json& message, const std::string& caller) const
{
    if (message.is_array())
        return make_error(nullptr, rpc_error::invalid_request, "Invalid Request: batch requests are not supported");
    if (!message.is_object())
        return make_error(nullptr, rpc_error::invalid_request, "Invalid Request: message must be an object");

    const bool has_id = message.contains("id");
    if (has_id && !is_valid_id(message["id"]))
        return make_error(nullptr, rpc_error::invalid_request, "Invalid Request: id must be a string, integer or null");
    const json id = has_id ? message["id"] : json(nullptr);

    const auto version = message.find("jsonrpc");
    if (version == message.end() || *version != "2.0")
        return make_error(id, rpc_error::invalid_request, "Invalid Request: jsonrpc must be \"2.0\"");
    const auto method_it = message.find("method");
    if (method_it == message.end() || !method_it->is_string())
        return make_error(id, rpc_error::invalid_request, "Invalid Request: method must be a string");
    const auto& method = method_it->get_ref<const std::string&>();

    json params = json::object();
    bool positional = false;
    if (const auto p = message.find("params"); p != message.end()) {
        if (!p->is_object() && !p->is_array())
            return make_error(id, rpc_error::invalid_request, "Invalid Request: params must be structured");
        positional = p->is_array();
        if (!positional)
            params = *p;
    }

    json response;
    if (positional) {
        response = make_error(id, rpc_error::invalid_params, "Invalid params: params must be an object");
    } else if (method == "initialize") {
        response = make_result(id, {
                                       {"protocolVersion", kProtocolVersion},
                                       {"serverInfo", {{"name", info_.name}, {"version", info_.version}}},
                                       {"capabilities", {{"tools", {{"listChanged", false}}}}},
                                   });
    } else if (method == "ping") {
        response = make_result(id, json::object());
    } else if (method == "tools/list") {
        response = make_result(id, list_tools());
    } else if (method == "tools/call") {
        // Notifications still execute; only the reply is suppressed.
        response = call_tool(id, params, caller);
    } else {
        response = make_error(id, rpc_error::method_not_found, "Method not found: " + method);
    }

    if (!has_id)
        return std::nullopt;
    return response;
}

json McpServer::list_tools() const
{
    json tools = json::array();
    for (const auto& def : registry_.definitions()) {
        tools.push_back({
            {"name", def.name},
            {"description", def.description},
            {"inputSchema", def.parameters},
            {"x-identity-params", def.identity_params},
        });
    }
    return {{"tools", std::move(tools)}};
}

json McpServer::call_tool(const json& id, const json& params, const std::string& caller) const
{
    const auto name_it = params.find("name");
    if (name_it == params.end() || !name_it->is_string())
        return make_error(id, rpc_error::invalid_params, "Invalid params: missing tool name");
    const auto& name = name_it->get_ref<const std::string&>();
    const auto* def = registry_.find(name);
    if (!def)
        return make_error(id, rpc_error::invalid_params, "Unknown tool: " + name);

    json args = json::object();
    if (const auto a = params.find("arguments"); a != params.end() && !a->is_null()) {
        if (!a->is_object())
            return make_error(id, rpc_error::invalid_params, "Invalid params: arguments must be an object");
        args = *a;
    }

    args = tools::enforce_identity(registry_, name, args, caller);
    if (auto problem = validate_arguments(def->parameters, args))
        return make_error(id, rpc_error::invalid_params, "Invalid params: " + *problem);

    if (observer_)
        observer_(name, args, caller);

    ToolResult result;
    try {
        result = (*registry_.handler(name))(args, caller);
    } catch (const std::exception& e) {
        result = ToolResult::error("tool " + name + " failed: " + e.what());
    }

    return make_result(id, {
                               {"content", json::array({{{"type", "text"}, {"text", to_wire(result.content)}}})},
                               {"structuredContent", result.content},
                               {"isError", result.is_error},
                           });
}

void serve_stdio(const McpServer& server, std::istream& in, std::ostream& out, const std::string& caller)
{
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        if (auto response = server.handle_message(line, caller)) {
            out << *response << '\n';
            out.flush();
            if (!out)
                return;
        }
    }
}

} // namespace ami::mcp
