// SPDX-License-Identifier: Apache-2.0
// Random tool registries and an independent identity-stripping reference.
#pragma once

#include "ami/mcp/tool_registry.hpp"

#include <nlohmann/json.hpp>

#include <random>
#include <set>
#include <string>
#include <vector>

namespace ami::oracle {

inline std::vector<mcp::ToolDefinition> random_tools(std::mt19937_64& rng)
{
    static const char* kTypes[] = {"string", "number", "integer", "boolean"};
    std::vector<mcp::ToolDefinition> out;
    std::set<std::string> names;
    const int n = 1 + static_cast<int>(rng() % 8);
    while (static_cast<int>(out.size()) < n) {
        std::string name(1, static_cast<char>('a' + rng() % 26));
        for (int k = static_cast<int>(rng() % 10); k > 0; --k)
            name += "abcdefghijklmnopqrstuvwxyz0123456789_"[rng() % 37];
        if (!names.insert(name).second)
            continue;
        mcp::ToolDefinition def;
        def.name = name;
        def.description = "tool " + std::to_string(rng() % 1000);
        nlohmann::json props = nlohmann::json::object();
        std::vector<std::string> pnames;
        for (int k = static_cast<int>(rng() % 6); k > 0; --k) {
            const std::string p = "p" + std::to_string(rng() % 20);
            if (props.contains(p))
                continue;
            props[p] = {{"type", kTypes[rng() % 4]}};
            pnames.push_back(p);
        }
        nlohmann::json required = nlohmann::json::array();
        for (const auto& p : pnames) {
            if (rng() % 2)
                required.push_back(p);
            if (rng() % 3 == 0)
                def.identity_params.push_back(p);
        }
        def.parameters = {{"type", "object"}, {"properties", props}, {"required", required}};
        out.push_back(std::move(def));
    }
    return out;
}

/// Rebuilds the schema from scratch, keeping only non-identity names.
inline nlohmann::json expected_visible_schema(const mcp::ToolDefinition& def)
{
    const std::set<std::string> hidden(def.identity_params.begin(), def.identity_params.end());
    nlohmann::json out = nlohmann::json::object();
    for (auto it = def.parameters.begin(); it != def.parameters.end(); ++it) {
        if (it.key() == "properties") {
            nlohmann::json props = nlohmann::json::object();
            for (auto p = it->begin(); p != it->end(); ++p)
                if (!hidden.count(p.key()))
                    props[p.key()] = p.value();
            out["properties"] = props;
        } else if (it.key() == "required") {
            nlohmann::json req = nlohmann::json::array();
            for (const auto& r : *it)
                if (!hidden.count(r.get<std::string>()))
                    req.push_back(r);
            out["required"] = req;
        } else {
            out[it.key()] = it.value();
        }
    }
    return out;
}

} // namespace ami::oracle
