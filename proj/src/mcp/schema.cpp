// SPDX-License-Identifier: Apache-2.0
#include "ami/mcp/schema.hpp"

#include "ami/common/error.hpp"

#include <cmath>
#include <set>

namespace ami::mcp {

namespace {

using nlohmann::json;

const std::set<std::string> kScalarTypes = {"string", "number", "integer", "boolean"};

[[noreturn]] void malformed(const std::string& what)
{
    throw Error(Errc::malformed_schema, "malformed schema: " + what);
}

bool is_integral(const json& v)
{
    if (v.is_number_integer())
        return true;
    if (!v.is_number_float())
        return false;
    const double d = v.get<double>();
    return std::isfinite(d) && std::trunc(d) == d;
}

bool matches_type(const json& v, const std::string& type)
{
    if (type == "string")
        return v.is_string();
    if (type == "number")
        return v.is_number();
    if (type == "integer")
        return is_integral(v);
    if (type == "boolean")
        return v.is_boolean();
    return false;
}

} // namespace

void check_schema(const json& schema)
{
    if (!schema.is_object())
        malformed("parameters must be an object");
    const auto type = schema.find("type");
    if (type == schema.end() || *type != "object")
        malformed("parameters.type must be \"object\"");

    const auto props = schema.find("properties");
    if (props != schema.end()) {
        if (!props->is_object())
            malformed("properties must be an object");
        for (const auto& [name, prop] : props->items()) {
            if (name.empty())
                malformed("property names must be non-empty");
            if (!prop.is_object())
                malformed("property " + name + " must be an object");
            const auto ptype = prop.find("type");
            if (ptype == prop.end() || !ptype->is_string() || !kScalarTypes.count(ptype->get<std::string>()))
                malformed("property " + name + " must declare type string, number, integer or boolean");
            if (const auto e = prop.find("enum"); e != prop.end()) {
                if (!e->is_array() || e->empty())
                    malformed("property " + name + ": enum must be a non-empty array");
                for (const auto& v : *e)
                    if (!matches_type(v, ptype->get<std::string>()))
                        malformed("property " + name + ": enum value " + v.dump() + " does not match its type");
            }
            for (const char* bound : {"minimum", "maximum"}) {
                if (const auto b = prop.find(bound); b != prop.end() && !b->is_number())
                    malformed("property " + name + ": " + bound + " must be a number");
            }
        }
    }

    const auto required = schema.find("required");
    if (required != schema.end()) {
        if (!required->is_array())
            malformed("required must be an array");
        std::set<std::string> seen;
        for (const auto& r : *required) {
            if (!r.is_string())
                malformed("required entries must be strings");
            const auto name = r.get<std::string>();
            if (props == schema.end() || !props->contains(name))
                malformed("required argument " + name + " is not a declared property");
            if (!seen.insert(name).second)
                malformed("required argument " + name + " listed twice");
        }
    }
}

std::optional<std::string> validate_arguments(const json& schema, const json& args)
{
    if (!args.is_object())
        return "arguments must be an object";

    if (const auto required = schema.find("required"); required != schema.end()) {
        for (const auto& r : *required) {
            const auto& name = r.get_ref<const std::string&>();
            if (!args.contains(name))
                return "missing required argument: " + name;
        }
    }

    const auto props = schema.find("properties");
    if (props == schema.end())
        return std::nullopt;
    for (const auto& [name, prop] : props->items()) {
        const auto it = args.find(name);
        if (it == args.end())
            continue;
        const auto& type = prop.at("type").get_ref<const std::string&>();
        if (!matches_type(*it, type))
            return "argument " + name + " must be of type " + type;
        if (const auto e = prop.find("enum"); e != prop.end()) {
            bool found = false;
            for (const auto& v : *e)
                found = found || v == *it;
            if (!found)
                return "argument " + name + " must be one of " + e->dump();
        }
        if (it->is_number()) {
            const double v = it->get<double>();
            if (const auto lo = prop.find("minimum"); lo != prop.end() && v < lo->get<double>())
                return "argument " + name + " must be >= " + lo->dump();
            if (const auto hi = prop.find("maximum"); hi != prop.end() && v > hi->get<double>())
                return "argument " + name + " must be <= " + hi->dump();
        }
    }
    return std::nullopt;
}

} // namespace ami::mcp
