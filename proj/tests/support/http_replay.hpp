// SPDX-License-Identifier: Apache-2.0
// Sends corpus fixtures to a running HttpServer's /mcp endpoint.
#pragma once

#include "support/corpus.hpp"

#include <httplib.h>

#include <optional>
#include <string>

namespace ami::testing {

struct HttpReply {
    int status = 0;
    std::optional<std::string> body; // nullopt for 202 with an empty body
};

inline HttpReply post_mcp(httplib::Client& client, const std::string& token, const std::string& wire)
{
    auto res = client.Post("/mcp", httplib::Headers{{"Authorization", "Bearer " + token}}, wire, "application/json");
    if (!res)
        return {0, std::nullopt};
    HttpReply out{res->status, std::nullopt};
    if (!(res->status == 202 && res->body.empty()))
        out.body = res->body;
    return out;
}

/// The status the HTTP transport should use for a given expectation.
inline int expected_status(const RpcFixture& f)
{
    if (f.expect.value("no_response", false))
        return 202;
    if (f.expect.contains("error")) {
        const int code = f.expect["error"].get<int>();
        return code == -32700 || code == -32600 ? 400 : 200;
    }
    return 200;
}

} // namespace ami::testing
