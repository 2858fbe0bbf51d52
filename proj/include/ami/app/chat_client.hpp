// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace httplib {
class Client;
}

namespace ami::app {

/// `[tool] name(args) -> summary` for one entry of a /api/chat `tool_calls` array.
std::string format_audit_line(const nlohmann::json& tool_call);

/// Lines printed for one /api/chat response body: audit lines, then the reply (or the error).
std::vector<std::string> render_chat_response(int status, const nlohmann::json& body);

/// Minimal client for /api/login and /api/chat.
class ChatClient {
public:
    explicit ChatClient(const std::string& base_url);
    ~ChatClient();

    /// Throws Error(invalid_argument) when the server rejects the credentials or is unreachable.
    void login(const std::string& user, const std::string& password);

    struct Reply {
        int status = 0;
        nlohmann::json body;
    };
    /// Throws Error(invalid_argument) when the server cannot be reached.
    Reply send(const std::string& message);

private:
    std::unique_ptr<httplib::Client> client_;
    std::string token_;
};

} // namespace ami::app
