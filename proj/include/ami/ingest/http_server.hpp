// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/ingest/api_service.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace ami::ingest {

/// Serves an ApiService over HTTP/1.1 with cpp-httplib's thread pool. Files under
/// `static_dir` are served at `/` ahead of the API routes.
class HttpServer {
public:
    explicit HttpServer(const ApiService& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Port 0 picks a free port. Returns the bound port; throws Error(invalid_argument) on failure.
    int bind(const std::string& host, int port);
    /// Runs the accept loop on a background thread and waits until it is accepting.
    void start();
    /// Stops accepting, finishes in-flight requests and joins the background thread.
    void stop();

private:
    const ApiService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

/// Splits `http://host:port` (path ignored) for clients. Throws Error(invalid_argument).
struct BaseUrl {
    std::string host;
    int port = 80;
    std::string origin() const { return "http://" + host + ":" + std::to_string(port); }
};
BaseUrl parse_base_url(const std::string& url);

} // namespace ami::ingest
