// SPDX-License-Identifier: Apache-2.0
#include "ami/ingest/http_server.hpp"

#include "ami/common/error.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <regex>

namespace ami::ingest {

namespace {

HttpRequest convert(const httplib::Request& req)
{
    HttpRequest out;
    out.method = req.method;
    out.path = req.path;
    out.body = req.body;
    for (const auto& [name, value] : req.headers) {
        std::string key = name;
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        out.headers.emplace(std::move(key), value);
    }
    for (const auto& [name, value] : req.params)
        out.query.emplace(name, value);
    return out;
}

} // namespace

HttpServer::HttpServer(const ApiService& service, std::optional<std::filesystem::path> static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>())
{
    server_->set_payload_max_length(1 << 20);
    // SO_REUSEADDR only: the library default adds SO_REUSEPORT, which lets a second
    // server bind the same port silently.
    server_->set_socket_options([](int sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    if (static_dir && !server_->set_mount_point("/", static_dir->string()))
        throw Error(Errc::config_invalid, "static_dir: not a directory: " + static_dir->string());

    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        const auto out = service_.handle(convert(req));
        res.status = out.status;
        if (!out.body.empty() || out.status != 202)
            res.set_content(out.body, out.content_type);
    };
    server_->Get(".*", handler);
    server_->Post(".*", handler);
    server_->Put(".*", handler);
    server_->Delete(".*", handler);
    server_->Patch(".*", handler);
}

HttpServer::~HttpServer()
{
    stop();
}

int HttpServer::bind(const std::string& host, int port)
{
    const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound <= 0)
        throw Error(Errc::invalid_argument, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void HttpServer::start()
{
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void HttpServer::stop()
{
    if (server_)
        server_->stop();
    if (thread_.joinable())
        thread_.join();
}

BaseUrl parse_base_url(const std::string& url)
{
    static const std::regex re(R"(^http://([^/:\s]+)(?::(\d{1,5}))?(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, re))
        throw Error(Errc::invalid_argument, "expected http://host[:port], got " + url);
    BaseUrl out;
    out.host = m[1].str();
    if (m[2].matched)
        out.port = std::stoi(m[2].str());
    if (out.port < 1 || out.port > 65535)
        throw Error(Errc::invalid_argument, "port out of range in " + url);
    return out;
}

} // namespace ami::ingest
