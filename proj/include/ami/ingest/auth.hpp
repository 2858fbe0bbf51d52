// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/common/time.hpp"

#include <chrono>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ami::ingest {

inline constexpr int kDefaultPbkdf2Iterations = 100000;

/// Encodes as `pbkdf2-sha256$<iterations>$<salt hex>$<digest hex>` with a 16-byte random salt.
std::string hash_password(std::string_view password, int iterations = kDefaultPbkdf2Iterations);

/// Constant-time digest comparison; false for any malformed encoding.
bool verify_password(std::string_view password, std::string_view encoded);

/// `bytes` bytes from the OpenSSL CSPRNG, lowercase hex.
std::string random_hex(std::size_t bytes);

/// Seed users: user id -> salted password hash.
class UserDirectory {
public:
    /// Throws Error(config_invalid) for a duplicate id or an unparseable hash.
    void add(std::string user_id, std::string password_hash);

    bool contains(std::string_view user_id) const;
    std::vector<std::string> users() const;

    /// Unknown users still pay for one hash evaluation so timing does not reveal membership.
    bool verify(std::string_view user_id, std::string_view password) const;

private:
    std::map<std::string, std::string, std::less<>> hashes_;
};

struct Session {
    std::string token; // 32 random bytes, hex
    std::string user_id;
    Timestamp expires_at;
};

class SessionManager {
public:
    explicit SessionManager(Clock clock = system_now, std::chrono::seconds lifetime = std::chrono::hours(24));

    Session open(const std::string& user_id);

    /// User id for a live token; expired tokens are dropped and authenticate nothing.
    std::optional<std::string> authenticate(std::string_view token);

    void revoke(std::string_view token);

private:
    Clock clock_;
    std::chrono::seconds lifetime_;
    std::mutex mutex_;
    std::unordered_map<std::string, Session> sessions_;
};

} // namespace ami::ingest
