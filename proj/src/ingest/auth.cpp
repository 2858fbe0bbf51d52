// SPDX-License-Identifier: Apache-2.0
#include "ami/ingest/auth.hpp"

#include "ami/common/error.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <charconv>
#include <vector>

namespace ami::ingest {

namespace {

constexpr std::string_view kScheme = "pbkdf2-sha256";
constexpr std::size_t kSaltBytes = 16;
constexpr std::size_t kDigestBytes = 32;

std::string to_hex(const unsigned char* data, std::size_t size)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(size * 2);
    for (std::size_t i = 0; i < size; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

std::optional<std::vector<unsigned char>> from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0)
        return std::nullopt;
    std::vector<unsigned char> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        unsigned value = 0;
        const auto [ptr, ec] = std::from_chars(hex.data() + 2 * i, hex.data() + 2 * i + 2, value, 16);
        if (ec != std::errc() || ptr != hex.data() + 2 * i + 2)
            return std::nullopt;
        out[i] = static_cast<unsigned char>(value);
    }
    return out;
}

struct ParsedHash {
    int iterations = 0;
    std::vector<unsigned char> salt;
    std::vector<unsigned char> digest;
};

std::optional<ParsedHash> parse_hash(std::string_view encoded)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = encoded.find('$', start);
        parts.push_back(encoded.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    if (parts.size() != 4 || parts[0] != kScheme)
        return std::nullopt;
    ParsedHash out;
    const auto [ptr, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), out.iterations);
    if (ec != std::errc() || ptr != parts[1].data() + parts[1].size() || out.iterations < 1)
        return std::nullopt;
    auto salt = from_hex(parts[2]);
    auto digest = from_hex(parts[3]);
    if (!salt || !digest || salt->empty() || digest->size() != kDigestBytes)
        return std::nullopt;
    out.salt = std::move(*salt);
    out.digest = std::move(*digest);
    return out;
}

std::vector<unsigned char> derive(std::string_view password, const std::vector<unsigned char>& salt, int iterations)
{
    std::vector<unsigned char> digest(kDigestBytes);
    if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                          static_cast<int>(salt.size()), iterations, EVP_sha256(), static_cast<int>(digest.size()),
                          digest.data())
        != 1)
        throw Error(Errc::storage_failure, "PBKDF2 derivation failed");
    return digest;
}

} // namespace

std::string random_hex(std::size_t bytes)
{
    std::vector<unsigned char> buf(bytes);
    if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1)
        throw Error(Errc::storage_failure, "random generator unavailable");
    return to_hex(buf.data(), buf.size());
}

std::string hash_password(std::string_view password, int iterations)
{
    if (iterations < 1)
        throw Error(Errc::invalid_argument, "iterations must be >= 1");
    std::vector<unsigned char> salt(kSaltBytes);
    if (RAND_bytes(salt.data(), static_cast<int>(salt.size())) != 1)
        throw Error(Errc::storage_failure, "random generator unavailable");
    const auto digest = derive(password, salt, iterations);
    return std::string(kScheme) + "$" + std::to_string(iterations) + "$" + to_hex(salt.data(), salt.size()) + "$"
           + to_hex(digest.data(), digest.size());
}

bool verify_password(std::string_view password, std::string_view encoded)
{
    const auto parsed = parse_hash(encoded);
    if (!parsed)
        return false;
    const auto digest = derive(password, parsed->salt, parsed->iterations);
    return CRYPTO_memcmp(digest.data(), parsed->digest.data(), kDigestBytes) == 0;
}

// --- UserDirectory ---

void UserDirectory::add(std::string user_id, std::string password_hash)
{
    if (user_id.empty())
        throw Error(Errc::config_invalid, "user id must be non-empty");
    if (!parse_hash(password_hash))
        throw Error(Errc::config_invalid, "users." + user_id + ".password_hash is not a pbkdf2-sha256 hash");
    if (!hashes_.emplace(std::move(user_id), std::move(password_hash)).second)
        throw Error(Errc::config_invalid, "duplicate user id");
}

bool UserDirectory::contains(std::string_view user_id) const
{
    return hashes_.find(user_id) != hashes_.end();
}

std::vector<std::string> UserDirectory::users() const
{
    std::vector<std::string> out;
    for (const auto& [id, _] : hashes_)
        out.push_back(id);
    return out;
}

bool UserDirectory::verify(std::string_view user_id, std::string_view password) const
{
    const auto it = hashes_.find(user_id);
    if (it == hashes_.end()) {
        if (!hashes_.empty())
            (void)verify_password(password, hashes_.begin()->second);
        return false;
    }
    return verify_password(password, it->second);
}

// --- SessionManager ---

SessionManager::SessionManager(Clock clock, std::chrono::seconds lifetime)
    : clock_(std::move(clock)), lifetime_(lifetime)
{
}

Session SessionManager::open(const std::string& user_id)
{
    Session session{random_hex(32), user_id, clock_() + lifetime_};
    std::lock_guard lock(mutex_);
    sessions_[session.token] = session;
    return session;
}

std::optional<std::string> SessionManager::authenticate(std::string_view token)
{
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(std::string(token));
    if (it == sessions_.end())
        return std::nullopt;
    if (clock_() >= it->second.expires_at) {
        sessions_.erase(it);
        return std::nullopt;
    }
    return it->second.user_id;
}

void SessionManager::revoke(std::string_view token)
{
    std::lock_guard lock(mutex_);
    sessions_.erase(std::string(token));
}

} // namespace ami::ingest
