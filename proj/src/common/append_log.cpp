// SPDX-License-Identifier: Apache-2.0
#include "ami/common/append_log.hpp"

#include "ami/common/error.hpp"

#include <sstream>
#include <string>

namespace ami {

namespace fs = std::filesystem;

AppendLog::AppendLog(fs::path path, const ReplayFn& replay) : path_(std::move(path))
{
    if (path_.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path_.parent_path(), ec);
        if (ec)
            throw Error(Errc::storage_failure, "cannot create " + path_.parent_path().string() + ": " + ec.message());
    }

    if (fs::exists(path_)) {
        std::ifstream in(path_, std::ios::binary);
        if (!in)
            throw Error(Errc::storage_failure, "cannot read " + path_.string());
        std::stringstream buffer;
        buffer << in.rdbuf();
        const std::string content = buffer.str();

        std::size_t start = 0;
        std::size_t line = 0;
        std::size_t complete_bytes = 0;
        while (start < content.size()) {
            const auto end = content.find('\n', start);
            if (end == std::string::npos)
                break; // torn tail
            ++line;
            const std::string_view text(content.data() + start, end - start);
            if (!text.empty()) {
                nlohmann::json record;
                try {
                    record = nlohmann::json::parse(text);
                } catch (const nlohmann::json::exception& e) {
                    throw Error(Errc::storage_failure,
                                path_.string() + ":" + std::to_string(line) + ": corrupt record: " + e.what());
                }
                try {
                    replay(record, line);
                } catch (const Error& e) {
                    throw Error(Errc::storage_failure,
                                path_.string() + ":" + std::to_string(line) + ": " + e.what());
                } catch (const nlohmann::json::exception& e) {
                    throw Error(Errc::storage_failure,
                                path_.string() + ":" + std::to_string(line) + ": " + e.what());
                }
            }
            start = end + 1;
            complete_bytes = start;
        }
        in.close();
        if (complete_bytes < content.size()) {
            std::error_code ec;
            fs::resize_file(path_, complete_bytes, ec);
            if (ec)
                throw Error(Errc::storage_failure, "cannot truncate torn tail of " + path_.string());
        }
    }

    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_)
        throw Error(Errc::storage_failure, "cannot open " + path_.string() + " for append");
}

void AppendLog::append(const nlohmann::json& record)
{
    const std::string line = record.dump() + '\n';
    std::lock_guard lock(mutex_);
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.flush();
    if (!out_)
        throw Error(Errc::storage_failure, "write to " + path_.string() + " failed");
}

void AppendLog::flush()
{
    std::lock_guard lock(mutex_);
    out_.flush();
}

} // namespace ami
