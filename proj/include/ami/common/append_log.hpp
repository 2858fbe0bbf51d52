// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>

namespace ami {

/// JSON-lines append log. Opening replays every complete record in file order;
/// a torn trailing line (no terminating LF) is truncated away before appending resumes.
/// A corrupt complete line is a storage failure naming path and line number.
class AppendLog {
public:
    using ReplayFn = std::function<void(const nlohmann::json& record, std::size_t line)>;

    AppendLog(std::filesystem::path path, const ReplayFn& replay);
    AppendLog(const AppendLog&) = delete;
    AppendLog& operator=(const AppendLog&) = delete;

    /// Writes one compact line and flushes it to the OS.
    void append(const nlohmann::json& record);
    void flush();

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::mutex mutex_;
};

} // namespace ami
