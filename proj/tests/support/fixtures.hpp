// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace vanilla::test {

inline constexpr std::string_view kT1 = "%ename demo\n"
                                        "%cname Demo\n"
                                        "%selkey 123\n"
                                        "%ov_maxseq 2\n"
                                        "%keyname begin\n"
                                        "a A\n"
                                        "b B\n"
                                        "%keyname end\n"
                                        "%chardef begin\n"
                                        "a 日\n"
                                        "a 月\n"
                                        "ab 明\n"
                                        "b 木\n"
                                        "%chardef end\n";

std::filesystem::path source_dir();
std::filesystem::path fixture(std::string_view relative);
std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view contents);

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;
    const std::filesystem::path &path() const noexcept { return path_; }
    std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace vanilla::test
