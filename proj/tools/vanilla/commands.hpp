// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

namespace vanilla::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitIo = 2;

// Where a session's table comes from: a .cin file or an imported store.
struct TableSource {
    std::string table_path;
    std::string db_path;
};

int run_validate(const std::string &path, std::ostream &err);

int run_convert(const TableSource &source, std::istream &keys, std::ostream &out,
                std::ostream &err, bool record_events);

int run_import(const std::string &table_path, const std::string &db_path, std::ostream &out,
               std::ostream &err);

int run_repl(const TableSource &source, std::istream &in, std::ostream &out, std::ostream &err,
             bool prompt);

struct ServeOptions {
    std::string tcp = "127.0.0.1:9876";
    std::optional<std::string> ws;
    std::optional<std::string> tables;
    std::optional<std::string> default_module;
    std::size_t max_sessions = 16;
    std::size_t threads = 0;
};

// "host:port" with a numeric port; "[v6]:port" accepted.
bool is_listen_address(const std::string &text);

// Explicit flag, then VANILLA_TABLES_DIR, then ./tables.
std::string resolve_tables_dir(const std::optional<std::string> &flag);

// Blocks until SIGINT or SIGTERM, then shuts the server down.
int run_serve(const ServeOptions &options, std::ostream &err);

} // namespace vanilla::cli
