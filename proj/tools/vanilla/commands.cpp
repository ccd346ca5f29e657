// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include "key_tokens.hpp"
#include "vanilla/vanilla.h"

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <iterator>
#include <memory>
#include <pthread.h>
#include <sstream>
#include <string_view>

namespace vanilla::cli {
namespace {

template <auto Free> struct Deleter {
    template <class T> void operator()(T *p) const noexcept { Free(p); }
};
using Table = std::unique_ptr<vanilla_table, Deleter<vanilla_table_free>>;
using Store = std::unique_ptr<vanilla_store, Deleter<vanilla_store_free>>;
using SessionHandle = std::unique_ptr<vanilla_session, Deleter<vanilla_session_free>>;
using Output = std::unique_ptr<vanilla_output, Deleter<vanilla_output_free>>;
using Diagnostics = std::unique_ptr<vanilla_diagnostics, Deleter<vanilla_diagnostics_free>>;

void print_diagnostics(const vanilla_diagnostics *list, std::ostream &err) {
    for (std::size_t i = 0; i < vanilla_diagnostics_count(list); ++i) {
        err << vanilla_diagnostics_format(list, i) << '\n';
    }
}

// Loads and parses a table file. Reports problems to `err` and sets
// `exit_code` when it returns null.
Table load_table(const std::string &path, std::ostream &err, int &exit_code) {
    vanilla_table *raw = nullptr;
    const auto status = vanilla_table_load(path.c_str(), &raw);
    Table table(raw);
    if (status == VANILLA_E_IO) {
        err << "vanilla: " << vanilla_last_error() << '\n';
        exit_code = kExitIo;
        return nullptr;
    }
    if (status != VANILLA_OK) {
        print_diagnostics(vanilla_table_diagnostics(table.get()), err);
        exit_code = kExitFailure;
        return nullptr;
    }
    return table;
}

Store open_source(const TableSource &source, std::ostream &err, int &exit_code) {
    vanilla_store *raw = nullptr;
    if (!source.db_path.empty()) {
        if (vanilla_store_open(source.db_path.c_str(), 0, &raw) != VANILLA_OK) {
            err << "vanilla: " << vanilla_last_error() << '\n';
            exit_code = kExitIo;
            return nullptr;
        }
        return Store(raw);
    }
    const auto table = load_table(source.table_path, err, exit_code);
    if (!table) {
        return nullptr;
    }
    if (vanilla_store_build(table.get(), &raw) != VANILLA_OK) {
        err << "vanilla: " << vanilla_last_error() << '\n';
        exit_code = kExitFailure;
        return nullptr;
    }
    return Store(raw);
}

SessionHandle new_session(const Store &store, std::ostream &err) {
    vanilla_session *raw = nullptr;
    if (vanilla_session_new(store.get(), &raw) != VANILLA_OK) {
        err << "vanilla: " << vanilla_last_error() << '\n';
        return nullptr;
    }
    return SessionHandle(raw);
}

Output press(vanilla_session *session, const KeyToken &token) {
    vanilla_output *raw = nullptr;
    vanilla_session_process_key(session, &token.event, &raw);
    return Output(raw);
}

std::string window_text(const vanilla_output *out) {
    std::string text = "[";
    for (std::size_t i = 0; i < vanilla_output_candidate_count(out); ++i) {
        if (i > 0) {
            text += ' ';
        }
        text += vanilla_output_candidate_label(out, i);
        text += ':';
        text += vanilla_output_candidate_text(out, i);
    }
    text += ']';
    return text;
}

void notify_to_stream(const char *message, void *user) {
    *static_cast<std::ostream *>(user) << "vanilla: " << message << std::endl;
}

} // namespace

int run_validate(const std::string &path, std::ostream &err) {
    vanilla_table *raw = nullptr;
    const auto status = vanilla_table_load(path.c_str(), &raw);
    const Table table(raw);
    if (status == VANILLA_E_IO) {
        err << "vanilla: " << vanilla_last_error() << '\n';
        return kExitIo;
    }
    print_diagnostics(vanilla_table_diagnostics(table.get()), err);
    if (status != VANILLA_OK) {
        return kExitFailure;
    }
    vanilla_diagnostics *warnings = nullptr;
    vanilla_table_validate(table.get(), &warnings);
    const Diagnostics owned(warnings);
    print_diagnostics(owned.get(), err);
    return kExitOk;
}

int run_convert(const TableSource &source, std::istream &keys, std::ostream &out,
                std::ostream &err, bool record_events) {
    const std::string input{std::istreambuf_iterator<char>(keys),
                            std::istreambuf_iterator<char>()};
    std::vector<KeyToken> tokens;
    try {
        tokens = parse_tokens(input);
    } catch (const TokenError &e) {
        err << "vanilla: keys:" << e.line() << ':' << e.column() << ": " << e.what() << '\n';
        return kExitFailure;
    }
    int exit_code = kExitOk;
    const auto store = open_source(source, err, exit_code);
    if (!store) {
        return exit_code;
    }
    const auto session = new_session(store, err);
    if (!session) {
        return kExitFailure;
    }
    std::size_t beeps = 0;
    for (const auto &token : tokens) {
        const auto result = press(session.get(), token);
        for (std::size_t i = 0; i < vanilla_output_commit_count(result.get()); ++i) {
            const char *text = vanilla_output_commit(result.get(), i);
            if (record_events) {
                out << "commit " << text << '\n';
            } else {
                out << text;
            }
        }
        if (!vanilla_output_handled(result.get())) {
            if (record_events) {
                out << "passthrough " << token.text << '\n';
            } else if (token.is_literal()) {
                out << token.text;
            }
        }
        if (vanilla_output_beep(result.get())) {
            ++beeps;
            if (record_events) {
                out << "beep\n";
            }
        }
        if (record_events) {
            out << "state composing=" << vanilla_output_composing(result.get())
                << " window=" << window_text(result.get()) << '\n';
        }
    }
    out.flush();
    err << "beeps: " << beeps << '\n';
    return kExitOk;
}

int run_import(const std::string &table_path, const std::string &db_path, std::ostream &out,
               std::ostream &err) {
    int exit_code = kExitOk;
    const auto table = load_table(table_path, err, exit_code);
    if (!table) {
        return exit_code;
    }
    vanilla_store *raw = nullptr;
    if (vanilla_store_import(table.get(), db_path.c_str(), &raw) != VANILLA_OK) {
        err << "vanilla: " << vanilla_last_error() << '\n';
        return kExitIo;
    }
    const Store store(raw);
    out << vanilla_store_entry_count(store.get()) << " entries\n";
    return kExitOk;
}

int run_repl(const TableSource &source, std::istream &in, std::ostream &out, std::ostream &err,
             bool prompt) {
    int exit_code = kExitOk;
    const auto store = open_source(source, err, exit_code);
    if (!store) {
        return exit_code;
    }
    const auto session = new_session(store, err);
    if (!session) {
        return kExitFailure;
    }
    std::string line;
    for (;;) {
        if (prompt) {
            out << "> " << std::flush;
        }
        if (!std::getline(in, line)) {
            break;
        }
        std::string_view word = line;
        while (!word.empty() && (word.front() == ' ' || word.front() == '\t')) {
            word.remove_prefix(1);
        }
        while (!word.empty() &&
               (word.back() == ' ' || word.back() == '\t' || word.back() == '\r')) {
            word.remove_suffix(1);
        }
        if (word.empty()) {
            continue;
        }
        if (word == ":q") {
            break;
        }
        const auto token = parse_token(word);
        if (!token) {
            err << "error: unknown key token '" << word << "'" << std::endl;
            continue;
        }
        const auto result = press(session.get(), *token);
        for (std::size_t i = 0; i < vanilla_output_commit_count(result.get()); ++i) {
            out << "COMMIT " << vanilla_output_commit(result.get(), i) << '\n';
        }
        if (!vanilla_output_handled(result.get())) {
            out << "PASSTHROUGH " << token->text << '\n';
        }
        if (vanilla_output_beep(result.get())) {
            out << "BEEP\n";
        }
        out << "composing=" << vanilla_output_composing(result.get())
            << " window=" << window_text(result.get()) << std::endl;
    }
    return kExitOk;
}

bool is_listen_address(const std::string &text) {
    std::string_view host;
    std::string_view port;
    const std::string_view s = text;
    if (s.starts_with('[')) {
        const auto close = s.find("]:");
        if (close == std::string_view::npos) {
            return false;
        }
        host = s.substr(1, close - 1);
        port = s.substr(close + 2);
    } else {
        const auto colon = s.find(':');
        if (colon == std::string_view::npos || s.find(':', colon + 1) != std::string_view::npos) {
            return false;
        }
        host = s.substr(0, colon);
        port = s.substr(colon + 1);
    }
    if (host.empty() || port.empty() || port.size() > 5) {
        return false;
    }
    unsigned value = 0;
    for (char c : port) {
        if (c < '0' || c > '9') {
            return false;
        }
        value = value * 10 + static_cast<unsigned>(c - '0');
    }
    return value <= 65535;
}

std::string resolve_tables_dir(const std::optional<std::string> &flag) {
    if (flag) {
        return *flag;
    }
    if (const char *env = std::getenv("VANILLA_TABLES_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "tables";
}

int run_serve(const ServeOptions &options, std::ostream &err) {
    const std::string tables = resolve_tables_dir(options.tables);

    // Server threads inherit this mask, so only sigwait below sees the signals.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    vanilla_server_config config{};
    config.tcp_listen = options.tcp.c_str();
    config.ws_listen = options.ws ? options.ws->c_str() : nullptr;
    config.tables_dir = tables.c_str();
    config.default_module = options.default_module ? options.default_module->c_str() : nullptr;
    config.max_sessions_per_conn = options.max_sessions;
    config.threads = options.threads;
    config.notify = notify_to_stream;
    config.notify_user = &err;

    vanilla_server *server = nullptr;
    if (vanilla_server_start(&config, &server) != VANILLA_OK) {
        err << "vanilla: " << vanilla_last_error() << std::endl;
        return kExitFailure;
    }
    err << "vanilla: " << vanilla_server_module_count(server) << " modules from " << tables
        << '\n';
    const std::string_view tcp_host = std::string_view(options.tcp).substr(
        0, std::string_view(options.tcp).rfind(':'));
    err << "vanilla: listening on tcp " << tcp_host << ':' << vanilla_server_tcp_port(server)
        << '\n';
    if (options.ws) {
        const std::string_view ws = *options.ws;
        err << "vanilla: listening on ws " << ws.substr(0, ws.rfind(':')) << ':'
            << vanilla_server_ws_port(server) << "/ws\n";
    }
    err.flush();

    int received = 0;
    sigwait(&signals, &received);
    err << "vanilla: shutting down" << std::endl;
    vanilla_server_shutdown(server, 2000);
    vanilla_server_free(server);
    return kExitOk;
}

} // namespace vanilla::cli
