// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <unistd.h>

namespace cli = vanilla::cli;

namespace {

// Runs `fn` with the keys stream: a file path, or stdin when empty or "-".
template <class Fn> int with_input(const std::string &path, Fn &&fn) {
    if (path.empty() || path == "-") {
        return fn(std::cin);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "vanilla: cannot read " << path << '\n';
        return cli::kExitIo;
    }
    return fn(in);
}

template <class Fn> int with_output(const std::string &path, Fn &&fn) {
    if (path.empty() || path == "-") {
        return fn(std::cout);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "vanilla: cannot write " << path << '\n';
        return cli::kExitIo;
    }
    const int code = fn(out);
    out.close();
    if (!out && code == cli::kExitOk) {
        std::cerr << "vanilla: cannot write " << path << '\n';
        return cli::kExitIo;
    }
    return code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Table-based input method tools and text-service server", "vanilla"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "vanilla 1.0.0");

    std::string validate_path;
    auto *validate = app.add_subcommand("validate", "Check a .cin table and report diagnostics");
    validate->add_option("table", validate_path, "Table file")->required();

    std::string convert_table;
    std::string convert_keys;
    std::string convert_db;
    std::string convert_out;
    bool record_events = false;
    auto *convert = app.add_subcommand("convert", "Feed scripted keys through a fresh session");
    convert->add_option("--db", convert_db, "Imported store to use instead of a table file");
    convert->add_option("-o,--output", convert_out, "Output file (default stdout)");
    convert->add_flag("--record-events", record_events, "Print one event per line");
    std::vector<std::string> convert_args;
    convert->add_option("args", convert_args, "TABLE [KEYS], or KEYS with --db")
        ->expected(0, 2);

    std::string import_table;
    std::string import_db;
    auto *import = app.add_subcommand("import", "Write a table into a persistent store");
    import->add_option("table", import_table, "Table file")->required();
    import->add_option("db", import_db, "Store path")->required();

    std::string repl_table;
    std::string repl_db;
    auto *repl = app.add_subcommand("repl", "Type keys one per line; :q quits");
    repl->add_option("table", repl_table, "Table file");
    repl->add_option("--db", repl_db, "Imported store to use instead of a table file");

    cli::ServeOptions serve_options;
    auto *serve = app.add_subcommand("serve", "Run the text-service server");
    serve->add_option("--tcp", serve_options.tcp, "TCP listen address HOST:PORT")
        ->capture_default_str();
    serve->add_option("--ws", serve_options.ws, "WebSocket listen address HOST:PORT");
    serve->add_option("--tables", serve_options.tables,
                      "Table directory (default $VANILLA_TABLES_DIR, then ./tables)");
    serve->add_option("--default-module", serve_options.default_module,
                      "Module used when open_session names none");
    serve->add_option("--max-sessions", serve_options.max_sessions,
                      "Sessions allowed per connection")
        ->capture_default_str();
    serve->add_option("--threads", serve_options.threads, "Worker threads (0 picks)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kExitOk : cli::kExitFailure;
    }

    if (*validate) {
        return cli::run_validate(validate_path, std::cerr);
    }
    if (*convert) {
        cli::TableSource source;
        std::string keys;
        if (!convert_db.empty()) {
            source.db_path = convert_db;
            if (convert_args.size() > 1) {
                std::cerr << "vanilla: convert --db takes at most one KEYS argument\n"
                          << convert->help();
                return cli::kExitFailure;
            }
            keys = convert_args.empty() ? "" : convert_args[0];
        } else {
            if (convert_args.empty()) {
                std::cerr << "vanilla: convert needs a TABLE or --db\n" << convert->help();
                return cli::kExitFailure;
            }
            source.table_path = convert_args[0];
            keys = convert_args.size() > 1 ? convert_args[1] : "";
        }
        return with_input(keys, [&](std::istream &in) {
            return with_output(convert_out, [&](std::ostream &out) {
                return cli::run_convert(source, in, out, std::cerr, record_events);
            });
        });
    }
    if (*import) {
        return cli::run_import(import_table, import_db, std::cout, std::cerr);
    }
    if (*repl) {
        if (repl_table.empty() == repl_db.empty()) {
            std::cerr << "vanilla: repl needs exactly one of TABLE or --db\n" << repl->help();
            return cli::kExitFailure;
        }
        return cli::run_repl({repl_table, repl_db}, std::cin, std::cout, std::cerr,
                             isatty(STDIN_FILENO) != 0);
    }
    if (*serve) {
        const bool tcp_ok = cli::is_listen_address(serve_options.tcp);
        const bool ws_ok = !serve_options.ws || cli::is_listen_address(*serve_options.ws);
        if (!tcp_ok || !ws_ok) {
            std::cerr << "vanilla: bad listen address '"
                      << (tcp_ok ? *serve_options.ws : serve_options.tcp)
                      << "', expected HOST:PORT\n"
                      << serve->help();
            return cli::kExitFailure;
        }
        return cli::run_serve(serve_options, std::cerr);
    }
    return cli::kExitFailure;
}
