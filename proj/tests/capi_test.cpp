// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its public header only.

#include "fixtures.hpp"

#include <vanilla/vanilla.h>

#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <map>
#include <string>
#include <vector>

namespace {

using vanilla::test::kT1;

vanilla_table *parse(std::string_view source) {
    vanilla_table *table = nullptr;
    vanilla_table_parse(source.data(), source.size(), &table);
    REQUIRE(table != nullptr);
    return table;
}

void collect_text(const char *text, void *user) {
    static_cast<std::vector<std::string> *>(user)->push_back(text);
}

void collect_match(const char *sequence, const char *const *texts, size_t count, void *user) {
    auto &out = *static_cast<std::map<std::string, std::vector<std::string>> *>(user);
    for (size_t i = 0; i < count; ++i) {
        out[sequence].push_back(texts[i]);
    }
}

vanilla_output *press(vanilla_session *session, vanilla_key_kind kind, char32_t cp = 0) {
    const vanilla_key_event event{kind, static_cast<uint32_t>(cp), 0};
    vanilla_output *out = nullptr;
    REQUIRE(vanilla_session_process_key(session, &event, &out) == VANILLA_OK);
    return out;
}

} // namespace

TEST_CASE("status names and version") {
    CHECK(std::string(vanilla_status_name(VANILLA_OK)) == "ok");
    CHECK(std::string(vanilla_status_name(VANILLA_E_WINDOW_HIDDEN)) == "window_hidden");
    CHECK(std::strlen(vanilla_version()) > 0);
    CHECK(vanilla_store_schema_version() > 0);
}

TEST_CASE("tables parse, validate and serialize") {
    vanilla_table *table = parse(kT1);
    CHECK(vanilla_table_ok(table));
    CHECK(vanilla_table_entry_count(table) == 4);
    CHECK(std::string(vanilla_table_ename(table)) == "demo");
    CHECK(std::string(vanilla_table_cname(table)) == "Demo");
    CHECK(vanilla_diagnostics_count(vanilla_table_diagnostics(table)) == 0);

    vanilla_diagnostics *warnings = nullptr;
    REQUIRE(vanilla_table_validate(table, &warnings) == VANILLA_OK);
    CHECK(vanilla_diagnostics_count(warnings) == 0);
    vanilla_diagnostics_free(warnings);

    char *text = nullptr;
    size_t length = 0;
    REQUIRE(vanilla_table_serialize(table, &text, &length) == VANILLA_OK);
    CHECK(std::strlen(text) == length);
    vanilla_table *again = parse(std::string_view(text, length));
    CHECK(vanilla_table_entry_count(again) == 4);
    vanilla_string_free(text);
    vanilla_table_free(again);
    vanilla_table_free(table);
}

TEST_CASE("parse failures keep their diagnostics") {
    const auto source = vanilla::test::read_file(vanilla::test::fixture("bad/unknown_key.cin"));
    vanilla_table *table = nullptr;
    CHECK(vanilla_table_parse(source.data(), source.size(), &table) == VANILLA_E_PARSE);
    REQUIRE(table != nullptr);
    CHECK_FALSE(vanilla_table_ok(table));
    const auto *diags = vanilla_table_diagnostics(table);
    REQUIRE(vanilla_diagnostics_count(diags) >= 1);
    vanilla_diagnostic d{};
    REQUIRE(vanilla_diagnostics_get(diags, 0, &d) == VANILLA_OK);
    CHECK(d.severity == VANILLA_SEVERITY_FATAL);
    CHECK(d.line == 7);
    CHECK(std::string(vanilla_diagnostics_format(diags, 0)) == "fatal:7: key 'c' not in keynames");
    CHECK(vanilla_diagnostics_get(diags, 99, &d) == VANILLA_E_INVALID_ARGUMENT);

    vanilla_store *store = nullptr;
    CHECK(vanilla_store_build(table, &store) == VANILLA_E_PARSE);
    CHECK(store == nullptr);
    vanilla_table_free(table);
}

TEST_CASE("load reports unreadable files") {
    vanilla_table *table = nullptr;
    CHECK(vanilla_table_load("/nonexistent/x.cin", &table) == VANILLA_E_IO);
    CHECK(table == nullptr);
    CHECK(std::strlen(vanilla_last_error()) > 0);
    CHECK(vanilla_table_load(vanilla::test::fixture("tables/T1.cin").c_str(), &table) ==
          VANILLA_OK);
    vanilla_table_free(table);
}

TEST_CASE("null arguments are rejected") {
    CHECK(vanilla_table_parse(nullptr, 0, nullptr) == VANILLA_E_INVALID_ARGUMENT);
    vanilla_store *store = nullptr;
    CHECK(vanilla_store_build(nullptr, &store) == VANILLA_E_INVALID_ARGUMENT);
    CHECK(vanilla_session_process_key(nullptr, nullptr, nullptr) == VANILLA_E_INVALID_ARGUMENT);
    vanilla_table_free(nullptr);
    vanilla_store_free(nullptr);
    vanilla_session_free(nullptr);
    vanilla_output_free(nullptr);
    vanilla_server_free(nullptr);
}

TEST_CASE("store queries through callbacks") {
    vanilla::test::TempDir dir;
    vanilla_table *table = parse(kT1);
    vanilla_store *memory = nullptr;
    REQUIRE(vanilla_store_build(table, &memory) == VANILLA_OK);
    vanilla_store *disk = nullptr;
    const auto db = (dir / "t1.db").string();
    REQUIRE(vanilla_store_import(table, db.c_str(), &disk) == VANILLA_OK);
    vanilla_store_free(disk);
    REQUIRE(vanilla_store_open(db.c_str(), 0, &disk) == VANILLA_OK);

    for (auto *store : {memory, disk}) {
        CHECK(vanilla_store_entry_count(store) == 4);
        std::vector<std::string> texts;
        REQUIRE(vanilla_store_lookup(store, "a", collect_text, &texts) == VANILLA_OK);
        CHECK(texts == std::vector<std::string>{"日", "月"});
        int more = 0;
        REQUIRE(vanilla_store_has_extensions(store, "a", &more) == VANILLA_OK);
        CHECK(more == 1);
        REQUIRE(vanilla_store_has_extensions(store, "ab", &more) == VANILLA_OK);
        CHECK(more == 0);

        std::map<std::string, std::vector<std::string>> matches;
        REQUIRE(vanilla_store_match_glob(store, "?", collect_match, &matches) == VANILLA_OK);
        CHECK(matches.size() == 2);
        CHECK(matches["b"] == std::vector<std::string>{"木"});
        matches.clear();
        REQUIRE(vanilla_store_match_prefix(store, "a", collect_match, &matches) == VANILLA_OK);
        CHECK(matches.size() == 2);
        CHECK(vanilla_store_match_glob(store, "", collect_match, &matches) ==
              VANILLA_E_BAD_PATTERN);
    }
    vanilla_store_free(memory);
    vanilla_store_free(disk);
    vanilla_table_free(table);

    vanilla_store *none = nullptr;
    CHECK(vanilla_store_open((dir / "missing.db").c_str(), 0, &none) == VANILLA_E_IO);
    REQUIRE(vanilla_store_open(db.c_str(), vanilla_store_schema_version() + 1, &none) ==
            VANILLA_E_SCHEMA_MISMATCH);
    CHECK(std::string(vanilla_last_error()).find("schema version mismatch") != std::string::npos);
}

TEST_CASE("sessions compose and commit") {
    vanilla_table *table = parse(kT1);
    vanilla_store *store = nullptr;
    REQUIRE(vanilla_store_build(table, &store) == VANILLA_OK);
    vanilla_table_free(table);
    vanilla_session *session = nullptr;
    REQUIRE(vanilla_session_new(store, &session) == VANILLA_OK);
    vanilla_store_free(store); // the session keeps its own reference

    vanilla_output *out = nullptr;
    CHECK(vanilla_session_page(session, 0, &out) == VANILLA_E_WINDOW_HIDDEN);
    CHECK(out == nullptr);

    vanilla_output_free(press(session, VANILLA_KEY_CHAR, U'a'));
    out = press(session, VANILLA_KEY_CHAR, U'b');
    CHECK(std::string(vanilla_output_composing(out)) == "AB");
    CHECK(std::string(vanilla_session_composing(session)) == "AB");
    vanilla_output_free(out);
    out = press(session, VANILLA_KEY_SPACE);
    REQUIRE(vanilla_output_commit_count(out) == 1);
    CHECK(std::string(vanilla_output_commit(out, 0)) == "明");
    CHECK(vanilla_output_commit(out, 1) == nullptr);
    vanilla_output_free(out);

    vanilla_output_free(press(session, VANILLA_KEY_CHAR, U'a'));
    out = press(session, VANILLA_KEY_SPACE);
    CHECK(vanilla_output_window_visible(out));
    REQUIRE(vanilla_output_candidate_count(out) == 2);
    CHECK(std::string(vanilla_output_candidate_label(out, 1)) == "2");
    CHECK(std::string(vanilla_output_candidate_text(out, 1)) == "月");
    CHECK(vanilla_output_page(out) == 0);
    CHECK(vanilla_output_page_count(out) == 1);
    vanilla_output_free(out);
    REQUIRE(vanilla_session_page(session, 0, &out) == VANILLA_OK);
    vanilla_output_free(out);

    out = press(session, VANILLA_KEY_CHAR, U'2');
    CHECK(std::string(vanilla_output_commit(out, 0)) == "月");
    vanilla_output_free(out);

    out = press(session, VANILLA_KEY_CHAR, U'z');
    CHECK_FALSE(vanilla_output_handled(out));
    CHECK_FALSE(vanilla_output_beep(out));
    vanilla_output_free(out);
    vanilla_session_free(session);
}

TEST_CASE("server lifecycle") {
    vanilla_server_config config{};
    config.tcp_listen = "127.0.0.1:0";
    const auto tables = vanilla::test::fixture("tables").string();
    config.tables_dir = tables.c_str();
    std::vector<std::string> notes;
    config.notify = collect_text;
    config.notify_user = &notes;

    vanilla_server *server = nullptr;
    REQUIRE(vanilla_server_start(&config, &server) == VANILLA_OK);
    CHECK(vanilla_server_module_count(server) == 1);
    CHECK(vanilla_server_ws_port(server) == 0);
    const auto port = vanilla_server_tcp_port(server);
    REQUIRE(port != 0);

    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr *>(&addr), sizeof addr) == 0);
    const std::string hello = "{\"type\":\"hello\",\"version\":\"1\"}\n";
    REQUIRE(::write(fd, hello.data(), hello.size()) == static_cast<ssize_t>(hello.size()));
    std::string reply;
    char c = 0;
    while (::read(fd, &c, 1) == 1 && c != '\n') {
        reply += c;
    }
    CHECK(reply.starts_with("{\"type\":\"welcome\""));
    ::close(fd);

    config.tcp_listen = "127.0.0.1:0";
    vanilla_server *second = nullptr;
    std::string taken = "127.0.0.1:" + std::to_string(port);
    config.tcp_listen = taken.c_str();
    CHECK(vanilla_server_start(&config, &second) == VANILLA_E_BIND);
    CHECK(second == nullptr);

    vanilla_server_shutdown(server, 1000);
    vanilla_server_wait(server);
    vanilla_server_free(server);

    config.tcp_listen = "127.0.0.1:0";
    config.tables_dir = "/nonexistent/tables";
    CHECK(vanilla_server_start(&config, &second) == VANILLA_E_DIR_UNREADABLE);
    config.tables_dir = nullptr;
    CHECK(vanilla_server_start(&config, &second) == VANILLA_E_INVALID_ARGUMENT);
    config.tables_dir = tables.c_str();
    config.tcp_listen = "nonsense";
    CHECK(vanilla_server_start(&config, &second) == VANILLA_E_INVALID_ARGUMENT);
}
