// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "vanilla/vanilla.h"

#include "cintable/cintable.hpp"
#include "core/error.hpp"
#include "engine/session.hpp"
#include "server/server.hpp"
#include "storage/store.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>

using namespace vanilla;

struct vanilla_diagnostics {
    std::vector<Diagnostic> items;
    std::vector<std::string> formatted;

    explicit vanilla_diagnostics(std::vector<Diagnostic> list) : items(std::move(list)) {
        for (const auto &d : items) {
            formatted.push_back(format(d));
        }
    }
};

struct vanilla_table {
    ParseResult result;
    vanilla_diagnostics diagnostics;

    explicit vanilla_table(ParseResult parsed)
        : result(std::move(parsed)), diagnostics(result.diagnostics) {}
};

struct vanilla_store {
    std::shared_ptr<const TableStore> store;
};

struct vanilla_session {
    Session session;
    std::string composing;
};

struct vanilla_output {
    EngineOutput output;
};

struct vanilla_server {
    std::unique_ptr<server::Server> server;
};

namespace {

thread_local std::string last_error;

vanilla_status to_status(Errc code) {
    switch (code) {
    case Errc::InvalidArgument:
    case Errc::DuplicateId:
    case Errc::BadFrame:
        return VANILLA_E_INVALID_ARGUMENT;
    case Errc::DirUnreadable:
        return VANILLA_E_DIR_UNREADABLE;
    case Errc::IoFailure:
        return VANILLA_E_IO;
    case Errc::SchemaMismatch:
        return VANILLA_E_SCHEMA_MISMATCH;
    case Errc::BadPattern:
        return VANILLA_E_BAD_PATTERN;
    case Errc::WindowHidden:
        return VANILLA_E_WINDOW_HIDDEN;
    case Errc::BindFailure:
        return VANILLA_E_BIND;
    }
    return VANILLA_E_INTERNAL;
}

vanilla_status fail(vanilla_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <class F> vanilla_status guarded(F &&body) noexcept {
    try {
        last_error.clear();
        return body();
    } catch (const Error &e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc &) {
        return fail(VANILLA_E_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(VANILLA_E_INTERNAL, e.what());
    } catch (...) {
        return fail(VANILLA_E_INTERNAL, "unknown error");
    }
}

#define VANILLA_REQUIRE(cond)                                                        \
    do {                                                                             \
        if (!(cond)) {                                                               \
            return fail(VANILLA_E_INVALID_ARGUMENT, "invalid argument: " #cond);      \
        }                                                                            \
    } while (false)

vanilla_status parsed_table(ParseResult parsed, vanilla_table **out) {
    *out = new vanilla_table(std::move(parsed));
    if (!(*out)->result.ok()) {
        return fail(VANILLA_E_PARSE, "table has fatal diagnostics");
    }
    return VANILLA_OK;
}

vanilla_status emit_matches(const std::vector<SequenceMatch> &matches,
                            vanilla_match_callback callback, void *user) {
    std::vector<const char *> texts;
    for (const auto &m : matches) {
        texts.clear();
        for (const auto &t : m.texts) {
            texts.push_back(t.c_str());
        }
        callback(m.sequence.c_str(), texts.data(), texts.size(), user);
    }
    return VANILLA_OK;
}

vanilla_status make_output(EngineOutput output, vanilla_output **out) {
    *out = new vanilla_output{std::move(output)};
    return VANILLA_OK;
}

const Candidate *candidate_at(const vanilla_output *o, size_t index) {
    if (o == nullptr || !o->output.window || index >= o->output.window->items.size()) {
        return nullptr;
    }
    return &o->output.window->items[index];
}

} // namespace

extern "C" {

const char *vanilla_version(void) { return "1.0.0"; }

const char *vanilla_last_error(void) { return last_error.c_str(); }

const char *vanilla_status_name(vanilla_status status) {
    switch (status) {
    case VANILLA_OK:
        return "ok";
    case VANILLA_E_INVALID_ARGUMENT:
        return "invalid_argument";
    case VANILLA_E_PARSE:
        return "parse_error";
    case VANILLA_E_IO:
        return "io_failure";
    case VANILLA_E_SCHEMA_MISMATCH:
        return "schema_mismatch";
    case VANILLA_E_BAD_PATTERN:
        return "bad_pattern";
    case VANILLA_E_WINDOW_HIDDEN:
        return "window_hidden";
    case VANILLA_E_BIND:
        return "bind_failure";
    case VANILLA_E_DIR_UNREADABLE:
        return "dir_unreadable";
    case VANILLA_E_INTERNAL:
        return "internal";
    }
    return "unknown";
}

vanilla_status vanilla_table_parse(const char *source, size_t length, vanilla_table **out) {
    return guarded([&] {
        VANILLA_REQUIRE(out != nullptr);
        *out = nullptr;
        VANILLA_REQUIRE(source != nullptr || length == 0);
        return parsed_table(parse_cin(std::string_view(source == nullptr ? "" : source, length)),
                            out);
    });
}

vanilla_status vanilla_table_load(const char *path, vanilla_table **out) {
    return guarded([&] {
        VANILLA_REQUIRE(out != nullptr);
        *out = nullptr;
        VANILLA_REQUIRE(path != nullptr);
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            return fail(VANILLA_E_IO, std::string(path) + ": cannot open");
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        if (in.bad()) {
            return fail(VANILLA_E_IO, std::string(path) + ": read error");
        }
        return parsed_table(parse_cin(buffer.str()), out);
    });
}

void vanilla_table_free(vanilla_table *table) { delete table; }

int vanilla_table_ok(const vanilla_table *table) {
    return table != nullptr && table->result.ok() ? 1 : 0;
}

size_t vanilla_table_entry_count(const vanilla_table *table) {
    return table == nullptr ? 0 : table->result.table.chardefs.size();
}

const char *vanilla_table_ename(const vanilla_table *table) {
    return table == nullptr ? "" : table->result.table.ename.c_str();
}

const char *vanilla_table_cname(const vanilla_table *table) {
    return table == nullptr ? "" : table->result.table.cname.c_str();
}

const vanilla_diagnostics *vanilla_table_diagnostics(const vanilla_table *table) {
    return table == nullptr ? nullptr : &table->diagnostics;
}

vanilla_status vanilla_table_validate(const vanilla_table *table, vanilla_diagnostics **out) {
    return guarded([&] {
        VANILLA_REQUIRE(table != nullptr && out != nullptr);
        *out = new vanilla_diagnostics(validate(table->result.table));
        return VANILLA_OK;
    });
}

vanilla_status vanilla_table_serialize(const vanilla_table *table, char **out, size_t *length) {
    return guarded([&] {
        VANILLA_REQUIRE(table != nullptr && out != nullptr);
        const auto text = serialize_cin(table->result.table);
        auto *buffer = static_cast<char *>(std::malloc(text.size() + 1));
        if (buffer == nullptr) {
            throw std::bad_alloc();
        }
        std::memcpy(buffer, text.c_str(), text.size() + 1);
        *out = buffer;
        if (length != nullptr) {
            *length = text.size();
        }
        return VANILLA_OK;
    });
}

void vanilla_string_free(char *text) { std::free(text); }

size_t vanilla_diagnostics_count(const vanilla_diagnostics *list) {
    return list == nullptr ? 0 : list->items.size();
}

vanilla_status vanilla_diagnostics_get(const vanilla_diagnostics *list, size_t index,
                                       vanilla_diagnostic *out) {
    return guarded([&] {
        VANILLA_REQUIRE(list != nullptr && out != nullptr && index < list->items.size());
        const auto &d = list->items[index];
        out->severity = d.severity == Severity::Fatal ? VANILLA_SEVERITY_FATAL
                                                      : VANILLA_SEVERITY_WARNING;
        out->line = d.line;
        out->message = d.message.c_str();
        return VANILLA_OK;
    });
}

const char *vanilla_diagnostics_format(const vanilla_diagnostics *list, size_t index) {
    if (list == nullptr || index >= list->formatted.size()) {
        return nullptr;
    }
    return list->formatted[index].c_str();
}

void vanilla_diagnostics_free(vanilla_diagnostics *list) { delete list; }

vanilla_status vanilla_store_build(const vanilla_table *table, vanilla_store **out) {
    return guarded([&] {
        VANILLA_REQUIRE(out != nullptr);
        *out = nullptr;
        VANILLA_REQUIRE(table != nullptr);
        if (!table->result.ok()) {
            return fail(VANILLA_E_PARSE, "table has fatal diagnostics");
        }
        *out = new vanilla_store{build_store(table->result.table)};
        return VANILLA_OK;
    });
}

vanilla_status vanilla_store_import(const vanilla_table *table, const char *path,
                                    vanilla_store **out) {
    return guarded([&] {
        VANILLA_REQUIRE(out != nullptr);
        *out = nullptr;
        VANILLA_REQUIRE(table != nullptr && path != nullptr);
        if (!table->result.ok()) {
            return fail(VANILLA_E_PARSE, "table has fatal diagnostics");
        }
        *out = new vanilla_store{import_table(table->result.table, path)};
        return VANILLA_OK;
    });
}

vanilla_status vanilla_store_open(const char *path, int expected_schema_version,
                                  vanilla_store **out) {
    return guarded([&] {
        VANILLA_REQUIRE(out != nullptr);
        *out = nullptr;
        VANILLA_REQUIRE(path != nullptr);
        const int version =
            expected_schema_version <= 0 ? kStoreSchemaVersion : expected_schema_version;
        *out = new vanilla_store{open_store(path, version)};
        return VANILLA_OK;
    });
}

void vanilla_store_free(vanilla_store *store) { delete store; }

int vanilla_store_schema_version(void) { return kStoreSchemaVersion; }

size_t vanilla_store_entry_count(const vanilla_store *store) {
    if (store == nullptr) {
        return 0;
    }
    try {
        return store->store->entry_count();
    } catch (...) {
        return 0;
    }
}

vanilla_status vanilla_store_lookup(const vanilla_store *store, const char *sequence,
                                    vanilla_text_callback callback, void *user) {
    return guarded([&] {
        VANILLA_REQUIRE(store != nullptr && sequence != nullptr && callback != nullptr);
        for (const auto &text : store->store->lookup_exact(sequence)) {
            callback(text.c_str(), user);
        }
        return VANILLA_OK;
    });
}

vanilla_status vanilla_store_has_extensions(const vanilla_store *store, const char *sequence,
                                            int *out) {
    return guarded([&] {
        VANILLA_REQUIRE(store != nullptr && sequence != nullptr && out != nullptr);
        *out = store->store->has_extensions(sequence) ? 1 : 0;
        return VANILLA_OK;
    });
}

vanilla_status vanilla_store_match_prefix(const vanilla_store *store, const char *prefix,
                                          vanilla_match_callback callback, void *user) {
    return guarded([&] {
        VANILLA_REQUIRE(store != nullptr && prefix != nullptr && callback != nullptr);
        return emit_matches(store->store->match_prefix(prefix), callback, user);
    });
}

vanilla_status vanilla_store_match_glob(const vanilla_store *store, const char *pattern,
                                        vanilla_match_callback callback, void *user) {
    return guarded([&] {
        VANILLA_REQUIRE(store != nullptr && pattern != nullptr && callback != nullptr);
        return emit_matches(store->store->match_glob(QueryPattern::parse(pattern)), callback,
                            user);
    });
}

vanilla_status vanilla_session_new(const vanilla_store *store, vanilla_session **out) {
    return guarded([&] {
        VANILLA_REQUIRE(out != nullptr);
        *out = nullptr;
        VANILLA_REQUIRE(store != nullptr);
        *out = new vanilla_session{Session(store->store), {}};
        return VANILLA_OK;
    });
}

void vanilla_session_free(vanilla_session *session) { delete session; }

vanilla_status vanilla_session_process_key(vanilla_session *session,
                                           const vanilla_key_event *event,
                                           vanilla_output **out) {
    return guarded([&] {
        VANILLA_REQUIRE(out != nullptr);
        *out = nullptr;
        VANILLA_REQUIRE(session != nullptr && event != nullptr);
        const auto mods = Modifiers::from_bits(static_cast<std::uint8_t>(event->modifiers));
        std::optional<KeyEvent> key;
        switch (event->kind) {
        case VANILLA_KEY_CHAR:
            key = KeyEvent::character(static_cast<char32_t>(event->codepoint), mods);
            break;
        case VANILLA_KEY_SPACE:
            key = KeyEvent::named(NamedKey::Space, mods);
            break;
        case VANILLA_KEY_ESCAPE:
            key = KeyEvent::named(NamedKey::Escape, mods);
            break;
        case VANILLA_KEY_BACKSPACE:
            key = KeyEvent::named(NamedKey::Backspace, mods);
            break;
        case VANILLA_KEY_ENTER:
            key = KeyEvent::named(NamedKey::Enter, mods);
            break;
        }
        VANILLA_REQUIRE(key.has_value());
        return make_output(session->session.process_key(*key), out);
    });
}

vanilla_status vanilla_session_page(vanilla_session *session, int direction,
                                    vanilla_output **out) {
    return guarded([&] {
        VANILLA_REQUIRE(out != nullptr);
        *out = nullptr;
        VANILLA_REQUIRE(session != nullptr && (direction == 0 || direction == 1));
        return make_output(session->session.page(direction == 0 ? PageDirection::Next
                                                                : PageDirection::Prev),
                           out);
    });
}

const char *vanilla_session_composing(vanilla_session *session) {
    if (session == nullptr) {
        return "";
    }
    session->composing = session->session.view().composing;
    return session->composing.c_str();
}

void vanilla_output_free(vanilla_output *output) { delete output; }

int vanilla_output_handled(const vanilla_output *o) {
    return o != nullptr && o->output.handled ? 1 : 0;
}

int vanilla_output_beep(const vanilla_output *o) { return o != nullptr && o->output.beep ? 1 : 0; }

size_t vanilla_output_commit_count(const vanilla_output *o) {
    return o == nullptr ? 0 : o->output.commits.size();
}

const char *vanilla_output_commit(const vanilla_output *o, size_t index) {
    if (o == nullptr || index >= o->output.commits.size()) {
        return nullptr;
    }
    return o->output.commits[index].c_str();
}

const char *vanilla_output_composing(const vanilla_output *o) {
    return o == nullptr ? "" : o->output.view.composing.c_str();
}

size_t vanilla_output_cursor(const vanilla_output *o) {
    return o == nullptr ? 0 : o->output.view.cursor;
}

int vanilla_output_window_visible(const vanilla_output *o) {
    return o != nullptr && o->output.window ? 1 : 0;
}

size_t vanilla_output_candidate_count(const vanilla_output *o) {
    return o == nullptr || !o->output.window ? 0 : o->output.window->items.size();
}

const char *vanilla_output_candidate_label(const vanilla_output *o, size_t index) {
    const auto *c = candidate_at(o, index);
    return c == nullptr ? nullptr : c->label.c_str();
}

const char *vanilla_output_candidate_text(const vanilla_output *o, size_t index) {
    const auto *c = candidate_at(o, index);
    return c == nullptr ? nullptr : c->text.c_str();
}

size_t vanilla_output_page(const vanilla_output *o) {
    return o == nullptr || !o->output.window ? 0 : o->output.window->page;
}

size_t vanilla_output_page_count(const vanilla_output *o) {
    return o == nullptr || !o->output.window ? 0 : o->output.window->page_count;
}

vanilla_status vanilla_server_start(const vanilla_server_config *config, vanilla_server **out) {
    return guarded([&] {
        VANILLA_REQUIRE(out != nullptr);
        *out = nullptr;
        VANILLA_REQUIRE(config != nullptr && config->tables_dir != nullptr);
        server::ServerConfig cfg;
        if (config->tcp_listen != nullptr) {
            auto endpoint = server::Endpoint::parse(config->tcp_listen);
            if (!endpoint) {
                return fail(VANILLA_E_INVALID_ARGUMENT,
                            std::string("bad listen address '") + config->tcp_listen + "'");
            }
            cfg.tcp_listen = *endpoint;
        }
        if (config->ws_listen != nullptr) {
            auto endpoint = server::Endpoint::parse(config->ws_listen);
            if (!endpoint) {
                return fail(VANILLA_E_INVALID_ARGUMENT,
                            std::string("bad listen address '") + config->ws_listen + "'");
            }
            cfg.ws_listen = *endpoint;
        }
        cfg.tables_dir = config->tables_dir;
        if (config->default_module != nullptr) {
            cfg.default_module = config->default_module;
        }
        if (config->max_sessions_per_conn != 0) {
            cfg.max_sessions_per_conn = config->max_sessions_per_conn;
        }
        cfg.threads = config->threads;
        if (config->notify != nullptr) {
            cfg.context.notify = [cb = config->notify, user = config->notify_user](
                                     std::string_view message) {
                const std::string text(message);
                cb(text.c_str(), user);
            };
        }
        auto srv = std::make_unique<server::Server>(std::move(cfg));
        srv->start();
        *out = new vanilla_server{std::move(srv)};
        return VANILLA_OK;
    });
}

uint16_t vanilla_server_tcp_port(const vanilla_server *s) {
    return s == nullptr ? 0 : s->server->tcp_port();
}

uint16_t vanilla_server_ws_port(const vanilla_server *s) {
    return s == nullptr ? 0 : s->server->ws_port().value_or(0);
}

size_t vanilla_server_module_count(const vanilla_server *s) {
    return s == nullptr ? 0 : s->server->registry().size();
}

void vanilla_server_wait(vanilla_server *s) {
    if (s != nullptr) {
        s->server->wait();
    }
}

void vanilla_server_shutdown(vanilla_server *s, uint32_t grace_ms) {
    if (s != nullptr) {
        s->server->shutdown(std::chrono::milliseconds(grace_ms));
    }
}

void vanilla_server_free(vanilla_server *s) { delete s; }

} // extern "C"
