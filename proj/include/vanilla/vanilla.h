/*
 * SPDX-FileCopyrightText: 2026 The Vanilla Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * C interface to the vanilla text-service library.
 *
 * Every object is an opaque handle created by a *_new/_parse/_open style
 * call and released with the matching *_free. Functions that can fail
 * return a vanilla_status; on failure vanilla_last_error() describes the
 * problem until the next call on the same thread. All strings are UTF-8.
 * Strings returned as `const char *` are owned by the handle they came
 * from and stay valid until that handle is freed (or, for sessions, until
 * the next call that produces output).
 */

#ifndef VANILLA_VANILLA_H
#define VANILLA_VANILLA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(VANILLA_BUILDING_LIBRARY)
#    define VANILLA_API __declspec(dllexport)
#  else
#    define VANILLA_API __declspec(dllimport)
#  endif
#else
#  define VANILLA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vanilla_status {
    VANILLA_OK = 0,
    VANILLA_E_INVALID_ARGUMENT = 1,
    VANILLA_E_PARSE = 2,          /* table has fatal diagnostics */
    VANILLA_E_IO = 3,
    VANILLA_E_SCHEMA_MISMATCH = 4,
    VANILLA_E_BAD_PATTERN = 5,
    VANILLA_E_WINDOW_HIDDEN = 6,
    VANILLA_E_BIND = 7,
    VANILLA_E_DIR_UNREADABLE = 8,
    VANILLA_E_INTERNAL = 99
} vanilla_status;

typedef enum vanilla_severity {
    VANILLA_SEVERITY_FATAL = 0,
    VANILLA_SEVERITY_WARNING = 1
} vanilla_severity;

typedef enum vanilla_key_kind {
    VANILLA_KEY_CHAR = 0,
    VANILLA_KEY_SPACE = 1,
    VANILLA_KEY_ESCAPE = 2,
    VANILLA_KEY_BACKSPACE = 3,
    VANILLA_KEY_ENTER = 4
} vanilla_key_kind;

enum {
    VANILLA_MOD_SHIFT = 1,
    VANILLA_MOD_CTRL = 2,
    VANILLA_MOD_ALT = 4
};

typedef struct vanilla_key_event {
    vanilla_key_kind kind;
    uint32_t codepoint; /* used when kind == VANILLA_KEY_CHAR */
    unsigned modifiers; /* VANILLA_MOD_* bits */
} vanilla_key_event;

typedef struct vanilla_diagnostic {
    vanilla_severity severity;
    size_t line; /* 1-based, 0 for table-level findings */
    const char *message;
} vanilla_diagnostic;

typedef struct vanilla_table vanilla_table;
typedef struct vanilla_diagnostics vanilla_diagnostics;
typedef struct vanilla_store vanilla_store;
typedef struct vanilla_session vanilla_session;
typedef struct vanilla_output vanilla_output;
typedef struct vanilla_server vanilla_server;

typedef void (*vanilla_text_callback)(const char *text, void *user);
typedef void (*vanilla_match_callback)(const char *sequence, const char *const *texts,
                                       size_t text_count, void *user);

VANILLA_API const char *vanilla_version(void);
VANILLA_API const char *vanilla_last_error(void);
VANILLA_API const char *vanilla_status_name(vanilla_status status);

/* ---- tables ------------------------------------------------------------ */

/* Parses .cin source. *out is set whenever parsing ran, even when the
 * result is VANILLA_E_PARSE, so the diagnostics can be inspected. */
VANILLA_API vanilla_status vanilla_table_parse(const char *source, size_t length,
                                               vanilla_table **out);
/* Like vanilla_table_parse on a file's contents; VANILLA_E_IO when the file
 * cannot be read (and *out stays NULL). */
VANILLA_API vanilla_status vanilla_table_load(const char *path, vanilla_table **out);
VANILLA_API void vanilla_table_free(vanilla_table *table);

VANILLA_API int vanilla_table_ok(const vanilla_table *table);
VANILLA_API size_t vanilla_table_entry_count(const vanilla_table *table);
VANILLA_API const char *vanilla_table_ename(const vanilla_table *table);
VANILLA_API const char *vanilla_table_cname(const vanilla_table *table);
/* Diagnostics produced while parsing; borrowed from the table. */
VANILLA_API const vanilla_diagnostics *vanilla_table_diagnostics(const vanilla_table *table);
/* Semantic warnings for a parsed table; caller frees the list. */
VANILLA_API vanilla_status vanilla_table_validate(const vanilla_table *table,
                                                  vanilla_diagnostics **out);
/* Serialized .cin text; release with vanilla_string_free. */
VANILLA_API vanilla_status vanilla_table_serialize(const vanilla_table *table, char **out,
                                                   size_t *length);
VANILLA_API void vanilla_string_free(char *text);

VANILLA_API size_t vanilla_diagnostics_count(const vanilla_diagnostics *list);
VANILLA_API vanilla_status vanilla_diagnostics_get(const vanilla_diagnostics *list,
                                                   size_t index, vanilla_diagnostic *out);
/* "severity:line: message"; owned by the list. */
VANILLA_API const char *vanilla_diagnostics_format(const vanilla_diagnostics *list,
                                                   size_t index);
VANILLA_API void vanilla_diagnostics_free(vanilla_diagnostics *list);

/* ---- stores ------------------------------------------------------------ */

VANILLA_API vanilla_status vanilla_store_build(const vanilla_table *table,
                                               vanilla_store **out);
VANILLA_API vanilla_status vanilla_store_import(const vanilla_table *table, const char *path,
                                                vanilla_store **out);
/* expected_schema_version <= 0 selects the library's current version. */
VANILLA_API vanilla_status vanilla_store_open(const char *path, int expected_schema_version,
                                              vanilla_store **out);
VANILLA_API void vanilla_store_free(vanilla_store *store);
VANILLA_API int vanilla_store_schema_version(void);

VANILLA_API size_t vanilla_store_entry_count(const vanilla_store *store);
VANILLA_API vanilla_status vanilla_store_lookup(const vanilla_store *store, const char *sequence,
                                                vanilla_text_callback callback, void *user);
VANILLA_API vanilla_status vanilla_store_has_extensions(const vanilla_store *store,
                                                        const char *sequence, int *out);
VANILLA_API vanilla_status vanilla_store_match_prefix(const vanilla_store *store,
                                                      const char *prefix,
                                                      vanilla_match_callback callback,
                                                      void *user);
VANILLA_API vanilla_status vanilla_store_match_glob(const vanilla_store *store,
                                                    const char *pattern,
                                                    vanilla_match_callback callback, void *user);

/* ---- sessions ---------------------------------------------------------- */

/* The session keeps its own reference to the store's data, so the store
 * handle may be freed first. */
VANILLA_API vanilla_status vanilla_session_new(const vanilla_store *store,
                                               vanilla_session **out);
VANILLA_API void vanilla_session_free(vanilla_session *session);

VANILLA_API vanilla_status vanilla_session_process_key(vanilla_session *session,
                                                       const vanilla_key_event *event,
                                                       vanilla_output **out);
/* direction: 0 = next, 1 = prev. VANILLA_E_WINDOW_HIDDEN without a window. */
VANILLA_API vanilla_status vanilla_session_page(vanilla_session *session, int direction,
                                                vanilla_output **out);
/* Current composing text; owned by the session until its next call. */
VANILLA_API const char *vanilla_session_composing(vanilla_session *session);

VANILLA_API void vanilla_output_free(vanilla_output *output);
VANILLA_API int vanilla_output_handled(const vanilla_output *output);
VANILLA_API int vanilla_output_beep(const vanilla_output *output);
VANILLA_API size_t vanilla_output_commit_count(const vanilla_output *output);
VANILLA_API const char *vanilla_output_commit(const vanilla_output *output, size_t index);
VANILLA_API const char *vanilla_output_composing(const vanilla_output *output);
VANILLA_API size_t vanilla_output_cursor(const vanilla_output *output);
VANILLA_API int vanilla_output_window_visible(const vanilla_output *output);
VANILLA_API size_t vanilla_output_candidate_count(const vanilla_output *output);
VANILLA_API const char *vanilla_output_candidate_label(const vanilla_output *output,
                                                       size_t index);
VANILLA_API const char *vanilla_output_candidate_text(const vanilla_output *output,
                                                      size_t index);
VANILLA_API size_t vanilla_output_page(const vanilla_output *output);
VANILLA_API size_t vanilla_output_page_count(const vanilla_output *output);

/* ---- server ------------------------------------------------------------ */

typedef struct vanilla_server_config {
    const char *tcp_listen;     /* "host:port"; NULL means 127.0.0.1:9876 */
    const char *ws_listen;      /* NULL disables the WebSocket listener */
    const char *tables_dir;     /* required */
    const char *default_module; /* may be NULL */
    size_t max_sessions_per_conn; /* 0 means 16 */
    size_t threads;             /* 0 picks from the hardware */
    vanilla_text_callback notify; /* table discovery messages; may be NULL */
    void *notify_user;
} vanilla_server_config;

/* Discovers tables, binds and starts serving in background threads. */
VANILLA_API vanilla_status vanilla_server_start(const vanilla_server_config *config,
                                                vanilla_server **out);
VANILLA_API uint16_t vanilla_server_tcp_port(const vanilla_server *server);
/* 0 when no WebSocket listener was configured. */
VANILLA_API uint16_t vanilla_server_ws_port(const vanilla_server *server);
/* Number of modules the server discovered. */
VANILLA_API size_t vanilla_server_module_count(const vanilla_server *server);
VANILLA_API void vanilla_server_wait(vanilla_server *server);
VANILLA_API void vanilla_server_shutdown(vanilla_server *server, uint32_t grace_ms);
/* Shuts down with zero grace if still running. */
VANILLA_API void vanilla_server_free(vanilla_server *server);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VANILLA_VANILLA_H */
