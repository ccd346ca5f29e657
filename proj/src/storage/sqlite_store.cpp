// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "storage/store.hpp"

#include "core/error.hpp"

#include <sqlite3.h>

#include <charconv>
#include <map>
#include <mutex>
#include <optional>
#include <system_error>

namespace vanilla {
namespace {

namespace fs = std::filesystem;

constexpr const char *kSchema = R"sql(
CREATE TABLE meta(key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE keyname(rank INTEGER PRIMARY KEY, key TEXT NOT NULL, label TEXT NOT NULL);
CREATE TABLE chardef(rank INTEGER PRIMARY KEY, sequence TEXT NOT NULL, text TEXT NOT NULL);
CREATE INDEX chardef_sequence ON chardef(sequence, rank);
)sql";

struct DbCloser {
    void operator()(sqlite3 *db) const noexcept { sqlite3_close_v2(db); }
};
using Db = std::unique_ptr<sqlite3, DbCloser>;

class Statement {
public:
    Statement(sqlite3 *db, const char *sql, const fs::path &path) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
            throw Error(Errc::IoFailure, path.string() + ": " + sqlite3_errmsg(db));
        }
    }
    Statement(const Statement &) = delete;
    Statement &operator=(const Statement &) = delete;
    ~Statement() { sqlite3_finalize(stmt_); }

    // Rebinds from scratch; previous results are discarded.
    Statement &reset() {
        sqlite3_reset(stmt_);
        sqlite3_clear_bindings(stmt_);
        return *this;
    }
    Statement &bind(int index, std::string_view text) {
        sqlite3_bind_text(stmt_, index, text.data(), static_cast<int>(text.size()),
                          SQLITE_TRANSIENT);
        return *this;
    }
    Statement &bind(int index, std::int64_t value) {
        sqlite3_bind_int64(stmt_, index, value);
        return *this;
    }
    bool step() {
        const int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) {
            return true;
        }
        if (rc != SQLITE_DONE) {
            throw Error(Errc::IoFailure, sqlite3_errmsg(sqlite3_db_handle(stmt_)));
        }
        return false;
    }
    std::string text(int column) const {
        const auto *p = sqlite3_column_text(stmt_, column);
        const int n = sqlite3_column_bytes(stmt_, column);
        return p == nullptr ? std::string{}
                            : std::string(reinterpret_cast<const char *>(p),
                                          static_cast<std::size_t>(n));
    }
    std::int64_t integer(int column) const {
        return sqlite3_column_int64(stmt_, column);
    }

private:
    sqlite3_stmt *stmt_ = nullptr;
};

void exec(sqlite3 *db, const char *sql, const fs::path &path) {
    char *err = nullptr;
    if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string message = err != nullptr ? err : "sqlite error";
        sqlite3_free(err);
        throw Error(Errc::IoFailure, path.string() + ": " + message);
    }
}

Db open_db(const fs::path &path, int flags) {
    sqlite3 *raw = nullptr;
    const int rc = sqlite3_open_v2(path.c_str(), &raw, flags, nullptr);
    Db db(raw);
    if (rc != SQLITE_OK) {
        const std::string reason = raw != nullptr ? sqlite3_errmsg(raw)
                                                  : sqlite3_errstr(rc);
        throw Error(Errc::IoFailure, path.string() + ": " + reason);
    }
    return db;
}

// Upper bound of the key range holding every sequence that starts with
// `prefix`. Keys are below 0x7F, so appending DEL bounds the range.
std::string range_end(std::string_view prefix) {
    std::string end(prefix);
    end += '\x7F';
    return end;
}

// SQLite's GLOB shares '*' and '?' with our syntax but also treats '['
// as a character class opener.
std::string to_sqlite_glob(std::string_view pattern) {
    std::string out;
    for (char c : pattern) {
        if (c == '[') {
            out += "[[]";
        } else {
            out += c;
        }
    }
    return out;
}

bool to_bool(const std::string &s) { return s == "true"; }

class SqliteStore final : public TableStore {
public:
    SqliteStore(const fs::path &path, int expected_version)
        : path_(path),
          db_(open_db(path, SQLITE_OPEN_READONLY | SQLITE_OPEN_FULLMUTEX)) {
        load_meta(expected_version);
        Statement keys(db_.get(), "SELECT key, label FROM keyname ORDER BY rank", path_);
        while (keys.step()) {
            const auto key = keys.text(0);
            if (key.size() == 1) {
                info_.keynames.insert(key.front(), keys.text(1));
            }
        }
        Statement count(db_.get(), "SELECT count(*) FROM chardef", path_);
        count.step();
        entry_count_ = static_cast<std::size_t>(count.integer(0));

        lookup_.emplace(db_.get(),
                        "SELECT text FROM chardef WHERE sequence = ?1 ORDER BY rank",
                        path_);
        extension_.emplace(db_.get(),
                           "SELECT 1 FROM chardef WHERE sequence > ?1 AND "
                           "sequence < ?2 LIMIT 1",
                           path_);
        prefix_.emplace(db_.get(),
                        "SELECT sequence, text FROM chardef WHERE sequence >= ?1 "
                        "AND sequence < ?2 ORDER BY sequence, rank",
                        path_);
        glob_.emplace(db_.get(),
                      "SELECT sequence, text FROM chardef WHERE sequence >= ?1 "
                      "AND sequence < ?2 AND sequence GLOB ?3 "
                      "ORDER BY sequence, rank",
                      path_);
    }

    const TableInfo &info() const noexcept override { return info_; }

    std::size_t entry_count() const override { return entry_count_; }

    std::vector<std::string> lookup_exact(std::string_view sequence) const override {
        std::lock_guard lock(mutex_);
        auto &stmt = lookup_->reset().bind(1, sequence);
        std::vector<std::string> out;
        while (stmt.step()) {
            out.push_back(stmt.text(0));
        }
        return out;
    }

    bool has_extensions(std::string_view sequence) const override {
        std::lock_guard lock(mutex_);
        return extension_->reset().bind(1, sequence).bind(2, range_end(sequence)).step();
    }

    std::vector<SequenceMatch> match_prefix(std::string_view prefix) const override {
        std::lock_guard lock(mutex_);
        return collect(prefix_->reset().bind(1, prefix).bind(2, range_end(prefix)));
    }

    std::vector<SequenceMatch> match_glob(const QueryPattern &pattern) const override {
        check_pattern_keys(pattern, info_);
        const auto prefix = pattern.literal_prefix();
        std::lock_guard lock(mutex_);
        return collect(glob_->reset()
                           .bind(1, prefix)
                           .bind(2, range_end(prefix))
                           .bind(3, to_sqlite_glob(pattern.text())));
    }

private:
    void load_meta(int expected_version) {
        std::map<std::string, std::string> meta;
        try {
            Statement stmt(db_.get(), "SELECT key, value FROM meta", path_);
            while (stmt.step()) {
                meta[stmt.text(0)] = stmt.text(1);
            }
        } catch (const Error &) {
            throw Error(Errc::IoFailure, path_.string() + ": not a table store");
        }
        int found = 0;
        const auto &version = meta["schema_version"];
        std::from_chars(version.data(), version.data() + version.size(), found);
        if (found != expected_version) {
            throw Error(Errc::SchemaMismatch,
                        "schema version mismatch: found " + std::to_string(found) +
                            ", expected " + std::to_string(expected_version));
        }
        info_.ename = meta["ename"];
        info_.cname = meta["cname"];
        auto &b = info_.behavior;
        b.selection_keys = meta["selection_keys"];
        b.autocompose = to_bool(meta["autocompose"]);
        b.commit_at_max = to_bool(meta["commit_at_max"]);
        b.space_selects_first = to_bool(meta["space_selects_first"]);
        const auto &max = meta["max_seq_len"];
        std::from_chars(max.data(), max.data() + max.size(), b.max_seq_len);
        if (auto err = check_behavior(b); !err.empty()) {
            throw Error(Errc::IoFailure, path_.string() + ": " + err);
        }
    }

    static std::vector<SequenceMatch> collect(Statement &stmt) {
        std::vector<SequenceMatch> out;
        while (stmt.step()) {
            auto sequence = stmt.text(0);
            if (out.empty() || out.back().sequence != sequence) {
                out.push_back({std::move(sequence), {}});
            }
            out.back().texts.push_back(stmt.text(1));
        }
        return out;
    }

    fs::path path_;
    Db db_;
    TableInfo info_;
    std::size_t entry_count_ = 0;
    mutable std::mutex mutex_;
    mutable std::optional<Statement> lookup_;
    mutable std::optional<Statement> extension_;
    mutable std::optional<Statement> prefix_;
    mutable std::optional<Statement> glob_;
};

void write_store(const CinTable &table, const fs::path &path) {
    std::error_code ec;
    fs::remove(path, ec);
    if (ec) {
        throw Error(Errc::IoFailure, path.string() + ": " + ec.message());
    }
    auto db = open_db(path, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
    exec(db.get(), "BEGIN", path);
    exec(db.get(), kSchema, path);

    const auto &b = table.behavior;
    const std::pair<const char *, std::string> meta[] = {
        {"schema_version", std::to_string(kStoreSchemaVersion)},
        {"ename", table.ename},
        {"cname", table.cname},
        {"selection_keys", b.selection_keys},
        {"autocompose", b.autocompose ? "true" : "false"},
        {"max_seq_len", std::to_string(b.max_seq_len)},
        {"commit_at_max", b.commit_at_max ? "true" : "false"},
        {"space_selects_first", b.space_selects_first ? "true" : "false"},
    };
    {
        Statement stmt(db.get(), "INSERT INTO meta VALUES (?1, ?2)", path);
        for (const auto &[key, value] : meta) {
            stmt.reset().bind(1, key).bind(2, value).step();
        }
    }
    {
        Statement stmt(db.get(), "INSERT INTO keyname VALUES (?1, ?2, ?3)", path);
        std::int64_t rank = 0;
        for (const auto &[key, label] : table.keynames.entries()) {
            stmt.reset()
                .bind(1, rank++)
                .bind(2, std::string_view(&key, 1))
                .bind(3, label)
                .step();
        }
    }
    {
        Statement stmt(db.get(), "INSERT INTO chardef VALUES (?1, ?2, ?3)", path);
        std::int64_t rank = 0;
        for (const auto &entry : table.chardefs) {
            stmt.reset().bind(1, rank++).bind(2, entry.sequence).bind(3, entry.text).step();
        }
    }
    exec(db.get(), "COMMIT", path);
}

} // namespace

std::shared_ptr<const TableStore> import_table(const CinTable &table,
                                               const fs::path &path) {
    write_store(table, path);
    return open_store(path);
}

std::shared_ptr<const TableStore> open_store(const fs::path &path,
                                             int expected_schema_version) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(Errc::IoFailure, path.string() + ": no such store");
    }
    return std::make_shared<SqliteStore>(path, expected_schema_version);
}

} // namespace vanilla
