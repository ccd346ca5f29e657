// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cintable/cintable.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace vanilla {

// Bumped whenever the persistent layout changes.
inline constexpr int kStoreSchemaVersion = 1;

// Everything about a table except its chardef rows.
struct TableInfo {
    std::string ename;
    std::string cname;
    KeynameMap keynames;
    BehaviorConfig behavior;

    friend bool operator==(const TableInfo &, const TableInfo &) = default;
};

TableInfo table_info(const CinTable &table);

struct SequenceMatch {
    std::string sequence;
    std::vector<std::string> texts; // file order

    friend bool operator==(const SequenceMatch &,
                           const SequenceMatch &) = default;
};

/// Glob over key sequences: '*' matches any run of keys (including none),
/// '?' exactly one key.
class QueryPattern {
public:
    /// Throws Error(BadPattern) on an empty pattern or a character that can
    /// never be a key.
    static QueryPattern parse(std::string_view pattern);

    const std::string &text() const noexcept { return text_; }
    // Keys before the first metacharacter.
    std::string_view literal_prefix() const noexcept;
    bool matches(std::string_view sequence) const noexcept;

private:
    explicit QueryPattern(std::string text) : text_(std::move(text)) {}
    std::string text_;
};

bool glob_match(std::string_view pattern, std::string_view sequence) noexcept;

// Throws Error(BadPattern) when `pattern` names a key absent from `info`.
void check_pattern_keys(const QueryPattern &pattern, const TableInfo &info);

/// Read-only view of one table's chardefs. Implementations are safe for
/// concurrent readers and return identical results for identical content.
class TableStore {
public:
    virtual ~TableStore() = default;

    virtual const TableInfo &info() const noexcept = 0;
    virtual std::size_t entry_count() const = 0;
    virtual std::vector<std::string> lookup_exact(std::string_view sequence) const = 0;
    // True iff some sequence has `sequence` as a strict prefix.
    virtual bool has_extensions(std::string_view sequence) const = 0;
    // Sequences starting with `prefix` (itself included), lexicographic.
    virtual std::vector<SequenceMatch> match_prefix(std::string_view prefix) const = 0;
    /// Throws Error(BadPattern) if the pattern uses a key the table lacks.
    virtual std::vector<SequenceMatch> match_glob(const QueryPattern &pattern) const = 0;
};

std::shared_ptr<const TableStore> build_store(const CinTable &table);

/// Writes `table` to a single-file store at `path`, replacing any existing
/// file, and returns the opened store. Throws Error(IoFailure).
std::shared_ptr<const TableStore> import_table(const CinTable &table,
                                               const std::filesystem::path &path);

/// Throws Error(IoFailure) if the file is missing or unreadable and
/// Error(SchemaMismatch) if its recorded version differs from `expected`.
std::shared_ptr<const TableStore>
open_store(const std::filesystem::path &path,
           int expected_schema_version = kStoreSchemaVersion);

} // namespace vanilla
