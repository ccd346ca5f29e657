// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vanilla {

// Keys are single printable ASCII characters. '*' and '?' are reserved for
// glob queries; '#' and '%' would collide with comments and directives.
bool is_key_char(char c) noexcept;

struct BehaviorConfig {
    bool autocompose = false;
    std::size_t max_seq_len = 1;
    bool commit_at_max = false;
    std::string selection_keys = "123456789";
    bool space_selects_first = true;

    friend bool operator==(const BehaviorConfig &,
                           const BehaviorConfig &) = default;
};

// Empty when `config` satisfies its invariants, else the first violation.
std::string check_behavior(const BehaviorConfig &config);

/// Key to display-label map that remembers insertion order.
class KeynameMap {
public:
    KeynameMap() { index_.fill(-1); }

    // Returns false (and keeps the existing label) when `key` is present.
    bool insert(char key, std::string label);
    const std::string *find(char key) const noexcept;
    bool contains(char key) const noexcept { return find(key) != nullptr; }

    const std::vector<std::pair<char, std::string>> &entries() const noexcept {
        return entries_;
    }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    friend bool operator==(const KeynameMap &a, const KeynameMap &b) {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<std::pair<char, std::string>> entries_;
    std::array<std::int32_t, 128> index_;
};

struct ChardefEntry {
    std::string sequence;
    std::string text;
    // Source line, 0 when the entry was not parsed from a file.
    std::size_t line = 0;

    friend bool operator==(const ChardefEntry &a, const ChardefEntry &b) {
        return a.sequence == b.sequence && a.text == b.text;
    }
};

struct CinTable {
    std::string ename;
    std::string cname;
    KeynameMap keynames;
    std::vector<ChardefEntry> chardefs;
    BehaviorConfig behavior;

    friend bool operator==(const CinTable &, const CinTable &) = default;
};

enum class Severity : std::uint8_t { Fatal, Warning };

struct Diagnostic {
    Severity severity;
    std::size_t line; // 1-based; 0 for table-level findings
    std::string message;

    friend bool operator==(const Diagnostic &, const Diagnostic &) = default;
};

std::string_view to_string(Severity severity) noexcept;
// "severity:line: message"
std::string format(const Diagnostic &diagnostic);

struct ParseResult {
    CinTable table;
    std::vector<Diagnostic> diagnostics;

    bool ok() const noexcept;
};

/// Parses the .cin dialect. Never throws on bad input: every problem is
/// reported as a diagnostic and the table holds whatever could be read.
ParseResult parse_cin(std::string_view source);

std::string serialize_cin(const CinTable &table);

/// Semantic warnings that do not prevent a table from being used.
std::vector<Diagnostic> validate(const CinTable &table);

} // namespace vanilla
