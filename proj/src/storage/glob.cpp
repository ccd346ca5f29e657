// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "storage/store.hpp"

#include "core/error.hpp"

namespace vanilla {

bool glob_match(std::string_view pattern, std::string_view sequence) noexcept {
    // Greedy match with single-star backtracking; linear in practice.
    std::size_t p = 0;
    std::size_t s = 0;
    std::size_t star = std::string_view::npos;
    std::size_t resume = 0;
    while (s < sequence.size()) {
        if (p < pattern.size() &&
            (pattern[p] == '?' || pattern[p] == sequence[s])) {
            ++p;
            ++s;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            resume = s;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            s = ++resume;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') {
        ++p;
    }
    return p == pattern.size();
}

QueryPattern QueryPattern::parse(std::string_view pattern) {
    if (pattern.empty()) {
        throw Error(Errc::BadPattern, "empty pattern");
    }
    for (char c : pattern) {
        if (c != '*' && c != '?' && !is_key_char(c)) {
            throw Error(Errc::BadPattern,
                        "pattern '" + std::string(pattern) +
                            "' contains a character that is not a key");
        }
    }
    return QueryPattern(std::string(pattern));
}

std::string_view QueryPattern::literal_prefix() const noexcept {
    const auto meta = text_.find_first_of("*?");
    return std::string_view(text_).substr(0, meta);
}

bool QueryPattern::matches(std::string_view sequence) const noexcept {
    return glob_match(text_, sequence);
}

void check_pattern_keys(const QueryPattern &pattern, const TableInfo &info) {
    for (char c : pattern.text()) {
        if (c != '*' && c != '?' && !info.keynames.contains(c)) {
            throw Error(Errc::BadPattern, "pattern '" + pattern.text() +
                                              "' uses key '" +
                                              std::string(1, c) +
                                              "' which the table lacks");
        }
    }
}

TableInfo table_info(const CinTable &table) {
    return {table.ename, table.cname, table.keynames, table.behavior};
}

} // namespace vanilla
