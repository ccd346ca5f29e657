// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace vanilla::utf8 {

constexpr bool is_scalar(char32_t c) noexcept {
    return c <= 0x10FFFF && (c < 0xD800 || c > 0xDFFF);
}

// Decodes one scalar from the front of `text` and advances it. Returns
// nullopt (leaving `text` untouched) on a malformed, overlong, surrogate or
// truncated sequence.
std::optional<char32_t> next(std::string_view &text) noexcept;

bool is_valid(std::string_view text) noexcept;

// Number of scalars in a valid string.
std::size_t length(std::string_view text) noexcept;

// The scalar when `text` holds exactly one, else nullopt.
std::optional<char32_t> single(std::string_view text) noexcept;

void append(std::string &out, char32_t c);
std::string encode(char32_t c);

} // namespace vanilla::utf8
