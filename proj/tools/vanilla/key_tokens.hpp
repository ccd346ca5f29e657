// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "vanilla/vanilla.h"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vanilla::cli {

// One scripted keystroke: a literal character or <space>, <esc>, <bs>,
// <enter>.
struct KeyToken {
    vanilla_key_event event{};
    std::string text; // the literal character, or the token as written

    bool is_literal() const noexcept { return event.kind == VANILLA_KEY_CHAR; }
};

class TokenError : public std::runtime_error {
public:
    TokenError(std::size_t line, std::size_t column, const std::string &message)
        : std::runtime_error(message), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

std::optional<KeyToken> parse_token(std::string_view word);

/// Whitespace-separated tokens. Throws TokenError with the 1-based line and
/// column (in characters) of the first bad token.
std::vector<KeyToken> parse_tokens(std::string_view input);

} // namespace vanilla::cli
