// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "key_tokens.hpp"

#include <cstdint>
#include <utility>

namespace vanilla::cli {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Decodes a string holding exactly one scalar value.
std::optional<std::uint32_t> single_scalar(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    const auto lead = static_cast<unsigned char>(s[0]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    std::uint32_t min = 0;
    if (lead < 0x80) {
        len = 1;
        cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
        len = 2;
        cp = lead & 0x1F;
        min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        cp = lead & 0x0F;
        min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        cp = lead & 0x07;
        min = 0x10000;
    } else {
        return std::nullopt;
    }
    if (s.size() != len) {
        return std::nullopt;
    }
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[i]);
        if ((b & 0xC0) != 0x80) {
            return std::nullopt;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return std::nullopt;
    }
    return cp;
}

} // namespace

std::optional<KeyToken> parse_token(std::string_view word) {
    static constexpr std::pair<std::string_view, vanilla_key_kind> named[] = {
        {"<space>", VANILLA_KEY_SPACE},
        {"<esc>", VANILLA_KEY_ESCAPE},
        {"<bs>", VANILLA_KEY_BACKSPACE},
        {"<enter>", VANILLA_KEY_ENTER},
    };
    for (const auto &[name, kind] : named) {
        if (word == name) {
            KeyToken token;
            token.event.kind = kind;
            token.text = name;
            return token;
        }
    }
    const auto cp = single_scalar(word);
    if (!cp || (*cp < 0x80 && is_space(static_cast<char>(*cp)))) {
        return std::nullopt;
    }
    KeyToken token;
    token.event.kind = VANILLA_KEY_CHAR;
    token.event.codepoint = *cp;
    token.text = word;
    return token;
}

std::vector<KeyToken> parse_tokens(std::string_view input) {
    std::vector<KeyToken> tokens;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t i = 0;
    while (i < input.size()) {
        const char c = input[i];
        if (is_space(c)) {
            if (c == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < input.size() && !is_space(input[end])) {
            ++end;
        }
        const auto word = input.substr(i, end - i);
        auto token = parse_token(word);
        if (!token) {
            throw TokenError(line, column, "unknown key token '" + std::string(word) + "'");
        }
        tokens.push_back(std::move(*token));
        for (std::size_t k = i; k < end; ++k) {
            if ((static_cast<unsigned char>(input[k]) & 0xC0) != 0x80) {
                ++column;
            }
        }
        i = end;
    }
    return tokens;
}

} // namespace vanilla::cli
