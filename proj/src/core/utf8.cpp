// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/utf8.hpp"

#include "core/error.hpp"

namespace vanilla::utf8 {

std::optional<char32_t> next(std::string_view &text) noexcept {
    if (text.empty()) {
        return std::nullopt;
    }
    const auto byte = [&](std::size_t i) {
        return static_cast<unsigned char>(text[i]);
    };
    const unsigned char lead = byte(0);
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if (lead < 0x80) {
        text.remove_prefix(1);
        return lead;
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
    if (text.size() < len) {
        return std::nullopt;
    }
    for (std::size_t i = 1; i < len; ++i) {
        if ((byte(i) & 0xC0) != 0x80) {
            return std::nullopt;
        }
        cp = (cp << 6) | (byte(i) & 0x3F);
    }
    if (cp < min || !is_scalar(cp)) {
        return std::nullopt;
    }
    text.remove_prefix(len);
    return cp;
}

bool is_valid(std::string_view text) noexcept {
    while (!text.empty()) {
        if (!next(text)) {
            return false;
        }
    }
    return true;
}

std::size_t length(std::string_view text) noexcept {
    std::size_t n = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) {
            ++n;
        }
    }
    return n;
}

std::optional<char32_t> single(std::string_view text) noexcept {
    auto cp = next(text);
    if (!cp || !text.empty()) {
        return std::nullopt;
    }
    return cp;
}

void append(std::string &out, char32_t c) {
    if (!is_scalar(c)) {
        throw Error(Errc::InvalidArgument, "not a Unicode scalar value");
    }
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

std::string encode(char32_t c) {
    std::string out;
    append(out, c);
    return out;
}

} // namespace vanilla::utf8
