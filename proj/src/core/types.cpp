// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/types.hpp"

#include "core/error.hpp"
#include "core/utf8.hpp"

#include <algorithm>

namespace vanilla {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::InvalidArgument:
        return "invalid_argument";
    case Errc::DuplicateId:
        return "duplicate_id";
    case Errc::DirUnreadable:
        return "dir_unreadable";
    case Errc::IoFailure:
        return "io_failure";
    case Errc::SchemaMismatch:
        return "schema_mismatch";
    case Errc::BadPattern:
        return "bad_pattern";
    case Errc::WindowHidden:
        return "window_hidden";
    case Errc::BadFrame:
        return "bad_frame";
    case Errc::BindFailure:
        return "bind_failure";
    }
    return "unknown";
}

std::string_view to_string(NamedKey key) noexcept {
    switch (key) {
    case NamedKey::Space:
        return "space";
    case NamedKey::Escape:
        return "escape";
    case NamedKey::Backspace:
        return "backspace";
    case NamedKey::Enter:
        return "enter";
    }
    return "";
}

std::optional<NamedKey> named_key_from_string(std::string_view name) noexcept {
    for (auto key : {NamedKey::Space, NamedKey::Escape, NamedKey::Backspace,
                     NamedKey::Enter}) {
        if (to_string(key) == name) {
            return key;
        }
    }
    return std::nullopt;
}

KeyEvent KeyEvent::character(char32_t c, Modifiers mods) {
    if (!utf8::is_scalar(c)) {
        throw Error(Errc::InvalidArgument, "key is not a Unicode scalar value");
    }
    return KeyEvent(c, mods);
}

KeyEvent KeyEvent::named(NamedKey key, Modifiers mods) noexcept {
    return KeyEvent(key, mods);
}

namespace {

bool is_id_char(char c, bool allow_upper) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '.' || c == '-' || (allow_upper && c >= 'A' && c <= 'Z');
}

} // namespace

bool is_valid_module_id(std::string_view id) noexcept {
    constexpr std::string_view table_prefix = "table:";
    bool allow_upper = false;
    if (id.starts_with(table_prefix)) {
        id.remove_prefix(table_prefix.size());
        allow_upper = true;
    }
    return !id.empty() && std::all_of(id.begin(), id.end(), [&](char c) {
        return is_id_char(c, allow_upper);
    });
}

} // namespace vanilla
