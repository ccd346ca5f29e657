// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vanilla {

enum class Errc {
    InvalidArgument,
    DuplicateId,
    DirUnreadable,
    IoFailure,
    SchemaMismatch,
    BadPattern,
    WindowHidden,
    BadFrame,
    BindFailure,
};

std::string_view to_string(Errc code) noexcept;

/// Exception carrying a stable error code alongside the message. Every
/// failure the library reports through exceptions uses this type so the
/// C API can map it onto status codes without string matching.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string &message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace vanilla
