// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Text-service wire format: one JSON object per line, "type" first, then
// the variant's fields in declaration order. The same payloads travel as
// WebSocket text messages without the trailing LF.
namespace vanilla::protocol {

inline constexpr std::string_view kVersion = "1";

using SessionId = std::uint64_t;

// client -> server

struct Hello {
    std::string version;
    friend bool operator==(const Hello &, const Hello &) = default;
};
struct ListModules {
    friend bool operator==(const ListModules &, const ListModules &) = default;
};
struct OpenSession {
    std::string module;
    friend bool operator==(const OpenSession &, const OpenSession &) = default;
};
struct KeyInput {
    SessionId session = 0;
    std::string key; // one scalar = literal, otherwise a named key
    friend bool operator==(const KeyInput &, const KeyInput &) = default;
};
struct PageRequest {
    SessionId session = 0;
    PageDirection direction = PageDirection::Next;
    friend bool operator==(const PageRequest &, const PageRequest &) = default;
};
struct CloseSession {
    SessionId session = 0;
    friend bool operator==(const CloseSession &, const CloseSession &) = default;
};

using ClientFrame =
    std::variant<Hello, ListModules, OpenSession, KeyInput, PageRequest, CloseSession>;

// server -> client

struct ModuleEntry {
    std::string id;
    std::string name;
    friend bool operator==(const ModuleEntry &, const ModuleEntry &) = default;
};
struct Welcome {
    std::string version;
    std::vector<ModuleEntry> modules;
    friend bool operator==(const Welcome &, const Welcome &) = default;
};
struct SessionOpened {
    SessionId session = 0;
    friend bool operator==(const SessionOpened &, const SessionOpened &) = default;
};
// Complete display state: a renderer needs nothing but the latest one.
struct StateUpdate {
    SessionId session = 0;
    std::string composing;
    std::vector<Candidate> candidates;
    std::uint64_t page = 0;
    bool visible = false;
    friend bool operator==(const StateUpdate &, const StateUpdate &) = default;
};
struct Commit {
    SessionId session = 0;
    std::string text;
    friend bool operator==(const Commit &, const Commit &) = default;
};
struct Passthrough {
    SessionId session = 0;
    std::string key;
    friend bool operator==(const Passthrough &, const Passthrough &) = default;
};
struct Beep {
    SessionId session = 0;
    friend bool operator==(const Beep &, const Beep &) = default;
};
struct ErrorReport {
    std::string code;
    std::string message;
    friend bool operator==(const ErrorReport &, const ErrorReport &) = default;
};

using ServerFrame = std::variant<Welcome, SessionOpened, StateUpdate, Commit,
                                 Passthrough, Beep, ErrorReport>;

std::string_view type_name(const ClientFrame &frame) noexcept;
std::string_view type_name(const ServerFrame &frame) noexcept;

/// One line of JSON terminated by LF. Throws Error(InvalidArgument) when a
/// string field is not valid UTF-8 or a session id is zero.
std::string encode(const ClientFrame &frame);
std::string encode(const ServerFrame &frame);

/// Accepts one line with or without its LF. Field order and whitespace are
/// free; unknown fields are ignored. Throws Error(BadFrame) with the reason.
ClientFrame decode_client(std::string_view line);
ServerFrame decode_server(std::string_view line);

std::string key_to_wire(const KeyEvent &event);
/// Throws Error(BadFrame) for an empty string or unknown key name.
KeyEvent key_from_wire(std::string_view key);

/// Splits a byte stream into LF-terminated lines, whatever the chunking.
class LineFramer {
public:
    explicit LineFramer(std::size_t max_line = 1 << 16) : max_line_(max_line) {}

    void feed(std::string_view bytes) { buffer_.append(bytes); }
    /// The next complete line without its LF (and CR). Throws
    /// Error(BadFrame) once a partial line grows past the limit.
    std::optional<std::string> next();
    bool has_line() const noexcept;
    std::size_t buffered() const noexcept { return buffer_.size() - start_; }

private:
    std::string buffer_;
    std::size_t start_ = 0;
    std::size_t max_line_;
};

} // namespace vanilla::protocol
