// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/registry.hpp"
#include "protocol/frame.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace vanilla::server {

using ConnectionId = std::uint64_t;
using protocol::SessionId;

/// Live sessions keyed by (connection, session id). Ids count up from 1 per
/// connection and are never reused on that connection.
class SessionRegistry {
public:
    // nullopt when the connection already holds `limit` sessions.
    std::optional<SessionId> open(ConnectionId conn, std::unique_ptr<InputSession> session,
                                  std::size_t limit);
    std::shared_ptr<InputSession> find(ConnectionId conn, SessionId id) const;
    bool close(ConnectionId conn, SessionId id);
    std::size_t drop_connection(ConnectionId conn);
    std::size_t size() const;
    std::size_t count(ConnectionId conn) const;

private:
    mutable std::mutex mutex_;
    std::map<std::pair<ConnectionId, SessionId>, std::shared_ptr<InputSession>> sessions_;
    std::map<ConnectionId, SessionId> last_id_;
};

struct HandlerOptions {
    std::size_t max_sessions_per_conn = 16;
    std::optional<std::string> default_module;
    // Consecutive undecodable frames tolerated before the connection closes.
    int max_bad_frames = 10;
};

/// Protocol state of one client connection, independent of the transport.
/// Frames are handled strictly one at a time in arrival order; the owner
/// must not call into one handler concurrently.
class ConnectionHandler {
public:
    ConnectionHandler(const Registry &modules, SessionRegistry &sessions, ConnectionId id,
                      ServiceContext context, HandlerOptions options = {});
    ~ConnectionHandler();
    ConnectionHandler(const ConnectionHandler &) = delete;
    ConnectionHandler &operator=(const ConnectionHandler &) = delete;

    std::vector<protocol::ServerFrame> handle_line(std::string_view line);
    std::vector<protocol::ServerFrame> handle_frame(const protocol::ClientFrame &frame);

    // Set after too many consecutive bad frames.
    bool should_close() const noexcept { return bad_streak_ > options_.max_bad_frames; }
    ConnectionId id() const noexcept { return id_; }

private:
    std::vector<protocol::ServerFrame> on_key(const protocol::KeyInput &frame);
    std::vector<protocol::ServerFrame> on_page(const protocol::PageRequest &frame);
    std::vector<protocol::ServerFrame> on_open(const protocol::OpenSession &frame);
    protocol::Welcome welcome() const;

    const Registry &modules_;
    SessionRegistry &sessions_;
    ConnectionId id_;
    ServiceContext context_;
    HandlerOptions options_;
    bool greeted_ = false;
    int bad_streak_ = 0;
};

protocol::StateUpdate state_frame(SessionId session, const EngineOutput &output);

} // namespace vanilla::server
