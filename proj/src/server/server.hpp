// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/registry.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace vanilla::server {

namespace detail {
struct ServerCore;
}

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    // "host:port" or "[v6addr]:port".
    static std::optional<Endpoint> parse(std::string_view text);
    std::string to_string() const;

    friend bool operator==(const Endpoint &, const Endpoint &) = default;
};

struct ServerConfig {
    Endpoint tcp_listen{"127.0.0.1", 9876};
    std::optional<Endpoint> ws_listen;
    std::filesystem::path tables_dir;
    std::optional<std::string> default_module;
    std::size_t max_sessions_per_conn = 16;
    std::size_t threads = 0; // 0: pick from the hardware
    ServiceContext context;
};

/// Text-service daemon. Serves the NDJSON protocol over TCP and, when
/// configured, the same frames over WebSocket at /ws. Connections run in
/// parallel; frames within a connection are handled in arrival order.
class Server {
public:
    /// Discovers tables right away. Throws Error(DirUnreadable) when the
    /// tables directory is missing and Error(InvalidArgument) when the
    /// default module does not exist.
    explicit Server(ServerConfig config);
    ~Server();
    Server(const Server &) = delete;
    Server &operator=(const Server &) = delete;

    /// Binds and starts serving. Throws Error(BindFailure).
    void start();
    /// Blocks until shutdown() has completed.
    void wait();
    /// Stops accepting, lets every connection flush the frames it already
    /// received, then closes it. Connections still open after `grace` are
    /// closed forcibly.
    void shutdown(std::chrono::milliseconds grace);

    std::uint16_t tcp_port() const;
    std::optional<std::uint16_t> ws_port() const;
    const Registry &registry() const;
    std::size_t connection_count() const;
    std::size_t session_count() const;

private:
    std::unique_ptr<detail::ServerCore> impl_;
};

} // namespace vanilla::server
