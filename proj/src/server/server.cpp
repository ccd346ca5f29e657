// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "server/server.hpp"

#include "core/error.hpp"
#include "server/connection.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <condition_variable>
#include <map>
#include <thread>

namespace vanilla::server {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using asio::awaitable;
using asio::use_awaitable;

std::optional<Endpoint> Endpoint::parse(std::string_view text) {
    std::string_view host;
    std::string_view port;
    if (text.starts_with('[')) {
        const auto close = text.find(']');
        if (close == std::string_view::npos || close + 1 >= text.size() ||
            text[close + 1] != ':') {
            return std::nullopt;
        }
        host = text.substr(1, close - 1);
        port = text.substr(close + 2);
    } else {
        const auto colon = text.rfind(':');
        if (colon == std::string_view::npos) {
            return std::nullopt;
        }
        host = text.substr(0, colon);
        port = text.substr(colon + 1);
        if (host.find(':') != std::string_view::npos) {
            return std::nullopt;
        }
    }
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (host.empty() || port.empty() || ec != std::errc{} ||
        ptr != port.data() + port.size() || value > 65535) {
        return std::nullopt;
    }
    return Endpoint{std::string(host), static_cast<std::uint16_t>(value)};
}

std::string Endpoint::to_string() const {
    const bool v6 = host.find(':') != std::string::npos;
    return (v6 ? "[" + host + "]" : host) + ":" + std::to_string(port);
}

namespace {

// Transport half of a client connection. request_close() and force_close()
// may be called from any thread; they hop onto the connection's strand.
class Connection : public std::enable_shared_from_this<Connection> {
public:
    virtual ~Connection() = default;
    virtual void request_close() = 0;
    virtual void force_close() = 0;
};

std::vector<protocol::ServerFrame> handle_safely(ConnectionHandler &handler,
                                                 std::string_view line) {
    try {
        return handler.handle_line(line);
    } catch (const std::exception &e) {
        return {protocol::ErrorReport{"internal", e.what()}};
    }
}

} // namespace

struct detail::ServerCore {
    explicit ServerCore(ServerConfig cfg) : config(std::move(cfg)) {}

    ServerConfig config;
    Registry registry;
    SessionRegistry sessions;
    asio::io_context io;
    std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
    std::optional<tcp::acceptor> tcp_acceptor;
    std::optional<tcp::acceptor> ws_acceptor;
    std::vector<std::thread> threads;
    std::uint16_t tcp_port = 0;
    std::optional<std::uint16_t> ws_port;

    mutable std::mutex mutex;
    std::condition_variable changed;
    std::map<ConnectionId, std::shared_ptr<Connection>> connections;
    std::atomic<ConnectionId> next_connection{0};
    bool started = false;
    bool stopping = false;
    bool stopped = false;

    HandlerOptions handler_options() const {
        HandlerOptions options;
        options.max_sessions_per_conn = config.max_sessions_per_conn;
        options.default_module = config.default_module;
        return options;
    }

    std::uint16_t bind(std::optional<tcp::acceptor> &acceptor, const Endpoint &endpoint) {
        try {
            tcp::resolver resolver(io);
            const auto results =
                resolver.resolve(endpoint.host, std::to_string(endpoint.port),
                                 tcp::resolver::passive);
            const tcp::endpoint ep = results.begin()->endpoint();
            acceptor.emplace(asio::make_strand(io));
            acceptor->open(ep.protocol());
            acceptor->set_option(asio::socket_base::reuse_address(true));
            acceptor->bind(ep);
            acceptor->listen();
            return acceptor->local_endpoint().port();
        } catch (const boost::system::system_error &e) {
            acceptor.reset();
            throw Error(Errc::BindFailure, endpoint.to_string() + ": " + e.code().message());
        }
    }

    // Registers a freshly accepted connection unless we are shutting down.
    bool add(ConnectionId id, std::shared_ptr<Connection> conn) {
        std::lock_guard lock(mutex);
        if (stopping) {
            return false;
        }
        connections.emplace(id, std::move(conn));
        return true;
    }

    void remove(ConnectionId id) {
        std::lock_guard lock(mutex);
        connections.erase(id);
        changed.notify_all();
    }

    awaitable<void> accept_loop(tcp::acceptor &acceptor, bool websocket);
};

namespace {

class TcpConnection final : public Connection {
public:
    TcpConnection(detail::ServerCore &server, ConnectionId id, tcp::socket socket)
        : server_(server), socket_(std::move(socket)),
          handler_(server.registry, server.sessions, id, server.config.context,
                   server.handler_options()) {}

    void request_close() override {
        asio::post(socket_.get_executor(), [self = shared()] {
            self->closing_ = true;
            if (self->reading_) {
                boost::system::error_code ignored;
                self->socket_.cancel(ignored);
            }
        });
    }

    void force_close() override {
        asio::post(socket_.get_executor(), [self = shared()] {
            self->closing_ = true;
            boost::system::error_code ignored;
            self->socket_.close(ignored);
        });
    }

    awaitable<void> run() {
        auto self = shared();
        protocol::LineFramer framer;
        std::array<char, 4096> chunk{};
        boost::system::error_code ec;
        for (bool done = false; !done;) {
            std::string reply;
            try {
                while (auto line = framer.next()) {
                    for (const auto &frame : handle_safely(handler_, *line)) {
                        reply += protocol::encode(frame);
                    }
                    if (handler_.should_close()) {
                        done = true;
                        break;
                    }
                }
            } catch (const Error &e) {
                reply += protocol::encode(protocol::ErrorReport{"bad_frame", e.what()});
                done = true;
            }
            if (!reply.empty()) {
                co_await asio::async_write(socket_, asio::buffer(reply),
                                           asio::redirect_error(use_awaitable, ec));
                if (ec) {
                    break;
                }
            }
            if (done || closing_) {
                break;
            }
            reading_ = true;
            const std::size_t n = co_await socket_.async_read_some(
                asio::buffer(chunk), asio::redirect_error(use_awaitable, ec));
            reading_ = false;
            if (ec) {
                break;
            }
            framer.feed(std::string_view(chunk.data(), n));
        }
        boost::system::error_code ignored;
        socket_.shutdown(tcp::socket::shutdown_both, ignored);
        socket_.close(ignored);
        server_.remove(handler_.id());
    }

private:
    std::shared_ptr<TcpConnection> shared() {
        return std::static_pointer_cast<TcpConnection>(shared_from_this());
    }

    detail::ServerCore &server_;
    tcp::socket socket_;
    ConnectionHandler handler_;
    bool reading_ = false;
    bool closing_ = false;
};

class WsConnection final : public Connection {
public:
    WsConnection(detail::ServerCore &server, ConnectionId id, tcp::socket socket)
        : server_(server), ws_(std::move(socket)),
          handler_(server.registry, server.sessions, id, server.config.context,
                   server.handler_options()) {
        ws_.read_message_max(1 << 16);
    }

    void request_close() override {
        asio::post(ws_.get_executor(), [self = shared()] {
            self->closing_ = true;
            if (self->reading_ && !self->close_started_) {
                // A close may run alongside the pending read, which then
                // finishes with websocket::error::closed.
                self->close_started_ = true;
                self->ws_.async_close(websocket::close_code::going_away,
                                      [self](boost::system::error_code) {});
            }
        });
    }

    void force_close() override {
        asio::post(ws_.get_executor(), [self = shared()] {
            self->closing_ = true;
            boost::system::error_code ignored;
            beast::get_lowest_layer(self->ws_).close(ignored);
        });
    }

    awaitable<void> run() {
        auto self = shared();
        co_await serve();
        boost::system::error_code ignored;
        beast::get_lowest_layer(ws_).close(ignored);
        server_.remove(handler_.id());
    }

private:
    std::shared_ptr<WsConnection> shared() {
        return std::static_pointer_cast<WsConnection>(shared_from_this());
    }

    awaitable<void> serve() {
        boost::system::error_code ec;
        beast::flat_buffer buffer;
        http::request<http::string_body> request;
        reading_ = true;
        co_await http::async_read(ws_.next_layer(), buffer, request,
                                  asio::redirect_error(use_awaitable, ec));
        reading_ = false;
        if (ec || closing_) {
            co_return;
        }
        const auto target = std::string_view(request.target().data(), request.target().size());
        const auto path = target.substr(0, target.find('?'));
        if (path != "/ws" || !websocket::is_upgrade(request)) {
            http::response<http::string_body> response{http::status::not_found,
                                                       request.version()};
            response.set(http::field::content_type, "text/plain");
            response.body() = "websocket endpoint is /ws\n";
            response.prepare_payload();
            response.keep_alive(false);
            co_await http::async_write(ws_.next_layer(), response,
                                       asio::redirect_error(use_awaitable, ec));
            co_return;
        }
        co_await ws_.async_accept(request, asio::redirect_error(use_awaitable, ec));
        if (ec) {
            co_return;
        }
        ws_.text(true);
        beast::flat_buffer message;
        while (!closing_) {
            reading_ = true;
            co_await ws_.async_read(message, asio::redirect_error(use_awaitable, ec));
            reading_ = false;
            if (ec) {
                co_return;
            }
            const auto line = beast::buffers_to_string(message.data());
            message.consume(message.size());
            for (const auto &frame : handle_safely(handler_, line)) {
                auto payload = protocol::encode(frame);
                payload.pop_back();
                co_await ws_.async_write(asio::buffer(payload),
                                         asio::redirect_error(use_awaitable, ec));
                if (ec) {
                    co_return;
                }
            }
            if (handler_.should_close()) {
                break;
            }
        }
        if (!close_started_) {
            close_started_ = true;
            co_await ws_.async_close(websocket::close_code::normal,
                                     asio::redirect_error(use_awaitable, ec));
        }
    }

    detail::ServerCore &server_;
    websocket::stream<tcp::socket> ws_;
    ConnectionHandler handler_;
    bool reading_ = false;
    bool closing_ = false;
    bool close_started_ = false;
};

} // namespace

awaitable<void> detail::ServerCore::accept_loop(tcp::acceptor &acceptor, bool websocket) {
    for (;;) {
        tcp::socket socket(asio::make_strand(io));
        boost::system::error_code ec;
        co_await acceptor.async_accept(socket, asio::redirect_error(use_awaitable, ec));
        if (ec) {
            if (ec == asio::error::operation_aborted || !acceptor.is_open()) {
                co_return;
            }
            continue;
        }
        socket.set_option(tcp::no_delay(true), ec);
        const ConnectionId id = ++next_connection;
        const auto executor = socket.get_executor();
        if (websocket) {
            auto conn = std::make_shared<WsConnection>(*this, id, std::move(socket));
            if (add(id, conn)) {
                asio::co_spawn(executor, conn->run(), asio::detached);
            }
        } else {
            auto conn = std::make_shared<TcpConnection>(*this, id, std::move(socket));
            if (add(id, conn)) {
                asio::co_spawn(executor, conn->run(), asio::detached);
            }
        }
    }
}

Server::Server(ServerConfig config) : impl_(std::make_unique<detail::ServerCore>(std::move(config))) {
    const auto &cfg = impl_->config;
    std::error_code ec;
    if (!std::filesystem::is_directory(cfg.tables_dir, ec)) {
        throw Error(Errc::DirUnreadable,
                    "tables directory '" + cfg.tables_dir.string() + "' does not exist");
    }
    impl_->registry.discover_tables(cfg.tables_dir, cfg.context);
    if (cfg.default_module && !impl_->registry.lookup(*cfg.default_module)) {
        throw Error(Errc::InvalidArgument,
                    "default module '" + *cfg.default_module + "' not found");
    }
}

Server::~Server() {
    if (impl_) {
        shutdown(std::chrono::milliseconds(0));
    }
}

void Server::start() {
    auto &s = *impl_;
    {
        std::lock_guard lock(s.mutex);
        if (s.started) {
            throw Error(Errc::InvalidArgument, "server already started");
        }
    }
    s.tcp_port = s.bind(s.tcp_acceptor, s.config.tcp_listen);
    if (s.config.ws_listen) {
        try {
            s.ws_port = s.bind(s.ws_acceptor, *s.config.ws_listen);
        } catch (...) {
            s.tcp_acceptor.reset();
            throw;
        }
    }
    asio::co_spawn(s.tcp_acceptor->get_executor(), s.accept_loop(*s.tcp_acceptor, false),
                   asio::detached);
    if (s.ws_acceptor) {
        asio::co_spawn(s.ws_acceptor->get_executor(), s.accept_loop(*s.ws_acceptor, true),
                       asio::detached);
    }
    s.work.emplace(s.io.get_executor());
    std::size_t n = s.config.threads;
    if (n == 0) {
        n = std::max(2U, std::thread::hardware_concurrency());
    }
    for (std::size_t i = 0; i < n; ++i) {
        s.threads.emplace_back([&s] { s.io.run(); });
    }
    std::lock_guard lock(s.mutex);
    s.started = true;
}

void Server::wait() {
    std::unique_lock lock(impl_->mutex);
    impl_->changed.wait(lock, [&] { return impl_->stopped || !impl_->started; });
}

void Server::shutdown(std::chrono::milliseconds grace) {
    auto &s = *impl_;
    std::vector<std::shared_ptr<Connection>> open;
    {
        std::lock_guard lock(s.mutex);
        if (!s.started || s.stopping) {
            return;
        }
        s.stopping = true;
        for (const auto &[id, conn] : s.connections) {
            open.push_back(conn);
        }
    }
    for (auto *acceptor : {&s.tcp_acceptor, &s.ws_acceptor}) {
        if (*acceptor) {
            asio::post((*acceptor)->get_executor(), [acceptor] {
                boost::system::error_code ignored;
                (*acceptor)->close(ignored);
            });
        }
    }
    for (const auto &conn : open) {
        conn->request_close();
    }
    open.clear();

    std::unique_lock lock(s.mutex);
    if (!s.changed.wait_for(lock, grace, [&] { return s.connections.empty(); })) {
        for (const auto &[id, conn] : s.connections) {
            conn->force_close();
        }
        s.changed.wait_for(lock, std::chrono::seconds(1),
                           [&] { return s.connections.empty(); });
    }
    lock.unlock();

    s.work.reset();
    s.io.stop();
    for (auto &t : s.threads) {
        t.join();
    }
    s.threads.clear();
    lock.lock();
    s.connections.clear();
    s.stopped = true;
    s.changed.notify_all();
}

std::uint16_t Server::tcp_port() const { return impl_->tcp_port; }

std::optional<std::uint16_t> Server::ws_port() const { return impl_->ws_port; }

const Registry &Server::registry() const { return impl_->registry; }

std::size_t Server::connection_count() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->connections.size();
}

std::size_t Server::session_count() const { return impl_->sessions.size(); }

} // namespace vanilla::server
