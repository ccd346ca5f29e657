// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "server/connection.hpp"

#include "core/error.hpp"

namespace vanilla::server {

using namespace vanilla::protocol;

std::optional<SessionId> SessionRegistry::open(ConnectionId conn,
                                               std::unique_ptr<InputSession> session,
                                               std::size_t limit) {
    std::lock_guard lock(mutex_);
    std::size_t live = 0;
    for (auto it = sessions_.lower_bound({conn, 0});
         it != sessions_.end() && it->first.first == conn; ++it) {
        ++live;
    }
    if (live >= limit) {
        return std::nullopt;
    }
    const SessionId id = ++last_id_[conn];
    sessions_.emplace(std::make_pair(conn, id), std::move(session));
    return id;
}

std::shared_ptr<InputSession> SessionRegistry::find(ConnectionId conn, SessionId id) const {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find({conn, id});
    return it == sessions_.end() ? nullptr : it->second;
}

bool SessionRegistry::close(ConnectionId conn, SessionId id) {
    std::lock_guard lock(mutex_);
    return sessions_.erase({conn, id}) > 0;
}

std::size_t SessionRegistry::drop_connection(ConnectionId conn) {
    std::lock_guard lock(mutex_);
    std::size_t dropped = 0;
    for (auto it = sessions_.lower_bound({conn, 0});
         it != sessions_.end() && it->first.first == conn;) {
        it = sessions_.erase(it);
        ++dropped;
    }
    last_id_.erase(conn);
    return dropped;
}

std::size_t SessionRegistry::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::size_t SessionRegistry::count(ConnectionId conn) const {
    std::lock_guard lock(mutex_);
    std::size_t live = 0;
    for (auto it = sessions_.lower_bound({conn, 0});
         it != sessions_.end() && it->first.first == conn; ++it) {
        ++live;
    }
    return live;
}

StateUpdate state_frame(SessionId session, const EngineOutput &output) {
    StateUpdate frame;
    frame.session = session;
    frame.composing = output.view.composing;
    if (output.window) {
        frame.candidates = output.window->items;
        frame.page = output.window->page;
        frame.visible = true;
    }
    return frame;
}

ConnectionHandler::ConnectionHandler(const Registry &modules, SessionRegistry &sessions,
                                     ConnectionId id, ServiceContext context,
                                     HandlerOptions options)
    : modules_(modules), sessions_(sessions), id_(id), context_(std::move(context)),
      options_(std::move(options)) {}

ConnectionHandler::~ConnectionHandler() { sessions_.drop_connection(id_); }

std::vector<ServerFrame> ConnectionHandler::handle_line(std::string_view line) {
    ClientFrame frame;
    try {
        frame = decode_client(line);
    } catch (const Error &e) {
        ++bad_streak_;
        return {ErrorReport{"bad_frame", e.what()}};
    }
    bad_streak_ = 0;
    return handle_frame(frame);
}

Welcome ConnectionHandler::welcome() const {
    Welcome w{std::string(kVersion), {}};
    for (const auto &d : modules_.list_modules()) {
        w.modules.push_back({d.id, d.display_name});
    }
    return w;
}

std::vector<ServerFrame> ConnectionHandler::handle_frame(const ClientFrame &frame) {
    if (const auto *hello = std::get_if<Hello>(&frame)) {
        if (hello->version != kVersion) {
            return {ErrorReport{"version", "unsupported protocol version '" +
                                               hello->version + "', expected '" +
                                               std::string(kVersion) + "'"}};
        }
        greeted_ = true;
        return {welcome()};
    }
    if (!greeted_) {
        return {ErrorReport{"protocol", "hello required before other frames"}};
    }
    if (std::holds_alternative<ListModules>(frame)) {
        return {welcome()};
    }
    if (const auto *open = std::get_if<OpenSession>(&frame)) {
        return on_open(*open);
    }
    if (const auto *key = std::get_if<KeyInput>(&frame)) {
        return on_key(*key);
    }
    if (const auto *page = std::get_if<PageRequest>(&frame)) {
        return on_page(*page);
    }
    const auto &close = std::get<CloseSession>(frame);
    if (!sessions_.close(id_, close.session)) {
        return {ErrorReport{"unknown_session",
                            "no session " + std::to_string(close.session)}};
    }
    return {};
}

std::vector<ServerFrame> ConnectionHandler::on_open(const OpenSession &frame) {
    std::string module_id = frame.module;
    if (module_id.empty() && options_.default_module) {
        module_id = *options_.default_module;
    }
    const auto module = modules_.lookup(module_id);
    if (!module) {
        return {ErrorReport{"unknown_module", "no module '" + module_id + "'"}};
    }
    const auto id = sessions_.open(id_, module->create_session(context_),
                                   options_.max_sessions_per_conn);
    if (!id) {
        return {ErrorReport{"session_limit",
                            "at most " + std::to_string(options_.max_sessions_per_conn) +
                                " sessions per connection"}};
    }
    return {SessionOpened{*id}};
}

std::vector<ServerFrame> ConnectionHandler::on_key(const KeyInput &frame) {
    const auto session = sessions_.find(id_, frame.session);
    if (!session) {
        return {ErrorReport{"unknown_session", "no session " + std::to_string(frame.session)}};
    }
    KeyEvent event = KeyEvent::named(NamedKey::Escape);
    try {
        event = key_from_wire(frame.key);
    } catch (const Error &e) {
        return {ErrorReport{"bad_frame", e.what()}};
    }
    const auto output = session->process_key(event);
    std::vector<ServerFrame> out;
    for (const auto &text : output.commits) {
        out.emplace_back(Commit{frame.session, text});
    }
    if (!output.handled) {
        out.emplace_back(Passthrough{frame.session, frame.key});
    }
    if (output.beep) {
        out.emplace_back(Beep{frame.session});
    }
    out.emplace_back(state_frame(frame.session, output));
    return out;
}

std::vector<ServerFrame> ConnectionHandler::on_page(const PageRequest &frame) {
    const auto session = sessions_.find(id_, frame.session);
    if (!session) {
        return {ErrorReport{"unknown_session", "no session " + std::to_string(frame.session)}};
    }
    try {
        return {state_frame(frame.session, session->page(frame.direction))};
    } catch (const Error &e) {
        return {ErrorReport{"window_hidden", e.what()}};
    }
}

} // namespace vanilla::server
