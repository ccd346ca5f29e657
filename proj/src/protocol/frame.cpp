// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "protocol/frame.hpp"

#include "core/error.hpp"
#include "core/utf8.hpp"

#include <json.hpp>

namespace vanilla::protocol {
namespace {

using ordered = nlohmann::ordered_json;
using json = nlohmann::json;

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string &reason) { throw Error(Errc::BadFrame, reason); }

SessionId checked(SessionId id) {
    if (id == 0) {
        throw Error(Errc::InvalidArgument, "session ids are positive");
    }
    return id;
}

std::string_view direction_name(PageDirection d) {
    return d == PageDirection::Next ? "next" : "prev";
}

ordered candidates_json(const std::vector<Candidate> &items) {
    ordered out = ordered::array();
    for (const auto &c : items) {
        out.push_back(ordered{{"label", c.label}, {"text", c.text}});
    }
    return out;
}

std::string dump_line(const ordered &object) {
    try {
        auto line = object.dump();
        line += '\n';
        return line;
    } catch (const nlohmann::json::type_error &) {
        throw Error(Errc::InvalidArgument, "frame text is not valid UTF-8");
    }
}

ordered to_json(const ClientFrame &frame) {
    ordered j{{"type", std::string(type_name(frame))}};
    std::visit(overloaded{
                   [&](const Hello &f) { j["version"] = f.version; },
                   [](const ListModules &) {},
                   [&](const OpenSession &f) { j["module"] = f.module; },
                   [&](const KeyInput &f) {
                       j["session"] = checked(f.session);
                       j["key"] = f.key;
                   },
                   [&](const PageRequest &f) {
                       j["session"] = checked(f.session);
                       j["direction"] = std::string(direction_name(f.direction));
                   },
                   [&](const CloseSession &f) { j["session"] = checked(f.session); },
               },
               frame);
    return j;
}

ordered to_json(const ServerFrame &frame) {
    ordered j{{"type", std::string(type_name(frame))}};
    std::visit(overloaded{
                   [&](const Welcome &f) {
                       j["version"] = f.version;
                       ordered modules = ordered::array();
                       for (const auto &m : f.modules) {
                           modules.push_back(ordered{{"id", m.id}, {"name", m.name}});
                       }
                       j["modules"] = std::move(modules);
                   },
                   [&](const SessionOpened &f) { j["session"] = checked(f.session); },
                   [&](const StateUpdate &f) {
                       j["session"] = checked(f.session);
                       j["composing"] = f.composing;
                       j["candidates"] = candidates_json(f.candidates);
                       j["page"] = f.page;
                       j["visible"] = f.visible;
                   },
                   [&](const Commit &f) {
                       j["session"] = checked(f.session);
                       j["text"] = f.text;
                   },
                   [&](const Passthrough &f) {
                       j["session"] = checked(f.session);
                       j["key"] = f.key;
                   },
                   [&](const Beep &f) { j["session"] = checked(f.session); },
                   [&](const ErrorReport &f) {
                       j["code"] = f.code;
                       j["message"] = f.message;
                   },
               },
               frame);
    return j;
}

json parse_object(std::string_view line) {
    if (!line.empty() && line.back() == '\n') {
        line.remove_suffix(1);
    }
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    if (line.find('\n') != std::string_view::npos) {
        bad("frame spans several lines");
    }
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
        bad("malformed JSON");
    }
    if (!j.is_object()) {
        bad("frame is not an object");
    }
    return j;
}

const json &field(const json &j, const char *name) {
    const auto it = j.find(name);
    if (it == j.end()) {
        bad(std::string("missing field '") + name + "'");
    }
    return *it;
}

std::string string_field(const json &j, const char *name) {
    const auto &v = field(j, name);
    if (!v.is_string()) {
        bad(std::string(name) + " not string");
    }
    return v.get<std::string>();
}

std::uint64_t unsigned_field(const json &j, const char *name) {
    const auto &v = field(j, name);
    if (!v.is_number_integer()) {
        bad(std::string(name) + " not integer");
    }
    if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
        bad(std::string(name) + " negative");
    }
    return v.get<std::uint64_t>();
}

SessionId session_field(const json &j) {
    const auto id = unsigned_field(j, "session");
    if (id == 0) {
        bad("session not positive");
    }
    return id;
}

bool bool_field(const json &j, const char *name) {
    const auto &v = field(j, name);
    if (!v.is_boolean()) {
        bad(std::string(name) + " not boolean");
    }
    return v.get<bool>();
}

const json &array_field(const json &j, const char *name) {
    const auto &v = field(j, name);
    if (!v.is_array()) {
        bad(std::string(name) + " not array");
    }
    return v;
}

} // namespace

std::string_view type_name(const ClientFrame &frame) noexcept {
    static constexpr std::string_view names[] = {
        "hello", "list_modules", "open_session", "key", "page", "close_session"};
    return names[frame.index()];
}

std::string_view type_name(const ServerFrame &frame) noexcept {
    static constexpr std::string_view names[] = {
        "welcome", "session_opened", "state", "commit", "passthrough", "beep", "error"};
    return names[frame.index()];
}

std::string encode(const ClientFrame &frame) { return dump_line(to_json(frame)); }
std::string encode(const ServerFrame &frame) { return dump_line(to_json(frame)); }

ClientFrame decode_client(std::string_view line) {
    const json j = parse_object(line);
    const auto type = string_field(j, "type");
    if (type == "hello") {
        return Hello{string_field(j, "version")};
    }
    if (type == "list_modules") {
        return ListModules{};
    }
    if (type == "open_session") {
        return OpenSession{string_field(j, "module")};
    }
    if (type == "key") {
        KeyInput f;
        f.session = session_field(j);
        f.key = string_field(j, "key");
        if (f.key.empty()) {
            bad("key empty");
        }
        return f;
    }
    if (type == "page") {
        PageRequest f;
        f.session = session_field(j);
        const auto direction = string_field(j, "direction");
        if (direction == "next") {
            f.direction = PageDirection::Next;
        } else if (direction == "prev") {
            f.direction = PageDirection::Prev;
        } else {
            bad("direction must be next or prev");
        }
        return f;
    }
    if (type == "close_session") {
        return CloseSession{session_field(j)};
    }
    bad("unknown type '" + type + "'");
}

ServerFrame decode_server(std::string_view line) {
    const json j = parse_object(line);
    const auto type = string_field(j, "type");
    if (type == "welcome") {
        Welcome f;
        f.version = string_field(j, "version");
        for (const auto &m : array_field(j, "modules")) {
            if (!m.is_object()) {
                bad("module entry not object");
            }
            f.modules.push_back({string_field(m, "id"), string_field(m, "name")});
        }
        return f;
    }
    if (type == "session_opened") {
        return SessionOpened{session_field(j)};
    }
    if (type == "state") {
        StateUpdate f;
        f.session = session_field(j);
        f.composing = string_field(j, "composing");
        for (const auto &c : array_field(j, "candidates")) {
            if (!c.is_object()) {
                bad("candidate not object");
            }
            f.candidates.push_back({string_field(c, "label"), string_field(c, "text")});
        }
        f.page = unsigned_field(j, "page");
        f.visible = bool_field(j, "visible");
        return f;
    }
    if (type == "commit") {
        return Commit{session_field(j), string_field(j, "text")};
    }
    if (type == "passthrough") {
        return Passthrough{session_field(j), string_field(j, "key")};
    }
    if (type == "beep") {
        return Beep{session_field(j)};
    }
    if (type == "error") {
        return ErrorReport{string_field(j, "code"), string_field(j, "message")};
    }
    bad("unknown type '" + type + "'");
}

std::string key_to_wire(const KeyEvent &event) {
    if (event.is_character()) {
        return utf8::encode(event.character());
    }
    return std::string(to_string(event.name()));
}

KeyEvent key_from_wire(std::string_view key) {
    if (key.empty()) {
        bad("key empty");
    }
    if (const auto c = utf8::single(key)) {
        return KeyEvent::character(*c);
    }
    if (const auto named = named_key_from_string(key)) {
        return KeyEvent::named(*named);
    }
    bad("unknown key '" + std::string(key) + "'");
}

bool LineFramer::has_line() const noexcept {
    return buffer_.find('\n', start_) != std::string::npos;
}

std::optional<std::string> LineFramer::next() {
    const auto nl = buffer_.find('\n', start_);
    if (nl == std::string::npos) {
        if (buffered() > max_line_) {
            buffer_.clear();
            start_ = 0;
            bad("line too long");
        }
        if (start_ > 0 && start_ * 2 >= buffer_.size()) {
            buffer_.erase(0, start_);
            start_ = 0;
        }
        return std::nullopt;
    }
    std::string line = buffer_.substr(start_, nl - start_);
    start_ = nl + 1;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (start_ == buffer_.size()) {
        buffer_.clear();
        start_ = 0;
    }
    return line;
}

} // namespace vanilla::protocol
