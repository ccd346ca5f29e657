// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/error.hpp"
#include "fixtures.hpp"
#include "golden.hpp"
#include "line_client.hpp"
#include "protocol/frame.hpp"
#include "server/connection.hpp"
#include "server/server.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <doctest.h>

#include <sys/socket.h>
#include <netinet/in.h>
#include <unistd.h>

#include <chrono>
#include <future>
#include <thread>

using namespace vanilla;
using namespace vanilla::server;
using namespace vanilla::protocol;
using namespace std::chrono_literals;

namespace {

struct Modules {
    Registry registry;
    SessionRegistry sessions;
    Modules() { registry.discover_tables(test::fixture("tables"), {}); }
};

std::vector<std::string> encode_all(const std::vector<ServerFrame> &frames) {
    std::vector<std::string> lines;
    for (const auto &f : frames) {
        auto line = encode(f);
        line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

std::string error_code(const std::vector<ServerFrame> &frames) {
    REQUIRE(frames.size() == 1);
    const auto *e = std::get_if<ErrorReport>(&frames.front());
    REQUIRE(e != nullptr);
    return e->code;
}

ServerConfig local_config() {
    ServerConfig config;
    config.tcp_listen = {"127.0.0.1", 0};
    config.ws_listen = Endpoint{"127.0.0.1", 0};
    config.tables_dir = test::fixture("tables");
    config.threads = 2;
    return config;
}

std::string key_frame(SessionId s, std::string_view key) {
    auto line = encode(ClientFrame{KeyInput{s, std::string(key)}});
    line.pop_back();
    return line;
}

// Sends each client line and collects every reply line up to and including
// the final state frame (or the single reply for non-key frames).
std::vector<std::string> run_script(test::LineClient &client,
                                    const std::vector<std::string> &script) {
    std::vector<std::string> got;
    for (const auto &line : script) {
        client.send(line);
        const auto frame = decode_client(line);
        if (std::holds_alternative<CloseSession>(frame)) {
            continue;
        }
        for (;;) {
            auto reply = client.read_line();
            REQUIRE(reply.has_value());
            got.push_back(*reply);
            if (!std::holds_alternative<KeyInput>(frame) ||
                std::holds_alternative<StateUpdate>(decode_server(*reply))) {
                break;
            }
        }
    }
    return got;
}

} // namespace

TEST_SUITE("handler") {
    TEST_CASE("hello comes first") {
        Modules m;
        ConnectionHandler h(m.registry, m.sessions, 1, {});
        CHECK(error_code(h.handle_line(R"({"type":"list_modules"})")) == "protocol");
        CHECK(error_code(h.handle_line(R"({"type":"hello","version":"2"})")) == "version");
        CHECK(error_code(h.handle_line(R"({"type":"open_session","module":"table:T1"})")) ==
              "protocol");
        const auto w = h.handle_line(R"({"type":"hello","version":"1"})");
        REQUIRE(w.size() == 1);
        const auto &welcome = std::get<Welcome>(w.front());
        CHECK(welcome.version == "1");
        REQUIRE(welcome.modules.size() == 1);
        CHECK(welcome.modules[0].id == "table:T1");
        CHECK(welcome.modules[0].name == "Demo");
        CHECK(h.handle_line(R"({"type":"list_modules"})") == w);
    }

    TEST_CASE("sessions open, answer keys, and close") {
        Modules m;
        ConnectionHandler h(m.registry, m.sessions, 1, {});
        h.handle_line(R"({"type":"hello","version":"1"})");
        CHECK(error_code(h.handle_line(R"({"type":"open_session","module":"table:T9"})")) ==
              "unknown_module");
        const auto opened = h.handle_line(R"({"type":"open_session","module":"table:T1"})");
        CHECK(std::get<SessionOpened>(opened.front()).session == 1);
        CHECK(m.sessions.count(1) == 1);

        CHECK(error_code(h.handle_line(key_frame(2, "a"))) == "unknown_session");
        CHECK(error_code(h.handle_line(R"({"type":"page","session":1,"direction":"next"})")) ==
              "window_hidden");
        CHECK(error_code(h.handle_line(key_frame(1, "left"))) == "bad_frame");

        h.handle_line(key_frame(1, "a"));
        h.handle_line(key_frame(1, "b"));
        const auto out = h.handle_line(key_frame(1, "space"));
        REQUIRE(out.size() == 2);
        CHECK(std::get<Commit>(out[0]).text == "明");
        CHECK(std::get<StateUpdate>(out[1]).composing.empty());

        const auto z = h.handle_line(key_frame(1, "z"));
        REQUIRE(z.size() == 2);
        CHECK(std::get<Passthrough>(z[0]).key == "z");
        CHECK(std::holds_alternative<StateUpdate>(z[1]));

        CHECK(h.handle_line(R"({"type":"close_session","session":1})").empty());
        CHECK(error_code(h.handle_line(R"({"type":"close_session","session":1})")) ==
              "unknown_session");
        CHECK(error_code(h.handle_line(key_frame(1, "a"))) == "unknown_session");
        // Ids are not reused on the same connection.
        const auto again = h.handle_line(R"({"type":"open_session","module":"table:T1"})");
        CHECK(std::get<SessionOpened>(again.front()).session == 2);
    }

    TEST_CASE("beep frame precedes the state") {
        Modules m;
        ConnectionHandler h(m.registry, m.sessions, 1, {});
        h.handle_line(R"({"type":"hello","version":"1"})");
        h.handle_line(R"({"type":"open_session","module":"table:T1"})");
        h.handle_line(key_frame(1, "a"));
        const auto out = h.handle_line(key_frame(1, "space"));
        REQUIRE(out.size() == 1);
        const auto beep = h.handle_line(key_frame(1, "9"));
        REQUIRE(beep.size() == 2);
        CHECK(std::holds_alternative<Beep>(beep[0]));
        CHECK(std::get<StateUpdate>(beep[1]).visible);
    }

    TEST_CASE("paging over the window") {
        Modules m;
        ConnectionHandler h(m.registry, m.sessions, 1, {});
        h.handle_line(R"({"type":"hello","version":"1"})");
        h.handle_line(R"({"type":"open_session","module":"table:T1"})");
        h.handle_line(key_frame(1, "a"));
        h.handle_line(key_frame(1, "space"));
        const auto next = h.handle_line(R"({"type":"page","session":1,"direction":"next"})");
        REQUIRE(next.size() == 1);
        const auto &s = std::get<StateUpdate>(next.front());
        CHECK(s.visible);
        CHECK(s.page == 0);
        CHECK(s.candidates.size() == 2);
    }

    TEST_CASE("session limit and default module") {
        Modules m;
        HandlerOptions options;
        options.max_sessions_per_conn = 2;
        options.default_module = "table:T1";
        ConnectionHandler h(m.registry, m.sessions, 7, {}, options);
        h.handle_line(R"({"type":"hello","version":"1"})");
        CHECK(std::holds_alternative<SessionOpened>(
            h.handle_line(R"({"type":"open_session","module":""})").front()));
        CHECK(std::holds_alternative<SessionOpened>(
            h.handle_line(R"({"type":"open_session","module":"table:T1"})").front()));
        CHECK(error_code(h.handle_line(R"({"type":"open_session","module":""})")) ==
              "session_limit");
        h.handle_line(R"({"type":"close_session","session":1})");
        CHECK(std::get<SessionOpened>(
                  h.handle_line(R"({"type":"open_session","module":""})").front())
                  .session == 3);
    }

    TEST_CASE("without a default module an empty id is unknown") {
        Modules m;
        ConnectionHandler h(m.registry, m.sessions, 1, {});
        h.handle_line(R"({"type":"hello","version":"1"})");
        CHECK(error_code(h.handle_line(R"({"type":"open_session","module":""})")) ==
              "unknown_module");
    }

    TEST_CASE("a storm of bad frames closes the connection") {
        Modules m;
        ConnectionHandler h(m.registry, m.sessions, 1, {});
        for (int i = 0; i < 10; ++i) {
            CHECK(error_code(h.handle_line("garbage")) == "bad_frame");
            CHECK_FALSE(h.should_close());
        }
        // A good frame resets the streak.
        h.handle_line(R"({"type":"hello","version":"1"})");
        for (int i = 0; i < 10; ++i) {
            h.handle_line("{");
        }
        CHECK_FALSE(h.should_close());
        h.handle_line("{");
        CHECK(h.should_close());
    }

    TEST_CASE("sessions are per connection and dropped with it") {
        Modules m;
        {
            ConnectionHandler a(m.registry, m.sessions, 1, {});
            ConnectionHandler b(m.registry, m.sessions, 2, {});
            a.handle_line(R"({"type":"hello","version":"1"})");
            b.handle_line(R"({"type":"hello","version":"1"})");
            a.handle_line(R"({"type":"open_session","module":"table:T1"})");
            CHECK(error_code(b.handle_line(key_frame(1, "a"))) == "unknown_session");
            b.handle_line(R"({"type":"open_session","module":"table:T1"})");
            CHECK(m.sessions.size() == 2);
        }
        CHECK(m.sessions.size() == 0);
    }

    TEST_CASE("state frames mirror the engine output") {
        EngineOutput out;
        out.view.composing = "A";
        CandidateList list;
        list.items = {{"1", "日"}, {"2", "月"}};
        list.page = 1;
        list.page_count = 2;
        list.total = 3;
        out.window = list;
        const auto s = state_frame(4, out);
        CHECK(s.session == 4);
        CHECK(s.composing == "A");
        CHECK(s.page == 1);
        CHECK(s.visible);
        CHECK(s.candidates.size() == 2);
        CHECK(state_frame(4, EngineOutput{}).visible == false);
    }
}

TEST_SUITE("server") {
    TEST_CASE("configuration errors") {
        auto config = local_config();
        config.tables_dir = test::fixture("no-such-dir");
        try {
            Server s(config);
            FAIL("constructed over a missing directory");
        } catch (const Error &e) {
            CHECK(e.code() == Errc::DirUnreadable);
        }
        config = local_config();
        config.default_module = "table:T9";
        CHECK_THROWS_AS(Server{config}, Error);
    }

    TEST_CASE("a taken port is a bind failure") {
        Server first(local_config());
        first.start();
        auto config = local_config();
        config.ws_listen.reset();
        config.tcp_listen.port = first.tcp_port();
        Server second(config);
        try {
            second.start();
            FAIL("bound a taken port");
        } catch (const Error &e) {
            CHECK(e.code() == Errc::BindFailure);
            CHECK(std::string(e.what()).find(std::to_string(first.tcp_port())) !=
                  std::string::npos);
        }
    }

    TEST_CASE("the golden session transcript is reproduced byte for byte") {
        const auto t = test::load_transcript(test::fixture("../golden/session_t1.ndjson"));
        REQUIRE(t.client.size() == 9);
        for (int run = 0; run < 3; ++run) {
            Server server(local_config());
            server.start();
            test::LineClient client(server.tcp_port());
            CHECK(run_script(client, t.client) == t.server);
            server.shutdown(1s);
        }
    }

    TEST_CASE("passthrough and closed sessions over the wire") {
        Server server(local_config());
        server.start();
        test::LineClient client(server.tcp_port());
        client.request(R"({"type":"hello","version":"1"})");
        client.request(R"({"type":"open_session","module":"table:T1"})");
        CHECK(server.session_count() == 1);
        client.send(key_frame(1, "z"));
        CHECK(client.read_line() == R"({"type":"passthrough","session":1,"key":"z"})");
        CHECK(client.read_line()->starts_with(R"({"type":"state","session":1,)"));
        client.send(R"({"type":"close_session","session":1})");
        const auto err = decode_server(client.request(key_frame(1, "a")));
        CHECK(std::get<ErrorReport>(err).code == "unknown_session");
        client.close();
        for (int i = 0; i < 200 && server.connection_count() > 0; ++i) {
            std::this_thread::sleep_for(10ms);
        }
        CHECK(server.connection_count() == 0);
        CHECK(server.session_count() == 0);
    }

    TEST_CASE("bad frames get errors and the connection survives") {
        Server server(local_config());
        server.start();
        test::LineClient client(server.tcp_port());
        CHECK(std::get<ErrorReport>(decode_server(client.request("nope"))).code == "bad_frame");
        client.send_raw("\r\n");
        CHECK(std::get<ErrorReport>(decode_server(*client.read_line())).code == "bad_frame");
        CHECK(client.request(R"({"type":"hello","version":"1"})").starts_with(
            R"({"type":"welcome")"));
        for (int i = 0; i < 11; ++i) {
            client.send("x");
        }
        CHECK(client.wait_closed(5s));
    }

    TEST_CASE("pipelined and split frames are answered in order") {
        Server server(local_config());
        server.start();
        test::LineClient client(server.tcp_port());
        const auto t = test::load_transcript(test::fixture("../golden/session_t1.ndjson"));
        std::string all;
        for (const auto &line : t.client) {
            all += line + "\n";
        }
        for (std::size_t i = 0; i < all.size(); i += 7) {
            client.send_raw(all.substr(i, 7));
        }
        std::vector<std::string> got;
        for (std::size_t i = 0; i < t.server.size(); ++i) {
            auto line = client.read_line();
            REQUIRE(line.has_value());
            got.push_back(*line);
        }
        CHECK(got == t.server);
    }

    TEST_CASE("interleaved connections match isolated runs") {
        Server server(local_config());
        server.start();
        const std::vector<std::string> keys_a = {"a", "b", "space", "a", "space", "2", "z"};
        const std::vector<std::string> keys_b = {"a", "space", "1", "escape", "b", "a", "space"};

        auto reference = [](const std::vector<std::string> &keys) {
            Modules m;
            ConnectionHandler h(m.registry, m.sessions, 1, {});
            std::vector<std::string> lines;
            for (const auto &line :
                 {std::string(R"({"type":"hello","version":"1"})"),
                  std::string(R"({"type":"open_session","module":"table:T1"})")}) {
                for (auto &l : encode_all(h.handle_line(line))) {
                    lines.push_back(l);
                }
            }
            for (const auto &k : keys) {
                for (auto &l : encode_all(h.handle_line(key_frame(1, k)))) {
                    lines.push_back(l);
                }
            }
            return lines;
        };

        test::LineClient a(server.tcp_port());
        test::LineClient b(server.tcp_port());
        std::vector<std::string> script_a = {R"({"type":"hello","version":"1"})",
                                             R"({"type":"open_session","module":"table:T1"})"};
        auto script_b = script_a;
        for (const auto &k : keys_a) {
            script_a.push_back(key_frame(1, k));
        }
        for (const auto &k : keys_b) {
            script_b.push_back(key_frame(1, k));
        }
        std::vector<std::string> got_a;
        std::vector<std::string> got_b;
        for (std::size_t i = 0; i < std::max(script_a.size(), script_b.size()); ++i) {
            if (i < script_a.size()) {
                for (auto &l : run_script(a, {script_a[i]})) {
                    got_a.push_back(l);
                }
            }
            if (i < script_b.size()) {
                for (auto &l : run_script(b, {script_b[i]})) {
                    got_b.push_back(l);
                }
            }
        }
        CHECK(got_a == reference(keys_a));
        CHECK(got_b == reference(keys_b));
    }

    TEST_CASE("shutdown without clients returns promptly") {
        Server server(local_config());
        server.start();
        const auto t0 = std::chrono::steady_clock::now();
        server.shutdown(2s);
        CHECK(std::chrono::steady_clock::now() - t0 < 1s);
        server.wait();
    }

    TEST_CASE("shutdown closes idle clients within the grace period") {
        Server server(local_config());
        server.start();
        test::LineClient client(server.tcp_port());
        client.request(R"({"type":"hello","version":"1"})");
        const auto t0 = std::chrono::steady_clock::now();
        auto done = std::async(std::launch::async, [&] { server.shutdown(2s); });
        CHECK(client.wait_closed(3s));
        done.get();
        CHECK(std::chrono::steady_clock::now() - t0 < 2s);
        CHECK(server.connection_count() == 0);
    }

    TEST_CASE("frames received before shutdown are answered") {
        Server server(local_config());
        server.start();
        test::LineClient client(server.tcp_port());
        client.request(R"({"type":"hello","version":"1"})");
        // One write: the server reads and handles the whole batch together.
        client.send_raw(std::string(R"({"type":"open_session","module":"table:T1"})") + "\n" +
                        key_frame(1, "a") + "\n" + key_frame(1, "b") + "\n" +
                        key_frame(1, "space") + "\n");
        CHECK(client.read_line() == R"({"type":"session_opened","session":1})");
        auto done = std::async(std::launch::async, [&] { server.shutdown(2s); });
        std::vector<std::string> rest;
        while (auto line = client.read_line()) {
            rest.push_back(*line);
        }
        done.get();
        REQUIRE(rest.size() == 4);
        CHECK(rest[2] == R"({"type":"commit","session":1,"text":"明"})");
        CHECK(rest[3].starts_with(R"({"type":"state","session":1,"composing":"")"));
    }

    TEST_CASE("websocket carries one frame per message") {
        namespace beast = boost::beast;
        namespace asio = boost::asio;
        Server server(local_config());
        server.start();
        REQUIRE(server.ws_port().has_value());

        asio::io_context io;
        beast::websocket::stream<asio::ip::tcp::socket> ws(io);
        ws.next_layer().connect({asio::ip::make_address("127.0.0.1"), *server.ws_port()});
        ws.handshake("127.0.0.1", "/ws");
        ws.text(true);
        auto exchange = [&](const std::string &line, std::size_t replies) {
            ws.write(asio::buffer(line));
            std::vector<std::string> got;
            for (std::size_t i = 0; i < replies; ++i) {
                beast::flat_buffer buffer;
                ws.read(buffer);
                got.push_back(beast::buffers_to_string(buffer.data()));
            }
            return got;
        };

        const auto t = test::load_transcript(test::fixture("../golden/session_t1.ndjson"));
        std::vector<std::string> got;
        const std::size_t replies[] = {1, 1, 1, 1, 2, 1, 1, 2};
        for (std::size_t i = 0; i + 1 < t.client.size(); ++i) {
            for (auto &m : exchange(t.client[i], replies[i])) {
                CHECK(m.find('\n') == std::string::npos);
                got.push_back(m);
            }
        }
        CHECK(got == t.server);
        ws.close(beast::websocket::close_code::normal);
    }

    TEST_CASE("websocket endpoint is only /ws") {
        namespace beast = boost::beast;
        namespace asio = boost::asio;
        Server server(local_config());
        server.start();
        asio::io_context io;
        beast::websocket::stream<asio::ip::tcp::socket> ws(io);
        ws.next_layer().connect({asio::ip::make_address("127.0.0.1"), *server.ws_port()});
        CHECK_THROWS(ws.handshake("127.0.0.1", "/other"));
    }

    TEST_CASE("websocket clients are closed on shutdown") {
        namespace beast = boost::beast;
        namespace asio = boost::asio;
        Server server(local_config());
        server.start();
        asio::io_context io;
        beast::websocket::stream<asio::ip::tcp::socket> ws(io);
        ws.next_layer().connect({asio::ip::make_address("127.0.0.1"), *server.ws_port()});
        ws.handshake("127.0.0.1", "/ws");
        auto done = std::async(std::launch::async, [&] { server.shutdown(2s); });
        beast::flat_buffer buffer;
        boost::system::error_code ec;
        ws.read(buffer, ec);
        CHECK(ec == beast::websocket::error::closed);
        done.get();
    }
}
