// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/error.hpp"
#include "protocol/frame.hpp"
#include "random_frames.hpp"

#include <doctest.h>

using namespace vanilla;
using namespace vanilla::protocol;

namespace {

std::string bad_frame_reason(std::string_view line) {
    try {
        (void)decode_client(line);
    } catch (const Error &e) {
        CHECK(e.code() == Errc::BadFrame);
        return e.what();
    }
    FAIL("decoded without error: " << line);
    return {};
}

} // namespace

TEST_SUITE("encode") {
    TEST_CASE("exact bytes") {
        CHECK(encode(ClientFrame{KeyInput{1, "a"}}) == "{\"type\":\"key\",\"session\":1,\"key\":\"a\"}\n");
        CHECK(encode(ServerFrame{Commit{1, "明"}}) ==
              "{\"type\":\"commit\",\"session\":1,\"text\":\"明\"}\n");
        CHECK(encode(ClientFrame{Hello{"1"}}) == "{\"type\":\"hello\",\"version\":\"1\"}\n");
        CHECK(encode(ClientFrame{ListModules{}}) == "{\"type\":\"list_modules\"}\n");
        CHECK(encode(ClientFrame{PageRequest{3, PageDirection::Prev}}) ==
              "{\"type\":\"page\",\"session\":3,\"direction\":\"prev\"}\n");
        CHECK(encode(ServerFrame{StateUpdate{2, "A", {{"1", "日"}}, 0, true}}) ==
              "{\"type\":\"state\",\"session\":2,\"composing\":\"A\","
              "\"candidates\":[{\"label\":\"1\",\"text\":\"日\"}],\"page\":0,\"visible\":true}\n");
        CHECK(encode(ServerFrame{ErrorReport{"unknown_module", "nope"}}) ==
              "{\"type\":\"error\",\"code\":\"unknown_module\",\"message\":\"nope\"}\n");
    }

    TEST_CASE("control characters are escaped, never raw line breaks") {
        const auto line = encode(ServerFrame{Commit{1, "a\nb\r"}});
        CHECK(line.find('\n') == line.size() - 1);
        CHECK(std::get<Commit>(decode_server(line)).text == "a\nb\r");
    }

    TEST_CASE("session zero and invalid text are refused") {
        CHECK_THROWS_AS(encode(ClientFrame{KeyInput{0, "a"}}), Error);
        CHECK_THROWS_AS(encode(ServerFrame{Commit{1, "\xFF"}}), Error);
    }
}

TEST_SUITE("decode") {
    TEST_CASE("errors name their reason") {
        CHECK(bad_frame_reason(R"({"type":"key","session":"x"})") == "session not integer");
        CHECK(bad_frame_reason(R"({"type":"key","session":1})") == "missing field 'key'");
        CHECK(bad_frame_reason(R"({"type":"warp"})") == "unknown type 'warp'");
        CHECK(bad_frame_reason("{\"type\":") == "malformed JSON");
        CHECK(bad_frame_reason("[1,2]") == "frame is not an object");
        CHECK(bad_frame_reason(R"({"session":1})") == "missing field 'type'");
        CHECK(bad_frame_reason(R"({"type":"key","session":0,"key":"a"})") ==
              "session not positive");
        CHECK(bad_frame_reason(R"({"type":"key","session":-2,"key":"a"})") == "session negative");
        CHECK(bad_frame_reason(R"({"type":"key","session":1.5,"key":"a"})") ==
              "session not integer");
        CHECK(bad_frame_reason(R"({"type":"key","session":1,"key":""})") == "key empty");
        CHECK(bad_frame_reason(R"({"type":"page","session":1,"direction":"up"})") ==
              "direction must be next or prev");
        CHECK(bad_frame_reason(R"({"type":"hello","version":1})") == "version not string");
    }

    TEST_CASE("field order and whitespace do not matter") {
        const auto f = decode_client(R"({"key":"a","session":1,"type":"key"})");
        CHECK(std::get<KeyInput>(f) == KeyInput{1, "a"});
        const auto g = decode_client(" { \"type\" : \"close_session\" ,\t\"session\" : 4 } \r\n");
        CHECK(std::get<CloseSession>(g).session == 4);
        CHECK(bad_frame_reason("{\"type\":\n\"list_modules\"}") == "frame spans several lines");
    }

    TEST_CASE("unknown extra fields are ignored") {
        const auto f = decode_client(R"({"type":"hello","version":"1","client":"x"})");
        CHECK(std::get<Hello>(f).version == "1");
    }

    TEST_CASE("client and server vocabularies are separate") {
        CHECK_THROWS_AS(decode_client(R"({"type":"beep","session":1})"), Error);
        CHECK_THROWS_AS(decode_server(R"({"type":"hello","version":"1"})"), Error);
    }
}

TEST_SUITE("keys") {
    TEST_CASE("wire names") {
        CHECK(key_to_wire(KeyEvent::named(NamedKey::Space)) == "space");
        CHECK(key_to_wire(KeyEvent::named(NamedKey::Backspace)) == "backspace");
        CHECK(key_to_wire(KeyEvent::character(U'日')) == "日");
        CHECK(key_from_wire("escape") == KeyEvent::named(NamedKey::Escape));
        CHECK(key_from_wire("s") == KeyEvent::character(U's'));
        CHECK(key_from_wire(" ") == KeyEvent::character(U' '));
        CHECK_THROWS_AS(key_from_wire("left"), Error);
        CHECK_THROWS_AS(key_from_wire("ab"), Error);
        CHECK_THROWS_AS(key_from_wire(""), Error);
    }
}

TEST_SUITE("properties") {
    TEST_CASE("random frames survive a round trip") {
        test::Rng rng(10000);
        for (int i = 0; i < 10000; ++i) {
            const auto c = test::random_client_frame(rng);
            REQUIRE(decode_client(encode(c)) == c);
            const auto s = test::random_server_frame(rng);
            REQUIRE(decode_server(encode(s)) == s);
        }
    }

    TEST_CASE("random splits reassemble into the same frames") {
        test::Rng rng(42);
        for (int round = 0; round < 200; ++round) {
            std::vector<ServerFrame> frames;
            std::string stream;
            const auto n = 1 + rng() % 50;
            for (std::size_t i = 0; i < n; ++i) {
                frames.push_back(test::random_server_frame(rng));
                stream += encode(frames.back());
            }
            LineFramer framer;
            std::vector<ServerFrame> got;
            std::size_t at = 0;
            while (at < stream.size()) {
                const auto take = std::min<std::size_t>(stream.size() - at, 1 + rng() % 40);
                framer.feed(std::string_view(stream).substr(at, take));
                at += take;
                while (auto line = framer.next()) {
                    got.push_back(decode_server(*line));
                }
            }
            REQUIRE(got == frames);
            CHECK(framer.buffered() == 0);
        }
    }

    TEST_CASE("one byte at a time") {
        const std::string stream = encode(ServerFrame{Commit{1, "明"}}) +
                                   encode(ServerFrame{Commit{1, "月"}});
        LineFramer framer;
        std::vector<std::string> lines;
        for (char c : stream) {
            framer.feed(std::string_view(&c, 1));
            while (auto line = framer.next()) {
                lines.push_back(*line);
            }
        }
        REQUIRE(lines.size() == 2);
        CHECK(std::get<Commit>(decode_server(lines[1])).text == "月");
    }
}

TEST_SUITE("framing") {
    TEST_CASE("CRLF and partial lines") {
        LineFramer framer;
        framer.feed("{\"type\":\"list_modules\"}\r\n{\"type\"");
        CHECK(framer.has_line());
        CHECK(framer.next() == "{\"type\":\"list_modules\"}");
        CHECK_FALSE(framer.has_line());
        CHECK_FALSE(framer.next().has_value());
        framer.feed(":\"list_modules\"}\n");
        CHECK(framer.next() == "{\"type\":\"list_modules\"}");
    }

    TEST_CASE("overlong lines are refused") {
        LineFramer framer(16);
        framer.feed(std::string(17, 'x'));
        CHECK_THROWS_AS(framer.next(), Error);
        CHECK(framer.buffered() == 0);
    }
}
