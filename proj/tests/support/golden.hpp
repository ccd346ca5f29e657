// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cintable/cintable.hpp"
#include "core/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vanilla::test {

// One scripted engine run from golden/engine_t1.golden.
struct GoldenCase {
    std::string name;
    bool autocompose = false;
    bool commit_at_max = false;
    bool space_selects_first = true;
    std::vector<std::string> tokens;
    std::vector<std::string> expected; // one line per token
};

std::vector<GoldenCase> load_engine_golden(const std::filesystem::path &path);

// "a", "<space>", "<esc>", "<bs>", "<enter>".
KeyEvent key_from_token(std::string_view token);

// The golden line for one key: "  a handled=1 beep=0 commit= ...".
std::string describe_step(std::string_view token, const EngineOutput &output);

// Runs `c` on a fresh session over `table` and returns the produced lines.
std::vector<std::string> replay(const GoldenCase &c, const CinTable &table);

// Client lines ("> ") and server lines ("< ") of golden/session_t1.ndjson.
struct Transcript {
    std::vector<std::string> client;
    std::vector<std::string> server;
};

Transcript load_transcript(const std::filesystem::path &path);

} // namespace vanilla::test
