// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "cintable/cintable.hpp"

#include "core/utf8.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <optional>
#include <unordered_set>

namespace vanilla {

bool is_key_char(char c) noexcept {
    return c > 0x20 && c < 0x7F && c != '*' && c != '?' && c != '#' &&
           c != '%';
}

std::string check_behavior(const BehaviorConfig &config) {
    if (config.max_seq_len == 0) {
        return "max sequence length must be positive";
    }
    const auto &keys = config.selection_keys;
    if (keys.empty()) {
        return "selection keys must not be empty";
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const char c = keys[i];
        if (c <= 0x20 || c >= 0x7F) {
            return "selection keys must be printable ASCII";
        }
        if (keys.find(c, i + 1) != std::string::npos) {
            return std::string("duplicate selection key '") + c + "'";
        }
    }
    return {};
}

bool KeynameMap::insert(char key, std::string label) {
    const auto slot = static_cast<unsigned char>(key);
    if (slot >= index_.size()) {
        return false;
    }
    if (index_[slot] >= 0) {
        return false;
    }
    index_[slot] = static_cast<std::int32_t>(entries_.size());
    entries_.emplace_back(key, std::move(label));
    return true;
}

const std::string *KeynameMap::find(char key) const noexcept {
    const auto slot = static_cast<unsigned char>(key);
    if (slot >= index_.size() || index_[slot] < 0) {
        return nullptr;
    }
    return &entries_[static_cast<std::size_t>(index_[slot])].second;
}

std::string_view to_string(Severity severity) noexcept {
    return severity == Severity::Fatal ? "fatal" : "warning";
}

std::string format(const Diagnostic &d) {
    std::string out(to_string(d.severity));
    out += ':';
    out += std::to_string(d.line);
    out += ": ";
    out += d.message;
    return out;
}

bool ParseResult::ok() const noexcept {
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const Diagnostic &d) {
                            return d.severity == Severity::Fatal;
                        });
}

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_blank(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_blank(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

// Splits a trimmed line into its first field and the trimmed remainder.
std::pair<std::string_view, std::string_view> split_first(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && !is_blank(s[i])) {
        ++i;
    }
    return {s.substr(0, i), trim(s.substr(i))};
}

std::string quoted(std::string_view s) {
    std::string out = "'";
    out += s;
    out += '\'';
    return out;
}

std::optional<bool> parse_bool(std::string_view s) {
    if (s == "true") {
        return true;
    }
    if (s == "false") {
        return false;
    }
    return std::nullopt;
}

enum class Block { None, Keyname, Chardef };

class Parser {
public:
    explicit Parser(std::string_view source) : source_(source) {}

    ParseResult run() {
        if (source_.starts_with("\xEF\xBB\xBF")) {
            source_.remove_prefix(3);
            warn(1, "byte order mark ignored");
        }
        std::size_t line_no = 0;
        std::string_view rest = source_;
        while (!rest.empty()) {
            const auto nl = rest.find('\n');
            std::string_view line = rest.substr(0, nl);
            rest = nl == std::string_view::npos ? std::string_view{}
                                                : rest.substr(nl + 1);
            if (!line.empty() && line.back() == '\r') {
                line.remove_suffix(1);
            }
            handle_line(++line_no, line);
        }
        finish(std::max<std::size_t>(line_no, 1));
        std::stable_sort(result_.diagnostics.begin(),
                         result_.diagnostics.end(),
                         [](const Diagnostic &a, const Diagnostic &b) {
                             return a.line < b.line;
                         });
        return std::move(result_);
    }

private:
    void fatal(std::size_t line, std::string message) {
        result_.diagnostics.push_back({Severity::Fatal, line, std::move(message)});
    }
    void warn(std::size_t line, std::string message) {
        result_.diagnostics.push_back(
            {Severity::Warning, line, std::move(message)});
    }

    void handle_line(std::size_t no, std::string_view raw) {
        if (!utf8::is_valid(raw)) {
            fatal(no, "invalid UTF-8");
            return;
        }
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            return;
        }
        switch (block_) {
        case Block::None:
            handle_directive(no, line);
            break;
        case Block::Keyname:
            handle_keyname(no, line);
            break;
        case Block::Chardef:
            handle_chardef(no, line);
            break;
        }
    }

    // Inside a block only the matching end marker is a directive.
    bool handle_block_end(std::size_t no, std::string_view line,
                          std::string_view block_name) {
        if (line.front() != '%') {
            return false;
        }
        const auto [name, arg] = split_first(line);
        if (name.substr(1) == block_name && arg == "end") {
            block_ = Block::None;
        } else {
            fatal(no, "directive " + quoted(name) + " inside " +
                          std::string(block_name) + " block");
        }
        return true;
    }

    void handle_directive(std::size_t no, std::string_view line) {
        if (line.front() != '%') {
            fatal(no, "unexpected line outside a block");
            return;
        }
        const auto [name_with_pct, arg] = split_first(line);
        const auto name = name_with_pct.substr(1);
        if (name.empty()) {
            fatal(no, "malformed directive");
            return;
        }
        if (name == "keyname" || name == "chardef") {
            handle_block_marker(no, name, arg);
            return;
        }
        if (!seen_directives_.insert(std::string(name)).second &&
            is_known(name)) {
            warn(no, "duplicate directive " + quoted(name_with_pct) +
                         " ignored");
            return;
        }
        auto &behavior = result_.table.behavior;
        if (name == "ename") {
            const bool ascii =
                std::all_of(arg.begin(), arg.end(),
                            [](char c) { return c >= 0x20 && c < 0x7F; });
            if (arg.empty() || !ascii) {
                fatal(no, "%ename needs a printable ASCII name");
                return;
            }
            result_.table.ename = arg;
        } else if (name == "cname") {
            if (arg.empty()) {
                fatal(no, "%cname needs a name");
                return;
            }
            result_.table.cname = arg;
        } else if (name == "selkey") {
            BehaviorConfig probe;
            probe.selection_keys = arg;
            if (auto err = check_behavior(probe); !err.empty()) {
                fatal(no, "%selkey: " + err);
                return;
            }
            behavior.selection_keys = arg;
        } else if (name == "ov_maxseq") {
            std::size_t value = 0;
            const auto *first = arg.data();
            const auto *last = arg.data() + arg.size();
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (arg.empty() || ec != std::errc{} || ptr != last || value == 0 ||
                value > std::numeric_limits<std::int32_t>::max()) {
                fatal(no, "%ov_maxseq needs a positive integer");
                return;
            }
            behavior.max_seq_len = value;
            max_seq_set_ = true;
        } else if (name == "ov_autocompose" || name == "ov_commitatmax" ||
                   name == "ov_spacesel") {
            const auto value = parse_bool(arg);
            if (!value) {
                fatal(no, quoted(name_with_pct) + " needs true or false");
                return;
            }
            if (name == "ov_autocompose") {
                behavior.autocompose = *value;
            } else if (name == "ov_commitatmax") {
                behavior.commit_at_max = *value;
            } else {
                behavior.space_selects_first = *value;
            }
        } else {
            warn(no, "unknown directive " + quoted(name_with_pct) + " ignored");
        }
    }

    static bool is_known(std::string_view name) {
        static constexpr std::string_view known[] = {
            "ename",          "cname",     "selkey",         "ov_maxseq",
            "ov_autocompose", "ov_commitatmax", "ov_spacesel"};
        return std::find(std::begin(known), std::end(known), name) !=
               std::end(known);
    }

    void handle_block_marker(std::size_t no, std::string_view name,
                             std::string_view arg) {
        if (arg == "end") {
            fatal(no, "'%" + std::string(name) + " end' without begin");
            return;
        }
        if (arg != "begin") {
            fatal(no, "malformed directive '%" + std::string(name) + "'");
            return;
        }
        if (name == "keyname") {
            if (keyname_seen_) {
                warn(no, "second keyname block merged into the first");
            }
            keyname_seen_ = true;
            block_ = Block::Keyname;
        } else {
            if (chardef_line_ != 0) {
                fatal(no, "duplicate chardef block");
            }
            chardef_line_ = no;
            block_ = Block::Chardef;
        }
    }

    void handle_keyname(std::size_t no, std::string_view line) {
        if (handle_block_end(no, line, "keyname")) {
            return;
        }
        const auto [key, label] = split_first(line);
        if (key.size() != 1 || !is_key_char(key.front())) {
            fatal(no, "keyname key must be one printable ASCII character "
                      "other than * ? # %");
            return;
        }
        if (label.empty()) {
            fatal(no, "keyname " + quoted(key) + " has no label");
            return;
        }
        if (!result_.table.keynames.insert(key.front(), std::string(label))) {
            warn(no, "duplicate keyname " + quoted(key) + " ignored");
        }
    }

    void handle_chardef(std::size_t no, std::string_view line) {
        if (handle_block_end(no, line, "chardef")) {
            chardef_closed_ = block_ == Block::None;
            return;
        }
        const auto [sequence, text] = split_first(line);
        for (char c : sequence) {
            if (!is_key_char(c)) {
                fatal(no, "invalid key character in sequence " +
                              quoted(sequence));
                return;
            }
        }
        if (text.empty()) {
            fatal(no, "chardef " + quoted(sequence) + " has no text");
            return;
        }
        std::string dedupe_key(sequence);
        dedupe_key += '\0';
        dedupe_key += text;
        if (!seen_pairs_.insert(std::move(dedupe_key)).second) {
            warn(no, "duplicate chardef " + quoted(sequence) + " " +
                         quoted(text) + " dropped");
            return;
        }
        result_.table.chardefs.push_back(
            {std::string(sequence), std::string(text), no});
    }

    void finish(std::size_t last_line) {
        if (block_ == Block::Keyname) {
            fatal(last_line, "missing '%keyname end'");
        } else if (block_ == Block::Chardef) {
            fatal(last_line, "missing '%chardef end'");
        }
        if (chardef_line_ == 0) {
            fatal(last_line, "missing '%chardef begin'");
        } else if (chardef_closed_ && result_.table.chardefs.empty()) {
            warn(chardef_line_, "empty chardef");
        }

        auto &table = result_.table;
        std::size_t longest = 0;
        for (const auto &entry : table.chardefs) {
            longest = std::max(longest, entry.sequence.size());
            for (char c : entry.sequence) {
                if (!table.keynames.contains(c)) {
                    fatal(entry.line, "key " + quoted(std::string(1, c)) +
                                          " not in keynames");
                    break;
                }
            }
        }
        if (!max_seq_set_) {
            table.behavior.max_seq_len = std::max<std::size_t>(longest, 1);
        }
    }

    std::string_view source_;
    ParseResult result_;
    Block block_ = Block::None;
    bool keyname_seen_ = false;
    std::size_t chardef_line_ = 0;
    bool chardef_closed_ = false;
    bool max_seq_set_ = false;
    std::unordered_set<std::string> seen_directives_;
    std::unordered_set<std::string> seen_pairs_;
};

const char *bool_word(bool b) { return b ? "true" : "false"; }

} // namespace

ParseResult parse_cin(std::string_view source) { return Parser(source).run(); }

std::string serialize_cin(const CinTable &table) {
    std::string out;
    const auto line = [&out](std::string_view a, std::string_view b) {
        out += a;
        out += ' ';
        out += b;
        out += '\n';
    };
    if (!table.ename.empty()) {
        line("%ename", table.ename);
    }
    if (!table.cname.empty()) {
        line("%cname", table.cname);
    }
    const auto &b = table.behavior;
    line("%selkey", b.selection_keys);
    line("%ov_autocompose", bool_word(b.autocompose));
    line("%ov_maxseq", std::to_string(b.max_seq_len));
    line("%ov_commitatmax", bool_word(b.commit_at_max));
    line("%ov_spacesel", bool_word(b.space_selects_first));
    out += "%keyname begin\n";
    for (const auto &[key, label] : table.keynames.entries()) {
        line(std::string_view(&key, 1), label);
    }
    out += "%keyname end\n";
    out += "%chardef begin\n";
    for (const auto &entry : table.chardefs) {
        line(entry.sequence, entry.text);
    }
    out += "%chardef end\n";
    return out;
}

std::vector<Diagnostic> validate(const CinTable &table) {
    std::vector<Diagnostic> out;
    const auto &behavior = table.behavior;
    for (char key : behavior.selection_keys) {
        if (table.keynames.contains(key)) {
            out.push_back({Severity::Warning, 0,
                           "selection key " + quoted(std::string(1, key)) +
                               " shadows keyname"});
        }
    }
    std::array<bool, 128> used{};
    for (const auto &entry : table.chardefs) {
        if (entry.sequence.size() > behavior.max_seq_len) {
            out.push_back({Severity::Warning, entry.line,
                           "chardef " + quoted(entry.sequence) +
                               " longer than max sequence length " +
                               std::to_string(behavior.max_seq_len)});
        }
        for (char c : entry.sequence) {
            used[static_cast<unsigned char>(c) & 0x7F] = true;
        }
    }
    for (const auto &[key, label] : table.keynames.entries()) {
        if (!used[static_cast<unsigned char>(key) & 0x7F]) {
            out.push_back({Severity::Warning, 0,
                           "keyname " + quoted(std::string(1, key)) +
                               " never used"});
        }
    }
    return out;
}

} // namespace vanilla
