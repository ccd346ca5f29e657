// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vanilla {

// The only non-character keys an input module ever sees. Arrows, function
// keys and the like are not representable and reach the application
// untouched.
enum class NamedKey : std::uint8_t { Space, Escape, Backspace, Enter };

std::string_view to_string(NamedKey key) noexcept;
std::optional<NamedKey> named_key_from_string(std::string_view name) noexcept;

enum class Modifier : std::uint8_t { Shift = 1, Ctrl = 2, Alt = 4 };

class Modifiers {
public:
    constexpr Modifiers() = default;
    constexpr Modifiers(Modifier m) : bits_(static_cast<std::uint8_t>(m)) {}

    constexpr bool has(Modifier m) const noexcept {
        return (bits_ & static_cast<std::uint8_t>(m)) != 0;
    }
    constexpr Modifiers operator|(Modifiers other) const noexcept {
        Modifiers r;
        r.bits_ = bits_ | other.bits_;
        return r;
    }
    constexpr std::uint8_t bits() const noexcept { return bits_; }
    static constexpr Modifiers from_bits(std::uint8_t bits) noexcept {
        Modifiers r;
        r.bits_ = bits & 0x7;
        return r;
    }

    friend constexpr bool operator==(Modifiers, Modifiers) = default;

private:
    std::uint8_t bits_ = 0;
};

/// One keystroke: a single Unicode scalar or one of the named keys.
class KeyEvent {
public:
    /// Throws Error(InvalidArgument) when `c` is a surrogate or out of range.
    static KeyEvent character(char32_t c, Modifiers mods = {});
    static KeyEvent named(NamedKey key, Modifiers mods = {}) noexcept;

    bool is_character() const noexcept {
        return std::holds_alternative<char32_t>(kind_);
    }
    bool is_named(NamedKey key) const noexcept {
        const auto *k = std::get_if<NamedKey>(&kind_);
        return k != nullptr && *k == key;
    }
    // Precondition: is_character().
    char32_t character() const { return std::get<char32_t>(kind_); }
    // Precondition: !is_character().
    NamedKey name() const { return std::get<NamedKey>(kind_); }
    Modifiers modifiers() const noexcept { return mods_; }

    friend bool operator==(const KeyEvent &, const KeyEvent &) = default;

private:
    KeyEvent(std::variant<char32_t, NamedKey> kind, Modifiers mods)
        : kind_(kind), mods_(mods) {}

    std::variant<char32_t, NamedKey> kind_;
    Modifiers mods_;
};

// Display projection of the composing buffer. `cursor` counts scalars.
struct CompositionView {
    std::string composing;
    std::size_t cursor = 0;

    friend bool operator==(const CompositionView &,
                           const CompositionView &) = default;
};

struct Candidate {
    std::string label;
    std::string text;

    friend bool operator==(const Candidate &, const Candidate &) = default;
};

// The visible page of a candidate window. `items` holds only the current
// page, labelled from the selection keys in order; `total` counts every
// candidate across pages.
struct CandidateList {
    std::vector<Candidate> items;
    std::size_t highlighted = 0;
    std::size_t page = 0;
    std::size_t page_count = 1;
    std::size_t page_size = 1;
    std::size_t total = 0;

    friend bool operator==(const CandidateList &,
                           const CandidateList &) = default;
};

enum class PageDirection : std::uint8_t { Next, Prev };

struct EngineOutput {
    bool handled = true;
    std::vector<std::string> commits;
    CompositionView view;
    std::optional<CandidateList> window;
    bool beep = false;

    friend bool operator==(const EngineOutput &, const EngineOutput &) = default;
};

struct ServiceContext {
    std::function<void(std::string_view)> notify;
    std::function<void()> beep;
    std::string locale = "en";
    std::filesystem::path user_data_dir;
};

struct ModuleDescriptor {
    std::string id;
    std::string display_name;
    std::map<std::string, std::string> localized_names;
    // Empty for builtin modules.
    std::optional<std::filesystem::path> table_path;

    bool is_builtin() const noexcept { return !table_path.has_value(); }

    friend bool operator==(const ModuleDescriptor &,
                           const ModuleDescriptor &) = default;
};

// Builtin ids match [a-z0-9_.-]+. Table-backed ids are "table:" followed by
// a file stem over [A-Za-z0-9_.-].
bool is_valid_module_id(std::string_view id) noexcept;

} // namespace vanilla
