// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/module.hpp"
#include "storage/store.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vanilla {

/// Table-driven composition: keys accumulate into a reading, the reading is
/// looked up in the store, and candidates are committed directly or through
/// a paged window labelled with the selection keys.
///
/// Transitions, in order of precedence:
///  - ctrl/alt chords pass through untouched.
///  - A selection key while the window shows commits that label's candidate
///    on the current page, or beeps when the page has no such label.
///  - A keyname key hides the window and extends the reading. Beyond
///    max_seq_len it beeps instead. With autocompose the window reopens
///    whenever the reading has candidates. Reaching max_seq_len with
///    commit_at_max commits a lone candidate, shows several, and rejects
///    the key (beep, state restored) when there are none.
///  - Space on a hidden window looks the reading up: one candidate commits,
///    several open the window, none beeps. On a visible window it commits
///    the highlighted candidate, or turns the page when space_selects_first
///    is off.
///  - Backspace hides a visible window, else drops the last key.
///  - Escape clears everything. Enter commits the raw reading.
///  - Anything else beeps while composing and passes through otherwise.
/// Keys that find nothing to act on (e.g. backspace on an empty reading)
/// are reported unhandled and leave the session untouched.
class Session final : public InputSession {
public:
    /// Throws Error(InvalidArgument) when `config` breaks its invariants.
    Session(std::shared_ptr<const TableStore> store, BehaviorConfig config,
            KeynameMap keynames);
    explicit Session(std::shared_ptr<const TableStore> store);

    EngineOutput process_key(const KeyEvent &event) override;
    EngineOutput page(PageDirection direction) override;
    CompositionView view() const override;

    const std::string &reading() const noexcept { return state_.reading; }
    bool window_visible() const noexcept { return state_.visible; }
    std::optional<CandidateList> window() const;

    // Called on every beep in addition to reporting it in the output.
    void set_beep_hook(std::function<void()> hook);

private:
    struct State {
        std::string reading;
        std::vector<std::string> candidates; // all pages, file order
        bool visible = false;
        std::size_t page = 0;
        std::size_t highlighted = 0;

        friend bool operator==(const State &, const State &) = default;
    };

    EngineOutput on_keyname(char key);
    EngineOutput on_selection(char key);
    EngineOutput on_space();
    EngineOutput on_backspace();
    EngineOutput on_escape();
    EngineOutput on_enter();
    EngineOutput on_other();

    void show_window(std::vector<std::string> candidates);
    void clear();
    std::size_t page_size() const noexcept { return config_.selection_keys.size(); }
    std::size_t page_count() const noexcept;

    EngineOutput output() const;
    EngineOutput commit(std::string text);
    EngineOutput beep() const;
    EngineOutput passthrough() const;

    std::shared_ptr<const TableStore> store_;
    BehaviorConfig config_;
    KeynameMap keynames_;
    State state_;
    std::function<void()> beep_hook_;
};

/// InputModule over one parsed table; sessions share the read-only store.
class TableModule final : public InputModule {
public:
    TableModule(ModuleDescriptor descriptor, std::shared_ptr<const TableStore> store);

    const ModuleDescriptor &descriptor() const override { return descriptor_; }
    std::unique_ptr<InputSession> create_session(const ServiceContext &context) const override;
    const std::shared_ptr<const TableStore> &store() const noexcept { return store_; }

private:
    ModuleDescriptor descriptor_;
    std::shared_ptr<const TableStore> store_;
};

} // namespace vanilla
