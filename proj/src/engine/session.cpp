// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "engine/session.hpp"

#include "core/error.hpp"
#include "core/utf8.hpp"

namespace vanilla {

Session::Session(std::shared_ptr<const TableStore> store, BehaviorConfig config,
                 KeynameMap keynames)
    : store_(std::move(store)), config_(std::move(config)),
      keynames_(std::move(keynames)) {
    if (!store_) {
        throw Error(Errc::InvalidArgument, "session needs a table store");
    }
    if (auto err = check_behavior(config_); !err.empty()) {
        throw Error(Errc::InvalidArgument, err);
    }
}

Session::Session(std::shared_ptr<const TableStore> store)
    : Session(store, store ? store->info().behavior : BehaviorConfig{},
              store ? store->info().keynames : KeynameMap{}) {}

void Session::set_beep_hook(std::function<void()> hook) { beep_hook_ = std::move(hook); }

EngineOutput Session::process_key(const KeyEvent &event) {
    const auto mods = event.modifiers();
    if (mods.has(Modifier::Ctrl) || mods.has(Modifier::Alt)) {
        return passthrough();
    }
    if (event.is_character()) {
        const char32_t c = event.character();
        if (c == U' ') {
            return on_space();
        }
        if (c < 0x80) {
            const char key = static_cast<char>(c);
            if (state_.visible &&
                config_.selection_keys.find(key) != std::string::npos) {
                return on_selection(key);
            }
            if (keynames_.contains(key)) {
                return on_keyname(key);
            }
        }
        return on_other();
    }
    switch (event.name()) {
    case NamedKey::Space:
        return on_space();
    case NamedKey::Backspace:
        return on_backspace();
    case NamedKey::Escape:
        return on_escape();
    case NamedKey::Enter:
        return on_enter();
    }
    return passthrough();
}

EngineOutput Session::on_keyname(char key) {
    if (state_.reading.size() >= config_.max_seq_len) {
        return beep();
    }
    const State before = state_;
    state_.visible = false;
    state_.candidates.clear();
    state_.reading += key;

    std::optional<std::vector<std::string>> found;
    if (config_.autocompose) {
        found = store_->lookup_exact(state_.reading);
        if (!found->empty()) {
            show_window(*found);
        }
    }
    if (config_.commit_at_max && state_.reading.size() == config_.max_seq_len) {
        if (!found) {
            found = store_->lookup_exact(state_.reading);
        }
        if (found->size() == 1) {
            return commit(found->front());
        }
        if (found->empty()) {
            state_ = before;
            return beep();
        }
        if (!state_.visible) {
            show_window(std::move(*found));
        }
    }
    return output();
}

EngineOutput Session::on_selection(char key) {
    const std::size_t slot = config_.selection_keys.find(key);
    const std::size_t index = state_.page * page_size() + slot;
    if (index >= state_.candidates.size()) {
        return beep();
    }
    return commit(state_.candidates[index]);
}

EngineOutput Session::on_space() {
    if (state_.visible) {
        if (config_.space_selects_first) {
            return commit(
                state_.candidates[state_.page * page_size() + state_.highlighted]);
        }
        state_.page = (state_.page + 1) % page_count();
        state_.highlighted = 0;
        return output();
    }
    if (state_.reading.empty()) {
        return passthrough();
    }
    auto found = store_->lookup_exact(state_.reading);
    if (found.size() == 1) {
        return commit(std::move(found.front()));
    }
    if (found.empty()) {
        return beep();
    }
    show_window(std::move(found));
    return output();
}

EngineOutput Session::on_backspace() {
    if (state_.visible) {
        state_.visible = false;
        state_.candidates.clear();
        state_.page = 0;
        state_.highlighted = 0;
        return output();
    }
    if (state_.reading.empty()) {
        return passthrough();
    }
    state_.reading.pop_back();
    return output();
}

EngineOutput Session::on_escape() {
    if (state_.reading.empty() && !state_.visible) {
        return passthrough();
    }
    clear();
    return output();
}

EngineOutput Session::on_enter() {
    if (state_.reading.empty()) {
        return passthrough();
    }
    return commit(state_.reading);
}

EngineOutput Session::on_other() {
    if (state_.reading.empty() && !state_.visible) {
        return passthrough();
    }
    return beep();
}

EngineOutput Session::page(PageDirection direction) {
    if (!state_.visible) {
        throw Error(Errc::WindowHidden, "candidate window is hidden");
    }
    const std::size_t count = page_count();
    state_.page = direction == PageDirection::Next
                      ? (state_.page + 1) % count
                      : (state_.page + count - 1) % count;
    state_.highlighted = 0;
    return output();
}

void Session::show_window(std::vector<std::string> candidates) {
    state_.candidates = std::move(candidates);
    state_.visible = true;
    state_.page = 0;
    state_.highlighted = 0;
}

void Session::clear() { state_ = State{}; }

std::size_t Session::page_count() const noexcept {
    const std::size_t n = state_.candidates.size();
    return n == 0 ? 1 : (n + page_size() - 1) / page_size();
}

CompositionView Session::view() const {
    CompositionView v;
    for (char key : state_.reading) {
        if (const auto *label = keynames_.find(key)) {
            v.composing += *label;
        }
    }
    v.cursor = utf8::length(v.composing);
    return v;
}

std::optional<CandidateList> Session::window() const {
    if (!state_.visible) {
        return std::nullopt;
    }
    CandidateList list;
    list.page = state_.page;
    list.page_size = page_size();
    list.page_count = page_count();
    list.total = state_.candidates.size();
    list.highlighted = state_.highlighted;
    const std::size_t first = state_.page * page_size();
    for (std::size_t i = first;
         i < state_.candidates.size() && i < first + page_size(); ++i) {
        list.items.push_back(
            {std::string(1, config_.selection_keys[i - first]), state_.candidates[i]});
    }
    return list;
}

EngineOutput Session::output() const {
    EngineOutput out;
    out.view = view();
    out.window = window();
    return out;
}

EngineOutput Session::commit(std::string text) {
    clear();
    auto out = output();
    out.commits.push_back(std::move(text));
    return out;
}

EngineOutput Session::beep() const {
    if (beep_hook_) {
        beep_hook_();
    }
    auto out = output();
    out.beep = true;
    return out;
}

EngineOutput Session::passthrough() const {
    auto out = output();
    out.handled = false;
    return out;
}

TableModule::TableModule(ModuleDescriptor descriptor,
                         std::shared_ptr<const TableStore> store)
    : descriptor_(std::move(descriptor)), store_(std::move(store)) {
    if (!store_) {
        throw Error(Errc::InvalidArgument, "table module needs a store");
    }
}

std::unique_ptr<InputSession>
TableModule::create_session(const ServiceContext &context) const {
    auto session = std::make_unique<Session>(store_);
    session->set_beep_hook(context.beep);
    return session;
}

} // namespace vanilla
