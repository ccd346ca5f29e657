// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/types.hpp"

#include <memory>

namespace vanilla {

/// Live composition state created by an InputModule. Owned by exactly one
/// caller at a time; implementations are not internally synchronized.
class InputSession {
public:
    virtual ~InputSession() = default;

    virtual EngineOutput process_key(const KeyEvent &event) = 0;
    /// Throws Error(WindowHidden) when no candidate window is showing.
    virtual EngineOutput page(PageDirection direction) = 0;
    virtual CompositionView view() const = 0;
};

class InputModule {
public:
    virtual ~InputModule() = default;

    virtual const ModuleDescriptor &descriptor() const = 0;
    virtual std::unique_ptr<InputSession>
    create_session(const ServiceContext &context) const = 0;
};

} // namespace vanilla
