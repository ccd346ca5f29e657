// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/module.hpp"

#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <string_view>
#include <vector>

namespace vanilla {

/// Input modules by id, in registration order. Lookups may run
/// concurrently; registration takes an exclusive lock.
class Registry {
public:
    /// Throws Error(DuplicateId) if the id is taken and
    /// Error(InvalidArgument) if it is malformed.
    void register_module(std::shared_ptr<const InputModule> module);

    std::shared_ptr<const InputModule> lookup(std::string_view id) const;
    std::vector<ModuleDescriptor> list_modules() const;
    std::size_t size() const;

    /// Registers one table module per parseable `*.cin` file in `dir`
    /// (sorted by file name) with id "table:<stem>" and returns their
    /// descriptors. Files with fatal diagnostics, unusable stems or taken
    /// ids are skipped and reported through `context.notify`.
    /// Throws Error(DirUnreadable).
    std::vector<ModuleDescriptor> discover_tables(const std::filesystem::path &dir,
                                                  const ServiceContext &context);

private:
    mutable std::shared_mutex mutex_;
    std::vector<std::shared_ptr<const InputModule>> modules_;
};

} // namespace vanilla
