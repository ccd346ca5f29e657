// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/registry.hpp"

#include "cintable/cintable.hpp"
#include "core/error.hpp"
#include "engine/session.hpp"
#include "storage/store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

namespace vanilla {

namespace fs = std::filesystem;

void Registry::register_module(std::shared_ptr<const InputModule> module) {
    if (!module) {
        throw Error(Errc::InvalidArgument, "null module");
    }
    const auto &id = module->descriptor().id;
    if (!is_valid_module_id(id)) {
        throw Error(Errc::InvalidArgument, "malformed module id '" + id + "'");
    }
    std::unique_lock lock(mutex_);
    for (const auto &existing : modules_) {
        if (existing->descriptor().id == id) {
            throw Error(Errc::DuplicateId, "module id '" + id + "' already registered");
        }
    }
    modules_.push_back(std::move(module));
}

std::shared_ptr<const InputModule> Registry::lookup(std::string_view id) const {
    std::shared_lock lock(mutex_);
    for (const auto &module : modules_) {
        if (module->descriptor().id == id) {
            return module;
        }
    }
    return nullptr;
}

std::vector<ModuleDescriptor> Registry::list_modules() const {
    std::shared_lock lock(mutex_);
    std::vector<ModuleDescriptor> out;
    out.reserve(modules_.size());
    for (const auto &module : modules_) {
        out.push_back(module->descriptor());
    }
    return out;
}

std::size_t Registry::size() const {
    std::shared_lock lock(mutex_);
    return modules_.size();
}

namespace {

void notify(const ServiceContext &context, const std::string &message) {
    if (context.notify) {
        context.notify(message);
    }
}

std::optional<std::string> read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

} // namespace

std::vector<ModuleDescriptor> Registry::discover_tables(const fs::path &dir,
                                                        const ServiceContext &context) {
    std::error_code ec;
    fs::directory_iterator it(dir, ec);
    if (ec) {
        throw Error(Errc::DirUnreadable, dir.string() + ": " + ec.message());
    }
    std::vector<fs::path> files;
    for (const auto &entry : it) {
        if (entry.path().extension() == ".cin" && entry.is_regular_file(ec)) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<ModuleDescriptor> found;
    for (const auto &path : files) {
        const std::string name = path.filename().string();
        ModuleDescriptor descriptor;
        descriptor.id = "table:" + path.stem().string();
        descriptor.table_path = path;
        if (!is_valid_module_id(descriptor.id)) {
            notify(context, name + ": skipped, file name is not a valid module id");
            continue;
        }
        const auto source = read_file(path);
        if (!source) {
            notify(context, name + ": skipped, unreadable");
            continue;
        }
        auto parsed = parse_cin(*source);
        if (!parsed.ok()) {
            const auto fatal = std::find_if(
                parsed.diagnostics.begin(), parsed.diagnostics.end(),
                [](const Diagnostic &d) { return d.severity == Severity::Fatal; });
            notify(context, name + ": skipped, " + format(*fatal));
            continue;
        }
        const auto &table = parsed.table;
        descriptor.display_name = !table.cname.empty()   ? table.cname
                                  : !table.ename.empty() ? table.ename
                                                         : path.stem().string();
        if (!table.ename.empty()) {
            descriptor.localized_names["en"] = table.ename;
        }
        if (!table.cname.empty()) {
            descriptor.localized_names["zh"] = table.cname;
        }
        try {
            register_module(std::make_shared<TableModule>(descriptor, build_store(table)));
        } catch (const Error &e) {
            notify(context, name + ": skipped, " + e.what());
            continue;
        }
        found.push_back(std::move(descriptor));
    }
    return found;
}

} // namespace vanilla
