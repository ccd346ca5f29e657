// SPDX-FileCopyrightText: 2026 The Vanilla Authors
// SPDX-License-Identifier: Apache-2.0

#include "storage/store.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace vanilla {
namespace {

// Sorted unique sequences with their texts grouped behind them in file
// order, so every query is a binary search plus a contiguous walk.
class MemoryStore final : public TableStore {
public:
    explicit MemoryStore(const CinTable &table) : info_(table_info(table)) {
        const auto &defs = table.chardefs;
        std::vector<std::uint32_t> order(defs.size());
        std::iota(order.begin(), order.end(), 0U);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) {
                             return defs[a].sequence < defs[b].sequence;
                         });
        texts_.reserve(defs.size());
        for (auto i : order) {
            if (sequences_.empty() || sequences_.back() != defs[i].sequence) {
                sequences_.push_back(defs[i].sequence);
                offsets_.push_back(static_cast<std::uint32_t>(texts_.size()));
            }
            texts_.push_back(defs[i].text);
        }
        offsets_.push_back(static_cast<std::uint32_t>(texts_.size()));
    }

    const TableInfo &info() const noexcept override { return info_; }

    std::size_t entry_count() const override { return texts_.size(); }

    std::vector<std::string> lookup_exact(std::string_view sequence) const override {
        const auto it = first_not_less(sequence);
        if (it == sequences_.end() || *it != sequence) {
            return {};
        }
        return texts_of(index_of(it));
    }

    bool has_extensions(std::string_view sequence) const override {
        auto it = first_not_less(sequence);
        if (it != sequences_.end() && *it == sequence) {
            ++it;
        }
        return it != sequences_.end() && it->starts_with(sequence);
    }

    std::vector<SequenceMatch> match_prefix(std::string_view prefix) const override {
        std::vector<SequenceMatch> out;
        for (auto it = first_not_less(prefix);
             it != sequences_.end() && it->starts_with(prefix); ++it) {
            out.push_back({*it, texts_of(index_of(it))});
        }
        return out;
    }

    std::vector<SequenceMatch> match_glob(const QueryPattern &pattern) const override {
        check_pattern_keys(pattern, info_);
        const auto prefix = pattern.literal_prefix();
        std::vector<SequenceMatch> out;
        for (auto it = first_not_less(prefix);
             it != sequences_.end() && it->starts_with(prefix); ++it) {
            if (pattern.matches(*it)) {
                out.push_back({*it, texts_of(index_of(it))});
            }
        }
        return out;
    }

private:
    using Iter = std::vector<std::string>::const_iterator;

    Iter first_not_less(std::string_view key) const {
        return std::lower_bound(
            sequences_.begin(), sequences_.end(), key,
            [](const std::string &a, std::string_view b) { return a < b; });
    }

    std::size_t index_of(Iter it) const {
        return static_cast<std::size_t>(it - sequences_.begin());
    }

    std::vector<std::string> texts_of(std::size_t index) const {
        return {texts_.begin() + offsets_[index],
                texts_.begin() + offsets_[index + 1]};
    }

    TableInfo info_;
    std::vector<std::string> sequences_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::string> texts_;
};

} // namespace

std::shared_ptr<const TableStore> build_store(const CinTable &table) {
    return std::make_shared<MemoryStore>(table);
}

} // namespace vanilla
