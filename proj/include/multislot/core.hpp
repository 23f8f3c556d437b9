// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/** \file core.hpp
 *  \brief Domain types shared by every multislot module: responses, items,
 *  candidate lists, re-ranked lists, and the logit/logistic link.
 */

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace multislot {

/// Bad configuration or arguments (CLI exit code 1).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Corrupt or inconsistent data encountered at runtime (CLI exit code 2).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Responses
// ---------------------------------------------------------------------------

/// User responses. The first five are logged labels; `contributions` is
/// derived (positive when any of like/comment/share/skip is positive).
enum class ResponseKind : std::uint8_t { click, like, comment, share, skip, contributions };

inline constexpr std::size_t kResponseKinds = 6;

inline constexpr std::array<ResponseKind, 5> kLoggedResponses = {
    ResponseKind::click, ResponseKind::like, ResponseKind::comment, ResponseKind::share,
    ResponseKind::skip};

inline constexpr std::array<ResponseKind, kResponseKinds> kAllResponses = {
    ResponseKind::click, ResponseKind::like,  ResponseKind::comment,
    ResponseKind::share, ResponseKind::skip,  ResponseKind::contributions};

constexpr std::string_view to_string(ResponseKind r) noexcept {
    switch (r) {
        case ResponseKind::click: return "click";
        case ResponseKind::like: return "like";
        case ResponseKind::comment: return "comment";
        case ResponseKind::share: return "share";
        case ResponseKind::skip: return "skip";
        case ResponseKind::contributions: return "contributions";
    }
    return "unknown";
}

inline ResponseKind parse_response(std::string_view name) {
    for (auto r : kAllResponses) {
        if (to_string(r) == name) return r;
    }
    throw ValidationError("unknown response kind '" + std::string(name) + "'");
}

/// Sparse map ResponseKind -> double backed by a fixed array.
class ResponseVector {
public:
    ResponseVector() { values_.fill(0.0); }

    ResponseVector& set(ResponseKind r, double v) {
        values_[index(r)] = v;
        present_.set(index(r));
        return *this;
    }

    bool contains(ResponseKind r) const noexcept { return present_.test(index(r)); }

    double at(ResponseKind r) const {
        if (!contains(r)) {
            throw DataError("missing value for response '" + std::string(to_string(r)) + "'");
        }
        return values_[index(r)];
    }

    std::optional<double> get(ResponseKind r) const noexcept {
        if (!contains(r)) return std::nullopt;
        return values_[index(r)];
    }

    std::size_t size() const noexcept { return present_.count(); }
    bool empty() const noexcept { return present_.none(); }

    /// Present kinds in enum order.
    std::vector<ResponseKind> kinds() const {
        std::vector<ResponseKind> out;
        for (auto r : kAllResponses) {
            if (contains(r)) out.push_back(r);
        }
        return out;
    }

    friend bool operator==(const ResponseVector& a, const ResponseVector& b) noexcept {
        if (a.present_ != b.present_) return false;
        for (std::size_t i = 0; i < kResponseKinds; ++i) {
            if (a.present_.test(i) && a.values_[i] != b.values_[i]) return false;
        }
        return true;
    }

private:
    static constexpr std::size_t index(ResponseKind r) noexcept { return static_cast<std::size_t>(r); }

    std::array<double, kResponseKinds> values_{};
    std::bitset<kResponseKinds> present_;
};

/// Contributions label: positive if any of like/comment/share/skip is positive.
inline double derive_contributions(const ResponseVector& labels) {
    for (auto r : {ResponseKind::like, ResponseKind::comment, ResponseKind::share, ResponseKind::skip}) {
        if (labels.get(r).value_or(0.0) > 0.0) return 1.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Link functions
// ---------------------------------------------------------------------------

inline constexpr double kProbabilityClamp = 1e-6;

/// Clamps p into [eps, 1 - eps]. Values outside [0, 1] (or NaN) are corrupt data.
inline double clamp_probability(double p, double eps = kProbabilityClamp) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DataError("probability out of [0, 1]: " + std::to_string(p));
    }
    return std::clamp(p, eps, 1.0 - eps);
}

inline double logit(double p) {
    const double q = clamp_probability(p);
    return std::log(q / (1.0 - q));
}

inline double logistic(double x) {
    if (!std::isfinite(x)) throw DataError("logistic: non-finite input");
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// ---------------------------------------------------------------------------
// Items
// ---------------------------------------------------------------------------

/// Closed, configurable set of item types (VIDEO, IMAGE, JOB, ...).
class TypeSet {
public:
    TypeSet() = default;
    explicit TypeSet(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.empty()) throw ValidationError("item type set must be non-empty");
        std::unordered_set<std::string> seen;
        for (const auto& n : names_) {
            if (!seen.insert(n).second) throw ValidationError("duplicate item type '" + n + "'");
        }
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i] == name) return i;
        }
        throw ValidationError("unknown item type '" + std::string(name) + "'");
    }

private:
    std::vector<std::string> names_;
};

/// Item type tag; index into the run's TypeSet.
struct ItemType {
    std::uint32_t index = 0;
    friend bool operator==(ItemType, ItemType) = default;
};

struct Item {
    std::string id;
    std::string creator_id;
    ItemType type;
    std::vector<double> embedding;
    ResponseVector spr;  // second-pass ranking probabilities
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

/// Items ordered non-increasing by the designated primary SPR score.
class CandidateList {
public:
    CandidateList(std::vector<Item> items, ResponseKind primary = ResponseKind::click)
        : items_(std::move(items)), primary_(primary) {
        if (items_.empty()) throw ValidationError("candidate list must contain at least one item");
        const auto dim = items_.front().embedding.size();
        for (std::size_t i = 0; i < items_.size(); ++i) {
            const auto& it = items_[i];
            if (it.embedding.size() != dim) throw DataError("embedding dimension mismatch in candidate list");
            for (auto r : it.spr.kinds()) {
                const double p = it.spr.at(r);
                if (!(p >= 0.0 && p <= 1.0)) throw DataError("SPR score out of [0, 1] for item " + it.id);
            }
            if (i > 0 && items_[i - 1].spr.at(primary_) < it.spr.at(primary_)) {
                throw ValidationError("candidate list not sorted by primary SPR score");
            }
        }
    }

    /// Sorts (stably) by the primary SPR score before validating.
    static CandidateList from_unsorted(std::vector<Item> items, ResponseKind primary = ResponseKind::click) {
        std::stable_sort(items.begin(), items.end(), [primary](const Item& a, const Item& b) {
            return a.spr.at(primary) > b.spr.at(primary);
        });
        return CandidateList(std::move(items), primary);
    }

    std::size_t size() const noexcept { return items_.size(); }
    const Item& operator[](std::size_t i) const { return items_[i]; }
    const std::vector<Item>& items() const noexcept { return items_; }
    ResponseKind primary() const noexcept { return primary_; }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }

private:
    std::vector<Item> items_;
    ResponseKind primary_;
};

struct RerankedSlot {
    std::size_t slot = 0;
    std::size_t original_position = 0;  // rank in the input CandidateList
    const Item* item = nullptr;         // points into the input CandidateList
    ResponseVector predicted;           // empty when the slot was not scored
    double score = 0.0;                 // re-ranking score that placed the item
};

/// Ordered slot assignment; a permutation of the input list.
struct RerankedList {
    std::vector<RerankedSlot> slots;

    std::vector<std::size_t> original_positions() const {
        std::vector<std::size_t> out;
        out.reserve(slots.size());
        for (const auto& s : slots) out.push_back(s.original_position);
        return out;
    }

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        out.reserve(slots.size());
        for (const auto& s : slots) out.push_back(s.item->id);
        return out;
    }
};

/// True when `out` is a permutation of 0..n-1 with contiguous slot indices.
inline bool is_permutation_of_input(const RerankedList& out, std::size_t n) {
    if (out.slots.size() != n) return false;
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = out.slots[i];
        if (s.slot != i || s.original_position >= n || seen[s.original_position]) return false;
        seen[s.original_position] = true;
    }
    return true;
}

}  // namespace multislot
