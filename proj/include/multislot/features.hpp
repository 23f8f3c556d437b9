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

/** \file features.hpp
 *  \brief Slot context and feature extraction for slot-response models.
 *
 * Features come in three groups:
 *  - spr:          logit of second-pass ranking scores
 *  - current_slot: slot index, one-hot item type, raw embedding
 *  - interaction:  computed against the last H placed items (previous type
 *                  one-hot, type cross, per-type counts, embedding dot
 *                  products, same-creator flag)
 */

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "multislot/core.hpp"

namespace multislot {

enum class FeatureGroup : std::uint8_t { spr, current_slot, interaction };

constexpr std::string_view to_string(FeatureGroup g) noexcept {
    switch (g) {
        case FeatureGroup::spr: return "spr";
        case FeatureGroup::current_slot: return "current_slot";
        case FeatureGroup::interaction: return "interaction";
    }
    return "unknown";
}

struct FeatureSpec {
    std::string name;
    FeatureGroup group;
    friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

struct FeatureConfig {
    std::size_t num_types = 6;
    std::size_t embedding_dim = 8;
    std::size_t horizon = 3;  // previous slots visible to interaction features

    bool spr = true;
    bool current_slot = true;
    bool interaction = true;

    bool spr_other_responses = false;  // logits of the other logged responses
    bool spr_contributions = false;    // logit of p(contributions)

    bool slot_index = true;
    bool item_type = true;
    bool embedding = true;

    bool prev_type = true;
    bool type_cross = true;
    bool type_counts = true;
    bool embedding_dots = true;
    bool same_creator = true;

    friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;

    void validate() const {
        if (num_types == 0) throw ValidationError("feature config: num_types must be positive");
    }

    FeatureConfig without_interactions() const {
        FeatureConfig c = *this;
        c.interaction = false;
        return c;
    }
};

/// Placement state seen by the candidate for slot `slot_index`: the full
/// history of placed items, oldest first. Feature extraction only looks at
/// the most recent `horizon` of them.
struct SlotContext {
    std::size_t slot_index = 0;
    std::vector<const Item*> previous;

    static SlotContext at_slot(std::size_t slot, std::vector<const Item*> placed = {}) {
        return SlotContext{slot, std::move(placed)};
    }

    std::span<const Item* const> recent(std::size_t horizon) const noexcept {
        const std::size_t h = std::min(horizon, previous.size());
        return std::span<const Item* const>(previous).subspan(previous.size() - h, h);
    }

    /// Per-type counts over the last `horizon` placed items.
    std::vector<std::size_t> type_counts(std::size_t horizon, std::size_t num_types) const {
        std::vector<std::size_t> counts(num_types, 0);
        for (const Item* p : recent(horizon)) {
            if (p->type.index >= num_types) throw DataError("item type index out of range");
            ++counts[p->type.index];
        }
        return counts;
    }

    bool contains(const Item& item) const noexcept {
        return std::any_of(previous.begin(), previous.end(), [&](const Item* p) { return p == &item; });
    }
};

namespace detail {

inline std::vector<ResponseKind> spr_responses(ResponseKind response, const FeatureConfig& cfg) {
    std::vector<ResponseKind> out{response};
    if (cfg.spr_other_responses) {
        for (auto r : kLoggedResponses) {
            if (r != response) out.push_back(r);
        }
    }
    if (cfg.spr_contributions && response != ResponseKind::contributions) {
        out.push_back(ResponseKind::contributions);
    }
    return out;
}

}  // namespace detail

/// Ordered feature names; defines the layout of FeatureVector and weights.
inline std::vector<FeatureSpec> feature_schema(ResponseKind response, const FeatureConfig& cfg) {
    cfg.validate();
    std::vector<FeatureSpec> s;
    const auto T = cfg.num_types;
    const auto idx = [](std::string prefix, std::size_t i) { return prefix + "[" + std::to_string(i) + "]"; };
    if (cfg.spr) {
        for (auto r : detail::spr_responses(response, cfg)) {
            s.push_back({"logit_spr_" + std::string(to_string(r)), FeatureGroup::spr});
        }
    }
    if (cfg.current_slot) {
        if (cfg.slot_index) s.push_back({"slot_index", FeatureGroup::current_slot});
        if (cfg.item_type) {
            for (std::size_t t = 0; t < T; ++t) s.push_back({idx("type", t), FeatureGroup::current_slot});
        }
        if (cfg.embedding) {
            for (std::size_t k = 0; k < cfg.embedding_dim; ++k) {
                s.push_back({idx("embedding", k), FeatureGroup::current_slot});
            }
        }
    }
    if (cfg.interaction) {
        if (cfg.prev_type) {
            for (std::size_t t = 0; t < T; ++t) s.push_back({idx("prev_type", t), FeatureGroup::interaction});
        }
        if (cfg.type_cross) {
            for (std::size_t a = 0; a < T; ++a) {
                for (std::size_t b = 0; b < T; ++b) {
                    s.push_back({"cross[" + std::to_string(a) + "x" + std::to_string(b) + "]",
                                 FeatureGroup::interaction});
                }
            }
        }
        if (cfg.type_counts) {
            for (std::size_t t = 0; t < T; ++t) s.push_back({idx("typecount", t), FeatureGroup::interaction});
        }
        if (cfg.embedding_dots) {
            s.push_back({"dot_max", FeatureGroup::interaction});
            s.push_back({"dot_mean", FeatureGroup::interaction});
        }
        if (cfg.same_creator) s.push_back({"same_creator", FeatureGroup::interaction});
    }
    return s;
}

inline std::size_t feature_count(ResponseKind response, const FeatureConfig& cfg) {
    return feature_schema(response, cfg).size();
}

/// Calls emit(index, value) for every non-zero feature contribution, in
/// schema order. Type counts emit one unit per previous item, so an index may
/// repeat and values accumulate. This is the single extraction path used both
/// for dense vectors and for allocation-free prediction.
template <class Emit>
void visit_features(const Item& item, const SlotContext& ctx, ResponseKind response, const FeatureConfig& cfg,
                    Emit&& emit) {
    const std::size_t T = cfg.num_types;
    const auto check_type = [T](const Item& it) {
        if (it.type.index >= T) throw DataError("item type index out of range for item " + it.id);
        return static_cast<std::size_t>(it.type.index);
    };
    const auto put = [&](std::size_t i, double v) {
        if (v != 0.0) emit(i, v);
    };
    std::size_t pos = 0;

    if (cfg.spr) {
        for (auto r : detail::spr_responses(response, cfg)) put(pos++, logit(item.spr.at(r)));
    }

    if (cfg.current_slot) {
        if (cfg.slot_index) put(pos++, static_cast<double>(ctx.slot_index));
        if (cfg.item_type) {
            put(pos + check_type(item), 1.0);
            pos += T;
        }
        if (cfg.embedding) {
            if (item.embedding.size() != cfg.embedding_dim) throw DataError("embedding dimension mismatch");
            for (std::size_t k = 0; k < cfg.embedding_dim; ++k) put(pos + k, item.embedding[k]);
            pos += cfg.embedding_dim;
        }
    }

    if (cfg.interaction) {
        const auto recent = ctx.recent(cfg.horizon);
        const Item* last = recent.empty() ? nullptr : recent.back();
        if (cfg.prev_type) {
            if (last) put(pos + check_type(*last), 1.0);
            pos += T;
        }
        if (cfg.type_cross) {
            if (last) put(pos + check_type(item) * T + check_type(*last), 1.0);
            pos += T * T;
        }
        if (cfg.type_counts) {
            for (const Item* p : recent) emit(pos + check_type(*p), 1.0);
            pos += T;
        }
        if (cfg.embedding_dots) {
            if (!recent.empty()) {
                double best = -std::numeric_limits<double>::infinity();
                double sum = 0.0;
                for (const Item* p : recent) {
                    if (p->embedding.size() != item.embedding.size()) throw DataError("embedding dimension mismatch");
                    const double d = dot(item.embedding, p->embedding);
                    best = std::max(best, d);
                    sum += d;
                }
                put(pos, best);
                put(pos + 1, sum / static_cast<double>(recent.size()));
            }
            pos += 2;
        }
        if (cfg.same_creator) {
            const bool same = std::any_of(recent.begin(), recent.end(),
                                          [&](const Item* p) { return p->creator_id == item.creator_id; });
            put(pos++, same ? 1.0 : 0.0);
        }
    }
}

/// Dense feature vector in schema order.
inline std::vector<double> extract_features(const Item& item, const SlotContext& ctx, ResponseKind response,
                                            const FeatureConfig& cfg) {
    if (ctx.contains(item)) throw ValidationError("item " + item.id + " is already placed in the context");
    std::vector<double> x(feature_count(response, cfg), 0.0);
    visit_features(item, ctx, response, cfg, [&](std::size_t i, double v) { x[i] += v; });
    return x;
}

}  // namespace multislot
