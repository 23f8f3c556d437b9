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

/** \file reranker.hpp
 *  \brief List construction: the sequential greedy re-ranker over a top-K
 *  candidate window, and the per-creator exponential decay baseline.
 *
 * The greedy re-ranker fills slots top to bottom. At each slot the first K
 * unplaced items (in SPR order) form the window; each window item is scored
 * against the items already placed and the best one takes the slot. Cost is
 * at most K model evaluations per slot and response, i.e. O(K N).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "multislot/core.hpp"
#include "multislot/features.hpp"
#include "multislot/models.hpp"

namespace multislot {

/// One ResponseModel per response kind.
class ModelSet {
public:
    ModelSet() = default;
    explicit ModelSet(std::vector<ResponseModel> models) {
        for (auto& m : models) add(std::move(m));
    }

    void add(ResponseModel model) {
        if (find(model.response())) {
            throw ValidationError("duplicate model for response '" + std::string(to_string(model.response())) + "'");
        }
        models_.push_back(std::move(model));
    }

    const ResponseModel* find(ResponseKind r) const noexcept {
        for (const auto& m : models_) {
            if (m.response() == r) return &m;
        }
        return nullptr;
    }

    const std::vector<ResponseModel>& models() const noexcept { return models_; }
    bool empty() const noexcept { return models_.empty(); }

    /// Predicts every response; increments calls[response] per evaluation.
    ResponseVector predict_all(const Item& item, const SlotContext& ctx,
                               std::array<std::size_t, kResponseKinds>* calls = nullptr) const {
        ResponseVector out;
        for (const auto& m : models_) {
            out.set(m.response(), predict(m, item, ctx));
            if (calls) ++(*calls)[static_cast<std::size_t>(m.response())];
        }
        return out;
    }

    void require(const CombinationConfig& combination) const {
        for (auto r : combination.responses()) {
            if (!find(r)) {
                throw ValidationError("no response model for combination response '" + std::string(to_string(r)) +
                                      "'");
            }
        }
    }

private:
    std::vector<ResponseModel> models_;
};

struct SgaConfig {
    std::size_t window = 3;                        // K
    std::optional<std::size_t> max_deviation = 3;  // D; nullopt = unconstrained
    bool pin_top_slot = true;
    ModelSet models;
    CombinationConfig combination = CombinationConfig::single(ResponseKind::click);

    void validate() const {
        if (window == 0) throw ValidationError("sga: window size K must be >= 1");
        combination.validate();
        models.require(combination);
    }
};

/// Instrumentation collected by sga_rerank.
struct RerankTrace {
    std::array<std::size_t, kResponseKinds> model_calls{};
    std::vector<std::size_t> scored_per_slot;  // candidates evaluated at each slot
    std::vector<std::size_t> actions;          // window index chosen at each slot
};

/// Exact number of predict calls made for `response`.
inline std::size_t count_model_calls(const RerankTrace& trace, ResponseKind response) {
    return trace.model_calls[static_cast<std::size_t>(response)];
}

struct ScoredCandidate {
    ResponseVector predicted;
    double score = 0.0;
};

/// Scores each window item against the placed context.
inline std::vector<ScoredCandidate> score_window(std::span<const Item* const> window, const SlotContext& ctx,
                                                 const ModelSet& models, const CombinationConfig& combination,
                                                 std::array<std::size_t, kResponseKinds>* calls = nullptr) {
    std::vector<ScoredCandidate> out;
    out.reserve(window.size());
    for (const Item* item : window) {
        auto predicted = models.predict_all(*item, ctx, calls);
        const double score = combine_scores(predicted, combination);
        out.push_back({std::move(predicted), score});
    }
    return out;
}

/// Index of the highest score; ties go to the lowest index.
inline std::size_t argmax_first(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

inline RerankedList sga_rerank(const CandidateList& input, const SgaConfig& cfg, RerankTrace* trace = nullptr) {
    cfg.validate();
    const std::size_t n = input.size();
    const std::size_t K = cfg.window;
    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = i;

    RerankedList out;
    out.slots.reserve(n);
    SlotContext ctx;
    ctx.previous.reserve(n);
    RerankTrace local;
    RerankTrace& tr = trace ? *trace : local;
    tr = RerankTrace{};

    const auto place = [&](std::size_t slot, std::size_t window_pos, ResponseVector predicted, double score) {
        const std::size_t orig = remaining[window_pos];
        out.slots.push_back({slot, orig, &input[orig], std::move(predicted), score});
        ctx.previous.push_back(&input[orig]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(window_pos));
        tr.actions.push_back(window_pos);
    };

    for (std::size_t slot = 0; slot < n; ++slot) {
        if (slot == 0 && cfg.pin_top_slot) {
            tr.scored_per_slot.push_back(0);
            place(0, 0, ResponseVector{}, std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const std::size_t width = std::min(K, remaining.size());

        // Deadline scheduling: the item whose original rank + D equals this
        // slot must be placed now; items more than D ranks below the slot are
        // not yet allowed.
        std::vector<std::size_t> eligible;
        if (cfg.max_deviation) {
            const std::size_t D = *cfg.max_deviation;
            if (remaining.front() + D <= slot) {
                eligible.push_back(0);
            } else {
                for (std::size_t w = 0; w < width; ++w) {
                    if (remaining[w] <= slot + D) eligible.push_back(w);
                }
            }
        } else {
            for (std::size_t w = 0; w < width; ++w) eligible.push_back(w);
        }
        if (eligible.empty()) eligible.push_back(0);

        ctx.slot_index = slot;
        std::vector<const Item*> window;
        window.reserve(eligible.size());
        for (auto w : eligible) window.push_back(&input[remaining[w]]);
        auto scored = score_window(window, ctx, cfg.models, cfg.combination, &tr.model_calls);
        tr.scored_per_slot.push_back(scored.size());

        std::vector<double> scores;
        scores.reserve(scored.size());
        for (const auto& s : scored) scores.push_back(s.score);
        const std::size_t pick = argmax_first(scores);
        place(slot, eligible[pick], std::move(scored[pick].predicted), scored[pick].score);
    }
    ctx.slot_index = n;
    return out;
}

// ---------------------------------------------------------------------------
// Exponential decay baseline
// ---------------------------------------------------------------------------

struct DecayConfig {
    double alpha = 0.8;
    ResponseKind response = ResponseKind::click;

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("decay: alpha must lie in (0, 1]");
    }
};

/// Scales the k-th item (1-based, SPR order) of each creator by alpha^(k-1)
/// and re-sorts by the adjusted score. Ties keep SPR order.
inline RerankedList exp_decay_rerank(const CandidateList& input, const DecayConfig& cfg) {
    cfg.validate();
    const std::size_t n = input.size();
    std::map<std::string, std::size_t> seen;
    std::vector<double> adjusted(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = ++seen[input[i].creator_id];
        adjusted[i] = input[i].spr.at(cfg.response) * std::pow(cfg.alpha, static_cast<double>(k - 1));
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return adjusted[a] > adjusted[b]; });

    RerankedList out;
    out.slots.reserve(n);
    for (std::size_t s = 0; s < n; ++s) out.slots.push_back({s, order[s], &input[order[s]], ResponseVector{}, adjusted[order[s]]});
    return out;
}

}  // namespace multislot
