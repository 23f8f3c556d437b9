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

/** \file simulator.hpp
 *  \brief Sequential-interaction environment with an oracle user choice
 *  model, the policy interface, the benchmark policy zoo, and rollouts.
 *
 * A user scans the list top to bottom. At every slot the policy picks one of
 * the first K unplaced items (SPR order); the oracle then samples each
 * response label from a logistic model over the same slot features the
 * re-ranker uses, with fixed known weights.
 */

#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multislot/core.hpp"
#include "multislot/features.hpp"
#include "multislot/models.hpp"
#include "multislot/parallel.hpp"
#include "multislot/reranker.hpp"

namespace multislot {

// ---------------------------------------------------------------------------
// Oracle choice model
// ---------------------------------------------------------------------------

/// Named oracle coefficients for one response. Vectors are sized by the
/// simulator (T types, d embedding dims); `cross` is row-major
/// [candidate type][previous type].
struct OracleWeights {
    double spr = 1.0;
    double slot = 0.0;
    std::vector<double> type_bias;
    std::vector<double> embedding;
    std::vector<double> prev_type;
    std::vector<double> cross;
    std::vector<double> type_count;
    double dot_max = 0.0;
    double dot_mean = 0.0;
    double same_creator = 0.0;

    /// Defaults every per-type/per-dim vector to zeros of the right size.
    void resize(std::size_t types, std::size_t dim) {
        const auto fit = [](std::vector<double>& v, std::size_t n, const char* what) {
            if (v.empty()) v.assign(n, 0.0);
            if (v.size() != n) {
                throw ValidationError(std::string("oracle weights: '") + what + "' must have " + std::to_string(n) +
                                      " entries");
            }
        };
        fit(type_bias, types, "type_bias");
        fit(embedding, dim, "embedding");
        fit(prev_type, types, "prev_type");
        fit(cross, types * types, "cross");
        fit(type_count, types, "type_count");
    }

    /// Sets the same-type diagonal of the cross matrix.
    OracleWeights& with_repeat_type(double w, std::size_t types) {
        cross.assign(types * types, 0.0);
        for (std::size_t t = 0; t < types; ++t) cross[t * types + t] = w;
        return *this;
    }

    /// Copy with every interaction coefficient zeroed.
    OracleWeights without_interactions() const {
        OracleWeights w = *this;
        std::fill(w.prev_type.begin(), w.prev_type.end(), 0.0);
        std::fill(w.cross.begin(), w.cross.end(), 0.0);
        std::fill(w.type_count.begin(), w.type_count.end(), 0.0);
        w.dot_max = w.dot_mean = w.same_creator = 0.0;
        return w;
    }
};

/// Oracle response probability computed directly from item attributes.
/// Deliberately independent of the feature-vector path in features.hpp.
inline double oracle_probability(const OracleWeights& w, ResponseKind response, const Item& item,
                                 const SlotContext& ctx, std::size_t horizon) {
    const std::size_t T = w.type_bias.size();
    double z = w.spr * logit(item.spr.at(response));
    z += w.slot * static_cast<double>(ctx.slot_index);
    z += w.type_bias.at(item.type.index);
    for (std::size_t k = 0; k < w.embedding.size(); ++k) z += w.embedding[k] * item.embedding.at(k);

    const std::size_t h = std::min(horizon, ctx.previous.size());
    if (h > 0) {
        const Item& last = *ctx.previous.back();
        z += w.prev_type.at(last.type.index);
        z += w.cross.at(item.type.index * T + last.type.index);
        double best = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        bool same_creator = false;
        for (std::size_t j = ctx.previous.size() - h; j < ctx.previous.size(); ++j) {
            const Item& p = *ctx.previous[j];
            z += w.type_count.at(p.type.index);
            const double d = dot(item.embedding, p.embedding);
            best = std::max(best, d);
            sum += d;
            same_creator = same_creator || p.creator_id == item.creator_id;
        }
        z += w.dot_max * best + w.dot_mean * sum / static_cast<double>(h);
        if (same_creator) z += w.same_creator;
    }
    return logistic(z);
}

/// Lays oracle coefficients out in the ResponseModel schema for `features`
/// (which must enable every group with spr_other_responses off).
inline ResponseModel to_response_model(ResponseKind response, const OracleWeights& w, const FeatureConfig& features) {
    const auto schema = feature_schema(response, features);
    std::vector<double> weights;
    weights.reserve(schema.size());
    const auto T = features.num_types;
    if (features.spr) {
        weights.push_back(w.spr);
        if (features.spr_other_responses || features.spr_contributions) {
            throw ValidationError("oracle models use only the response's own SPR score");
        }
    }
    if (features.current_slot) {
        if (features.slot_index) weights.push_back(w.slot);
        if (features.item_type) weights.insert(weights.end(), w.type_bias.begin(), w.type_bias.end());
        if (features.embedding) weights.insert(weights.end(), w.embedding.begin(), w.embedding.end());
    }
    if (features.interaction) {
        if (features.prev_type) weights.insert(weights.end(), w.prev_type.begin(), w.prev_type.end());
        if (features.type_cross) weights.insert(weights.end(), w.cross.begin(), w.cross.end());
        if (features.type_counts) weights.insert(weights.end(), w.type_count.begin(), w.type_count.end());
        if (features.embedding_dots) {
            weights.push_back(w.dot_max);
            weights.push_back(w.dot_mean);
        }
        if (features.same_creator) weights.push_back(w.same_creator);
    }
    if (w.type_bias.size() != T) throw ValidationError("oracle weights sized for a different type count");
    return ResponseModel(response, features, std::move(weights));
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

struct SimConfig {
    std::size_t n_slots = 20;
    std::size_t window = 3;   // K
    std::size_t horizon = 3;  // H
    std::size_t embedding_dim = 8;
    TypeSet types{{"VIDEO", "IMAGE", "ACTIVITY", "COMPANY", "JOB", "ARTICLE"}};
    std::vector<double> type_weights;  // empty = uniform
    std::size_t num_creators = 8;
    std::vector<std::pair<ResponseKind, Range>> spr_ranges;
    Range embedding_range{-0.5, 0.5};
    std::vector<std::pair<ResponseKind, OracleWeights>> oracle;
    CombinationConfig reward = CombinationConfig::single(ResponseKind::click);
    std::size_t episodes = 10000;
    std::uint64_t seed = 42;
    bool deterministic_labels = false;  // debug: label = 1{p >= 0.5}

    /// Default simulator: six item types, eight creators, an oracle for every
    /// logged response that dislikes repetition (same type as the previous
    /// slot, same creator or similar embedding within the last H slots).
    static SimConfig defaults() {
        SimConfig c;
        c.spr_ranges = {{ResponseKind::click, {0.02, 0.80}},
                        {ResponseKind::like, {0.01, 0.20}},
                        {ResponseKind::comment, {0.005, 0.08}},
                        {ResponseKind::share, {0.002, 0.05}},
                        {ResponseKind::skip, {0.05, 0.30}}};
        const auto T = c.types.size();
        OracleWeights click;
        click.slot = -0.2;
        click.with_repeat_type(-2.0, T);
        click.same_creator = -2.0;
        click.dot_max = -3.0;
        OracleWeights like;
        like.with_repeat_type(-0.8, T);
        like.same_creator = -1.0;
        like.dot_max = -0.8;
        OracleWeights comment;
        comment.same_creator = -1.0;
        OracleWeights share;
        share.dot_max = -1.0;
        OracleWeights skip;
        c.oracle = {{ResponseKind::click, click},
                    {ResponseKind::like, like},
                    {ResponseKind::comment, comment},
                    {ResponseKind::share, share},
                    {ResponseKind::skip, skip}};
        c.finalize();
        return c;
    }

    /// Sizes oracle vectors and validates; call after editing fields.
    void finalize() {
        for (auto& [r, w] : oracle) w.resize(types.size(), embedding_dim);
        validate();
    }

    void validate() const {
        if (n_slots == 0) throw ValidationError("simulator: n_slots must be positive");
        if (window == 0 || window > n_slots) throw ValidationError("simulator: need 1 <= K <= n_slots");
        if (types.size() == 0) throw ValidationError("simulator: item type set is empty");
        if (!type_weights.empty()) {
            if (type_weights.size() != types.size()) throw ValidationError("simulator: type_weights size mismatch");
            double total = 0.0;
            for (double w : type_weights) {
                if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("simulator: type weights must be >= 0");
                total += w;
            }
            if (total <= 0.0) throw ValidationError("simulator: type weights sum to zero");
        }
        if (num_creators == 0) throw ValidationError("simulator: num_creators must be positive");
        if (!(embedding_range.lo <= embedding_range.hi)) throw ValidationError("simulator: invalid embedding range");
        if (!spr_range(ResponseKind::click)) throw ValidationError("simulator: an SPR range for click is required");
        for (const auto& [r, range] : spr_ranges) {
            if (r == ResponseKind::contributions) throw ValidationError("simulator: contributions SPR is derived");
            if (!(range.lo >= 0.0 && range.lo <= range.hi && range.hi <= 1.0)) {
                throw ValidationError("simulator: SPR range for '" + std::string(to_string(r)) + "' must lie in [0, 1]");
            }
        }
        if (oracle.empty()) throw ValidationError("simulator: at least one oracle response is required");
        for (const auto& [r, w] : oracle) {
            if (r == ResponseKind::contributions) throw ValidationError("simulator: contributions label is derived");
            if (!spr_range(r)) throw ValidationError("simulator: oracle response without an SPR range");
            if (w.type_bias.size() != types.size() || w.embedding.size() != embedding_dim) {
                throw ValidationError("simulator: oracle weights not sized; call finalize()");
            }
        }
        reward.validate();
        for (auto r : reward.responses()) {
            if (r == ResponseKind::contributions ? !has_contribution_labels() : !find_oracle(r)) {
                throw ValidationError("simulator: reward uses response '" + std::string(to_string(r)) +
                                      "' that the oracle does not label");
            }
        }
        if (episodes == 0) throw ValidationError("simulator: episodes must be >= 1");
    }

    std::optional<Range> spr_range(ResponseKind r) const {
        for (const auto& [k, v] : spr_ranges) {
            if (k == r) return v;
        }
        return std::nullopt;
    }

    const OracleWeights* find_oracle(ResponseKind r) const {
        for (const auto& [k, w] : oracle) {
            if (k == r) return &w;
        }
        return nullptr;
    }

    bool has_contribution_labels() const {
        for (auto r : {ResponseKind::like, ResponseKind::comment, ResponseKind::share, ResponseKind::skip}) {
            if (find_oracle(r)) return true;
        }
        return false;
    }

    /// Features the oracle is expressed in.
    FeatureConfig feature_config() const {
        FeatureConfig f;
        f.num_types = types.size();
        f.embedding_dim = embedding_dim;
        f.horizon = horizon;
        return f;
    }

    SimConfig without_oracle_interactions() const {
        SimConfig c = *this;
        for (auto& [r, w] : c.oracle) w = w.without_interactions();
        return c;
    }
};

/// ModelSet holding the oracle weights in ResponseModel form.
inline ModelSet oracle_models(const SimConfig& cfg) {
    ModelSet out;
    for (const auto& [r, w] : cfg.oracle) out.add(to_response_model(r, w, cfg.feature_config()));
    return out;
}

// RNG stream ids under an episode seed.
inline constexpr std::uint64_t kItemStream = 1;
inline constexpr std::uint64_t kLabelStream = 2;
inline constexpr std::uint64_t kPolicyStream = 3;
inline constexpr std::uint64_t kEpisodeStream = 4;
inline constexpr std::uint64_t kTrainingStream = 5;

/// Samples a candidate list sorted by click SPR.
inline CandidateList generate_candidates(const SimConfig& cfg, std::uint64_t seed) {
    Rng rng(derive_seed(seed, kItemStream));
    std::vector<double> type_weights = cfg.type_weights;
    if (type_weights.empty()) type_weights.assign(cfg.types.size(), 1.0);
    std::vector<Item> items;
    items.reserve(cfg.n_slots);
    for (std::size_t k = 0; k < cfg.n_slots; ++k) {
        Item it;
        it.id = "i" + std::to_string(k);
        it.creator_id = "c" + std::to_string(rng.index(cfg.num_creators));
        it.type = ItemType{static_cast<std::uint32_t>(rng.categorical(type_weights))};
        it.embedding.resize(cfg.embedding_dim);
        for (auto& e : it.embedding) e = rng.uniform(cfg.embedding_range.lo, cfg.embedding_range.hi);
        double none = 1.0;
        bool any_contribution = false;
        for (auto r : kLoggedResponses) {
            const auto range = cfg.spr_range(r);
            if (!range) continue;
            const double p = rng.uniform(range->lo, range->hi);
            it.spr.set(r, p);
            if (r != ResponseKind::click) {
                none *= 1.0 - p;
                any_contribution = true;
            }
        }
        if (any_contribution) it.spr.set(ResponseKind::contributions, 1.0 - none);
        items.push_back(std::move(it));
    }
    return CandidateList::from_unsorted(std::move(items), ResponseKind::click);
}

// ---------------------------------------------------------------------------
// Environment
// ---------------------------------------------------------------------------

struct Observation {
    std::size_t slot = 0;
    std::vector<const Item*> window;           // first min(K, remaining) unplaced items
    std::vector<std::size_t> window_positions;  // their SPR ranks
    SlotContext context;
};

struct StepResult {
    Observation observation;  // empty window when done
    ResponseVector labels;
    double reward = 0.0;
    bool done = false;
};

class Environment {
public:
    explicit Environment(SimConfig cfg) : cfg_(std::move(cfg)), label_rng_(0) {
        cfg_.validate();
        for (const auto& [r, w] : cfg_.oracle) oracle_.emplace_back(r, w);
    }

    const SimConfig& config() const noexcept { return cfg_; }

    Observation reset(std::uint64_t seed) {
        candidates_ = std::make_unique<CandidateList>(generate_candidates(cfg_, seed));
        label_rng_ = Rng(derive_seed(seed, kLabelStream));
        remaining_.resize(candidates_->size());
        std::iota(remaining_.begin(), remaining_.end(), std::size_t{0});
        placed_.clear();
        return observation();
    }

    const CandidateList& candidates() const {
        if (!candidates_) throw ValidationError("environment used before reset()");
        return *candidates_;
    }

    bool done() const noexcept { return candidates_ && remaining_.empty(); }

    Observation observation() const {
        Observation obs;
        obs.slot = placed_.size();
        const std::size_t width = std::min(cfg_.window, remaining_.size());
        for (std::size_t w = 0; w < width; ++w) {
            obs.window.push_back(&(*candidates_)[remaining_[w]]);
            obs.window_positions.push_back(remaining_[w]);
        }
        obs.context = SlotContext::at_slot(obs.slot, placed_);
        return obs;
    }

    /// Oracle probability of `response` for `item` in the current context.
    double response_probability(ResponseKind response, const Item& item) const {
        const auto* w = cfg_.find_oracle(response);
        if (!w) throw ValidationError("oracle has no model for response '" + std::string(to_string(response)) + "'");
        return oracle_probability(*w, response, item, SlotContext::at_slot(placed_.size(), placed_), cfg_.horizon);
    }

    StepResult step(std::size_t action) {
        if (!candidates_) throw ValidationError("environment used before reset()");
        const std::size_t width = std::min(cfg_.window, remaining_.size());
        if (action >= width) {
            throw ValidationError("action " + std::to_string(action) + " outside window of size " +
                                  std::to_string(width));
        }
        const Item& item = (*candidates_)[remaining_[action]];
        const SlotContext ctx = SlotContext::at_slot(placed_.size(), placed_);

        StepResult result;
        for (const auto& [r, w] : oracle_) {
            const double p = oracle_probability(w, r, item, ctx, cfg_.horizon);
            const double u = label_rng_.uniform();  // drawn unconditionally to keep streams aligned
            const bool positive = cfg_.deterministic_labels ? p >= 0.5 : u < p;
            result.labels.set(r, positive ? 1.0 : 0.0);
        }
        if (cfg_.has_contribution_labels()) {
            result.labels.set(ResponseKind::contributions, derive_contributions(result.labels));
        }
        result.reward = combine_scores(result.labels, cfg_.reward);

        placed_.push_back(&item);
        remaining_.erase(remaining_.begin() + static_cast<std::ptrdiff_t>(action));
        result.done = remaining_.empty();
        result.observation = observation();
        return result;
    }

private:
    SimConfig cfg_;
    std::vector<std::pair<ResponseKind, OracleWeights>> oracle_;
    std::unique_ptr<CandidateList> candidates_;
    std::vector<std::size_t> remaining_;
    std::vector<const Item*> placed_;
    Rng label_rng_;
};

// ---------------------------------------------------------------------------
// Policies
// ---------------------------------------------------------------------------

/// Slot policy over the K-window. Implementations are read-only after
/// construction and may be shared between rollout workers.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;

    /// Action distribution over obs.window; sums to 1.
    virtual std::vector<double> propensities(const Observation& obs) const = 0;

    virtual std::size_t act(const Observation& obs, Rng& rng) const { return rng.categorical(propensities(obs)); }

    double propensity(const Observation& obs, std::size_t action) const {
        const auto p = propensities(obs);
        return action < p.size() ? p[action] : 0.0;
    }
};

inline std::vector<double> one_hot(std::size_t n, std::size_t k) {
    std::vector<double> p(n, 0.0);
    if (n > 0) p[std::min(k, n - 1)] = 1.0;
    return p;
}

class RandomPolicy final : public Policy {
public:
    std::string name() const override { return "random"; }
    std::vector<double> propensities(const Observation& obs) const override {
        const auto n = obs.window.size();
        return std::vector<double>(n, 1.0 / static_cast<double>(n));
    }
};

/// Always the top SPR item.
class PointwiseGreedyPolicy final : public Policy {
public:
    std::string name() const override { return "pointwise_greedy"; }
    std::vector<double> propensities(const Observation& obs) const override { return one_hot(obs.window.size(), 0); }
    std::size_t act(const Observation&, Rng&) const override { return 0; }
};

/// Picks the `rank`-th best window item (0 = best) under a model-based
/// re-ranking score; ties go to the higher SPR item.
class GreedyModelPolicy final : public Policy {
public:
    GreedyModelPolicy(std::string name, ModelSet models, CombinationConfig combination, std::size_t rank = 0)
        : name_(std::move(name)), models_(std::move(models)), combination_(std::move(combination)), rank_(rank) {
        combination_.validate();
        models_.require(combination_);
    }

    std::string name() const override { return name_; }

    std::vector<double> propensities(const Observation& obs) const override {
        return one_hot(obs.window.size(), choose(obs));
    }

    std::size_t act(const Observation& obs, Rng&) const override { return choose(obs); }

    const ModelSet& models() const noexcept { return models_; }

private:
    std::size_t choose(const Observation& obs) const {
        const auto scored = score_window(obs.window, obs.context, models_, combination_);
        std::vector<std::size_t> order(scored.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return scored[a].score > scored[b].score; });
        return order[std::min(rank_, order.size() - 1)];
    }

    std::string name_;
    ModelSet models_;
    CombinationConfig combination_;
    std::size_t rank_;
};

/// Slot form of the exponential decay re-ranker: among the window, picks
/// the highest spr[response] * alpha^(items already placed from the same
/// creator).
class ExpDecayPolicy final : public Policy {
public:
    explicit ExpDecayPolicy(DecayConfig cfg) : cfg_(cfg) { cfg_.validate(); }

    std::string name() const override { return "exp_decay"; }

    std::vector<double> propensities(const Observation& obs) const override {
        std::vector<double> scores;
        scores.reserve(obs.window.size());
        for (const Item* item : obs.window) {
            double k = 0.0;
            for (const Item* p : obs.context.previous) k += p->creator_id == item->creator_id ? 1.0 : 0.0;
            scores.push_back(item->spr.at(cfg_.response) * std::pow(cfg_.alpha, k));
        }
        return one_hot(obs.window.size(), argmax_first(scores));
    }

private:
    DecayConfig cfg_;
};

// ---------------------------------------------------------------------------
// Episodes and rollouts
// ---------------------------------------------------------------------------

struct EpisodeSlot {
    std::vector<std::size_t> window;  // SPR ranks of the window items
    std::size_t action = 0;
    std::vector<double> propensities;
    ResponseVector labels;
    double reward = 0.0;
};

struct Episode {
    std::uint64_t seed = 0;
    std::shared_ptr<const CandidateList> candidates;
    std::vector<EpisodeSlot> slots;
    double total_reward = 0.0;

    /// Item placed at slot i.
    const Item& placed(std::size_t i) const { return (*candidates)[slots.at(i).window.at(slots[i].action)]; }
};

inline Episode run_episode(const Policy& policy, const SimConfig& cfg, std::uint64_t seed) {
    Environment env(cfg);
    Rng policy_rng(derive_seed(seed, kPolicyStream));
    Episode ep;
    ep.seed = seed;
    Observation obs = env.reset(seed);
    ep.candidates = std::make_shared<CandidateList>(env.candidates());
    while (!env.done()) {
        EpisodeSlot slot;
        slot.window = obs.window_positions;
        slot.propensities = policy.propensities(obs);
        slot.action = policy.act(obs, policy_rng);
        auto step = env.step(slot.action);
        slot.labels = step.labels;
        slot.reward = step.reward;
        ep.total_reward += step.reward;
        ep.slots.push_back(std::move(slot));
        obs = std::move(step.observation);
    }
    return ep;
}

struct RolloutResult {
    std::string policy;
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::vector<Episode> episodes;
};

/// Mean and standard error of the mean, summed in index order.
inline std::pair<double, double> mean_and_stderr(std::span<const double> xs) {
    const auto n = static_cast<double>(xs.size());
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

inline std::uint64_t episode_seed(std::uint64_t master_seed, std::size_t index) {
    return derive_seed(master_seed, kEpisodeStream, index);
}

/// Runs `episodes` independent episodes; episode e uses episode_seed(master, e).
inline RolloutResult rollout(const Policy& policy, const SimConfig& cfg, std::size_t episodes,
                             std::uint64_t master_seed, std::size_t workers = 1) {
    if (episodes == 0) throw ValidationError("rollout: episodes must be >= 1");
    cfg.validate();
    RolloutResult out;
    out.policy = policy.name();
    out.episodes.resize(episodes);
    parallel_for(episodes, workers,
                 [&](std::size_t e) { out.episodes[e] = run_episode(policy, cfg, episode_seed(master_seed, e)); });
    std::vector<double> totals;
    totals.reserve(episodes);
    for (const auto& ep : out.episodes) totals.push_back(ep.total_reward);
    std::tie(out.mean, out.stderr_mean) = mean_and_stderr(totals);
    return out;
}

// ---------------------------------------------------------------------------
// Training the estimated policy
// ---------------------------------------------------------------------------

/// (features of the placed item in its logged context, label) for every slot.
inline std::vector<LabeledExample> training_examples(const Episode& ep, ResponseKind response,
                                                     const FeatureConfig& features) {
    std::vector<LabeledExample> out;
    out.reserve(ep.slots.size());
    SlotContext ctx;
    for (std::size_t i = 0; i < ep.slots.size(); ++i) {
        ctx.slot_index = i;
        const Item& item = ep.placed(i);
        out.push_back({extract_features(item, ctx, response, features), ep.slots[i].labels.at(response) > 0.0 ? 1 : 0});
        ctx.previous.push_back(&item);
    }
    return out;
}

inline std::vector<LabeledExample> training_examples(std::span<const Episode> episodes, ResponseKind response,
                                                     const FeatureConfig& features) {
    std::vector<LabeledExample> out;
    for (const auto& ep : episodes) {
        auto part = training_examples(ep, response, features);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

/// Feature set of the estimated policy: the oracle's structure is only
/// partially known, so the embedding dot-product features are left out.
inline FeatureConfig estimated_feature_config(const SimConfig& cfg) {
    FeatureConfig f = cfg.feature_config();
    f.embedding_dots = false;
    return f;
}

/// Trains one model per reward response on logged episodes.
inline ModelSet train_models(std::span<const Episode> episodes, const std::vector<ResponseKind>& responses,
                             const FeatureConfig& features, const TrainingParams& params) {
    ModelSet out;
    for (auto r : responses) {
        const auto examples = training_examples(episodes, r, features);
        out.add(train(r, features, examples, params).model);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Policy zoo
// ---------------------------------------------------------------------------

inline std::vector<std::unique_ptr<Policy>> policy_zoo(const SimConfig& cfg, const ModelSet* estimated) {
    if (!estimated || estimated->empty()) {
        throw ValidationError("policy zoo: sequential_greedy_estimated requires trained response models");
    }
    std::vector<std::unique_ptr<Policy>> zoo;
    zoo.push_back(std::make_unique<RandomPolicy>());
    zoo.push_back(std::make_unique<PointwiseGreedyPolicy>());
    zoo.push_back(std::make_unique<GreedyModelPolicy>("sga_oracle", oracle_models(cfg), cfg.reward));
    zoo.push_back(std::make_unique<GreedyModelPolicy>("sga_estimated", *estimated, cfg.reward));
    return zoo;
}

}  // namespace multislot
