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

/** \file config.hpp
 *  \brief Declarative run configuration (JSON) with strict validation.
 *
 * Every section is optional and starts from the built-in defaults. Unknown
 * keys are rejected. A section that is present replaces only the keys it
 * names, except `simulator.oracle` and `simulator.spr_ranges`, which replace
 * the whole table when given.
 */

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multislot/core.hpp"
#include "multislot/models.hpp"
#include "multislot/replay.hpp"
#include "multislot/reranker.hpp"
#include "multislot/simulator.hpp"

namespace multislot {

struct TrainingSection {
    TrainingParams params;
    std::size_t episodes = 2500;  // random-policy episodes for inline training
    double holdout_fraction = 0.2;
    std::vector<ResponseKind> responses;  // empty = the reward's responses
    bool inline_training = true;
    std::string model_path;  // used when inline_training is false
    FeatureConfig estimated_features;
};

struct RerankSection {
    std::size_t window = 3;
    std::optional<std::size_t> max_deviation = 3;
    bool pin_top_slot = true;
};

struct ReplaySection {
    std::string logs;
    std::string estimator = "one_step";  // one_step | full_trajectory | exact_match | all
    std::string target = "best_vs_second_best";
    bool self_normalized = false;
    std::vector<std::string> objectives{"reward"};
    double min_ess_fraction = 0.05;
};

struct ParetoSection {
    std::string logs;
    std::vector<std::string> modes{"hybrid", "multislot"};
    std::vector<std::string> objectives{"click", "contributions"};
    std::vector<std::string> minimize;
    std::vector<double> coefficients{0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::string estimator = "one_step";
    bool decay_baseline = true;
};

struct RunConfig {
    SimConfig sim = SimConfig::defaults();
    std::string policy = "random";
    int workers = 0;
    TrainingSection training;
    RerankSection rerank;
    DecayConfig decay;
    ReplaySection replay;
    ParetoSection pareto;

    /// Responses the estimated models are trained for.
    std::vector<ResponseKind> trained_responses() const {
        return training.responses.empty() ? sim.reward.responses() : training.responses;
    }

    static RunConfig defaults() {
        RunConfig c;
        c.training.estimated_features = estimated_feature_config(c.sim);
        return c;
    }
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& section) {
    if (!j.is_object()) throw ValidationError("config: '" + section + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ValidationError("config: unknown key '" + key + "' in '" + section + "'");
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline Range read_range(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("config: '" + what + "' must be [lo, hi]");
    return Range{j[0].get<double>(), j[1].get<double>()};
}

inline OracleWeights read_oracle(const json& j, std::size_t types, const std::string& section) {
    check_keys(j,
               {"spr", "slot", "type_bias", "bias", "embedding", "prev_type", "cross", "repeat_type", "type_count",
                "dot_max", "dot_mean", "same_creator"},
               section);
    OracleWeights w;
    read(j, "spr", w.spr);
    read(j, "slot", w.slot);
    if (j.contains("bias")) w.type_bias.assign(types, j.at("bias").get<double>());
    read(j, "type_bias", w.type_bias);
    read(j, "embedding", w.embedding);
    read(j, "prev_type", w.prev_type);
    if (j.contains("repeat_type")) w.with_repeat_type(j.at("repeat_type").get<double>(), types);
    if (j.contains("cross")) {
        w.cross.clear();
        for (const auto& row : j.at("cross")) {
            for (const auto& v : row) w.cross.push_back(v.get<double>());
        }
    }
    read(j, "type_count", w.type_count);
    read(j, "dot_max", w.dot_max);
    read(j, "dot_mean", w.dot_mean);
    read(j, "same_creator", w.same_creator);
    return w;
}

inline CombinationConfig read_combination(const json& j, const std::string& section) {
    if (!j.is_object()) throw ValidationError("config: '" + section + "' must map response -> coefficient");
    std::vector<std::pair<ResponseKind, double>> coefs;
    for (auto r : kAllResponses) {
        const auto key = std::string(to_string(r));
        if (j.contains(key)) coefs.emplace_back(r, j.at(key).get<double>());
    }
    if (coefs.size() != j.size()) throw ValidationError("config: unknown response in '" + section + "'");
    return CombinationConfig(std::move(coefs));
}

inline void read_features(const json& j, FeatureConfig& f, const std::string& section) {
    check_keys(j,
               {"horizon", "spr", "current_slot", "interaction", "spr_other_responses", "spr_contributions",
                "slot_index", "item_type", "embedding", "prev_type", "type_cross", "type_counts", "embedding_dots",
                "same_creator"},
               section);
    read(j, "horizon", f.horizon);
    read(j, "spr", f.spr);
    read(j, "current_slot", f.current_slot);
    read(j, "interaction", f.interaction);
    read(j, "spr_other_responses", f.spr_other_responses);
    read(j, "spr_contributions", f.spr_contributions);
    read(j, "slot_index", f.slot_index);
    read(j, "item_type", f.item_type);
    read(j, "embedding", f.embedding);
    read(j, "prev_type", f.prev_type);
    read(j, "type_cross", f.type_cross);
    read(j, "type_counts", f.type_counts);
    read(j, "embedding_dots", f.embedding_dots);
    read(j, "same_creator", f.same_creator);
}

inline void read_simulator(const json& j, SimConfig& c) {
    check_keys(j,
               {"n_slots", "window", "horizon", "embedding_dim", "item_types", "type_weights", "num_creators",
                "spr_ranges", "embedding_range", "oracle", "zero_oracle_interactions", "reward",
                "deterministic_labels"},
               "simulator");
    read(j, "n_slots", c.n_slots);
    read(j, "window", c.window);
    read(j, "horizon", c.horizon);
    const auto old_types = c.types.size();
    const auto old_dim = c.embedding_dim;
    read(j, "embedding_dim", c.embedding_dim);
    if (j.contains("item_types")) c.types = TypeSet(j.at("item_types").get<std::vector<std::string>>());
    read(j, "type_weights", c.type_weights);
    read(j, "num_creators", c.num_creators);
    if (j.contains("spr_ranges")) {
        const auto& sr = j.at("spr_ranges");
        if (!sr.is_object()) throw ValidationError("config: 'simulator.spr_ranges' must be an object");
        c.spr_ranges.clear();
        for (auto r : kLoggedResponses) {
            const auto key = std::string(to_string(r));
            if (sr.contains(key)) c.spr_ranges.emplace_back(r, read_range(sr.at(key), "spr_ranges." + key));
        }
        if (c.spr_ranges.size() != sr.size()) throw ValidationError("config: unknown response in 'simulator.spr_ranges'");
    }
    if (j.contains("embedding_range")) c.embedding_range = read_range(j.at("embedding_range"), "embedding_range");
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        if (!o.is_object()) throw ValidationError("config: 'simulator.oracle' must be an object");
        c.oracle.clear();
        for (auto r : kLoggedResponses) {
            const auto key = std::string(to_string(r));
            if (o.contains(key)) c.oracle.emplace_back(r, read_oracle(o.at(key), c.types.size(), "simulator.oracle." + key));
        }
        if (c.oracle.size() != o.size()) throw ValidationError("config: unknown response in 'simulator.oracle'");
    } else if (c.types.size() != old_types || c.embedding_dim != old_dim) {
        // Default oracle follows the new type count / embedding size.
        for (auto& [r, w] : c.oracle) {
            const double repeat = w.cross.empty() ? 0.0 : w.cross.front();
            w.type_bias.clear();
            w.embedding.clear();
            w.prev_type.clear();
            w.type_count.clear();
            w.with_repeat_type(repeat, c.types.size());
        }
    }
    if (j.contains("reward")) c.reward = read_combination(j.at("reward"), "simulator.reward");
    read(j, "deterministic_labels", c.deterministic_labels);
    c.finalize();
    bool zero = false;
    read(j, "zero_oracle_interactions", zero);
    if (zero) c = c.without_oracle_interactions();
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
    using detail::check_keys;
    using detail::read;
    try {
        check_keys(j, {"simulator", "episodes", "seed", "workers", "policy", "training", "estimated_features", "rerank",
                       "decay", "replay", "pareto"},
                   "<root>");
        RunConfig c = RunConfig::defaults();
        if (j.contains("simulator")) detail::read_simulator(j.at("simulator"), c.sim);
        read(j, "episodes", c.sim.episodes);
        read(j, "seed", c.sim.seed);
        read(j, "workers", c.workers);
        read(j, "policy", c.policy);
        c.training.estimated_features = estimated_feature_config(c.sim);
        if (j.contains("training")) {
            const auto& t = j.at("training");
            check_keys(t, {"l2", "tolerance", "max_iterations", "step_size", "backtracking", "episodes",
                           "holdout_fraction", "responses", "inline", "model_path"},
                       "training");
            read(t, "l2", c.training.params.l2);
            read(t, "tolerance", c.training.params.tolerance);
            read(t, "max_iterations", c.training.params.max_iterations);
            read(t, "step_size", c.training.params.step_size);
            read(t, "backtracking", c.training.params.backtracking);
            read(t, "episodes", c.training.episodes);
            read(t, "holdout_fraction", c.training.holdout_fraction);
            read(t, "inline", c.training.inline_training);
            read(t, "model_path", c.training.model_path);
            if (t.contains("responses")) {
                c.training.responses.clear();
                for (const auto& r : t.at("responses")) c.training.responses.push_back(parse_response(r.get<std::string>()));
            }
        }
        if (j.contains("estimated_features")) {
            detail::read_features(j.at("estimated_features"), c.training.estimated_features, "estimated_features");
        }
        if (j.contains("rerank")) {
            const auto& r = j.at("rerank");
            check_keys(r, {"window", "max_deviation", "pin_top_slot"}, "rerank");
            read(r, "window", c.rerank.window);
            if (r.contains("max_deviation")) {
                c.rerank.max_deviation = r.at("max_deviation").is_null()
                                             ? std::nullopt
                                             : std::optional<std::size_t>(r.at("max_deviation").get<std::size_t>());
            }
            read(r, "pin_top_slot", c.rerank.pin_top_slot);
        }
        if (j.contains("decay")) {
            const auto& d = j.at("decay");
            check_keys(d, {"alpha", "response"}, "decay");
            read(d, "alpha", c.decay.alpha);
            if (d.contains("response")) c.decay.response = parse_response(d.at("response").get<std::string>());
        }
        if (j.contains("replay")) {
            const auto& r = j.at("replay");
            check_keys(r, {"logs", "estimator", "target", "self_normalized", "objectives", "min_ess_fraction"}, "replay");
            read(r, "logs", c.replay.logs);
            read(r, "estimator", c.replay.estimator);
            read(r, "target", c.replay.target);
            read(r, "self_normalized", c.replay.self_normalized);
            read(r, "objectives", c.replay.objectives);
            read(r, "min_ess_fraction", c.replay.min_ess_fraction);
        }
        if (j.contains("pareto")) {
            const auto& p = j.at("pareto");
            check_keys(p, {"logs", "modes", "objectives", "minimize", "coefficients", "estimator", "decay_baseline"},
                       "pareto");
            read(p, "logs", c.pareto.logs);
            read(p, "modes", c.pareto.modes);
            read(p, "objectives", c.pareto.objectives);
            read(p, "minimize", c.pareto.minimize);
            read(p, "coefficients", c.pareto.coefficients);
            read(p, "estimator", c.pareto.estimator);
            read(p, "decay_baseline", c.pareto.decay_baseline);
        }
        // Validation of everything that does not need input files.
        c.sim.validate();
        c.decay.validate();
        if (c.rerank.window == 0) throw ValidationError("config: rerank.window must be >= 1");
        if (!(c.training.holdout_fraction > 0.0 && c.training.holdout_fraction < 1.0)) {
            throw ValidationError("config: training.holdout_fraction must lie in (0, 1)");
        }
        if (c.training.episodes == 0) throw ValidationError("config: training.episodes must be >= 1");
        if (c.training.params.l2 < 0.0 || c.training.params.tolerance <= 0.0 || c.training.params.step_size <= 0.0) {
            throw ValidationError("config: invalid training hyperparameters");
        }
        if (c.training.estimated_features.num_types != c.sim.types.size()) {
            throw ValidationError("config: estimated features disagree with the simulator type count");
        }
        if (c.workers < 0) throw ValidationError("config: workers must be >= 0");
        for (const auto& o : c.replay.objectives) {
            if (o != "reward") parse_response(o);
        }
        for (const auto& o : c.pareto.objectives) {
            if (o != "reward") parse_response(o);
        }
        for (const auto& o : c.pareto.minimize) {
            if (std::find(c.pareto.objectives.begin(), c.pareto.objectives.end(), o) == c.pareto.objectives.end()) {
                throw ValidationError("config: pareto.minimize names an unknown objective '" + o + "'");
            }
        }
        for (const auto& m : c.pareto.modes) {
            if (m != "hybrid" && m != "multislot") throw ValidationError("config: unknown pareto mode '" + m + "'");
        }
        if (c.pareto.coefficients.empty()) throw ValidationError("config: pareto.coefficients must not be empty");
        if (c.replay.estimator != "all") parse_estimator(c.replay.estimator);
        parse_estimator(c.pareto.estimator);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    try {
        return parse_run_config(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config '" + path + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Canonical simulator description and its hash
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json sim_config_to_json(const SimConfig& c) {
    nlohmann::ordered_json ranges = nlohmann::ordered_json::object();
    for (const auto& [r, range] : c.spr_ranges) ranges[std::string(to_string(r))] = {range.lo, range.hi};
    nlohmann::ordered_json oracle = nlohmann::ordered_json::object();
    for (const auto& [r, w] : c.oracle) {
        oracle[std::string(to_string(r))] = {{"spr", w.spr},           {"slot", w.slot},
                                             {"type_bias", w.type_bias}, {"embedding", w.embedding},
                                             {"prev_type", w.prev_type}, {"cross", w.cross},
                                             {"type_count", w.type_count}, {"dot_max", w.dot_max},
                                             {"dot_mean", w.dot_mean},   {"same_creator", w.same_creator}};
    }
    nlohmann::ordered_json reward = nlohmann::ordered_json::object();
    for (const auto& [r, coef] : c.reward.coefficients()) reward[std::string(to_string(r))] = coef;
    return {{"n_slots", c.n_slots},
            {"window", c.window},
            {"horizon", c.horizon},
            {"embedding_dim", c.embedding_dim},
            {"item_types", c.types.names()},
            {"type_weights", c.type_weights},
            {"num_creators", c.num_creators},
            {"spr_ranges", ranges},
            {"embedding_range", {c.embedding_range.lo, c.embedding_range.hi}},
            {"oracle", oracle},
            {"reward", reward},
            {"deterministic_labels", c.deterministic_labels}};
}

/// FNV-1a 64 of the canonical simulator JSON (seed and episode count excluded,
/// so logs from different seeds of one environment share a hash).
inline std::string config_hash(const SimConfig& c) {
    const std::string text = sim_config_to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace multislot
