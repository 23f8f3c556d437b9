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

/** \file app.hpp
 *  \brief Batch commands behind the `multislot` CLI.
 *
 * Each command is a pure function of (config, input files, seed): reruns
 * produce byte-identical files whatever the worker count. CSV outputs start
 * with a `# config_hash=...` provenance line followed by a header row.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multislot/config.hpp"
#include "multislot/core.hpp"
#include "multislot/episode_log.hpp"
#include "multislot/models.hpp"
#include "multislot/pareto.hpp"
#include "multislot/replay.hpp"
#include "multislot/reranker.hpp"
#include "multislot/simulator.hpp"

namespace multislot {

inline constexpr std::uint64_t kSplitStream = 6;

struct CommandEnv {
    std::size_t workers = 1;
    std::ostream* out = &std::cout;  // summaries
    std::ostream* err = &std::cerr;  // warnings
};

inline std::string format_double(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write '" + path + "'");
    f << content;
    if (!f) throw DataError("failed writing '" + path + "'");
}

inline std::string provenance_line(const RunConfig& cfg) {
    return "# config_hash=" + config_hash(cfg.sim) + " seed=" + std::to_string(cfg.sim.seed) + "\n";
}

// ---------------------------------------------------------------------------
// Models on disk
// ---------------------------------------------------------------------------

inline std::string models_to_string(const ModelSet& models) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : models.models()) arr.push_back(nlohmann::ordered_json::parse(to_json(m).dump()));
    return nlohmann::ordered_json{{"models", arr}}.dump(2) + "\n";
}

inline ModelSet load_models(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file '" + path + "'");
    try {
        const auto j = nlohmann::json::parse(in);
        ModelSet out;
        for (const auto& m : j.at("models")) out.add(response_model_from_json(m));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("model file '" + path + "': " + e.what());
    }
}

/// Trains the estimated policy's models inline on random-policy episodes, or
/// loads them from training.model_path.
inline ModelSet obtain_estimated_models(const RunConfig& cfg, std::size_t workers) {
    if (!cfg.training.inline_training) {
        if (cfg.training.model_path.empty()) {
            throw DataError("sga_estimated needs a trained model: set training.model_path or enable inline training");
        }
        return load_models(cfg.training.model_path);
    }
    const RandomPolicy logging;
    const auto logs = rollout(logging, cfg.sim, cfg.training.episodes, derive_seed(cfg.sim.seed, kTrainingStream), workers);
    return train_models(logs.episodes, cfg.trained_responses(), cfg.training.estimated_features, cfg.training.params);
}

/// Policy by name. Model-based names: sga_oracle, sga_estimated,
/// best_of_k / second_best_of_k (rank 0 / 1 under the oracle score),
/// exp_decay.
inline std::unique_ptr<Policy> make_policy(const std::string& name, const RunConfig& cfg,
                                           const ModelSet* estimated = nullptr) {
    if (name == "random" || name == "logging") return std::make_unique<RandomPolicy>();
    if (name == "pointwise_greedy") return std::make_unique<PointwiseGreedyPolicy>();
    if (name == "sga_oracle") return std::make_unique<GreedyModelPolicy>(name, oracle_models(cfg.sim), cfg.sim.reward);
    if (name == "best_of_k") return std::make_unique<GreedyModelPolicy>(name, oracle_models(cfg.sim), cfg.sim.reward, 0);
    if (name == "second_best_of_k") {
        return std::make_unique<GreedyModelPolicy>(name, oracle_models(cfg.sim), cfg.sim.reward, 1);
    }
    if (name == "exp_decay") return std::make_unique<ExpDecayPolicy>(cfg.decay);
    if (name == "sga_estimated") {
        if (!estimated || estimated->empty()) {
            throw DataError("sga_estimated requires trained response models");
        }
        return std::make_unique<GreedyModelPolicy>(name, *estimated, cfg.sim.reward);
    }
    throw ValidationError("unknown policy '" + name + "'");
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateResult {
    std::string policy;
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t episodes = 0;
    std::string summary;
};

inline SimulateResult cmd_simulate(const RunConfig& cfg, const std::string& out_path, const CommandEnv& env = {}) {
    std::optional<ModelSet> estimated;
    if (cfg.policy == "sga_estimated") estimated = obtain_estimated_models(cfg, env.workers);
    const auto policy = make_policy(cfg.policy, cfg, estimated ? &*estimated : nullptr);
    const auto result = rollout(*policy, cfg.sim, cfg.sim.episodes, cfg.sim.seed, env.workers);

    std::ostringstream jsonl;
    write_episodes(jsonl, result.episodes, cfg.sim);
    write_file(out_path, jsonl.str());

    SimulateResult r{policy->name(), result.mean, result.stderr_mean, result.episodes.size(), {}};
    r.summary = "policy=" + r.policy + " episodes=" + std::to_string(r.episodes) + " mean_reward=" +
                format_double(r.mean) + " stderr=" + format_double(r.stderr_mean);
    *env.out << r.summary << '\n';
    return r;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct AucRow {
    ResponseKind response;
    double auc_interaction = 0.0;
    double auc_no_interaction = 0.0;
    double lift_points() const { return 100.0 * (auc_interaction - auc_no_interaction); }
    double relative_lift_pct() const { return 100.0 * (auc_interaction - auc_no_interaction) / auc_no_interaction; }
};

struct TrainCommandResult {
    ModelSet models;  // interaction-aware models
    std::vector<AucRow> auc;
};

/// Held-out AUC of `model` on `examples`.
inline double holdout_auc(const ResponseModel& model, std::span<const LabeledExample> examples) {
    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(examples.size());
    labels.reserve(examples.size());
    for (const auto& ex : examples) {
        double z = 0.0;
        for (std::size_t k = 0; k < ex.features.size(); ++k) z += model.weights()[k] * ex.features[k];
        scores.push_back(z);
        labels.push_back(ex.label);
    }
    return compute_auc(scores, labels);
}

/// 80/20 (by default) split of episode indices, seeded.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_episodes(std::size_t n, double holdout,
                                                                                   std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(derive_seed(seed, kSplitStream));
    for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
    const auto n_test = static_cast<std::size_t>(std::llround(holdout * static_cast<double>(n)));
    if (n_test == 0 || n_test >= n) throw DataError("train: not enough episodes for a train/holdout split");
    std::vector<std::size_t> test(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<std::size_t> train(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
    std::sort(test.begin(), test.end());
    std::sort(train.begin(), train.end());
    return {train, test};
}

inline TrainCommandResult train_with_ablation(const RunConfig& cfg, std::span<const Episode> episodes,
                                              const std::vector<ResponseKind>& responses) {
    const auto [train_idx, test_idx] = split_episodes(episodes.size(), cfg.training.holdout_fraction, cfg.sim.seed);
    std::vector<Episode> train_eps, test_eps;
    for (auto i : train_idx) train_eps.push_back(episodes[i]);
    for (auto i : test_idx) test_eps.push_back(episodes[i]);

    const FeatureConfig full = cfg.sim.feature_config();
    const FeatureConfig plain = full.without_interactions();
    TrainCommandResult out;
    for (auto r : responses) {
        AucRow row{r};
        {
            const auto tr = training_examples(train_eps, r, full);
            const auto te = training_examples(test_eps, r, full);
            auto fit = train(r, full, tr, cfg.training.params);
            row.auc_interaction = holdout_auc(fit.model, te);
            out.models.add(std::move(fit.model));
        }
        {
            const auto tr = training_examples(train_eps, r, plain);
            const auto te = training_examples(test_eps, r, plain);
            row.auc_no_interaction = holdout_auc(train(r, plain, tr, cfg.training.params).model, te);
        }
        out.auc.push_back(row);
    }
    return out;
}

inline std::string auc_report_csv(const RunConfig& cfg, const std::vector<AucRow>& rows) {
    std::string s = provenance_line(cfg) + "response,auc_interaction,auc_no_interaction,lift_points,relative_lift_pct\n";
    for (const auto& r : rows) {
        s += std::string(to_string(r.response)) + "," + format_double(r.auc_interaction) + "," +
             format_double(r.auc_no_interaction) + "," + format_double(r.lift_points(), 4) + "," +
             format_double(r.relative_lift_pct(), 4) + "\n";
    }
    return s;
}

inline TrainCommandResult cmd_train(const RunConfig& cfg, const std::string& logs_path, const std::string& out_path,
                                    std::vector<ResponseKind> responses = {}, const CommandEnv& env = {}) {
    if (responses.empty()) responses = cfg.trained_responses();
    const auto episodes = read_episodes(logs_path, cfg.sim);
    auto result = train_with_ablation(cfg, episodes, responses);
    write_file(out_path, models_to_string(result.models));
    const auto report = auc_report_csv(cfg, result.auc);
    write_file(out_path + ".auc.csv", report);
    *env.out << report;
    return result;
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

struct BenchmarkRow {
    std::string policy;
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t episodes = 0;
};

inline std::vector<BenchmarkRow> run_benchmark(const RunConfig& cfg, std::size_t workers) {
    const auto estimated = obtain_estimated_models(cfg, workers);
    std::vector<BenchmarkRow> rows;
    for (const auto& policy : policy_zoo(cfg.sim, &estimated)) {
        const auto r = rollout(*policy, cfg.sim, cfg.sim.episodes, cfg.sim.seed, workers);
        rows.push_back({policy->name(), r.mean, r.stderr_mean, cfg.sim.episodes});
    }
    return rows;
}

inline std::string benchmark_csv(const RunConfig& cfg, const std::vector<BenchmarkRow>& rows) {
    std::string s = provenance_line(cfg) + "policy,mean_reward,stderr,episodes\n";
    for (const auto& r : rows) {
        s += r.policy + "," + format_double(r.mean) + "," + format_double(r.stderr_mean) + "," +
             std::to_string(r.episodes) + "\n";
    }
    return s;
}

inline std::vector<BenchmarkRow> cmd_benchmark(const RunConfig& cfg, const std::string& out_path,
                                               const CommandEnv& env = {}) {
    auto rows = run_benchmark(cfg, env.workers);
    const auto csv = benchmark_csv(cfg, rows);
    write_file(out_path, csv);
    *env.out << csv;
    return rows;
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

struct ReplayRow {
    std::string policy;
    ReplayEstimate estimate;
    bool low_ess = false;
};

inline std::string replay_header(const std::vector<std::string>& objectives) {
    std::string s = "policy_id";
    for (const auto& o : objectives) s += "," + o;
    for (const auto& o : objectives) s += ",stderr_" + o;
    return s + ",estimator,ess\n";
}

inline std::string replay_csv(const RunConfig& cfg, const std::vector<ReplayRow>& rows) {
    if (rows.empty()) return provenance_line(cfg);
    std::string s = provenance_line(cfg) + replay_header(rows.front().estimate.objectives);
    for (const auto& r : rows) {
        s += r.policy;
        for (double v : r.estimate.value) s += "," + format_double(v);
        for (double v : r.estimate.stderr_value) s += "," + format_double(v);
        s += "," + std::string(to_string(r.estimate.kind)) + "," + format_double(r.estimate.effective_sample_size, 3) + "\n";
    }
    return s;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::vector<ReplayRow> cmd_replay(const RunConfig& cfg, const std::string& logs_path,
                                         const std::string& out_path, const CommandEnv& env = {}) {
    const auto episodes = read_episodes(logs_path, cfg.sim);
    const auto data = to_replay_data(episodes, cfg.replay.objectives);

    std::vector<std::string> targets;
    if (cfg.replay.target == "best_vs_second_best") {
        targets = {"best_of_k", "second_best_of_k"};
    } else {
        targets = split_list(cfg.replay.target);
    }
    std::vector<EstimatorKind> estimators;
    if (cfg.replay.estimator == "all") {
        estimators = {EstimatorKind::one_step, EstimatorKind::full_trajectory, EstimatorKind::exact_match};
    } else {
        estimators = {parse_estimator(cfg.replay.estimator)};
    }

    std::optional<ModelSet> estimated;
    for (const auto& t : targets) {
        if (t == "sga_estimated" && !estimated) estimated = obtain_estimated_models(cfg, env.workers);
    }

    ReplayOptions opts;
    opts.self_normalized = cfg.replay.self_normalized;
    opts.workers = env.workers;
    std::vector<ReplayRow> rows;
    for (const auto& t : targets) {
        const auto policy = make_policy(t, cfg, estimated ? &*estimated : nullptr);
        for (auto kind : estimators) {
            ReplayRow row{policy->name(), estimate(data, *policy, kind, opts), false};
            const double floor = cfg.replay.min_ess_fraction * static_cast<double>(row.estimate.total_slots);
            if (row.estimate.effective_sample_size < floor) {
                row.low_ess = true;
                *env.err << "warning: low effective sample size for " << row.policy << " ("
                         << to_string(kind) << "): " << format_double(row.estimate.effective_sample_size, 1) << " of "
                         << row.estimate.total_slots << " logged slots\n";
            }
            rows.push_back(std::move(row));
        }
    }
    const auto csv = replay_csv(cfg, rows);
    write_file(out_path, csv);
    *env.out << csv;
    return rows;
}

// ---------------------------------------------------------------------------
// pareto
// ---------------------------------------------------------------------------

struct ParetoRow {
    ParetoPoint point;
    std::vector<double> stderr_value;
    bool frontier = false;
    bool dominated = false;
};

/// Points from a replay CSV; objective columns must match `objectives`.
inline std::vector<ParetoPoint> read_estimate_csv(const std::string& path, const std::vector<std::string>& objectives) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open estimate file '" + path + "'");
    std::string line;
    std::vector<std::string> header;
    std::vector<ParetoPoint> points;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (header.empty()) {
            header = cells;
            const std::size_t n_obj = (header.size() >= 3) ? (header.size() - 3) / 2 : 0;
            if (header.size() < 5 || header.front() != "policy_id" || n_obj * 2 + 3 != header.size()) {
                throw DataError("estimate file '" + path + "': unexpected header");
            }
            if (n_obj != objectives.size()) {
                throw ValidationError("estimate file '" + path + "' has " + std::to_string(n_obj) +
                                      " objectives, expected " + std::to_string(objectives.size()));
            }
            for (std::size_t k = 0; k < n_obj; ++k) {
                if (header[1 + k] != objectives[k]) {
                    throw ValidationError("estimate file '" + path + "': objective '" + header[1 + k] +
                                          "' does not match '" + objectives[k] + "'");
                }
            }
            continue;
        }
        if (cells.size() != header.size()) throw DataError("estimate file '" + path + "': ragged row");
        ParetoPoint p{cells[0] + "[" + cells[header.size() - 2] + "]", {}};
        for (std::size_t k = 0; k < objectives.size(); ++k) p.objectives.push_back(std::stod(cells[1 + k]));
        points.push_back(std::move(p));
    }
    if (header.empty()) throw DataError("estimate file '" + path + "' is empty");
    return points;
}

/// Sweep policies: score = p_first + c * sum(p_other objectives).
/// multislot: every objective predicted by models trained on the logs.
/// hybrid:    the first objective keeps its SPR score; the others use the
///            trained slot-interaction models.
inline std::vector<std::pair<std::string, std::unique_ptr<Policy>>> pareto_sweep_policies(
    const RunConfig& cfg, const ModelSet& trained, const std::vector<ResponseKind>& responses) {
    std::vector<std::pair<std::string, std::unique_ptr<Policy>>> out;
    for (const auto& mode : cfg.pareto.modes) {
        ModelSet models;
        for (std::size_t k = 0; k < responses.size(); ++k) {
            if (k == 0 && mode == "hybrid") {
                models.add(ResponseModel::spr_passthrough(responses[0]));
            } else {
                models.add(*trained.find(responses[k]));
            }
        }
        for (double c : cfg.pareto.coefficients) {
            std::vector<std::pair<ResponseKind, double>> coefs{{responses[0], 1.0}};
            for (std::size_t k = 1; k < responses.size(); ++k) coefs.emplace_back(responses[k], c);
            const std::string label = mode + ":c=" + format_double(c, 4);
            out.emplace_back(label, std::make_unique<GreedyModelPolicy>(label, models, CombinationConfig(coefs)));
        }
    }
    return out;
}

inline std::vector<ParetoRow> run_pareto(const RunConfig& cfg, std::span<const Episode> episodes,
                                         const std::vector<std::string>& estimate_files, std::size_t workers) {
    std::vector<ResponseKind> responses;
    for (const auto& o : cfg.pareto.objectives) {
        if (o == "reward") throw ValidationError("pareto objectives must be response labels");
        responses.push_back(parse_response(o));
    }
    const auto data = to_replay_data(episodes, cfg.pareto.objectives);
    const auto kind = parse_estimator(cfg.pareto.estimator);
    ReplayOptions opts;
    opts.workers = workers;

    const ModelSet trained = train_models(episodes, responses, cfg.sim.feature_config(), cfg.training.params);

    std::vector<ParetoRow> rows;
    const auto add = [&](const std::string& label, const Policy& policy) {
        const auto est = estimate(data, policy, kind, opts);
        rows.push_back({{label, est.value}, est.stderr_value, false, false});
    };
    add("baseline:pointwise_greedy", PointwiseGreedyPolicy{});
    if (cfg.pareto.decay_baseline) {
        add("baseline:exp_decay(alpha=" + format_double(cfg.decay.alpha, 3) + ")", ExpDecayPolicy(cfg.decay));
    }
    for (const auto& [label, policy] : pareto_sweep_policies(cfg, trained, responses)) add(label, *policy);
    for (const auto& f : estimate_files) {
        for (auto& p : read_estimate_csv(f, cfg.pareto.objectives)) {
            rows.push_back({std::move(p), std::vector<double>(responses.size(), std::nan("")), false, false});
        }
    }

    std::vector<bool> minimize;
    for (const auto& o : cfg.pareto.objectives) {
        minimize.push_back(std::find(cfg.pareto.minimize.begin(), cfg.pareto.minimize.end(), o) !=
                           cfg.pareto.minimize.end());
    }
    std::vector<ParetoPoint> oriented;
    for (const auto& r : rows) oriented.push_back(r.point);
    oriented = orient(std::move(oriented), minimize);
    const auto frontier = frontier_indices(oriented);
    const auto dominated = dominated_flags(oriented);
    for (auto i : frontier) rows[i].frontier = true;
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].dominated = dominated[i];
    return rows;
}

inline std::string pareto_csv(const RunConfig& cfg, const std::vector<ParetoRow>& rows) {
    std::string s = provenance_line(cfg) + "point_id";
    for (const auto& o : cfg.pareto.objectives) s += "," + o;
    for (const auto& o : cfg.pareto.objectives) s += ",stderr_" + o;
    s += ",frontier,dominated\n";
    for (const auto& r : rows) {
        s += r.point.label;
        for (double v : r.point.objectives) s += "," + format_double(v);
        for (double v : r.stderr_value) s += "," + (std::isnan(v) ? std::string() : format_double(v));
        s += std::string(",") + (r.frontier ? "1" : "0") + "," + (r.dominated ? "1" : "0") + "\n";
    }
    return s;
}

inline std::vector<ParetoRow> cmd_pareto(const RunConfig& cfg, const std::string& logs_path,
                                         const std::vector<std::string>& estimate_files, const std::string& out_path,
                                         const CommandEnv& env = {}) {
    const auto episodes = read_episodes(logs_path, cfg.sim);
    auto rows = run_pareto(cfg, episodes, estimate_files, env.workers);
    const auto csv = pareto_csv(cfg, rows);
    write_file(out_path, csv);
    *env.out << csv;
    return rows;
}

// ---------------------------------------------------------------------------
// rerank
// ---------------------------------------------------------------------------

/// Candidates file: {"items":[{"id","creator_id","type","embedding","spr":{...}}]}.
/// Items may arrive in any order; they are stably sorted by SPR click.
inline CandidateList read_candidates(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open candidates file '" + path + "'");
    try {
        const auto j = nlohmann::json::parse(in);
        std::vector<Item> items;
        for (const auto& ji : j.at("items")) {
            Item it;
            it.id = ji.at("id").get<std::string>();
            it.creator_id = ji.value("creator_id", it.id);
            it.type = ItemType{ji.value("type", 0u)};
            it.embedding = ji.value("embedding", std::vector<double>{});
            for (const auto& [key, value] : ji.at("spr").items()) it.spr.set(parse_response(key), value.get<double>());
            items.push_back(std::move(it));
        }
        return CandidateList::from_unsorted(std::move(items));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("candidates file '" + path + "': " + e.what());
    }
}

inline nlohmann::ordered_json reranked_to_json(const RerankedList& list) {
    nlohmann::ordered_json slots = nlohmann::ordered_json::array();
    for (const auto& s : list.slots) {
        nlohmann::ordered_json row{{"slot", s.slot}, {"id", s.item->id}, {"original_position", s.original_position}};
        if (!std::isnan(s.score)) row["score"] = s.score;
        slots.push_back(std::move(row));
    }
    return {{"slots", std::move(slots)}};
}

struct RerankResult {
    std::shared_ptr<const CandidateList> input;  // owns the items `list` points to
    RerankedList list;
};

/// method: "sga" (oracle models unless `models_path` is given) or "exp_decay".
inline RerankResult cmd_rerank(const RunConfig& cfg, const std::string& candidates_path, const std::string& method,
                               const std::string& models_path, const std::string& out_path,
                               const CommandEnv& env = {}) {
    RerankResult out{std::make_shared<const CandidateList>(read_candidates(candidates_path)), {}};
    if (method == "exp_decay") {
        out.list = exp_decay_rerank(*out.input, cfg.decay);
    } else if (method == "sga") {
        SgaConfig sga;
        sga.window = cfg.rerank.window;
        sga.max_deviation = cfg.rerank.max_deviation;
        sga.pin_top_slot = cfg.rerank.pin_top_slot;
        sga.models = models_path.empty() ? oracle_models(cfg.sim) : load_models(models_path);
        sga.combination = cfg.sim.reward;
        out.list = sga_rerank(*out.input, sga);
    } else {
        throw ValidationError("unknown rerank method '" + method + "'");
    }
    const auto text = reranked_to_json(out.list).dump(2) + "\n";
    write_file(out_path, text);
    *env.out << text;
    return out;
}

}  // namespace multislot
