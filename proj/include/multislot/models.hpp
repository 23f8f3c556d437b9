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

/** \file models.hpp
 *  \brief Slot-response models: logistic prediction over slot features,
 *  linear score combination, L2-regularised maximum-likelihood training,
 *  AUC, and discounted action-value labels.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "multislot/core.hpp"
#include "multislot/features.hpp"

namespace multislot {

/// Logistic response model for one response kind.
class ResponseModel {
public:
    ResponseModel(ResponseKind response, FeatureConfig features, std::vector<double> weights)
        : response_(response), features_(features), weights_(std::move(weights)) {
        const auto n = feature_count(response_, features_);
        if (weights_.size() != n) {
            throw ValidationError("response model for '" + std::string(to_string(response_)) + "' expects " +
                                  std::to_string(n) + " weights, got " + std::to_string(weights_.size()));
        }
        for (double w : weights_) {
            if (!std::isfinite(w)) throw ValidationError("response model weights must be finite");
        }
    }

    /// All-zero weights: predicts 0.5 everywhere.
    static ResponseModel constant(ResponseKind response, const FeatureConfig& features) {
        return ResponseModel(response, features, std::vector<double>(feature_count(response, features), 0.0));
    }

    /// Weight 1 on logit(spr[response]) and nothing else: reproduces the
    /// (clamped) second-pass score.
    static ResponseModel spr_passthrough(ResponseKind response) {
        FeatureConfig f;
        f.current_slot = false;
        f.interaction = false;
        return ResponseModel(response, f, {1.0});
    }

    ResponseKind response() const noexcept { return response_; }
    const FeatureConfig& features() const noexcept { return features_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::vector<FeatureSpec> schema() const { return feature_schema(response_, features_); }

    /// w . x, the linear predictor.
    double margin(const Item& item, const SlotContext& ctx) const {
        double z = 0.0;
        visit_features(item, ctx, response_, features_, [&](std::size_t i, double v) { z += weights_[i] * v; });
        return z;
    }

    friend bool operator==(const ResponseModel&, const ResponseModel&) = default;

private:
    ResponseKind response_;
    FeatureConfig features_;
    std::vector<double> weights_;
};

inline double predict(const ResponseModel& model, const Item& item, const SlotContext& ctx) {
    return logistic(model.margin(item, ctx));
}

// ---------------------------------------------------------------------------
// Score combination
// ---------------------------------------------------------------------------

/// Linear re-ranking score: sum_r c_r * p_r.
class CombinationConfig {
public:
    CombinationConfig() = default;
    explicit CombinationConfig(std::vector<std::pair<ResponseKind, double>> coefficients)
        : coefficients_(std::move(coefficients)) {
        validate();
    }

    static CombinationConfig single(ResponseKind r) { return CombinationConfig({{r, 1.0}}); }

    void validate() const {
        bool nonzero = false;
        for (std::size_t i = 0; i < coefficients_.size(); ++i) {
            if (!std::isfinite(coefficients_[i].second)) throw ValidationError("combination coefficient not finite");
            if (coefficients_[i].second != 0.0) nonzero = true;
            for (std::size_t j = 0; j < i; ++j) {
                if (coefficients_[j].first == coefficients_[i].first) {
                    throw ValidationError("duplicate combination coefficient for '" +
                                          std::string(to_string(coefficients_[i].first)) + "'");
                }
            }
        }
        if (!nonzero) throw ValidationError("combination config needs at least one nonzero coefficient");
    }

    const std::vector<std::pair<ResponseKind, double>>& coefficients() const noexcept { return coefficients_; }

    std::vector<ResponseKind> responses() const {
        std::vector<ResponseKind> out;
        for (const auto& [r, c] : coefficients_) out.push_back(r);
        return out;
    }

private:
    std::vector<std::pair<ResponseKind, double>> coefficients_;
};

inline double combine_scores(const ResponseVector& predictions, const CombinationConfig& cfg) {
    double s = 0.0;
    for (const auto& [r, c] : cfg.coefficients()) s += c * predictions.at(r);
    return s;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainingParams {
    double l2 = 1e-4;
    double tolerance = 1e-6;  // on the gradient norm
    std::size_t max_iterations = 3000;
    double step_size = 1.0;
    /// Armijo backtracking with Barzilai-Borwein trial steps. When false a
    /// fixed `step_size` is used on every iteration.
    bool backtracking = true;
};

struct TrainReport {
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
    std::vector<double> loss_history;  // objective after each iteration, index 0 = initial
};

struct LabeledExample {
    std::vector<double> features;
    int label = 0;
};

struct FitResult {
    std::vector<double> weights;
    TrainReport report;
};

namespace detail {

struct LogisticObjective {
    const Eigen::MatrixXd& X;
    const Eigen::VectorXd& y;
    double l2;

    /// Loss at w given z = X w.
    double loss(const Eigen::VectorXd& w, const Eigen::VectorXd& z) const {
        double total = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            // log(1 + e^z) - y z, evaluated without overflow
            const double zi = z[i];
            total += std::max(zi, 0.0) + std::log1p(std::exp(-std::abs(zi))) - y[i] * zi;
        }
        return total / static_cast<double>(X.rows()) + 0.5 * l2 * w.squaredNorm();
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& w, const Eigen::VectorXd& z) const {
        Eigen::VectorXd r(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) r[i] = logistic(z[i]) - y[i];
        return X.transpose() * r / static_cast<double>(X.rows()) + l2 * w;
    }
};

}  // namespace detail

/// L2-regularised logistic regression by full-batch gradient descent.
/// Deterministic for a fixed row order and parameters.
inline FitResult fit_logistic(std::span<const LabeledExample> examples, const TrainingParams& params) {
    if (examples.empty()) throw DataError("training set is empty");
    if (params.l2 < 0.0 || params.tolerance <= 0.0 || params.step_size <= 0.0) {
        throw ValidationError("training params: l2 >= 0, tolerance > 0 and step_size > 0 required");
    }
    const auto p = examples.front().features.size();
    const auto n = examples.size();
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ex = examples[i];
        if (ex.features.size() != p) throw DataError("training examples have inconsistent feature length");
        if (ex.label != 0 && ex.label != 1) throw DataError("training labels must be 0 or 1");
        for (std::size_t j = 0; j < p; ++j) {
            if (!std::isfinite(ex.features[j])) throw DataError("non-finite feature in training data");
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ex.features[j];
        }
        y[static_cast<Eigen::Index>(i)] = ex.label;
        positives += static_cast<std::size_t>(ex.label);
    }
    if (positives == 0 || positives == n) throw DataError("training data contains a single label class");

    const detail::LogisticObjective obj{X, y, params.l2};
    // Jacobi preconditioner: inverse diagonal of the Gauss-Newton bound X'X/4n + l2.
    Eigen::VectorXd precond(static_cast<Eigen::Index>(p));
    for (Eigen::Index j = 0; j < precond.size(); ++j) {
        const double d = 0.25 * X.col(j).squaredNorm() / static_cast<double>(n) + params.l2;
        precond[j] = d > 0.0 ? 1.0 / d : 1.0;
    }
    if (!params.backtracking) precond.setOnes();

    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    double f = obj.loss(w, z);
    Eigen::VectorXd g = obj.gradient(w, z);

    TrainReport report;
    report.loss_history.push_back(f);
    Eigen::VectorXd s_prev, g_prev;
    constexpr double kArmijo = 1e-4;

    while (report.iterations < params.max_iterations) {
        if (g.norm() <= params.tolerance) {
            report.converged = true;
            break;
        }
        const Eigen::VectorXd d = precond.cwiseProduct(g);
        const double gd = g.dot(d);
        double step = params.step_size;
        if (params.backtracking && report.iterations > 0) {
            // Barzilai-Borwein step in the preconditioned metric.
            const double sy = s_prev.dot(g - g_prev);
            if (sy > 0.0) step = std::clamp(s_prev.cwiseQuotient(precond).dot(s_prev) / sy, 1e-10, 1e10);
        }
        Eigen::VectorXd w_next = w - step * d;
        Eigen::VectorXd z_next = X * w_next;
        double f_next = obj.loss(w_next, z_next);
        if (params.backtracking) {
            int halvings = 0;
            while (f_next > f - kArmijo * step * gd) {
                if (++halvings > 60) break;
                step *= 0.5;
                w_next = w - step * d;
                z_next = X * w_next;
                f_next = obj.loss(w_next, z_next);
            }
            if (halvings > 60) break;  // no descent possible at machine precision
        }
        s_prev = w_next - w;
        g_prev = g;
        w = std::move(w_next);
        z = std::move(z_next);
        f = f_next;
        g = obj.gradient(w, z);
        ++report.iterations;
        report.loss_history.push_back(f);
    }
    report.gradient_norm = g.norm();
    report.converged = report.converged || report.gradient_norm <= params.tolerance;
    return {std::vector<double>(w.data(), w.data() + w.size()), std::move(report)};
}

struct TrainResult {
    ResponseModel model;
    TrainReport report;
};

/// Fits a ResponseModel whose schema is given by (response, features).
inline TrainResult train(ResponseKind response, const FeatureConfig& features,
                         std::span<const LabeledExample> examples, const TrainingParams& params = {}) {
    const auto p = feature_count(response, features);
    for (const auto& ex : examples) {
        if (ex.features.size() != p) throw DataError("training example does not match the model schema");
    }
    auto fit = fit_logistic(examples, params);
    return {ResponseModel(response, features, std::move(fit.weights)), std::move(fit.report)};
}

// ---------------------------------------------------------------------------
// Evaluation and labels
// ---------------------------------------------------------------------------

/// Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 P(tie), via average ranks.
inline double compute_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw ValidationError("compute_auc: scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] != 0) {
                pos_rank_sum += avg_rank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DataError("compute_auc requires both label classes");
    const double np = static_cast<double>(n_pos);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

/// label_i = sum_{k>=0} lambda^k r_{i+k}, truncated at the end of the list.
inline std::vector<double> action_value_labels(std::span<const double> rewards, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("action_value_labels: lambda must lie in [0, 1]");
    std::vector<double> labels(rewards.size());
    double acc = 0.0;
    for (std::size_t i = rewards.size(); i-- > 0;) {
        if (!std::isfinite(rewards[i])) throw DataError("action_value_labels: non-finite reward");
        acc = rewards[i] + lambda * acc;
        labels[i] = acc;
    }
    return labels;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline nlohmann::json feature_config_to_json(const FeatureConfig& f) {
    return {{"num_types", f.num_types},
            {"embedding_dim", f.embedding_dim},
            {"horizon", f.horizon},
            {"groups", {{"spr", f.spr}, {"current_slot", f.current_slot}, {"interaction", f.interaction}}},
            {"flags",
             {{"spr_other_responses", f.spr_other_responses},
              {"spr_contributions", f.spr_contributions},
              {"slot_index", f.slot_index},
              {"item_type", f.item_type},
              {"embedding", f.embedding},
              {"prev_type", f.prev_type},
              {"type_cross", f.type_cross},
              {"type_counts", f.type_counts},
              {"embedding_dots", f.embedding_dots},
              {"same_creator", f.same_creator}}}};
}

inline FeatureConfig feature_config_from_json(const nlohmann::json& j) {
    FeatureConfig f;
    f.num_types = j.at("num_types").get<std::size_t>();
    f.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    f.horizon = j.at("horizon").get<std::size_t>();
    const auto& g = j.at("groups");
    f.spr = g.at("spr").get<bool>();
    f.current_slot = g.at("current_slot").get<bool>();
    f.interaction = g.at("interaction").get<bool>();
    const auto& fl = j.at("flags");
    f.spr_other_responses = fl.at("spr_other_responses").get<bool>();
    f.spr_contributions = fl.at("spr_contributions").get<bool>();
    f.slot_index = fl.at("slot_index").get<bool>();
    f.item_type = fl.at("item_type").get<bool>();
    f.embedding = fl.at("embedding").get<bool>();
    f.prev_type = fl.at("prev_type").get<bool>();
    f.type_cross = fl.at("type_cross").get<bool>();
    f.type_counts = fl.at("type_counts").get<bool>();
    f.embedding_dots = fl.at("embedding_dots").get<bool>();
    f.same_creator = fl.at("same_creator").get<bool>();
    f.validate();
    return f;
}

inline nlohmann::json to_json(const ResponseModel& m) {
    nlohmann::json schema = nlohmann::json::array();
    for (const auto& s : m.schema()) schema.push_back({{"name", s.name}, {"group", std::string(to_string(s.group))}});
    return {{"response", std::string(to_string(m.response()))},
            {"features", feature_config_to_json(m.features())},
            {"schema", std::move(schema)},
            {"weights", m.weights()}};
}

inline ResponseModel response_model_from_json(const nlohmann::json& j) {
    try {
        const auto response = parse_response(j.at("response").get<std::string>());
        const auto features = feature_config_from_json(j.at("features"));
        auto weights = j.at("weights").get<std::vector<double>>();
        const auto expected = feature_schema(response, features);
        const auto& schema = j.at("schema");
        if (schema.size() != expected.size()) throw ValidationError("model file: schema length mismatch");
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (schema[i].at("name").get<std::string>() != expected[i].name ||
                schema[i].at("group").get<std::string>() != to_string(expected[i].group)) {
                throw ValidationError("model file: schema mismatch at feature " + std::to_string(i));
            }
        }
        return ResponseModel(response, features, std::move(weights));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model file: ") + e.what());
    }
}

}  // namespace multislot
