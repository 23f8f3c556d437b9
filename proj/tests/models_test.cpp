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


#include <cmath>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace multislot {
namespace {

using testing::make_item;
using testing::small_features;

double brute_force_auc(const std::vector<double>& s, const std::vector<int>& y) {
    double hits = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[i] == 1 && y[j] == 0) {
                pairs += 1.0;
                hits += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
            }
        }
    }
    return hits / pairs;
}

TEST(ResponseModel, ZeroWeightsPredictHalf) {
    const auto f = small_features();
    const auto m = ResponseModel::constant(ResponseKind::click, f);
    const Item a = make_item("a", 0.9, 1, "c", {0.3, 0.1});
    const Item b = make_item("b", 0.1, 0, "c", {0.2, 0.7});
    EXPECT_EQ(predict(m, a, SlotContext{}), 0.5);
    EXPECT_EQ(predict(m, b, SlotContext{1, {&a}}), 0.5);
}

TEST(ResponseModel, SprPassthroughReproducesScore) {
    const auto m = ResponseModel::spr_passthrough(ResponseKind::click);
    for (double p : {0.01, 0.3, 0.5, 0.77, 0.999}) {
        EXPECT_NEAR(predict(m, make_item("a", p), SlotContext{}), p, 1e-12);
    }
    EXPECT_NEAR(predict(m, make_item("a", 0.0), SlotContext{}), kProbabilityClamp, 1e-15);
}

TEST(ResponseModel, RejectsBadWeights) {
    const auto f = small_features();
    EXPECT_THROW(ResponseModel(ResponseKind::click, f, {1.0, 2.0}), ValidationError);
    std::vector<double> w(feature_count(ResponseKind::click, f), 0.0);
    w[3] = std::nan("");
    EXPECT_THROW(ResponseModel(ResponseKind::click, f, w), ValidationError);
}

TEST(ResponseModel, MatchesOracleProbability) {
    // Two independent code paths: feature-vector dot product vs direct oracle formula.
    SimConfig cfg = SimConfig::defaults();
    Rng rng(9);
    for (auto& [r, w] : cfg.oracle) {
        for (auto* v : {&w.type_bias, &w.embedding, &w.prev_type, &w.cross, &w.type_count}) {
            for (auto& x : *v) x = rng.uniform(-1.0, 1.0);
        }
        w.slot = rng.uniform(-0.3, 0.3);
        w.dot_max = rng.uniform(-2.0, 2.0);
        w.dot_mean = rng.uniform(-2.0, 2.0);
        w.same_creator = rng.uniform(-2.0, 2.0);
    }
    const auto models = oracle_models(cfg);
    for (int trial = 0; trial < 20; ++trial) {
        const auto list = generate_candidates(cfg, 100 + trial);
        std::vector<const Item*> placed;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const SlotContext ctx{i, placed};
            for (const auto& [r, w] : cfg.oracle) {
                const double a = predict(*models.find(r), list[i], ctx);
                const double b = oracle_probability(w, r, list[i], ctx, cfg.horizon);
                EXPECT_NEAR(a, b, 1e-12);
            }
            placed.push_back(&list[i]);
        }
    }
}

TEST(Combination, Examples) {
    ResponseVector p;
    p.set(ResponseKind::click, 0.4);
    p.set(ResponseKind::skip, 0.1);
    EXPECT_DOUBLE_EQ(combine_scores(p, CombinationConfig::single(ResponseKind::click)), 0.4);
    EXPECT_NEAR(combine_scores(p, CombinationConfig({{ResponseKind::click, 1.0}, {ResponseKind::skip, -1.0}})), 0.3,
                1e-15);
    EXPECT_THROW(combine_scores(p, CombinationConfig::single(ResponseKind::like)), DataError);
}

TEST(Combination, Validation) {
    EXPECT_THROW(CombinationConfig({{ResponseKind::click, 0.0}}), ValidationError);
    EXPECT_THROW(CombinationConfig(std::vector<std::pair<ResponseKind, double>>{}), ValidationError);
    EXPECT_THROW(CombinationConfig({{ResponseKind::click, 1.0}, {ResponseKind::click, 2.0}}), ValidationError);
    EXPECT_THROW(CombinationConfig({{ResponseKind::click, INFINITY}}), ValidationError);
}

TEST(FitLogistic, SeparableOneDimensional) {
    const std::vector<LabeledExample> data{{{-1.0}, 0}, {{1.0}, 1}};
    TrainingParams p;
    p.l2 = 1e-2;
    const auto fit = fit_logistic(data, p);
    EXPECT_GT(fit.weights[0], 0.0);
    EXPECT_TRUE(fit.report.converged);
}

TEST(FitLogistic, RecoversKnownWeights) {
    const std::vector<double> w_star{0.8, -1.2, 0.5, 0.0};
    Rng rng(2024);
    std::vector<LabeledExample> data(50000);
    for (auto& ex : data) {
        ex.features = {1.0, rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.bernoulli(0.3) ? 1.0 : 0.0};
        double z = 0.0;
        for (std::size_t k = 0; k < w_star.size(); ++k) z += w_star[k] * ex.features[k];
        ex.label = rng.uniform() < logistic(z) ? 1 : 0;
    }
    TrainingParams p;
    p.l2 = 0.0;
    const auto fit = fit_logistic(data, p);
    ASSERT_TRUE(fit.report.converged);
    EXPECT_LE(fit.report.gradient_norm, 1e-6);
    for (std::size_t k = 0; k < w_star.size(); ++k) EXPECT_NEAR(fit.weights[k], w_star[k], 0.1) << k;
    for (std::size_t i = 1; i < fit.report.loss_history.size(); ++i) {
        EXPECT_LE(fit.report.loss_history[i], fit.report.loss_history[i - 1]);
    }
    EXPECT_EQ(fit_logistic(data, p).weights, fit.weights);
}

TEST(FitLogistic, FixedStepDescends) {
    Rng rng(5);
    std::vector<LabeledExample> data(2000);
    for (auto& ex : data) {
        ex.features = {1.0, rng.uniform(-1.0, 1.0)};
        ex.label = rng.uniform() < logistic(2.0 * ex.features[1]) ? 1 : 0;
    }
    TrainingParams p;
    p.backtracking = false;
    p.step_size = 0.5;
    p.max_iterations = 50;
    const auto fit = fit_logistic(data, p);
    EXPECT_EQ(fit.report.iterations, 50u);
    EXPECT_LT(fit.report.loss_history.back(), fit.report.loss_history.front());
    EXPECT_GT(fit.weights[1], 0.0);
}

TEST(FitLogistic, Errors) {
    EXPECT_THROW(fit_logistic({}, {}), DataError);
    const std::vector<LabeledExample> one_class{{{1.0}, 1}, {{2.0}, 1}};
    EXPECT_THROW(fit_logistic(one_class, {}), DataError);
    const std::vector<LabeledExample> bad_label{{{1.0}, 2}, {{2.0}, 0}};
    EXPECT_THROW(fit_logistic(bad_label, {}), DataError);
    const std::vector<LabeledExample> ragged{{{1.0}, 1}, {{2.0, 1.0}, 0}};
    EXPECT_THROW(fit_logistic(ragged, {}), DataError);
    TrainingParams p;
    p.tolerance = 0.0;
    const std::vector<LabeledExample> ok{{{1.0}, 1}, {{-1.0}, 0}};
    EXPECT_THROW(fit_logistic(ok, p), ValidationError);
}

TEST(Auc, Examples) {
    EXPECT_DOUBLE_EQ(compute_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}), 1.0);
    EXPECT_DOUBLE_EQ(compute_auc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, std::vector<int>{0, 1, 0, 1}), 0.5);
    const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
    const std::vector<int> y{0, 0, 1, 1};
    EXPECT_DOUBLE_EQ(brute_force_auc(s, y), 0.75);
    EXPECT_DOUBLE_EQ(compute_auc(s, y), 0.75);
    EXPECT_THROW(compute_auc(s, std::vector<int>{1, 1, 1, 1}), DataError);
    EXPECT_THROW(compute_auc(s, std::vector<int>{1, 0}), ValidationError);
}

TEST(Auc, MatchesPairwiseCount) {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(60);
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng.index(8));  // many ties
            y[i] = rng.bernoulli(0.4) ? 1 : 0;
        }
        y[0] = 1;
        y[1] = 0;
        EXPECT_NEAR(compute_auc(s, y), brute_force_auc(s, y), 1e-12);
    }
}

TEST(ActionValueLabels, Examples) {
    const std::vector<double> r{1.0, 0.0, 2.0};
    EXPECT_EQ(action_value_labels(r, 0.0), r);
    EXPECT_EQ(action_value_labels(std::vector<double>{1, 1, 1}, 1.0), (std::vector<double>{3, 2, 1}));
    EXPECT_EQ(action_value_labels(r, 0.5), (std::vector<double>{1.5, 1.0, 2.0}));
    EXPECT_THROW(action_value_labels(r, 1.5), ValidationError);
    EXPECT_TRUE(action_value_labels(std::vector<double>{}, 0.5).empty());
}

TEST(ActionValueLabels, MatchesDirectSum) {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> r(1 + rng.index(20));
        for (auto& x : r) x = rng.uniform(-1.0, 3.0);
        const double lambda = rng.uniform();
        const auto labels = action_value_labels(r, lambda);
        for (std::size_t i = 0; i < r.size(); ++i) {
            double direct = 0.0;
            for (std::size_t k = i; k < r.size(); ++k) direct += std::pow(lambda, static_cast<double>(k - i)) * r[k];
            EXPECT_NEAR(labels[i], direct, 1e-12);
        }
    }
}

TEST(ModelJson, RoundTripIsBitExact) {
    Rng rng(8);
    auto f = small_features(3, 2, 2);
    f.spr_other_responses = true;
    std::vector<double> w(feature_count(ResponseKind::like, f));
    for (auto& x : w) x = rng.uniform(-5.0, 5.0) / 3.0;
    const ResponseModel m(ResponseKind::like, f, w);
    const auto text = to_json(m).dump();
    const auto back = response_model_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(back, m);
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(std::memcmp(&back.weights()[i], &w[i], sizeof(double)), 0);
}

TEST(ModelJson, RejectsSchemaMismatch) {
    const auto m = ResponseModel::constant(ResponseKind::click, small_features());
    auto j = to_json(m);
    j["schema"][2]["name"] = "type[9]";
    EXPECT_THROW(response_model_from_json(j), ValidationError);
    auto k = to_json(m);
    k["weights"].erase(0);
    EXPECT_THROW(response_model_from_json(k), ValidationError);
}

}  // namespace
}  // namespace multislot
