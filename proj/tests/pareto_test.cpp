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


#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace multislot {
namespace {

std::vector<ParetoPoint> points(const std::vector<std::vector<double>>& values) {
    std::vector<ParetoPoint> out;
    for (std::size_t i = 0; i < values.size(); ++i) out.push_back({"p" + std::to_string(i), values[i]});
    return out;
}

/// O(n^2) reference: non-dominated points, first occurrence of duplicates.
std::vector<std::size_t> brute_force_frontier(const std::vector<ParetoPoint>& pts) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < pts.size() && keep; ++j) {
            if (dominates(pts[j].objectives, pts[i].objectives)) keep = false;
            if (j < i && pts[j].objectives == pts[i].objectives) keep = false;
        }
        if (keep) out.push_back(i);
    }
    return out;
}

TEST(Pareto, SinglePoint) {
    const auto pts = points({{1.0, 2.0}});
    EXPECT_EQ(frontier_indices(pts), (std::vector<std::size_t>{0}));
}

TEST(Pareto, HandExample) {
    const auto pts = points({{1, 1}, {2, 0.5}, {0.5, 2}, {1.5, 1.5}, {1, 1.4}});
    EXPECT_EQ(frontier_indices(pts), (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_EQ(dominated_flags(pts), (std::vector<bool>{true, false, false, false, true}));
}

TEST(Pareto, DuplicatesKeepOneRepresentative) {
    const auto pts = points({{1, 2}, {2, 1}, {1, 2}, {2, 1}, {0, 0}});
    EXPECT_EQ(frontier_indices(pts), (std::vector<std::size_t>{0, 1}));
    const auto flags = dominated_flags(pts);
    EXPECT_FALSE(flags[2]);  // equal, not strictly dominated
    EXPECT_TRUE(flags[4]);
}

TEST(Pareto, MatchesBruteForceAndIsIdempotent) {
    Rng rng(21);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + rng.index(100);
        const std::size_t dim = 1 + rng.index(4);
        const bool coarse = rng.bernoulli(0.5);  // coarse grids create ties and duplicates
        std::vector<std::vector<double>> v(n, std::vector<double>(dim));
        for (auto& row : v) {
            for (auto& x : row) x = coarse ? static_cast<double>(rng.index(5)) : rng.uniform(-1.0, 1.0);
        }
        const auto pts = points(v);
        const auto got = frontier_indices(pts);
        ASSERT_EQ(got, brute_force_frontier(pts));
        const auto front = pareto_frontier(pts);
        const auto again = pareto_frontier(front);
        ASSERT_EQ(again.size(), front.size());
        for (std::size_t i = 0; i < front.size(); ++i) ASSERT_EQ(again[i].objectives, front[i].objectives);
        for (const auto& p : pts) {
            // Every input point is weakly dominated by some frontier point.
            ASSERT_TRUE(std::any_of(front.begin(), front.end(),
                                    [&](const ParetoPoint& f) { return weakly_dominates(f.objectives, p.objectives); }));
        }
    }
}

TEST(Pareto, OrientAndMerge) {
    const auto pts = orient(points({{1, 5}, {2, 3}}), {false, true});
    EXPECT_EQ(pts[0].objectives, (std::vector<double>{1, -5}));
    const auto merged = merge_objectives("m", points({{1}, {2, 3}}));
    EXPECT_EQ(merged.objectives, (std::vector<double>{1, 2, 3}));
    EXPECT_THROW(orient(points({{1, 2}}), {true}), ValidationError);
}

TEST(Pareto, Errors) {
    EXPECT_THROW(frontier_indices(std::vector<ParetoPoint>{}), ValidationError);
    EXPECT_THROW(frontier_indices(points({{1, 2}, {1}})), ValidationError);
}

}  // namespace
}  // namespace multislot
