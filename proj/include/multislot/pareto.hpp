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

// Non-dominated filtering over reward vectors. Every objective is maximised;
// objectives to minimise are negated on ingestion (see orient()).

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "multislot/core.hpp"

namespace multislot {

struct ParetoPoint {
    std::string label;  // policy / configuration that produced the point
    std::vector<double> objectives;
};

/// a >= b everywhere and a > b somewhere.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] < b[k]) return false;
        if (a[k] > b[k]) strictly = true;
    }
    return strictly;
}

/// a >= b everywhere.
inline bool weakly_dominates(std::span<const double> a, std::span<const double> b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] < b[k]) return false;
    }
    return true;
}

namespace detail {

inline void check_dimensions(std::span<const ParetoPoint> points) {
    if (points.empty()) throw ValidationError("pareto: at least one point is required");
    const auto dim = points.front().objectives.size();
    for (const auto& p : points) {
        if (p.objectives.size() != dim) throw ValidationError("pareto: objective dimension mismatch");
    }
}

}  // namespace detail

/// Indices (ascending) of the non-dominated points. Among identical vectors
/// only the first occurrence is kept.
///
/// Points are visited in descending lexicographic order, so any dominator of
/// a point is visited before it; each point is then only compared with the
/// frontier built so far.
inline std::vector<std::size_t> frontier_indices(std::span<const ParetoPoint> points) {
    detail::check_dimensions(points);
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(points[b].objectives.begin(), points[b].objectives.end(),
                                            points[a].objectives.begin(), points[a].objectives.end());
    });
    std::vector<std::size_t> kept;
    for (auto i : order) {
        const auto& p = points[i].objectives;
        const bool covered = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
            return weakly_dominates(points[k].objectives, p);
        });
        if (!covered) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

inline std::vector<ParetoPoint> pareto_frontier(std::span<const ParetoPoint> points) {
    std::vector<ParetoPoint> out;
    for (auto i : frontier_indices(points)) out.push_back(points[i]);
    return out;
}

/// True for points strictly dominated by some other input point.
inline std::vector<bool> dominated_flags(std::span<const ParetoPoint> points) {
    detail::check_dimensions(points);
    std::vector<bool> flags(points.size(), false);
    const auto frontier = frontier_indices(points);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (auto k : frontier) {
            if (dominates(points[k].objectives, points[i].objectives)) {
                flags[i] = true;
                break;
            }
        }
    }
    return flags;
}

/// Concatenates objectives from several sources into one point, e.g. a click
/// estimate from one policy with contribution estimates from another.
inline ParetoPoint merge_objectives(std::string label, std::span<const ParetoPoint> parts) {
    ParetoPoint out{std::move(label), {}};
    for (const auto& p : parts) out.objectives.insert(out.objectives.end(), p.objectives.begin(), p.objectives.end());
    return out;
}

/// Negates the objectives flagged in `minimize`.
inline std::vector<ParetoPoint> orient(std::vector<ParetoPoint> points, const std::vector<bool>& minimize) {
    for (auto& p : points) {
        if (p.objectives.size() != minimize.size()) throw ValidationError("pareto: objective dimension mismatch");
        for (std::size_t k = 0; k < minimize.size(); ++k) {
            if (minimize[k]) p.objectives[k] = -p.objectives[k];
        }
    }
    return points;
}

}  // namespace multislot
