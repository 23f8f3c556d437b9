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

/** \file replay.hpp
 *  \brief Off-policy evaluation of slot policies on randomized-bucket logs.
 *
 * Every estimator has the form sum_m sum_i r_{m,i} w_{m,i}:
 *  - full trajectory: w_{m,i} = prod_{j<=i} pi_p(a_{m,j}) / pi_r(a_{m,j});
 *    unbiased, variance grows exponentially with depth
 *  - one step:        w_{m,i} = pi_p(a_{m,i}) / pi_r(a_{m,i}); slightly
 *    biased, low variance
 *  - exact match:     unweighted average over slots where the policy's action
 *    equals the logged one (single-slot replay)
 *
 * Values are reported per session (sum / M) and per slot (sum / total slots).
 */

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "multislot/core.hpp"
#include "multislot/parallel.hpp"
#include "multislot/simulator.hpp"

namespace multislot {

struct LoggedSlot {
    Observation observation;  // window + context needed to re-run a policy
    std::size_t action = 0;
    double propensity = 1.0;     // logging policy probability of `action`
    std::vector<double> rewards;  // one entry per objective
};

struct LoggedSession {
    std::size_t index = 0;
    std::shared_ptr<const CandidateList> candidates;  // owns the observed items
    std::vector<LoggedSlot> slots;
};

struct ReplayData {
    std::vector<std::string> objectives;
    std::vector<LoggedSession> sessions;

    std::size_t total_slots() const {
        std::size_t n = 0;
        for (const auto& s : sessions) n += s.slots.size();
        return n;
    }
};

/// Objective value of a logged slot: "reward" or a response label name.
inline double objective_value(const EpisodeSlot& slot, const std::string& objective) {
    if (objective == "reward") return slot.reward;
    return slot.labels.at(parse_response(objective));
}

/// Converts simulator episodes into replay sessions, rebuilding the per-slot
/// observation from the logged windows.
inline ReplayData to_replay_data(std::span<const Episode> episodes, std::vector<std::string> objectives) {
    if (objectives.empty()) throw ValidationError("replay: at least one objective is required");
    ReplayData data;
    data.objectives = std::move(objectives);
    data.sessions.reserve(episodes.size());
    for (std::size_t m = 0; m < episodes.size(); ++m) {
        const auto& ep = episodes[m];
        LoggedSession session;
        session.index = m;
        session.candidates = ep.candidates;
        std::vector<const Item*> placed;
        for (std::size_t i = 0; i < ep.slots.size(); ++i) {
            const auto& s = ep.slots[i];
            LoggedSlot ls;
            ls.observation.slot = i;
            ls.observation.window_positions = s.window;
            for (auto pos : s.window) ls.observation.window.push_back(&(*ep.candidates)[pos]);
            ls.observation.context = SlotContext::at_slot(i, placed);
            if (s.action >= s.window.size()) throw DataError("logged action outside its window");
            ls.action = s.action;
            ls.propensity = s.propensities.at(s.action);
            for (const auto& o : data.objectives) ls.rewards.push_back(objective_value(s, o));
            placed.push_back(ls.observation.window[s.action]);
            session.slots.push_back(std::move(ls));
        }
        data.sessions.push_back(std::move(session));
    }
    return data;
}

enum class EstimatorKind { full_trajectory, one_step, exact_match };

constexpr std::string_view to_string(EstimatorKind k) noexcept {
    switch (k) {
        case EstimatorKind::full_trajectory: return "full_trajectory";
        case EstimatorKind::one_step: return "one_step";
        case EstimatorKind::exact_match: return "exact_match";
    }
    return "unknown";
}

inline EstimatorKind parse_estimator(std::string_view s) {
    if (s == "full_trajectory" || s == "full") return EstimatorKind::full_trajectory;
    if (s == "one_step") return EstimatorKind::one_step;
    if (s == "exact_match") return EstimatorKind::exact_match;
    throw ValidationError("unknown estimator '" + std::string(s) + "'");
}

struct ReplayOptions {
    bool self_normalized = false;  // per-depth weight normalisation (IS estimators only)
    std::size_t workers = 1;
};

struct ReplayEstimate {
    EstimatorKind kind = EstimatorKind::one_step;
    std::vector<std::string> objectives;
    std::vector<double> value;            // per session
    std::vector<double> stderr_value;     // per session
    std::vector<double> value_per_slot;
    std::vector<double> stderr_per_slot;
    double effective_sample_size = 0.0;  // Kish ESS over slot weights
    std::size_t total_slots = 0;
    std::size_t sessions = 0;
    std::size_t matched_slots = 0;  // slots with non-zero weight
};

namespace detail {

/// Per-slot importance weights of one session.
inline std::vector<double> session_weights(const LoggedSession& s, const Policy& policy, EstimatorKind kind) {
    std::vector<double> w(s.slots.size(), 0.0);
    double running = 1.0;
    for (std::size_t i = 0; i < s.slots.size(); ++i) {
        const auto& slot = s.slots[i];
        if (!(slot.propensity > 0.0 && slot.propensity <= 1.0)) {
            throw DataError("support violation: logged propensity " + std::to_string(slot.propensity) +
                            " in session " + std::to_string(s.index) + " slot " + std::to_string(i));
        }
        switch (kind) {
            case EstimatorKind::full_trajectory:
                if (running != 0.0) running *= policy.propensity(slot.observation, slot.action) / slot.propensity;
                w[i] = running;
                break;
            case EstimatorKind::one_step:
                w[i] = policy.propensity(slot.observation, slot.action) / slot.propensity;
                break;
            case EstimatorKind::exact_match: {
                const auto p = policy.propensities(slot.observation);
                w[i] = argmax_first(p) == slot.action ? 1.0 : 0.0;
                break;
            }
        }
    }
    return w;
}

inline double kish_ess(double sum_w, double sum_w2) { return sum_w2 > 0.0 ? sum_w * sum_w / sum_w2 : 0.0; }

}  // namespace detail

inline ReplayEstimate estimate(const ReplayData& data, const Policy& policy, EstimatorKind kind,
                               const ReplayOptions& opts = {}) {
    const std::size_t M = data.sessions.size();
    const std::size_t O = data.objectives.size();
    if (M == 0) throw ValidationError("replay: no logged sessions");

    std::vector<std::vector<double>> weights(M);
    parallel_for(M, opts.workers, [&](std::size_t m) { weights[m] = detail::session_weights(data.sessions[m], policy, kind); });

    ReplayEstimate est;
    est.kind = kind;
    est.objectives = data.objectives;
    est.sessions = M;
    est.total_slots = data.total_slots();
    est.value.assign(O, 0.0);
    est.stderr_value.assign(O, 0.0);
    est.value_per_slot.assign(O, 0.0);
    est.stderr_per_slot.assign(O, 0.0);

    double sum_w = 0.0, sum_w2 = 0.0;
    for (const auto& ws : weights) {
        for (double w : ws) {
            sum_w += w;
            sum_w2 += w * w;
            if (w != 0.0) ++est.matched_slots;
        }
    }
    est.effective_sample_size = detail::kish_ess(sum_w, sum_w2);
    const double slots_per_session = static_cast<double>(est.total_slots) / static_cast<double>(M);

    if (kind == EstimatorKind::exact_match) {
        for (std::size_t o = 0; o < O; ++o) {
            std::vector<double> matched;
            for (std::size_t m = 0; m < M; ++m) {
                for (std::size_t i = 0; i < weights[m].size(); ++i) {
                    if (weights[m][i] != 0.0) matched.push_back(data.sessions[m].slots[i].rewards[o]);
                }
            }
            if (matched.empty()) {
                est.value_per_slot[o] = est.value[o] = std::numeric_limits<double>::quiet_NaN();
                est.stderr_per_slot[o] = est.stderr_value[o] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const auto [mean, se] = mean_and_stderr(matched);
            est.value_per_slot[o] = mean;
            est.stderr_per_slot[o] = se;
            est.value[o] = mean * slots_per_session;
            est.stderr_value[o] = se * slots_per_session;
        }
        return est;
    }

    std::size_t depth = 0;
    for (const auto& s : data.sessions) depth = std::max(depth, s.slots.size());

    for (std::size_t o = 0; o < O; ++o) {
        std::vector<double> per_session(M, 0.0);
        if (!opts.self_normalized) {
            for (std::size_t m = 0; m < M; ++m) {
                const auto& slots = data.sessions[m].slots;
                for (std::size_t i = 0; i < slots.size(); ++i) per_session[m] += slots[i].rewards[o] * weights[m][i];
            }
            const auto [mean, se] = mean_and_stderr(per_session);
            est.value[o] = mean;
            est.stderr_value[o] = se;
        } else {
            // v_i = sum_m r w / sum_m w at each depth; stderr by linearisation.
            std::vector<double> vi(depth, 0.0), wbar(depth, 0.0);
            for (std::size_t i = 0; i < depth; ++i) {
                double num = 0.0, den = 0.0;
                for (std::size_t m = 0; m < M; ++m) {
                    const auto& slots = data.sessions[m].slots;
                    if (i >= slots.size()) continue;
                    num += slots[i].rewards[o] * weights[m][i];
                    den += weights[m][i];
                }
                vi[i] = den > 0.0 ? num / den : 0.0;
                wbar[i] = den / static_cast<double>(M);
                est.value[o] += vi[i];
            }
            for (std::size_t m = 0; m < M; ++m) {
                const auto& slots = data.sessions[m].slots;
                for (std::size_t i = 0; i < slots.size(); ++i) {
                    if (wbar[i] > 0.0) per_session[m] += weights[m][i] * (slots[i].rewards[o] - vi[i]) / wbar[i];
                }
            }
            est.stderr_value[o] = mean_and_stderr(per_session).second;
        }
        est.value_per_slot[o] = est.value[o] / slots_per_session;
        est.stderr_per_slot[o] = est.stderr_value[o] / slots_per_session;
    }
    return est;
}

inline ReplayEstimate full_is_estimate(const ReplayData& data, const Policy& policy, const ReplayOptions& opts = {}) {
    return estimate(data, policy, EstimatorKind::full_trajectory, opts);
}

inline ReplayEstimate one_step_is_estimate(const ReplayData& data, const Policy& policy,
                                           const ReplayOptions& opts = {}) {
    return estimate(data, policy, EstimatorKind::one_step, opts);
}

inline ReplayEstimate exact_match_replay(const ReplayData& data, const Policy& policy,
                                         const ReplayOptions& opts = {}) {
    return estimate(data, policy, EstimatorKind::exact_match, opts);
}

// ---------------------------------------------------------------------------
// Variance by depth
// ---------------------------------------------------------------------------

struct DepthStats {
    std::size_t depth = 0;  // 1-based slot count
    double full_value = 0.0;
    double full_stderr = 0.0;
    double full_ess = 0.0;
    double full_match_fraction = 0.0;  // sessions whose whole prefix matched
    double one_step_value = 0.0;
    double one_step_stderr = 0.0;
    double one_step_ess = 0.0;
    double one_step_match_fraction = 0.0;
};

/// Per-depth statistics of r_{m,i} w_{m,i} for objective `objective`.
inline std::vector<DepthStats> variance_report(const ReplayData& data, const Policy& policy,
                                               std::size_t objective = 0, std::size_t workers = 1) {
    const std::size_t M = data.sessions.size();
    if (M < 2) throw ValidationError("variance report needs at least two sessions");
    if (objective >= data.objectives.size()) throw ValidationError("variance report: objective index out of range");

    std::vector<std::vector<double>> full(M), one(M);
    parallel_for(M, workers, [&](std::size_t m) {
        full[m] = detail::session_weights(data.sessions[m], policy, EstimatorKind::full_trajectory);
        one[m] = detail::session_weights(data.sessions[m], policy, EstimatorKind::one_step);
    });

    std::size_t depth = 0;
    for (const auto& s : data.sessions) depth = std::max(depth, s.slots.size());

    std::vector<DepthStats> out;
    for (std::size_t i = 0; i < depth; ++i) {
        std::vector<double> xf, xo;
        double fw = 0.0, fw2 = 0.0, ow = 0.0, ow2 = 0.0;
        std::size_t fmatch = 0, omatch = 0, present = 0;
        for (std::size_t m = 0; m < M; ++m) {
            const auto& slots = data.sessions[m].slots;
            if (i >= slots.size()) continue;
            ++present;
            const double r = slots[i].rewards[objective];
            xf.push_back(r * full[m][i]);
            xo.push_back(r * one[m][i]);
            fw += full[m][i];
            fw2 += full[m][i] * full[m][i];
            ow += one[m][i];
            ow2 += one[m][i] * one[m][i];
            fmatch += full[m][i] != 0.0;
            omatch += one[m][i] != 0.0;
        }
        DepthStats d;
        d.depth = i + 1;
        std::tie(d.full_value, d.full_stderr) = mean_and_stderr(xf);
        std::tie(d.one_step_value, d.one_step_stderr) = mean_and_stderr(xo);
        d.full_ess = detail::kish_ess(fw, fw2);
        d.one_step_ess = detail::kish_ess(ow, ow2);
        d.full_match_fraction = static_cast<double>(fmatch) / static_cast<double>(present);
        d.one_step_match_fraction = static_cast<double>(omatch) / static_cast<double>(present);
        out.push_back(d);
    }
    return out;
}

}  // namespace multislot
