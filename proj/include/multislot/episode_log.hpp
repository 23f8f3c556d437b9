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

// Episode log (JSONL, one episode per line):
//
//   {"seed":..., "config_hash":"...",
//    "slots":[{"window_item_ids":[...], "action":a, "propensities":[...],
//              "labels":{"click":0|1, ...}, "reward":r}, ...],
//    "total_reward":R}
//
// Items are not stored; reading regenerates the candidate list from
// (simulator config, seed) and checks the window ids against it.

#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multislot/config.hpp"
#include "multislot/simulator.hpp"

namespace multislot {

inline nlohmann::ordered_json episode_to_json(const Episode& ep, const std::string& hash) {
    nlohmann::ordered_json slots = nlohmann::ordered_json::array();
    for (const auto& s : ep.slots) {
        nlohmann::ordered_json ids = nlohmann::ordered_json::array();
        for (auto pos : s.window) ids.push_back((*ep.candidates)[pos].id);
        nlohmann::ordered_json labels = nlohmann::ordered_json::object();
        for (auto r : kLoggedResponses) {
            if (auto v = s.labels.get(r)) labels[std::string(to_string(r))] = static_cast<int>(*v);
        }
        slots.push_back({{"window_item_ids", std::move(ids)},
                         {"action", s.action},
                         {"propensities", s.propensities},
                         {"labels", std::move(labels)},
                         {"reward", s.reward}});
    }
    return {{"seed", ep.seed}, {"config_hash", hash}, {"slots", std::move(slots)}, {"total_reward", ep.total_reward}};
}

inline void write_episodes(std::ostream& out, std::span<const Episode> episodes, const SimConfig& cfg) {
    const auto hash = config_hash(cfg);
    for (const auto& ep : episodes) out << episode_to_json(ep, hash).dump() << '\n';
}

inline Episode episode_from_json(const nlohmann::json& j, const SimConfig& cfg, const std::string& expected_hash) {
    Episode ep;
    ep.seed = j.at("seed").get<std::uint64_t>();
    const auto hash = j.at("config_hash").get<std::string>();
    if (hash != expected_hash) {
        throw DataError("episode log was produced under a different simulator config (hash " + hash + ", expected " +
                        expected_hash + ")");
    }
    ep.candidates = std::make_shared<CandidateList>(generate_candidates(cfg, ep.seed));
    const auto& cands = *ep.candidates;

    std::vector<std::size_t> remaining(cands.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    for (const auto& js : j.at("slots")) {
        EpisodeSlot s;
        const auto ids = js.at("window_item_ids").get<std::vector<std::string>>();
        if (ids.empty() || ids.size() > remaining.size()) throw DataError("episode log: malformed window");
        for (std::size_t w = 0; w < ids.size(); ++w) {
            if (cands[remaining[w]].id != ids[w]) {
                throw DataError("episode log: window ids do not match the regenerated candidate list (seed " +
                                std::to_string(ep.seed) + ")");
            }
            s.window.push_back(remaining[w]);
        }
        s.action = js.at("action").get<std::size_t>();
        if (s.action >= ids.size()) throw DataError("episode log: action outside window");
        s.propensities = js.at("propensities").get<std::vector<double>>();
        if (s.propensities.size() != ids.size()) throw DataError("episode log: propensities do not match the window");
        for (const auto& [key, value] : js.at("labels").items()) {
            const auto r = parse_response(key);
            if (r == ResponseKind::contributions) throw DataError("episode log: contributions is derived, not logged");
            const auto v = value.get<int>();
            if (v != 0 && v != 1) throw DataError("episode log: labels must be 0 or 1");
            s.labels.set(r, v);
        }
        if (cfg.has_contribution_labels()) s.labels.set(ResponseKind::contributions, derive_contributions(s.labels));
        s.reward = js.at("reward").get<double>();
        ep.total_reward += s.reward;
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(s.action));
        ep.slots.push_back(std::move(s));
    }
    return ep;
}

inline std::vector<Episode> read_episodes(std::istream& in, const SimConfig& cfg) {
    const auto hash = config_hash(cfg);
    std::vector<Episode> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(episode_from_json(nlohmann::json::parse(line), cfg, hash));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("episode log line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<Episode> read_episodes(const std::string& path, const SimConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open episode log '" + path + "'");
    return read_episodes(in, cfg);
}

}  // namespace multislot
