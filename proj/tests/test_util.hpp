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

#include <cstdint>
#include <string>
#include <vector>

#include "multislot/multislot.hpp"

namespace multislot::testing {

inline Item make_item(std::string id, double click, std::uint32_t type = 0, std::string creator = "",
                      std::vector<double> embedding = {0.0, 0.0}) {
    Item it;
    it.creator_id = creator.empty() ? id : std::move(creator);
    it.id = std::move(id);
    it.type = ItemType{type};
    it.embedding = std::move(embedding);
    it.spr.set(ResponseKind::click, click);
    return it;
}

inline FeatureConfig small_features(std::size_t types = 2, std::size_t dim = 2, std::size_t horizon = 3) {
    FeatureConfig f;
    f.num_types = types;
    f.embedding_dim = dim;
    f.horizon = horizon;
    return f;
}

/// Random candidate list: n items, click SPR in (0.01, 0.99), `types` item
/// types, `creators` creators, 2-d embeddings.
inline CandidateList random_candidates(Rng& rng, std::size_t n, std::size_t types = 3, std::size_t creators = 4) {
    std::vector<Item> items;
    for (std::size_t i = 0; i < n; ++i) {
        items.push_back(make_item("x" + std::to_string(i), rng.uniform(0.01, 0.99),
                                  static_cast<std::uint32_t>(rng.index(types)), "c" + std::to_string(rng.index(creators)),
                                  {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}));
    }
    return CandidateList::from_unsorted(std::move(items));
}

/// Random click model over small_features(types).
inline ResponseModel random_model(Rng& rng, std::size_t types = 3) {
    const auto f = small_features(types);
    std::vector<double> w(feature_count(ResponseKind::click, f));
    for (auto& x : w) x = rng.uniform(-2.0, 2.0);
    return ResponseModel(ResponseKind::click, f, std::move(w));
}

/// Small simulator for fast tests.
inline SimConfig tiny_sim(std::size_t slots = 6, std::size_t window = 3) {
    SimConfig c = SimConfig::defaults();
    c.n_slots = slots;
    c.window = window;
    c.episodes = 200;
    c.finalize();
    return c;
}

}  // namespace multislot::testing
