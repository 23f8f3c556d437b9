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

#include "multislot/app.hpp"
#include "multislot/config.hpp"
#include "multislot/core.hpp"
#include "multislot/episode_log.hpp"
#include "multislot/features.hpp"
#include "multislot/models.hpp"
#include "multislot/parallel.hpp"
#include "multislot/pareto.hpp"
#include "multislot/replay.hpp"
#include "multislot/reranker.hpp"
#include "multislot/simulator.hpp"
