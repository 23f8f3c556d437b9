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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "enumeration.hpp"
#include "multislot/multislot.hpp"
#include "test_util.hpp"

namespace {

using namespace multislot;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr std::size_t kOrderingEpisodes = 20000;  // >= 10,000
constexpr double kGapStandardErrors = 3.0;
constexpr double kOrderingSeconds = 120.0;
constexpr std::size_t kAblationEpisodes = 2500;  // x 20 slots = 50,000 examples
constexpr double kMinLiftPoints = 2.0;
constexpr double kMaxNullLiftPoints = 0.5;
constexpr double kAblationSeconds = 60.0;
constexpr std::size_t kReplayEpisodes = 10000;
constexpr double kEnumerationTolerance = 1e-9;
constexpr int kComplexityCases = 1000;
constexpr int kConstraintCases = 1000;
constexpr std::size_t kDeviation = 3;
constexpr int kDegenerateCases = 250;
constexpr int kParetoCases = 1000;
constexpr std::size_t kParetoEpisodes = 5000;
constexpr std::size_t kDeterminismEpisodes = 2000;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double gap_in_se(const RolloutResult& hi, const RolloutResult& lo) {
    return (hi.mean - lo.mean) / std::hypot(hi.stderr_mean, lo.stderr_mean);
}

Outcome policy_ordering() {
    const auto t0 = Clock::now();
    RunConfig cfg = RunConfig::defaults();
    const std::size_t workers = resolve_workers(0);
    const auto estimated = obtain_estimated_models(cfg, workers);
    std::vector<RolloutResult> r;
    for (const auto& p : policy_zoo(cfg.sim, &estimated)) {
        r.push_back(rollout(*p, cfg.sim, kOrderingEpisodes, cfg.sim.seed, workers));
    }
    // zoo order: random, pointwise_greedy, sga_oracle, sga_estimated
    const double g_oe = gap_in_se(r[2], r[3]);
    const double g_ep = gap_in_se(r[3], r[1]);
    const double g_pr = gap_in_se(r[1], r[0]);
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << "oracle=" << fmt("%.4f", r[2].mean) << " estimated=" << fmt("%.4f", r[3].mean)
      << " pointwise=" << fmt("%.4f", r[1].mean) << " random=" << fmt("%.4f", r[0].mean) << "; gaps in SE "
      << fmt("%.1f", g_oe) << "/" << fmt("%.1f", g_ep) << "/" << fmt("%.1f", g_pr) << "; " << kOrderingEpisodes
      << " episodes; " << fmt("%.1f", secs) << "s";
    return {g_oe > kGapStandardErrors && g_ep > kGapStandardErrors && g_pr > kGapStandardErrors &&
                secs < kOrderingSeconds,
            d.str()};
}

Outcome interaction_ablation() {
    const auto t0 = Clock::now();
    const RunConfig base = RunConfig::defaults();
    const auto lift = [&](const SimConfig& sim) {
        RunConfig cfg = base;
        cfg.sim = sim;
        const auto logs = rollout(RandomPolicy{}, sim, kAblationEpisodes, derive_seed(sim.seed, kTrainingStream));
        return train_with_ablation(cfg, logs.episodes, {ResponseKind::click}).auc.front();
    };
    const auto full = lift(base.sim);
    const auto null = lift(base.sim.without_oracle_interactions());
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << "lift " << fmt("%.2f", full.lift_points()) << " pts (AUC " << fmt("%.4f", full.auc_interaction) << " vs "
      << fmt("%.4f", full.auc_no_interaction) << ", " << fmt("%+.2f", full.relative_lift_pct())
      << "%); zeroed-oracle lift " << fmt("%.2f", null.lift_points()) << " pts; "
      << kAblationEpisodes * base.sim.n_slots << " examples; " << fmt("%.1f", secs) << "s";
    return {full.lift_points() >= kMinLiftPoints && std::abs(null.lift_points()) < kMaxNullLiftPoints &&
                secs < kAblationSeconds,
            d.str()};
}

Outcome replay_best_vs_second() {
    const RunConfig cfg = RunConfig::defaults();
    const std::size_t workers = resolve_workers(0);
    const auto logs = rollout(RandomPolicy{}, cfg.sim, kReplayEpisodes, cfg.sim.seed, workers);
    const auto data = to_replay_data(logs.episodes, {"reward"});
    ReplayOptions opts;
    opts.workers = workers;
    const auto best = one_step_is_estimate(data, *make_policy("best_of_k", cfg), opts);
    const auto second = one_step_is_estimate(data, *make_policy("second_best_of_k", cfg), opts);
    const double gap = (best.value[0] - second.value[0]) / std::hypot(best.stderr_value[0], second.stderr_value[0]);
    std::ostringstream d;
    d << "best=" << fmt("%.4f", best.value[0]) << "+-" << fmt("%.4f", best.stderr_value[0])
      << " second=" << fmt("%.4f", second.value[0]) << "+-" << fmt("%.4f", second.stderr_value[0]) << "; gap "
      << fmt("%.1f", gap) << " SE over " << kReplayEpisodes << " random-bucket episodes";
    return {gap > kGapStandardErrors, d.str()};
}

Outcome estimator_exactness() {
    const auto r = testing::enumerate_two_slot_instance();
    const double err = std::abs(r.expected_estimate - r.true_value);
    std::ostringstream d;
    d << "E[full IS]=" << fmt("%.15f", r.expected_estimate) << " true=" << fmt("%.15f", r.true_value)
      << " |diff|=" << fmt("%.2e", err) << " (one-step E=" << fmt("%.6f", r.expected_one_step) << ")";
    return {err <= kEnumerationTolerance && std::abs(r.total_probability - 1.0) < 1e-12, d.str()};
}

SgaConfig fuzz_config(Rng& rng, std::size_t k, std::optional<std::size_t> d, std::size_t types) {
    SgaConfig cfg;
    cfg.window = k;
    cfg.max_deviation = d;
    cfg.models.add(testing::random_model(rng, types));
    return cfg;
}

Outcome complexity_bound() {
    Rng rng(derive_seed(2026, 11));
    int violations = 0, exact_checked = 0, exact_wrong = 0;
    std::size_t worst_ratio_calls = 0, worst_bound = 1;
    for (int t = 0; t < kComplexityCases; ++t) {
        const std::size_t n = 1 + rng.index(200);
        const std::size_t k = 1 + rng.index(10);
        const bool unconstrained = rng.bernoulli(0.5);
        const auto d = unconstrained ? std::nullopt : std::optional<std::size_t>(rng.index(8));
        const auto list = testing::random_candidates(rng, n);
        RerankTrace trace;
        sga_rerank(list, fuzz_config(rng, k, d, 3), &trace);
        const std::size_t calls = count_model_calls(trace, ResponseKind::click);
        const std::size_t bound = k * (n - 1);
        if (calls > bound) ++violations;
        if (bound > 0 && calls * worst_bound > worst_ratio_calls * bound) {
            worst_ratio_calls = calls;
            worst_bound = bound;
        }
        if (unconstrained) {
            std::size_t closed = 0;
            for (std::size_t slot = 1; slot < n; ++slot) closed += std::min(k, n - slot);
            ++exact_checked;
            if (calls != closed) ++exact_wrong;
        }
    }
    std::ostringstream d;
    d << kComplexityCases << " fuzzed inputs (N<=200, K<=10): " << violations << " bound violations, max calls/bound "
      << fmt("%.3f", static_cast<double>(worst_ratio_calls) / static_cast<double>(worst_bound)) << "; D=inf exact count "
      << exact_checked - exact_wrong << "/" << exact_checked;
    return {violations == 0 && exact_wrong == 0, d.str()};
}

Outcome constraint_suite() {
    Rng rng(derive_seed(2026, 12));
    int bad = 0;
    std::size_t max_shift = 0;
    for (int t = 0; t < kConstraintCases; ++t) {
        const std::size_t n = 1 + rng.index(100);
        const std::size_t k = 1 + rng.index(10);
        const auto list = testing::random_candidates(rng, n, 1 + rng.index(5), 1 + rng.index(6));
        const auto out = sga_rerank(list, fuzz_config(rng, k, kDeviation, 5));
        bool ok = is_permutation_of_input(out, n) && out.slots[0].original_position == 0;
        for (const auto& s : out.slots) {
            const std::size_t shift =
                s.slot > s.original_position ? s.slot - s.original_position : s.original_position - s.slot;
            max_shift = std::max(max_shift, shift);
            ok = ok && shift <= kDeviation;
        }
        bad += ok ? 0 : 1;
    }
    std::ostringstream d;
    d << kConstraintCases << " fuzzed inputs with D=3: " << bad << " violations, max |slot - original| = " << max_shift;
    return {bad == 0, d.str()};
}

Outcome degenerate_equivalences() {
    Rng rng(derive_seed(2026, 13));
    int k1 = 0, d0 = 0, alpha1 = 0, constant = 0;
    const auto in_order = [](const RerankedList& out) {
        for (std::size_t i = 0; i < out.slots.size(); ++i) {
            if (out.slots[i].original_position != i) return false;
        }
        return true;
    };
    for (int t = 0; t < kDegenerateCases; ++t) {
        const std::size_t n = 1 + rng.index(80);
        const auto list = testing::random_candidates(rng, n, 3, 1 + rng.index(4));
        const bool pin = rng.bernoulli(0.5);
        auto a = fuzz_config(rng, 1, std::nullopt, 3);
        a.pin_top_slot = pin;
        k1 += !in_order(sga_rerank(list, a));
        auto b = fuzz_config(rng, 1 + rng.index(10), 0, 3);
        b.pin_top_slot = pin;
        d0 += !in_order(sga_rerank(list, b));
        alpha1 += !in_order(exp_decay_rerank(list, DecayConfig{1.0}));
        SgaConfig c;
        c.window = 1 + rng.index(10);
        c.max_deviation = std::nullopt;
        c.pin_top_slot = pin;
        c.models.add(ResponseModel::constant(ResponseKind::click, testing::small_features(3)));
        constant += !in_order(sga_rerank(list, c));
    }
    std::ostringstream d;
    d << kDegenerateCases << " inputs each; deviations from SPR order: K=1 " << k1 << ", D=0 " << d0 << ", alpha=1 "
      << alpha1 << ", constant model " << constant;
    return {k1 + d0 + alpha1 + constant == 0, d.str()};
}

Outcome pareto_correctness() {
    Rng rng(derive_seed(2026, 14));
    int mismatches = 0, not_idempotent = 0;
    for (int t = 0; t < kParetoCases; ++t) {
        const std::size_t n = 1 + rng.index(100);
        const std::size_t dim = 1 + rng.index(4);
        const bool coarse = rng.bernoulli(0.5);
        std::vector<ParetoPoint> pts(n);
        for (auto& p : pts) {
            p.objectives.resize(dim);
            for (auto& x : p.objectives) x = coarse ? static_cast<double>(rng.index(6)) : rng.uniform();
        }
        std::vector<std::size_t> brute;
        for (std::size_t i = 0; i < n; ++i) {
            bool keep = true;
            for (std::size_t j = 0; j < n && keep; ++j) {
                bool ge = true, gt = false;
                for (std::size_t k = 0; k < dim; ++k) {
                    ge = ge && pts[j].objectives[k] >= pts[i].objectives[k];
                    gt = gt || pts[j].objectives[k] > pts[i].objectives[k];
                }
                if (ge && gt) keep = false;
                if (j < i && pts[j].objectives == pts[i].objectives) keep = false;
            }
            if (keep) brute.push_back(i);
        }
        mismatches += frontier_indices(pts) != brute;
        const auto f1 = pareto_frontier(pts);
        const auto f2 = pareto_frontier(f1);
        bool same = f1.size() == f2.size();
        for (std::size_t i = 0; same && i < f1.size(); ++i) same = f1[i].objectives == f2[i].objectives;
        not_idempotent += !same;
    }

    // Hybrid sweep on interaction-aware simulator logs vs the pointwise baseline.
    RunConfig cfg = RunConfig::defaults();
    cfg.pareto.modes = {"hybrid"};
    cfg.pareto.decay_baseline = false;
    const std::size_t workers = resolve_workers(0);
    const auto logs = rollout(RandomPolicy{}, cfg.sim, kParetoEpisodes, cfg.sim.seed, workers);
    const auto rows = run_pareto(cfg, logs.episodes, {}, workers);
    const auto& baseline = rows.front().point;
    std::vector<ParetoPoint> hybrid;
    for (const auto& r : rows) {
        if (r.point.label.rfind("hybrid:", 0) == 0 && r.point.label != "hybrid:c=0.0000") hybrid.push_back(r.point);
    }
    const auto front = pareto_frontier(hybrid);
    const ParetoPoint* cover = nullptr;
    for (const auto& p : front) {
        if (weakly_dominates(p.objectives, baseline.objectives)) {
            cover = &p;
            break;
        }
    }
    std::ostringstream d;
    d << kParetoCases << " random sets: " << mismatches << " brute-force mismatches, " << not_idempotent
      << " non-idempotent; hybrid frontier (c>0, " << front.size() << " pts) ";
    if (cover) {
        d << "weakly dominates baseline (" << fmt("%.4f", baseline.objectives[0]) << ", "
          << fmt("%.4f", baseline.objectives[1]) << ") via " << cover->label << " (" << fmt("%.4f", cover->objectives[0])
          << ", " << fmt("%.4f", cover->objectives[1]) << ")";
    } else {
        d << "does not cover the baseline";
    }
    return {mismatches == 0 && not_idempotent == 0 && cover != nullptr, d.str()};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / ("multislot_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::ostringstream sink;
    RunConfig cfg = RunConfig::defaults();
    cfg.sim.episodes = kDeterminismEpisodes;
    cfg.replay.estimator = "all";
    std::vector<std::string> differing;
    for (const char* cmd : {"simulate", "benchmark", "replay"}) {
        std::string out[2];
        const std::size_t workers[2] = {1, 4};
        for (int i = 0; i < 2; ++i) {
            CommandEnv env;
            env.workers = workers[i];
            env.out = &sink;
            env.err = &sink;
            const auto path = (dir / (std::string(cmd) + std::to_string(i))).string();
            if (std::string(cmd) == "simulate") cmd_simulate(cfg, path, env);
            if (std::string(cmd) == "benchmark") cmd_benchmark(cfg, path, env);
            if (std::string(cmd) == "replay") cmd_replay(cfg, (dir / "simulate0").string(), path, env);
            out[i] = slurp(path);
        }
        if (out[0] != out[1] || out[0].empty()) differing.push_back(cmd);
    }
    fs::remove_all(dir);
    std::ostringstream d;
    d << "simulate/benchmark/replay with 1 vs 4 workers: ";
    if (differing.empty()) {
        d << "byte-identical";
    } else {
        for (const auto& c : differing) d << c << " differs; ";
    }
    return {differing.empty(), d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"policy ordering", policy_ordering},
        {"interaction ablation", interaction_ablation},
        {"replay best vs second best", replay_best_vs_second},
        {"estimator exactness", estimator_exactness},
        {"complexity bound", complexity_bound},
        {"constraint suite", constraint_suite},
        {"degenerate equivalences", degenerate_equivalences},
        {"pareto correctness", pareto_correctness},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
