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


// multislot: simulate, train, benchmark, replay, pareto, rerank.
//
// Exit status: 0 on success, 1 on invalid configuration or arguments,
// 2 on runtime or data errors.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "multislot/multislot.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    int workers = 0;
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool out_required = true) {
    cmd->add_option("--config", f.config, "JSON run configuration (defaults when omitted)");
    cmd->add_option("--seed", f.seed, "Master seed (overrides the config)");
    cmd->add_option("--workers", f.workers, "Worker threads (0 = MULTISLOT_WORKERS or hardware)")->check(CLI::NonNegativeNumber);
    auto* out = cmd->add_option("--out", f.out, "Output path");
    if (out_required) out->required();
}

multislot::RunConfig load(const CommonFlags& f) {
    auto cfg = f.config.empty() ? multislot::RunConfig::defaults() : multislot::load_run_config(f.config);
    if (f.seed) cfg.sim.seed = *f.seed;
    return cfg;
}

multislot::CommandEnv env_for(const CommonFlags& f, const multislot::RunConfig& cfg) {
    multislot::CommandEnv env;
    env.workers = multislot::resolve_workers(f.workers > 0 ? f.workers : cfg.workers);
    return env;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slot-aware re-ranking: simulation, training, offline replay and trade-off analysis"};
    app.require_subcommand(1);

    CommonFlags sim_f;
    std::string sim_policy;
    std::optional<std::size_t> sim_episodes;
    auto* sim = app.add_subcommand("simulate", "Roll out a policy and write an episode log (JSONL)");
    add_common(sim, sim_f);
    sim->add_option("--policy", sim_policy,
                    "random | pointwise_greedy | sga_oracle | sga_estimated | best_of_k | second_best_of_k | exp_decay");
    sim->add_option("--episodes", sim_episodes, "Number of episodes");

    CommonFlags train_f;
    std::string train_logs;
    std::vector<std::string> train_responses;
    auto* trn = app.add_subcommand("train", "Fit response models on an episode log and report held-out AUC");
    add_common(trn, train_f);
    trn->add_option("--logs", train_logs, "Episode log (JSONL)")->required();
    trn->add_option("--response", train_responses, "Responses to model (repeatable)");

    CommonFlags bench_f;
    std::optional<std::size_t> bench_episodes;
    auto* bench = app.add_subcommand("benchmark", "Mean reward of the four reference policies");
    add_common(bench, bench_f);
    bench->add_option("--episodes", bench_episodes, "Episodes per policy");

    CommonFlags replay_f;
    std::string replay_logs, replay_target, replay_estimator;
    auto* rep = app.add_subcommand("replay", "Off-policy estimates from a random-bucket log");
    add_common(rep, replay_f);
    rep->add_option("--logs", replay_logs, "Episode log (JSONL); defaults to replay.logs");
    rep->add_option("--target", replay_target, "best_vs_second_best | comma-separated policy names");
    rep->add_option("--estimator", replay_estimator, "one_step | full_trajectory | exact_match | all");

    CommonFlags pareto_f;
    std::string pareto_logs;
    std::vector<std::string> pareto_estimates;
    auto* par = app.add_subcommand("pareto", "Coefficient sweep and Pareto frontier over replay estimates");
    add_common(par, pareto_f);
    par->add_option("--logs", pareto_logs, "Episode log (JSONL); defaults to pareto.logs");
    par->add_option("--estimates", pareto_estimates, "Replay CSVs merged as extra points");

    CommonFlags rerank_f;
    std::string rerank_in, rerank_method = "sga", rerank_models;
    auto* rr = app.add_subcommand("rerank", "Re-rank one candidate list");
    add_common(rr, rerank_f);
    rr->add_option("--in", rerank_in, "Candidates JSON")->required();
    rr->add_option("--method", rerank_method, "sga | exp_decay");
    rr->add_option("--models", rerank_models, "Model file (oracle models when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sim) {
            auto cfg = load(sim_f);
            if (!sim_policy.empty()) cfg.policy = sim_policy;
            if (sim_episodes) cfg.sim.episodes = *sim_episodes;
            multislot::cmd_simulate(cfg, sim_f.out, env_for(sim_f, cfg));
        } else if (*trn) {
            const auto cfg = load(train_f);
            std::vector<multislot::ResponseKind> responses;
            for (const auto& r : train_responses) responses.push_back(multislot::parse_response(r));
            multislot::cmd_train(cfg, train_logs, train_f.out, responses, env_for(train_f, cfg));
        } else if (*bench) {
            auto cfg = load(bench_f);
            if (bench_episodes) cfg.sim.episodes = *bench_episodes;
            multislot::cmd_benchmark(cfg, bench_f.out, env_for(bench_f, cfg));
        } else if (*rep) {
            auto cfg = load(replay_f);
            if (!replay_target.empty()) cfg.replay.target = replay_target;
            if (!replay_estimator.empty()) cfg.replay.estimator = replay_estimator;
            const auto logs = replay_logs.empty() ? cfg.replay.logs : replay_logs;
            if (logs.empty()) throw multislot::ValidationError("replay: no episode log given (--logs or replay.logs)");
            multislot::cmd_replay(cfg, logs, replay_f.out, env_for(replay_f, cfg));
        } else if (*par) {
            const auto cfg = load(pareto_f);
            const auto logs = pareto_logs.empty() ? cfg.pareto.logs : pareto_logs;
            if (logs.empty()) throw multislot::ValidationError("pareto: no episode log given (--logs or pareto.logs)");
            multislot::cmd_pareto(cfg, logs, pareto_estimates, pareto_f.out, env_for(pareto_f, cfg));
        } else if (*rr) {
            const auto cfg = load(rerank_f);
            multislot::cmd_rerank(cfg, rerank_in, rerank_method, rerank_models, rerank_f.out, env_for(rerank_f, cfg));
        }
    } catch (const multislot::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const multislot::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
