#include "proxops/ppo_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "proxops/checkpoint.hpp"
#include "proxops/csv.hpp"
#include "proxops/rng.hpp"
#include "proxops/task_env.hpp"

namespace proxops {

void PpoConfig::validate() const {
    if (total_timesteps < 1) throw std::invalid_argument("total_timesteps must be positive");
    if (num_envs < 1) throw std::invalid_argument("num_envs must be positive");
    if (rollout_length < 1 || rollout_length % num_envs != 0) {
        throw std::invalid_argument("rollout_length must be a positive multiple of num_envs");
    }
    if (minibatch_size < 1 || rollout_length % minibatch_size != 0) {
        throw std::invalid_argument("rollout_length must be divisible by minibatch_size");
    }
    if (epochs < 1) throw std::invalid_argument("epochs must be positive");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0, 1]");
    if (!(gae_lambda > 0.0 && gae_lambda <= 1.0)) {
        throw std::invalid_argument("gae_lambda must be in (0, 1]");
    }
    if (!(clip_eps > 0.0)) throw std::invalid_argument("clip_eps must be positive");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (eval_interval < 1) throw std::invalid_argument("eval_interval must be positive");
    if (num_eval_cases < 1) throw std::invalid_argument("num_eval_cases must be positive");
    if (hidden1 < 1 || hidden2 < 1) throw std::invalid_argument("hidden sizes must be positive");
}

PpoConfig PpoConfig::defaults_for(const ActionSpaceSpec& space) {
    PpoConfig c;
    if (!space.is_discrete()) c.entropy_coef = 0.005;
    return c;
}

nlohmann::json PpoConfig::to_json() const {
    return {{"total_timesteps", total_timesteps},
            {"num_envs", num_envs},
            {"rollout_length", rollout_length},
            {"minibatch_size", minibatch_size},
            {"epochs", epochs},
            {"clip_eps", clip_eps},
            {"gamma", gamma},
            {"gae_lambda", gae_lambda},
            {"learning_rate", learning_rate},
            {"entropy_coef", entropy_coef},
            {"value_coef", value_coef},
            {"max_grad_norm", max_grad_norm},
            {"eval_interval", eval_interval},
            {"num_eval_cases", num_eval_cases},
            {"hidden1", hidden1},
            {"hidden2", hidden2},
            {"seed", seed}};
}

PpoConfig PpoConfig::from_json(const nlohmann::json& j) {
    PpoConfig c;
    c.total_timesteps = j.at("total_timesteps").get<std::int64_t>();
    c.num_envs = j.at("num_envs").get<int>();
    c.rollout_length = j.at("rollout_length").get<int>();
    c.minibatch_size = j.at("minibatch_size").get<int>();
    c.epochs = j.at("epochs").get<int>();
    c.clip_eps = j.at("clip_eps").get<double>();
    c.gamma = j.at("gamma").get<double>();
    c.gae_lambda = j.at("gae_lambda").get<double>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.entropy_coef = j.at("entropy_coef").get<double>();
    c.value_coef = j.at("value_coef").get<double>();
    c.max_grad_norm = j.at("max_grad_norm").get<double>();
    c.eval_interval = j.at("eval_interval").get<std::int64_t>();
    c.num_eval_cases = j.at("num_eval_cases").get<int>();
    c.hidden1 = j.at("hidden1").get<int>();
    c.hidden2 = j.at("hidden2").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

void compute_gae(const Eigen::Ref<const Eigen::VectorXd>& rewards,
                 const Eigen::Ref<const Eigen::VectorXd>& values,
                 const std::vector<std::uint8_t>& dones, double bootstrap_value, double gamma,
                 double lambda, Eigen::Ref<Eigen::VectorXd> advantages,
                 Eigen::Ref<Eigen::VectorXd> returns) {
    const Eigen::Index n = rewards.size();
    double next_advantage = 0.0;
    double next_value = bootstrap_value;
    for (Eigen::Index t = n - 1; t >= 0; --t) {
        const double nonterminal = dones[static_cast<std::size_t>(t)] ? 0.0 : 1.0;
        const double delta = rewards[t] + gamma * next_value * nonterminal - values[t];
        next_advantage = delta + gamma * lambda * nonterminal * next_advantage;
        advantages[t] = next_advantage;
        next_value = values[t];
        returns[t] = advantages[t] + values[t];
    }
}

const std::vector<std::string>& metric_columns(Task task) {
    static const std::vector<std::string> inspection{
        "total_reward", "inspected_points", "success", "delta_v", "episode_length"};
    static const std::vector<std::string> docking{
        "total_reward", "success", "delta_v", "violation_percent", "final_speed",
        "episode_length"};
    return task == Task::Inspection ? inspection : docking;
}

double metric_value(const EpisodeMetrics& m, const std::string& name) {
    if (name == "total_reward") return m.total_reward;
    if (name == "inspected_points") return m.inspected_points;
    if (name == "success") return static_cast<double>(m.success);
    if (name == "delta_v") return m.delta_v;
    if (name == "episode_length") return static_cast<double>(m.episode_length);
    if (name == "violation_percent") return m.violation_percent;
    if (name == "final_speed") return m.final_speed;
    if (name == "initial_distance") return m.initial_distance;
    if (name == "final_distance") return m.final_distance;
    throw std::out_of_range("unknown metric: " + name);
}

namespace {

struct CompletedEpisode {
    EpisodeMetrics metrics;
    double progress = 0.0;
};

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    long t = 0;
};

void adam_step(MlpParams& params, const Eigen::VectorXd& grad, AdamState& state, double lr) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    ++state.t;
    state.m = beta1 * state.m + (1.0 - beta1) * grad;
    state.v = beta2 * state.v + (1.0 - beta2) * grad.array().square().matrix();
    const double correction1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
    const double correction2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
    params.flat.array() -= lr * (state.m.array() / correction1) /
                           ((state.v.array() / correction2).sqrt() + eps);
}

EvalRecord make_eval_record(Task task, std::int64_t timestep,
                            const std::vector<EpisodeMetrics>& episodes) {
    EvalRecord rec;
    rec.timestep = timestep;
    for (const std::string& col : metric_columns(task)) {
        std::vector<double> vals;
        vals.reserve(episodes.size());
        for (const EpisodeMetrics& m : episodes) vals.push_back(metric_value(m, col));
        rec.metric_iqm.push_back(iqm(std::move(vals)));
    }
    return rec;
}

}  // namespace

RunArtifacts train(Task task, const ActionSpaceSpec& space, const PpoConfig& config,
                   const TrainOptions& options) {
    config.validate();

    const NetShape shape = NetShape::for_task(task, space, config.hidden1, config.hidden2);
    MlpParams params = MlpParams::initialize(shape, config.seed, space.u_max());

    const int num_envs = config.num_envs;
    const int segment = config.rollout_length / num_envs;
    const int threads = std::clamp(options.threads, 1, num_envs);

    std::vector<std::unique_ptr<TaskEnv>> envs;
    std::vector<Rng> reset_rngs;
    std::vector<Rng> action_rngs;
    std::vector<std::vector<double>> current_obs(static_cast<std::size_t>(num_envs));
    for (int slot = 0; slot < num_envs; ++slot) {
        envs.push_back(make_task_env(task, /*eval_mode=*/false));
        reset_rngs.emplace_back(substream_seed(config.seed, "env-reset", slot));
        action_rngs.emplace_back(substream_seed(config.seed, "action-sampling", slot));
        current_obs[static_cast<std::size_t>(slot)] = envs.back()->reset(reset_rngs.back().raw());
    }
    Rng shuffle_rng(substream_seed(config.seed, "minibatch-shuffle"));

    RolloutBuffer buffer;
    buffer.observations.resize(shape.obs_dim, config.rollout_length);
    buffer.actions.resize(static_cast<std::size_t>(config.rollout_length));
    buffer.log_probs.resize(config.rollout_length);
    buffer.rewards.resize(config.rollout_length);
    buffer.values.resize(config.rollout_length);
    buffer.dones.assign(static_cast<std::size_t>(config.rollout_length), 0);
    buffer.advantages.resize(config.rollout_length);
    buffer.returns.resize(config.rollout_length);
    buffer.segment_bootstrap.assign(static_cast<std::size_t>(num_envs), 0.0);
    buffer.segment_length = segment;

    AdamState adam{Eigen::VectorXd::Zero(params.flat.size()),
                   Eigen::VectorXd::Zero(params.flat.size()), 0};
    const PpoLossConfig loss_config{config.clip_eps, config.value_coef, config.entropy_coef};

    std::vector<std::vector<CompletedEpisode>> slot_episodes(static_cast<std::size_t>(num_envs));

    RunArtifacts artifacts;
    artifacts.run_dir = options.run_dir;
    const bool persist = !options.run_dir.empty();
    if (persist) {
        std::filesystem::create_directories(options.run_dir / "checkpoints");
    }

    double fuel_weight = 0.001;
    std::int64_t steps_done = 0;
    const std::int64_t target_evals =
        (config.total_timesteps + config.eval_interval - 1) / config.eval_interval;
    std::int64_t evals_done = 0;

    auto run_eval = [&]() {
        const std::vector<EpisodeMetrics> episodes = evaluate_policy(
            task, space, params, config.num_eval_cases, options.eval_seed_base, true);
        artifacts.eval_log.push_back(make_eval_record(task, steps_done, episodes));
        ++evals_done;
        if (persist) {
            char name[48];
            std::snprintf(name, sizeof(name), "ckpt_%010lld.bin",
                          static_cast<long long>(steps_done));
            save_checkpoint(params, options.run_dir / "checkpoints" / name);
        }
        if (!options.quiet) {
            std::printf("  eval @ %lld:", static_cast<long long>(steps_done));
            const auto& cols = metric_columns(task);
            for (std::size_t i = 0; i < cols.size(); ++i) {
                std::printf(" %s=%.4g", cols[i].c_str(), artifacts.eval_log.back().metric_iqm[i]);
            }
            std::printf("\n");
            std::fflush(stdout);
        }
    };

    int iteration = 0;
    while (steps_done < config.total_timesteps) {
        ++iteration;
        for (auto& eps : slot_episodes) eps.clear();

        // ---- rollout collection across fixed env slots ----
        auto collect_slot = [&](int slot) {
            const std::size_t uslot = static_cast<std::size_t>(slot);
            for (int t = 0; t < segment; ++t) {
                const Eigen::Index idx = static_cast<Eigen::Index>(slot) * segment + t;
                const ForwardResult fwd = forward(params, current_obs[uslot]);
                const ActionSample action = sample_action(fwd.dist, action_rngs[uslot], false);
                buffer.observations.col(idx) = Eigen::Map<const Eigen::VectorXd>(
                    current_obs[uslot].data(), shape.obs_dim);
                buffer.actions[static_cast<std::size_t>(idx)] = action.choice;
                buffer.log_probs[idx] = action.log_prob;
                buffer.values[idx] = fwd.value;

                TaskEnv::Step step;
                try {
                    step = envs[uslot]->step(space.decode(action.choice));
                } catch (const std::exception& e) {
                    throw std::runtime_error("rollout step " + std::to_string(idx) + " (env " +
                                             std::to_string(slot) + "): " + e.what());
                }
                buffer.rewards[idx] = step.reward;
                buffer.dones[static_cast<std::size_t>(idx)] = step.done ? 1 : 0;
                if (step.done) {
                    slot_episodes[uslot].push_back(
                        {envs[uslot]->episode_metrics(), envs[uslot]->progress_fraction()});
                    current_obs[uslot] = envs[uslot]->reset(reset_rngs[uslot].raw());
                } else {
                    current_obs[uslot] = std::move(step.observation);
                }
            }
            buffer.segment_bootstrap[uslot] = forward(params, current_obs[uslot]).value;
        };

        if (threads <= 1) {
            for (int slot = 0; slot < num_envs; ++slot) collect_slot(slot);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
            for (int w = 0; w < threads; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (int slot = w; slot < num_envs; slot += threads) collect_slot(slot);
                    } catch (...) {
                        errors[static_cast<std::size_t>(w)] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& err : errors) {
                if (err) std::rethrow_exception(err);
            }
        }
        steps_done += config.rollout_length;

        // ---- advantages ----
        for (int slot = 0; slot < num_envs; ++slot) {
            const Eigen::Index off = static_cast<Eigen::Index>(slot) * segment;
            const std::vector<std::uint8_t> seg_dones(
                buffer.dones.begin() + off, buffer.dones.begin() + off + segment);
            compute_gae(buffer.rewards.segment(off, segment), buffer.values.segment(off, segment),
                        seg_dones, buffer.segment_bootstrap[static_cast<std::size_t>(slot)],
                        config.gamma, config.gae_lambda, buffer.advantages.segment(off, segment),
                        buffer.returns.segment(off, segment));
        }
        Eigen::VectorXd normalized = buffer.advantages;
        {
            const double mean = normalized.mean();
            const double stdev =
                std::sqrt((normalized.array() - mean).square().mean());
            normalized = ((normalized.array() - mean) / (stdev + 1e-8)).matrix();
        }

        // ---- clipped-surrogate updates ----
        TrainIterationStats stats;
        stats.iteration = iteration;
        stats.timestep = steps_done;
        const int minibatches_per_epoch = config.rollout_length / config.minibatch_size;
        int updates = 0;
        std::vector<Eigen::Index> order(static_cast<std::size_t>(config.rollout_length));
        for (Eigen::Index i = 0; i < config.rollout_length; ++i) {
            order[static_cast<std::size_t>(i)] = i;
        }
        TrainBatch batch;
        batch.observations.resize(shape.obs_dim, config.minibatch_size);
        batch.actions.resize(static_cast<std::size_t>(config.minibatch_size));
        batch.old_log_probs.resize(config.minibatch_size);
        batch.advantages.resize(config.minibatch_size);
        batch.returns.resize(config.minibatch_size);
        Eigen::VectorXd grad(params.flat.size());

        try {
            for (int epoch = 0; epoch < config.epochs; ++epoch) {
                for (std::size_t i = order.size(); i > 1; --i) {
                    std::swap(order[i - 1], order[shuffle_rng.integer(i)]);
                }
                for (int b = 0; b < minibatches_per_epoch; ++b) {
                    for (int i = 0; i < config.minibatch_size; ++i) {
                        const Eigen::Index src =
                            order[static_cast<std::size_t>(b * config.minibatch_size + i)];
                        batch.observations.col(i) = buffer.observations.col(src);
                        batch.actions[static_cast<std::size_t>(i)] =
                            buffer.actions[static_cast<std::size_t>(src)];
                        batch.old_log_probs[i] = buffer.log_probs[src];
                        batch.advantages[i] = normalized[src];
                        batch.returns[i] = buffer.returns[src];
                    }
                    const LossStats ls = ppo_loss(params, loss_config, batch, &grad);
                    double norm = grad.norm();
                    if (norm > config.max_grad_norm && norm > 0.0) {
                        grad *= config.max_grad_norm / norm;
                        norm = config.max_grad_norm;
                    }
                    adam_step(params, grad, adam, config.learning_rate);
                    ++updates;
                    stats.loss += ls.total;
                    stats.policy_loss += ls.policy;
                    stats.value_loss += ls.value;
                    stats.entropy += ls.entropy;
                    stats.clip_fraction += ls.clip_fraction;
                    stats.mean_ratio += ls.mean_ratio;
                    stats.grad_norm += norm;
                }
            }
        } catch (const NonFiniteLossError& e) {
            throw std::runtime_error("iteration " + std::to_string(iteration) +
                                     " aborted: " + e.what());
        }
        const double inv_updates = 1.0 / static_cast<double>(updates);
        stats.loss *= inv_updates;
        stats.policy_loss *= inv_updates;
        stats.value_loss *= inv_updates;
        stats.entropy *= inv_updates;
        stats.clip_fraction *= inv_updates;
        stats.mean_ratio *= inv_updates;
        stats.grad_norm *= inv_updates;

        // ---- per-iteration episode statistics and the adaptive fuel weight ----
        double reward_sum = 0.0;
        double progress_sum = 0.0;
        for (const auto& eps : slot_episodes) {
            for (const CompletedEpisode& ep : eps) {
                ++stats.episodes_completed;
                reward_sum += ep.metrics.total_reward;
                progress_sum += ep.progress;
            }
        }
        if (stats.episodes_completed > 0) {
            stats.mean_episode_reward = reward_sum / stats.episodes_completed;
            stats.mean_progress = progress_sum / stats.episodes_completed;
            if (task == Task::Inspection) {
                fuel_weight = adaptive_w_update(fuel_weight, stats.mean_progress);
                for (auto& env : envs) env->set_fuel_weight(fuel_weight);
            }
        }
        stats.fuel_weight = task == Task::Inspection ? fuel_weight : 0.0;
        artifacts.iterations.push_back(stats);

        if (!options.quiet) {
            std::printf(
                "iter %3d steps %8lld loss %8.4f entropy %7.4f clip %5.3f eps %3d mean_R %9.3f\n",
                iteration, static_cast<long long>(steps_done), stats.loss, stats.entropy,
                stats.clip_fraction, stats.episodes_completed, stats.mean_episode_reward);
            std::fflush(stdout);
        }

        while (evals_done < target_evals &&
               steps_done >= (evals_done + 1) * config.eval_interval) {
            run_eval();
        }
    }
    while (evals_done < target_evals) run_eval();

    artifacts.final_params = params;
    if (persist) {
        artifacts.final_policy_path = options.run_dir / "final_policy.bin";
        save_checkpoint(params, artifacts.final_policy_path);

        std::vector<std::vector<std::string>> rows;
        for (const TrainIterationStats& s : artifacts.iterations) {
            rows.push_back({std::to_string(s.iteration), std::to_string(s.timestep),
                            csv_number(s.loss), csv_number(s.policy_loss),
                            csv_number(s.value_loss), csv_number(s.entropy),
                            csv_number(s.clip_fraction), csv_number(s.mean_ratio),
                            csv_number(s.grad_norm), std::to_string(s.episodes_completed),
                            csv_number(s.mean_episode_reward), csv_number(s.mean_progress),
                            csv_number(s.fuel_weight)});
        }
        write_csv((options.run_dir / "train_log.csv").string(),
                  {"iteration", "timestep", "loss", "policy_loss", "value_loss", "entropy",
                   "clip_fraction", "mean_ratio", "grad_norm", "episodes_completed",
                   "mean_episode_reward", "mean_progress", "fuel_weight"},
                  rows);

        std::vector<std::string> header{"timestep"};
        for (const std::string& col : metric_columns(task)) header.push_back(col + "_iqm");
        rows.clear();
        for (const EvalRecord& rec : artifacts.eval_log) {
            std::vector<std::string> row{std::to_string(rec.timestep)};
            for (double v : rec.metric_iqm) row.push_back(csv_number(v));
            rows.push_back(std::move(row));
        }
        write_csv((options.run_dir / "eval_log.csv").string(), header, rows);
    }
    return artifacts;
}

}  // namespace proxops
