#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "proxops/action_space.hpp"
#include "proxops/eval_metrics.hpp"
#include "proxops/policy_value_net.hpp"

namespace proxops {

/// Reset seeds used for the fixed evaluation test cases; the same cases are
/// reused at every evaluation checkpoint and for the final 100-case pass.
inline constexpr std::uint64_t kEvalSeedBase = 910'000'000ULL;

struct PpoConfig {
    std::int64_t total_timesteps = 300'000;
    int num_envs = 8;           // parallel environment slots (semantic: fixes rng streams)
    int rollout_length = 4096;  // transitions per iteration, across all envs
    int minibatch_size = 256;
    int epochs = 10;
    double clip_eps = 0.2;
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double learning_rate = 3e-4;
    double entropy_coef = 0.0;  // 0.005 for Gaussian heads (set by defaults_for)
    double value_coef = 0.5;
    double max_grad_norm = 0.5;
    std::int64_t eval_interval = 30'000;
    int num_eval_cases = 10;
    int hidden1 = 64;
    int hidden2 = 64;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument

    /// Community-standard defaults; discrete heads train without an entropy
    /// bonus, Gaussian heads keep a small one.
    static PpoConfig defaults_for(const ActionSpaceSpec& space);

    nlohmann::json to_json() const;
    static PpoConfig from_json(const nlohmann::json& j);
    bool operator==(const PpoConfig&) const = default;
};

struct RolloutBuffer {
    Eigen::MatrixXd observations;  // obs_dim x T
    std::vector<ActionChoice> actions;
    Eigen::VectorXd log_probs;
    Eigen::VectorXd rewards;
    Eigen::VectorXd values;
    std::vector<std::uint8_t> dones;
    Eigen::VectorXd advantages;  // populated by the GAE pass
    Eigen::VectorXd returns;
    std::vector<double> segment_bootstrap;  // value of each env slot's next state
    int segment_length = 0;

    Eigen::Index size() const { return rewards.size(); }
};

/// Generalized advantage estimation over one contiguous segment:
///   delta_t = r_t + gamma * V_{t+1} * (1 - done_t) - V_t
///   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
/// with V_T taken from `bootstrap_value`; returns_t = A_t + V_t.
void compute_gae(const Eigen::Ref<const Eigen::VectorXd>& rewards,
                 const Eigen::Ref<const Eigen::VectorXd>& values,
                 const std::vector<std::uint8_t>& dones, double bootstrap_value, double gamma,
                 double lambda, Eigen::Ref<Eigen::VectorXd> advantages,
                 Eigen::Ref<Eigen::VectorXd> returns);

struct TrainIterationStats {
    int iteration = 0;
    std::int64_t timestep = 0;
    double loss = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
    double mean_ratio = 0.0;
    double grad_norm = 0.0;
    int episodes_completed = 0;
    double mean_episode_reward = 0.0;
    double mean_progress = 0.0;  // mean inspected fraction of completed episodes
    double fuel_weight = 0.0;    // adaptive w after this iteration (inspection)
};

struct EvalRecord {
    std::int64_t timestep = 0;
    std::vector<double> metric_iqm;  // aligned with metric_columns(task)
};

/// Metric names, in table order, for each task's report and eval log.
const std::vector<std::string>& metric_columns(Task task);
double metric_value(const EpisodeMetrics& m, const std::string& name);

struct TrainOptions {
    std::filesystem::path run_dir;  // empty: train in memory, write nothing
    int threads = 1;                // rollout worker threads (performance only)
    bool quiet = false;
    std::uint64_t eval_seed_base = kEvalSeedBase;
};

struct RunArtifacts {
    MlpParams final_params;
    std::vector<TrainIterationStats> iterations;
    std::vector<EvalRecord> eval_log;
    std::filesystem::path run_dir;
    std::filesystem::path final_policy_path;  // empty when run_dir is empty
};

/// Full PPO training run: rollout collection across `num_envs` environment
/// slots, clipped-surrogate updates, the adaptive inspection fuel-weight
/// schedule, and periodic deterministic evaluation on fixed test cases.
RunArtifacts train(Task task, const ActionSpaceSpec& space, const PpoConfig& config,
                   const TrainOptions& options = {});

}  // namespace proxops
