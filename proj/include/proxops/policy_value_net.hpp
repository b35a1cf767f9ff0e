#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "proxops/action_space.hpp"
#include "proxops/rng.hpp"

namespace proxops {

enum class HeadKind { Categorical, Gaussian };

/// Architecture of one policy+value parameter set: separate two-layer tanh
/// trunks for the policy and value functions, with either a factored
/// per-axis categorical head or a diagonal-Gaussian head.
struct NetShape {
    HeadKind head = HeadKind::Categorical;
    int obs_dim = 11;
    int axes = 3;
    int choices = 3;  // per axis; ignored for Gaussian
    int hidden1 = 64;
    int hidden2 = 64;

    int head_out() const { return head == HeadKind::Categorical ? axes * choices : axes; }
    bool operator==(const NetShape&) const = default;

    static NetShape for_task(Task task, const ActionSpaceSpec& spec,
                             int hidden1 = 64, int hidden2 = 64);
};

/// All parameters stored contiguously; block views are taken on demand.
/// Immutable snapshots of this struct are shared across rollout workers.
struct MlpParams {
    NetShape shape;
    Eigen::VectorXd flat;

    std::size_t parameter_count() const { return static_cast<std::size_t>(flat.size()); }

    /// Orthogonally-initialized parameters: gain sqrt(2) on hidden layers,
    /// 0.01 on the policy head, 1.0 on the value output, zero biases, and a
    /// per-axis log-std of ln(0.5 * u_max) for Gaussian heads.
    static MlpParams initialize(const NetShape& shape, std::uint64_t seed, double u_max = 1.0);

    /// Zero parameters (uniform categorical / zero mean, value 0).
    static MlpParams zeros(const NetShape& shape);
};

struct ActionDistribution {
    HeadKind kind = HeadKind::Categorical;
    Eigen::MatrixXd logits;    // choices x axes (one column per axis)
    Eigen::Vector3d mean;      // Gaussian
    Eigen::Vector3d log_std;   // Gaussian, already clamped to [-5, 2]
};

struct ForwardResult {
    ActionDistribution dist;
    double value = 0.0;
};

/// Deterministic forward pass. Throws std::domain_error on an observation
/// length mismatch.
ForwardResult forward(const MlpParams& params, std::span<const double> obs);

struct ActionSample {
    ActionChoice choice;
    double log_prob = 0.0;  // summed over axes; pre-clamp for Gaussian heads
    double entropy = 0.0;   // summed over axes
};

/// Draws one action. With `deterministic` set, takes the per-axis argmax /
/// mean and consumes no randomness.
ActionSample sample_action(const ActionDistribution& dist, Rng& rng, bool deterministic);

/// Log-probability and entropy of a given choice under a distribution
/// (used when scoring stored rollout actions).
double action_log_prob(const ActionDistribution& dist, const ActionChoice& choice);

struct PpoLossConfig {
    double clip_eps = 0.2;
    double value_coef = 0.5;
    double entropy_coef = 0.0;
};

struct TrainBatch {
    Eigen::MatrixXd observations;  // obs_dim x N
    std::vector<ActionChoice> actions;
    Eigen::VectorXd old_log_probs;
    Eigen::VectorXd advantages;  // pre-normalized by the caller
    Eigen::VectorXd returns;

    Eigen::Index size() const { return old_log_probs.size(); }
};

struct LossStats {
    double total = 0.0;
    double policy = 0.0;    // clipped-surrogate mean
    double value = 0.0;     // unweighted (V - R)^2 mean
    double entropy = 0.0;   // mean policy entropy
    double clip_fraction = 0.0;
    double mean_ratio = 0.0;
};

/// Raised when the PPO loss goes non-finite; carries the first offending
/// sample index for diagnostics.
struct NonFiniteLossError : std::runtime_error {
    explicit NonFiniteLossError(std::size_t index);
    std::size_t batch_index;
};

/// Mean PPO loss over the batch:
///   -min(ratio*A, clip(ratio, 1-eps, 1+eps)*A) + c_v*(V-R)^2 - c_e*H
/// When `gradient` is non-null it receives the analytic gradient with
/// respect to every parameter (same layout as MlpParams::flat).
LossStats ppo_loss(const MlpParams& params, const PpoLossConfig& config,
                   const TrainBatch& batch, Eigen::VectorXd* gradient);

}  // namespace proxops
