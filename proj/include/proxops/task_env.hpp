#pragma once

#include <memory>
#include <vector>

#include "proxops/action_space.hpp"
#include "proxops/docking_env.hpp"
#include "proxops/eval_metrics.hpp"
#include "proxops/inspection_env.hpp"

namespace proxops {

/// Uniform facade over the two tasks, used by rollout collection and policy
/// evaluation. Each instance is owned by exactly one worker.
class TaskEnv {
public:
    struct Step {
        std::vector<double> observation;
        double reward = 0.0;
        bool done = false;
    };

    virtual ~TaskEnv() = default;

    virtual int observation_dim() const = 0;
    virtual std::vector<double> reset(std::uint64_t seed) = 0;
    virtual Step step(const ThrustCommand& thrust) = 0;
    virtual bool done() const = 0;

    /// Metrics of the episode in progress (totals so far) or just finished.
    virtual EpisodeMetrics episode_metrics() const = 0;

    /// Inspected fraction for the inspection task; 0 for docking.
    virtual double progress_fraction() const { return 0.0; }

    /// Adaptive fuel weight hook; a no-op for docking.
    virtual void set_fuel_weight(double) {}
};

std::unique_ptr<TaskEnv> make_task_env(Task task, bool eval_mode);

}  // namespace proxops
