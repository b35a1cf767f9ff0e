#include "proxops/task_env.hpp"

namespace proxops {

namespace {

class InspectionTaskEnv final : public TaskEnv {
public:
    explicit InspectionTaskEnv(bool eval_mode) {
        InspectionConfig cfg;
        cfg.eval_mode = eval_mode;
        env_ = std::make_unique<InspectionEnv>(cfg);
    }

    int observation_dim() const override { return 11; }

    std::vector<double> reset(std::uint64_t seed) override {
        const auto obs = env_->reset(seed);
        metrics_ = EpisodeMetrics{};
        metrics_.initial_distance = env_->state().phys.position().norm();
        return {obs.begin(), obs.end()};
    }

    Step step(const ThrustCommand& thrust) override {
        const InspectionStepOutcome out = env_->step(thrust);
        metrics_.total_reward += out.reward;
        if (out.done != InspectionDone::Running) finalize(out.done);
        return {{out.observation.begin(), out.observation.end()}, out.reward,
                out.done != InspectionDone::Running};
    }

    bool done() const override { return env_->done(); }
    EpisodeMetrics episode_metrics() const override { return metrics_; }
    double progress_fraction() const override { return env_->inspected_fraction(); }
    void set_fuel_weight(double w) override { env_->set_fuel_weight(w); }

private:
    void finalize(InspectionDone tag) {
        const InspectionState& s = env_->state();
        metrics_.success = tag == InspectionDone::AllInspected ? 1 : 0;
        metrics_.delta_v = s.cumulative_delta_v;
        metrics_.episode_length = s.step_count;
        metrics_.inspected_points = static_cast<double>(mask_popcount(s.inspected));
        metrics_.final_distance = s.phys.position().norm();
        metrics_.final_speed = s.phys.velocity().norm();
        metrics_.outcome = to_string(tag);
    }

    std::unique_ptr<InspectionEnv> env_;
    EpisodeMetrics metrics_;
};

class DockingTaskEnv final : public TaskEnv {
public:
    DockingTaskEnv() : env_(std::make_unique<DockingEnv>()) {}

    int observation_dim() const override { return 8; }

    std::vector<double> reset(std::uint64_t seed) override {
        const auto obs = env_->reset(seed);
        metrics_ = EpisodeMetrics{};
        metrics_.initial_distance = env_->state().phys.position().norm();
        return {obs.begin(), obs.end()};
    }

    Step step(const ThrustCommand& thrust) override {
        const DockingStepOutcome out = env_->step(thrust);
        metrics_.total_reward += out.reward;
        if (out.done != DockingDone::Running) finalize(out.done, out.final_speed);
        return {{out.observation.begin(), out.observation.end()}, out.reward,
                out.done != DockingDone::Running};
    }

    bool done() const override { return env_->done(); }
    EpisodeMetrics episode_metrics() const override { return metrics_; }

private:
    void finalize(DockingDone tag, double final_speed) {
        const DockingState& s = env_->state();
        metrics_.success = tag == DockingDone::Docked ? 1 : 0;
        metrics_.delta_v = s.cumulative_delta_v;
        metrics_.episode_length = s.step_count;
        metrics_.violation_percent = 100.0 * env_->violation_fraction();
        metrics_.final_speed = final_speed;
        metrics_.final_distance = s.phys.position().norm();
        metrics_.outcome = to_string(tag);
    }

    std::unique_ptr<DockingEnv> env_;
    EpisodeMetrics metrics_;
};

}  // namespace

std::unique_ptr<TaskEnv> make_task_env(Task task, bool eval_mode) {
    if (task == Task::Inspection) return std::make_unique<InspectionTaskEnv>(eval_mode);
    return std::make_unique<DockingTaskEnv>();
}

}  // namespace proxops
