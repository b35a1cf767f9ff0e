#pragma once

#include <array>
#include <cstdint>

#include "proxops/cw_dynamics.hpp"

namespace proxops {

struct DockingConfig {
    DynamicsParams dynamics{0.001027, 12.0, 1.0};
    double dock_radius = 10.0;               // m
    double max_dock_speed = 0.2;             // nu_0, m/s
    double limit_slope = 2.0 * 0.001027;     // nu_1 = 2n, (m/s)/m
    double out_of_bounds = 800.0;            // m
    int max_steps = 2000;
};

/// Distance-dependent speed limit nu_0 + nu_1 * (r - r_dock).
double max_speed(double distance, const DockingConfig& config);

enum class DockingDone { Running, Docked, Crashed, OutOfBounds, Timeout };

const char* to_string(DockingDone done);

struct DockingRewardParts {
    double dist_change = 0.0;
    double fuel = 0.0;
    double violation = 0.0;
    double time = 0.0;
    double success = 0.0;
    double crash = 0.0;
    double total() const {
        return dist_change + fuel + violation + time + success + crash;
    }
};

struct DockingState {
    HillState phys;
    int step_count = 0;
    double cumulative_delta_v = 0.0;
    int violation_steps = 0;     // steps where the speed limit was exceeded
    double prev_distance = 0.0;  // m, distance before the latest step
};

using DockingObservation = std::array<double, 8>;

struct DockingStepOutcome {
    DockingObservation observation;
    double reward = 0.0;
    DockingRewardParts components;
    DockingDone done = DockingDone::Running;
    double final_speed = 0.0;  // m/s, meaningful on terminal steps
};

/// Observation layout: position/100, velocity/0.5, speed, current speed limit.
DockingObservation make_docking_observation(const HillState& phys, const DockingConfig& config);

/// The docking task: approach to within the dock radius below the maximum
/// docking speed, under a distance-dependent speed limit.
class DockingEnv {
public:
    explicit DockingEnv(DockingConfig config = {});

    DockingObservation reset(std::uint64_t seed);

    /// Starts an episode from an explicit state (replay and tests).
    DockingObservation reset_to(const DockingState& state);

    /// Advances one 1 s step. Throws std::domain_error if called on a
    /// finished episode.
    DockingStepOutcome step(const ThrustCommand& thrust);

    const DockingState& state() const { return state_; }
    const DockingConfig& config() const { return config_; }
    DockingDone done_tag() const { return done_; }
    bool done() const { return done_ != DockingDone::Running; }
    DockingObservation observation() const { return observation_; }

    /// Fraction of episode steps that violated the speed limit. Throws
    /// std::domain_error while the episode is still running.
    double violation_fraction() const;

private:
    DockingConfig config_;
    CwDynamics dynamics_;
    DockingState state_;
    DockingObservation observation_{};
    DockingDone done_ = DockingDone::Running;
    bool episode_open_ = false;
};

}  // namespace proxops
