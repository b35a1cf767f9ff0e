#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "proxops/cw_dynamics.hpp"
#include "proxops/rng.hpp"

namespace proxops {

/// The chief spacecraft as seen by the inspection task: a sphere carrying a
/// fixed set of inspectable surface points.
struct ChiefModel {
    double radius = 10.0;          // m
    double deputy_radius = 5.0;    // m
    double crash_distance = 15.0;  // m, sum of the two radii
    std::vector<Vec3> directions;  // unit vectors; radius * direction is the surface point

    std::size_t point_count() const { return directions.size(); }
    Vec3 surface_point(std::size_t i) const { return radius * directions[i]; }
};

/// Deterministic golden-angle (Fibonacci spiral) placement of `count` points
/// on the sphere, near-uniform in area.
ChiefModel generate_points(std::size_t count = 99, double radius = 10.0);

/// Sun direction in the x-y plane of Hill's frame, by angle from +x.
struct SunState {
    double theta = 0.0;  // rad, kept in [0, 2*pi)
    Vec3 direction() const;
};

using PointMask = std::vector<std::uint8_t>;

std::size_t mask_popcount(const PointMask& mask);

/// Point i is set iff it is illuminated (faces the Sun) and within the
/// deputy's unobstructed field of view. For a sphere both reduce to exact
/// half-space tests against the point's outward normal. Throws
/// std::domain_error when the deputy is on or inside the sphere.
PointMask visible_and_illuminated(const ChiefModel& model, const Vec3& deputy_pos,
                                  const SunState& sun);

enum class InspectionDone { Running, AllInspected, Crash, OutOfBounds, Timeout };

const char* to_string(InspectionDone done);

struct InspectionRewardParts {
    double points = 0.0;
    double fuel = 0.0;
    double crash = 0.0;
    double total() const { return points + fuel + crash; }
};

struct InspectionState {
    HillState phys;
    PointMask inspected;
    SunState sun;
    int step_count = 0;
    double w = 0.001;  // fuel-penalty weight in [0.001, 0.1]
    double cumulative_delta_v = 0.0;
};

using InspectionObservation = std::array<double, 11>;

struct InspectionStepOutcome {
    InspectionObservation observation;
    double reward = 0.0;
    InspectionRewardParts components;
    InspectionDone done = InspectionDone::Running;
};

struct InspectionConfig {
    DynamicsParams dynamics{0.001027, 12.0, 10.0};
    std::size_t num_points = 99;
    double chief_radius = 10.0;
    double out_of_bounds = 800.0;   // m
    int max_steps = 1223;           // two apparent Sun revolutions
    double initial_w = 0.001;
    bool eval_mode = false;         // scores with the constant w = 0.1
    bool sun_retrograde = true;     // apparent solar motion for a prograde chief orbit
    int cluster_points_per_k = 10;  // guidance clustering granularity
    int cluster_max_k = 6;
};

/// Adaptive fuel-weight schedule: nudged up when the agent inspects almost
/// everything, down when coverage drops, always within [0.001, 0.1].
double adaptive_w_update(double w, double mean_inspected_fraction);

/// Observation layout: position/100, velocity*2, inspected count/100, Sun
/// angle, then the uninspected-cluster guidance unit vector.
InspectionObservation make_inspection_observation(const InspectionState& state,
                                                  const Vec3& guidance);

/// The illuminated inspection task. One instance per rollout worker; not
/// thread-safe across instances sharing state (they never do).
class InspectionEnv {
public:
    explicit InspectionEnv(InspectionConfig config = {});

    InspectionObservation reset(std::uint64_t seed);

    /// Starts an episode from an explicit state (replay and tests). The
    /// guidance seed stream is taken from `seed`.
    InspectionObservation reset_to(const InspectionState& state, std::uint64_t seed = 0);

    /// Advances one 10 s step. Throws std::domain_error if called on a
    /// finished episode or with non-finite thrust.
    InspectionStepOutcome step(const ThrustCommand& thrust);

    const InspectionState& state() const { return state_; }
    const ChiefModel& chief() const { return chief_; }
    const InspectionConfig& config() const { return config_; }
    InspectionDone done_tag() const { return done_; }
    bool done() const { return done_ != InspectionDone::Running; }
    InspectionObservation observation() const { return observation_; }
    double inspected_fraction() const;

    /// Fuel weight applied from the next reset on (the adaptive schedule is
    /// driven by the trainer between iterations).
    void set_fuel_weight(double w);
    double fuel_weight() const { return fuel_weight_; }

private:
    Vec3 refresh_guidance();

    InspectionConfig config_;
    ChiefModel chief_;
    CwDynamics dynamics_;
    InspectionState state_;
    InspectionObservation observation_{};
    InspectionDone done_ = InspectionDone::Running;
    double fuel_weight_ = 0.001;
    Rng guidance_rng_{0};
    bool episode_open_ = false;
};

}  // namespace proxops
