#include "proxops/docking_env.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "proxops/rng.hpp"

namespace proxops {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 from_spherical(double r, double azimuth, double elevation) {
    return {r * std::cos(azimuth) * std::cos(elevation),
            r * std::sin(azimuth) * std::cos(elevation),
            r * std::sin(elevation)};
}

// Decay constant of the distance-change reward: e^{-a r} halves every 100 m.
const double kDistanceDecay = std::log(2.0) / 100.0;

}  // namespace

double max_speed(double distance, const DockingConfig& config) {
    return config.max_dock_speed + config.limit_slope * (distance - config.dock_radius);
}

const char* to_string(DockingDone done) {
    switch (done) {
        case DockingDone::Running: return "running";
        case DockingDone::Docked: return "docked";
        case DockingDone::Crashed: return "crashed";
        case DockingDone::OutOfBounds: return "out_of_bounds";
        case DockingDone::Timeout: return "timeout";
    }
    return "?";
}

DockingObservation make_docking_observation(const HillState& phys, const DockingConfig& config) {
    const double speed = phys.velocity().norm();
    return {phys.x / 100.0, phys.y / 100.0, phys.z / 100.0,
            phys.vx / 0.5,  phys.vy / 0.5,  phys.vz / 0.5,
            speed,          max_speed(phys.position().norm(), config)};
}

DockingEnv::DockingEnv(DockingConfig config) : config_(config), dynamics_(config.dynamics) {}

DockingObservation DockingEnv::reset(std::uint64_t seed) {
    Rng init(substream_seed(seed, "docking-init"));

    state_ = DockingState{};
    // Draw order is pinned: radius, azimuth, elevation for the position, then
    // speed, azimuth, elevation for the velocity.
    const double r = init.uniform(100.0, 150.0);
    const double pos_azimuth = init.uniform(0.0, kTwoPi);
    const double pos_elevation = init.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    const Vec3 pos = from_spherical(r, pos_azimuth, pos_elevation);
    // Sampled below the local limit, so episodes never begin in violation.
    const double speed = init.uniform(0.0, 0.8 * max_speed(r, config_));
    const double vel_azimuth = init.uniform(0.0, kTwoPi);
    const double vel_elevation = init.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    const Vec3 vel = from_spherical(speed, vel_azimuth, vel_elevation);

    state_.phys = {pos.x(), pos.y(), pos.z(), vel.x(), vel.y(), vel.z()};
    state_.prev_distance = pos.norm();

    done_ = DockingDone::Running;
    episode_open_ = true;
    observation_ = make_docking_observation(state_.phys, config_);
    return observation_;
}

DockingObservation DockingEnv::reset_to(const DockingState& state) {
    state_ = state;
    if (state_.prev_distance <= 0.0) {
        state_.prev_distance = state_.phys.position().norm();
    }
    done_ = DockingDone::Running;
    episode_open_ = true;
    observation_ = make_docking_observation(state_.phys, config_);
    return observation_;
}

DockingStepOutcome DockingEnv::step(const ThrustCommand& thrust) {
    if (!episode_open_ || done_ != DockingDone::Running) {
        throw std::domain_error("DockingEnv::step called on a finished episode");
    }

    const double prev_distance = state_.phys.position().norm();
    state_.phys = dynamics_.propagate(state_.phys, thrust);
    ++state_.step_count;

    const double dv = dynamics_.step_delta_v(thrust);
    state_.cumulative_delta_v += dv;

    const double distance = state_.phys.position().norm();
    const double speed = state_.phys.velocity().norm();
    const double limit = max_speed(distance, config_);
    const bool docked = distance <= config_.dock_radius && speed <= config_.max_dock_speed;
    const bool crashed = distance <= config_.dock_radius && speed > config_.max_dock_speed;

    if (speed > limit) ++state_.violation_steps;
    state_.prev_distance = distance;

    DockingStepOutcome out;
    out.components.dist_change =
        2.0 * (std::exp(-kDistanceDecay * distance) - std::exp(-kDistanceDecay * prev_distance));
    out.components.fuel = -0.01 * dv;
    out.components.violation = speed > limit ? -0.01 * (speed - limit) : 0.0;
    out.components.time = -0.01;
    out.components.success = docked ? 1.0 : 0.0;
    out.components.crash = crashed ? -1.0 : 0.0;
    out.reward = out.components.total();

    if (docked) done_ = DockingDone::Docked;
    else if (crashed) done_ = DockingDone::Crashed;
    else if (distance > config_.out_of_bounds) done_ = DockingDone::OutOfBounds;
    else if (state_.step_count >= config_.max_steps) done_ = DockingDone::Timeout;
    out.done = done_;
    out.final_speed = done_ != DockingDone::Running ? speed : 0.0;

    observation_ = make_docking_observation(state_.phys, config_);
    out.observation = observation_;
    return out;
}

double DockingEnv::violation_fraction() const {
    if (done_ == DockingDone::Running || state_.step_count == 0) {
        throw std::domain_error("violation_fraction requires a finished episode");
    }
    return static_cast<double>(state_.violation_steps) / static_cast<double>(state_.step_count);
}

}  // namespace proxops
