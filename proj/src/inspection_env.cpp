#include "proxops/inspection_env.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "proxops/cluster_guidance.hpp"

namespace proxops {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    return theta;
}

/// Spherical parameterization shared by the position and velocity draws:
/// x = r cos(az) cos(el), y = r sin(az) cos(el), z = r sin(el).
Vec3 from_spherical(double r, double azimuth, double elevation) {
    return {r * std::cos(azimuth) * std::cos(elevation),
            r * std::sin(azimuth) * std::cos(elevation),
            r * std::sin(elevation)};
}

}  // namespace

ChiefModel generate_points(std::size_t count, double radius) {
    if (count < 1) throw std::invalid_argument("generate_points: count must be >= 1");
    ChiefModel model;
    model.radius = radius;
    model.crash_distance = radius + model.deputy_radius;
    model.directions.reserve(count);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        const double ring = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * static_cast<double>(i);
        model.directions.emplace_back(ring * std::cos(phi), ring * std::sin(phi), z);
    }
    return model;
}

Vec3 SunState::direction() const { return {std::cos(theta), std::sin(theta), 0.0}; }

std::size_t mask_popcount(const PointMask& mask) {
    std::size_t n = 0;
    for (const auto b : mask) n += b ? 1 : 0;
    return n;
}

PointMask visible_and_illuminated(const ChiefModel& model, const Vec3& deputy_pos,
                                  const SunState& sun) {
    if (deputy_pos.norm() <= model.radius) {
        throw std::domain_error("visible_and_illuminated: deputy inside the chief sphere");
    }
    const Vec3 sun_dir = sun.direction();
    PointMask mask(model.point_count(), 0);
    for (std::size_t i = 0; i < model.point_count(); ++i) {
        const Vec3& normal = model.directions[i];
        const bool illuminated = normal.dot(sun_dir) > 0.0;
        const bool visible = normal.dot(deputy_pos - model.surface_point(i)) > 0.0;
        mask[i] = (illuminated && visible) ? 1 : 0;
    }
    return mask;
}

const char* to_string(InspectionDone done) {
    switch (done) {
        case InspectionDone::Running: return "running";
        case InspectionDone::AllInspected: return "all_inspected";
        case InspectionDone::Crash: return "crash";
        case InspectionDone::OutOfBounds: return "out_of_bounds";
        case InspectionDone::Timeout: return "timeout";
    }
    return "?";
}

double adaptive_w_update(double w, double mean_inspected_fraction) {
    if (mean_inspected_fraction > 0.90) w += 0.00005;
    else if (mean_inspected_fraction < 0.80) w -= 0.00005;
    return std::min(std::max(w, 0.001), 0.1);
}

InspectionObservation make_inspection_observation(const InspectionState& state,
                                                  const Vec3& guidance) {
    return {state.phys.x / 100.0,
            state.phys.y / 100.0,
            state.phys.z / 100.0,
            2.0 * state.phys.vx,
            2.0 * state.phys.vy,
            2.0 * state.phys.vz,
            static_cast<double>(mask_popcount(state.inspected)) / 100.0,
            state.sun.theta,
            guidance.x(),
            guidance.y(),
            guidance.z()};
}

InspectionEnv::InspectionEnv(InspectionConfig config)
    : config_(config),
      chief_(generate_points(config.num_points, config.chief_radius)),
      dynamics_(config.dynamics),
      fuel_weight_(config.eval_mode ? 0.1 : config.initial_w) {}

Vec3 InspectionEnv::refresh_guidance() {
    return guidance_vector(chief_, state_.inspected, state_.phys.position(),
                           guidance_rng_.raw(), config_.cluster_points_per_k,
                           config_.cluster_max_k);
}

InspectionObservation InspectionEnv::reset(std::uint64_t seed) {
    Rng init(substream_seed(seed, "inspection-init"));
    guidance_rng_ = Rng(substream_seed(seed, "inspection-guidance"));

    state_ = InspectionState{};
    state_.sun.theta = init.uniform(0.0, kTwoPi);

    // Draw order is pinned: radius, azimuth, elevation for the position, then
    // the same triple for the velocity.
    const double r = init.uniform(50.0, 100.0);
    const double pos_azimuth = init.uniform(0.0, kTwoPi);
    const double pos_elevation = init.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    Vec3 pos = from_spherical(r, pos_azimuth, pos_elevation);
    // The deputy points at the chief; if that aims within 30 degrees of the
    // Sun, flip to the antipode so it looks at illuminated points instead.
    const Vec3 pointing = -pos.normalized();
    if (pointing.dot(state_.sun.direction()) > std::cos(std::numbers::pi / 6.0)) {
        pos = -pos;
    }
    const double speed = init.uniform(0.0, 0.3);
    const double vel_azimuth = init.uniform(0.0, kTwoPi);
    const double vel_elevation = init.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    const Vec3 vel = from_spherical(speed, vel_azimuth, vel_elevation);

    state_.phys = {pos.x(), pos.y(), pos.z(), vel.x(), vel.y(), vel.z()};
    state_.w = fuel_weight_;
    // Points in view at t=0 count as inspected but score nothing.
    state_.inspected = visible_and_illuminated(chief_, pos, state_.sun);

    done_ = InspectionDone::Running;
    episode_open_ = true;
    observation_ = make_inspection_observation(state_, refresh_guidance());
    return observation_;
}

InspectionObservation InspectionEnv::reset_to(const InspectionState& state, std::uint64_t seed) {
    guidance_rng_ = Rng(substream_seed(seed, "inspection-guidance"));
    state_ = state;
    state_.inspected.resize(chief_.point_count(), 0);
    done_ = InspectionDone::Running;
    episode_open_ = true;
    observation_ = make_inspection_observation(state_, refresh_guidance());
    return observation_;
}

InspectionStepOutcome InspectionEnv::step(const ThrustCommand& thrust) {
    if (!episode_open_ || done_ != InspectionDone::Running) {
        throw std::domain_error("InspectionEnv::step called on a finished episode");
    }

    state_.phys = dynamics_.propagate(state_.phys, thrust);
    const double sun_rate = config_.sun_retrograde ? -config_.dynamics.n : config_.dynamics.n;
    state_.sun.theta = wrap_angle(state_.sun.theta + sun_rate * config_.dynamics.dt);
    ++state_.step_count;

    const double dv = dynamics_.step_delta_v(thrust);
    state_.cumulative_delta_v += dv;

    const double distance = state_.phys.position().norm();

    // Inspected bits only ever accumulate.
    std::size_t new_points = 0;
    if (distance > chief_.radius) {
        const PointMask now = visible_and_illuminated(chief_, state_.phys.position(), state_.sun);
        for (std::size_t i = 0; i < now.size(); ++i) {
            if (now[i] && !state_.inspected[i]) {
                state_.inspected[i] = 1;
                ++new_points;
            }
        }
    }

    const bool crashed = distance < chief_.crash_distance;
    const bool all_inspected = mask_popcount(state_.inspected) == chief_.point_count();

    InspectionStepOutcome out;
    out.components.points = 0.1 * static_cast<double>(new_points);
    out.components.fuel = -state_.w * dv;
    out.components.crash = crashed ? -1.0 : 0.0;
    out.reward = out.components.total();

    if (crashed) done_ = InspectionDone::Crash;
    else if (all_inspected) done_ = InspectionDone::AllInspected;
    else if (distance > config_.out_of_bounds) done_ = InspectionDone::OutOfBounds;
    else if (state_.step_count >= config_.max_steps) done_ = InspectionDone::Timeout;
    out.done = done_;

    observation_ = make_inspection_observation(state_, refresh_guidance());
    out.observation = observation_;
    return out;
}

double InspectionEnv::inspected_fraction() const {
    if (chief_.point_count() == 0) return 0.0;
    return static_cast<double>(mask_popcount(state_.inspected)) /
           static_cast<double>(chief_.point_count());
}

void InspectionEnv::set_fuel_weight(double w) {
    fuel_weight_ = std::min(std::max(w, 0.001), 0.1);
}

}  // namespace proxops
