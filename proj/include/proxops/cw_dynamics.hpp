#pragma once

#include <Eigen/Dense>
#include <utility>

namespace proxops {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;

/// Relative state of the deputy in Hill's frame: position (m), velocity (m/s).
struct HillState {
    double x = 0.0, y = 0.0, z = 0.0;
    double vx = 0.0, vy = 0.0, vz = 0.0;

    Vec3 position() const { return {x, y, z}; }
    Vec3 velocity() const { return {vx, vy, vz}; }
    Vec6 vector() const;
    static HillState from_vector(const Vec6& v);
    bool finite() const;
};

/// Thruster force along each Hill-frame axis, newtons.
struct ThrustCommand {
    double fx = 0.0, fy = 0.0, fz = 0.0;
    Vec3 vector() const { return {fx, fy, fz}; }
};

struct DynamicsParams {
    double n = 0.001027;  // chief mean motion, rad/s
    double mass = 12.0;   // deputy mass, kg
    double dt = 1.0;      // zero-order-hold interval, s

    void validate() const;  // throws std::invalid_argument
};

/// Continuous-time matrices of the relative-motion model ds/dt = A s + B u.
std::pair<Mat6, Mat63> system_matrices(const DynamicsParams& params);

struct DiscreteDynamics {
    Mat6 Ad;
    Mat63 Bd;
};

/// Exact zero-order-hold discretization: Ad = exp(A dt) and Bd obtained from
/// the augmented-matrix exponential, so no explicit inverse of A is needed.
/// Propagation with (Ad, Bd) is exact for thrust held constant over dt.
DiscreteDynamics discretize(const DynamicsParams& params);

/// Per-step velocity-change proxy for fuel use: (|fx|+|fy|+|fz|)/mass * dt.
double step_delta_v(const ThrustCommand& thrust, const DynamicsParams& params);

/// Propagator with (Ad, Bd) precomputed once; immutable after construction
/// and safe to share across threads.
class CwDynamics {
public:
    explicit CwDynamics(const DynamicsParams& params);

    /// Advances one zero-order-hold step. Throws std::domain_error if the
    /// input state or thrust has a non-finite component.
    HillState propagate(const HillState& state, const ThrustCommand& thrust) const;

    double step_delta_v(const ThrustCommand& thrust) const;

    const DynamicsParams& params() const { return params_; }
    const DiscreteDynamics& discrete() const { return discrete_; }

private:
    DynamicsParams params_;
    DiscreteDynamics discrete_;
};

/// One-shot convenience wrapper; prefer CwDynamics in loops.
HillState propagate(const HillState& state, const ThrustCommand& thrust,
                    const DynamicsParams& params);

}  // namespace proxops
