#include "proxops/cw_dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace proxops {

Vec6 HillState::vector() const {
    Vec6 v;
    v << x, y, z, vx, vy, vz;
    return v;
}

HillState HillState::from_vector(const Vec6& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

bool HillState::finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) &&
           std::isfinite(vx) && std::isfinite(vy) && std::isfinite(vz);
}

void DynamicsParams::validate() const {
    if (!(n > 0.0) || !(mass > 0.0) || !(dt > 0.0)) {
        throw std::invalid_argument("DynamicsParams: n, mass and dt must be positive");
    }
}

std::pair<Mat6, Mat63> system_matrices(const DynamicsParams& params) {
    params.validate();

    Mat6 A = Mat6::Zero();
    A(0, 3) = 1.0;
    A(1, 4) = 1.0;
    A(2, 5) = 1.0;
    A(3, 0) = 3.0 * params.n * params.n;
    A(3, 4) = 2.0 * params.n;
    A(4, 3) = -2.0 * params.n;
    A(5, 2) = -params.n * params.n;

    Mat63 B = Mat63::Zero();
    B(3, 0) = 1.0 / params.mass;
    B(4, 1) = 1.0 / params.mass;
    B(5, 2) = 1.0 / params.mass;

    return {A, B};
}

DiscreteDynamics discretize(const DynamicsParams& params) {
    const auto [A, B] = system_matrices(params);

    // exp([[A, B], [0, 0]] * dt) = [[Ad, Bd], [0, I]]
    Eigen::Matrix<double, 9, 9> M = Eigen::Matrix<double, 9, 9>::Zero();
    M.topLeftCorner<6, 6>() = A;
    M.topRightCorner<6, 3>() = B;
    M *= params.dt;

    const Eigen::Matrix<double, 9, 9> expM = M.exp();

    DiscreteDynamics d;
    d.Ad = expM.topLeftCorner<6, 6>();
    d.Bd = expM.topRightCorner<6, 3>();

    // The out-of-plane subsystem (z, vz) is exactly decoupled from the x-y
    // plane; stamp its structural zeros so free z-motion never leaks.
    for (int i : {0, 1, 3, 4}) {
        for (int j : {2, 5}) {
            d.Ad(i, j) = 0.0;
            d.Ad(j, i) = 0.0;
        }
        d.Bd(i, 2) = 0.0;
    }
    for (int j : {0, 1}) {
        d.Bd(2, j) = 0.0;
        d.Bd(5, j) = 0.0;
    }
    return d;
}

double step_delta_v(const ThrustCommand& thrust, const DynamicsParams& params) {
    return (std::abs(thrust.fx) + std::abs(thrust.fy) + std::abs(thrust.fz)) /
           params.mass * params.dt;
}

CwDynamics::CwDynamics(const DynamicsParams& params)
    : params_(params), discrete_(discretize(params)) {}

HillState CwDynamics::propagate(const HillState& state, const ThrustCommand& thrust) const {
    if (!state.finite()) {
        throw std::domain_error("propagate: non-finite state component");
    }
    if (!std::isfinite(thrust.fx) || !std::isfinite(thrust.fy) || !std::isfinite(thrust.fz)) {
        throw std::domain_error("propagate: non-finite thrust component");
    }
    const Vec6 next = discrete_.Ad * state.vector() + discrete_.Bd * thrust.vector();
    return HillState::from_vector(next);
}

double CwDynamics::step_delta_v(const ThrustCommand& thrust) const {
    return proxops::step_delta_v(thrust, params_);
}

HillState propagate(const HillState& state, const ThrustCommand& thrust,
                    const DynamicsParams& params) {
    return CwDynamics(params).propagate(state, thrust);
}

}  // namespace proxops
