#pragma once

// Independent reference implementations used only by tests: closed-form CW
// propagation, a fine-step RK4 integrator, brute-force geometry and GAE.
// These must stay independent of the library code paths they check.

#include <cmath>
#include <vector>

#include "proxops/cw_dynamics.hpp"
#include "proxops/inspection_env.hpp"

namespace proxops::test {

/// Closed-form Clohessy-Wiltshire state transition matrix for free drift.
inline Mat6 cw_closed_form(double n, double t) {
    const double nt = n * t;
    const double c = std::cos(nt);
    const double s = std::sin(nt);
    Mat6 phi = Mat6::Zero();
    phi(0, 0) = 4.0 - 3.0 * c;
    phi(0, 3) = s / n;
    phi(0, 4) = 2.0 * (1.0 - c) / n;
    phi(1, 0) = 6.0 * (s - nt);
    phi(1, 1) = 1.0;
    phi(1, 3) = 2.0 * (c - 1.0) / n;
    phi(1, 4) = (4.0 * s - 3.0 * nt) / n;
    phi(2, 2) = c;
    phi(2, 5) = s / n;
    phi(3, 0) = 3.0 * n * s;
    phi(3, 3) = c;
    phi(3, 4) = 2.0 * s;
    phi(4, 0) = 6.0 * n * (c - 1.0);
    phi(4, 3) = -2.0 * s;
    phi(4, 4) = 4.0 * c - 3.0;
    phi(5, 2) = -n * s;
    phi(5, 5) = c;
    return phi;
}

/// RK4 integration of the continuous dynamics at a fixed substep size.
inline HillState rk4_propagate(const HillState& state, const ThrustCommand& thrust,
                               const DynamicsParams& params, double substep) {
    const auto [A, B] = system_matrices(params);
    const Vec3 u = thrust.vector();
    auto deriv = [&](const Vec6& x) -> Vec6 { return A * x + B * u; };
    Vec6 x = state.vector();
    const int steps = static_cast<int>(std::llround(params.dt / substep));
    for (int i = 0; i < steps; ++i) {
        const Vec6 k1 = deriv(x);
        const Vec6 k2 = deriv(x + 0.5 * substep * k1);
        const Vec6 k3 = deriv(x + 0.5 * substep * k2);
        const Vec6 k4 = deriv(x + substep * k3);
        x += substep / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return HillState::from_vector(x);
}

/// Direct evaluation of both half-space tests, point by point.
inline std::vector<std::uint8_t> brute_force_mask(const ChiefModel& model, const Vec3& deputy,
                                                  double sun_theta) {
    std::vector<std::uint8_t> mask(model.point_count(), 0);
    const Vec3 sun(std::cos(sun_theta), std::sin(sun_theta), 0.0);
    for (std::size_t i = 0; i < model.point_count(); ++i) {
        const Vec3 normal = model.directions[i];
        const Vec3 surface = model.radius * normal;
        const double lit = normal.x() * sun.x() + normal.y() * sun.y() + normal.z() * sun.z();
        const Vec3 to_deputy = deputy - surface;
        const double seen =
            normal.x() * to_deputy.x() + normal.y() * to_deputy.y() + normal.z() * to_deputy.z();
        mask[i] = (lit > 0.0 && seen > 0.0) ? 1 : 0;
    }
    return mask;
}

/// O(T^2) double-loop evaluation of the lambda-weighted advantage sum.
inline std::vector<double> brute_force_gae(const std::vector<double>& rewards,
                                           const std::vector<double>& values,
                                           const std::vector<std::uint8_t>& dones,
                                           double bootstrap, double gamma, double lambda) {
    const std::size_t n = rewards.size();
    std::vector<double> adv(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double coef = 1.0;
        for (std::size_t k = t; k < n; ++k) {
            if (k > t) {
                if (dones[k - 1]) break;
                coef *= gamma * lambda;
            }
            const double next_value = k + 1 < n ? values[k + 1] : bootstrap;
            const double nonterminal = dones[k] ? 0.0 : 1.0;
            const double delta = rewards[k] + gamma * next_value * nonterminal - values[k];
            adv[t] += coef * delta;
        }
    }
    return adv;
}

}  // namespace proxops::test
