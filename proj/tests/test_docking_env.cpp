#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxops/docking_env.hpp"
#include "proxops/rng.hpp"

using namespace proxops;

namespace {

DockingState state_at(const Vec3& pos, const Vec3& vel) {
    DockingState s;
    s.phys = {pos.x(), pos.y(), pos.z(), vel.x(), vel.y(), vel.z()};
    s.prev_distance = pos.norm();
    return s;
}

}  // namespace

TEST_CASE("distance-dependent speed limit") {
    const DockingConfig cfg;
    CHECK(max_speed(10.0, cfg) == 0.2);
    CHECK(std::abs(max_speed(110.0, cfg) - (0.2 + 0.002054 * 100.0)) < 1e-12);
    CHECK(std::abs(max_speed(110.0, cfg) - 0.4054) < 1e-12);
    CHECK(std::abs(max_speed(160.0, cfg) - 0.5081) < 1e-12);
}

TEST_CASE("reset sampling ranges") {
    DockingEnv env;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        env.reset(seed);
        const DockingState& s = env.state();
        const double r = s.phys.position().norm();
        CHECK(r >= 100.0);
        CHECK(r <= 150.0);
        CHECK(s.phys.velocity().norm() <= 0.8 * max_speed(r, env.config()));
        CHECK(s.prev_distance == r);
    }

    const auto a = env.reset(77);
    const auto state_a = env.state().phys.vector();
    const auto b = env.reset(77);
    CHECK(a == b);
    CHECK(state_a == env.state().phys.vector());
}

TEST_CASE("observation layout") {
    const DockingConfig cfg;
    const DockingObservation obs =
        make_docking_observation({100.0, 0.0, 0.0, 0.25, 0.0, 0.0}, cfg);
    CHECK(obs[0] == 1.0);
    CHECK(obs[1] == 0.0);
    CHECK(obs[2] == 0.0);
    CHECK(obs[3] == 0.5);
    CHECK(obs[4] == 0.0);
    CHECK(obs[5] == 0.0);
    CHECK(obs[6] == 0.25);
    CHECK(std::abs(obs[7] - (0.2 + 0.002054 * 90.0)) < 1e-12);
    CHECK(std::abs(obs[7] - 0.38486) < 1e-12);

    const DockingObservation at_dock = make_docking_observation({10.0, 0, 0, 0, 0.2, 0}, cfg);
    CHECK(at_dock[6] == 0.2);
    CHECK(at_dock[7] == 0.2);
}

TEST_CASE("step reward elements") {
    SUBCASE("distance-change reward matches the exponential form") {
        // the printed example: one metre closer from 100 m out
        const double a = std::log(2.0) / 100.0;
        const double want = 2.0 * (std::exp(-a * 99.0) - std::exp(-a * 100.0));
        CHECK(want == doctest::Approx(0.006955).epsilon(1e-3));

        DockingEnv env;
        env.reset_to(state_at({100.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}));
        const double r_prev = env.state().phys.position().norm();
        const auto out = env.step({});
        const double r_now = env.state().phys.position().norm();
        CHECK(out.components.dist_change ==
              doctest::Approx(2.0 * (std::exp(-a * r_now) - std::exp(-a * r_prev)))
                  .epsilon(1e-15));
        CHECK(out.components.time == -0.01);
        CHECK(out.reward == out.components.total());
    }

    SUBCASE("stationary far from the chief pays only the time penalty") {
        DockingEnv env;
        env.reset_to(state_at({0.0, 100.0, 0.0}, {0.0, 0.0, 0.0}));
        const auto out = env.step({});
        CHECK(std::abs(out.reward + 0.01) < 1e-12);
        CHECK(out.components.fuel == 0.0);
        CHECK(out.components.violation == 0.0);
    }

    SUBCASE("fuel element uses the delta-v formula") {
        DockingEnv env;
        env.reset_to(state_at({0.0, 120.0, 0.0}, {0.0, 0.0, 0.0}));
        const auto out = env.step({0.6, -0.6, 1.2});
        CHECK(out.components.fuel == -0.01 * step_delta_v({0.6, -0.6, 1.2}, env.config().dynamics));
    }

    SUBCASE("violation element scales with the overshoot") {
        DockingEnv env;
        env.reset_to(state_at({200.0, 0.0, 0.0}, {0.0, 3.0, 0.0}));
        const auto out = env.step({});
        const double speed = env.state().phys.velocity().norm();
        const double limit = max_speed(env.state().phys.position().norm(), env.config());
        REQUIRE(speed > limit);
        CHECK(out.components.violation == -0.01 * (speed - limit));
        CHECK(env.state().violation_steps == 1);
    }
}

TEST_CASE("terminal classification") {
    SUBCASE("docked") {
        DockingEnv env;
        env.reset_to(state_at({10.05, 0.0, 0.0}, {-0.1, 0.0, 0.0}));
        const auto out = env.step({});
        CHECK(env.state().phys.position().norm() <= 10.0);
        CHECK(out.components.success == 1.0);
        CHECK(out.components.crash == 0.0);
        CHECK(out.done == DockingDone::Docked);
        CHECK(out.final_speed == env.state().phys.velocity().norm());
        CHECK_THROWS_AS(env.step({}), std::domain_error);
    }

    SUBCASE("crashed") {
        DockingEnv env;
        env.reset_to(state_at({10.3, 0.0, 0.0}, {-0.5, 0.0, 0.0}));
        const auto out = env.step({});
        CHECK(out.components.crash == -1.0);
        CHECK(out.components.success == 0.0);
        CHECK(out.done == DockingDone::Crashed);
    }

    SUBCASE("the dock boundary is inclusive on both conditions") {
        DockingConfig cfg;
        cfg.dynamics.dt = 1e-12;  // freeze the state at the exact boundary
        DockingEnv env(cfg);
        env.reset_to(state_at({10.0, 0.0, 0.0}, {0.0, 0.2, 0.0}));
        const auto out = env.step({});
        CHECK(env.state().phys.position().norm() == 10.0);
        CHECK(env.state().phys.velocity().norm() == 0.2);
        CHECK(out.done == DockingDone::Docked);

        DockingEnv env2(cfg);
        env2.reset_to(state_at({10.0, 0.0, 0.0}, {0.0, 0.2000001, 0.0}));
        const auto out2 = env2.step({});
        CHECK(out2.done == DockingDone::Crashed);
    }

    SUBCASE("out of bounds") {
        DockingEnv env;
        env.reset_to(state_at({799.5, 0.0, 0.0}, {1.0, 0.0, 0.0}));
        const auto out = env.step({});
        CHECK(env.state().phys.position().norm() > 800.0);
        CHECK(out.done == DockingDone::OutOfBounds);
    }

    SUBCASE("timeout at step 2000") {
        DockingEnv env;
        env.reset_to(state_at({0.0, 100.0, 0.0}, {0.0, 0.0, 0.0}));
        int steps = 0;
        while (!env.done()) {
            const auto out = env.step({});
            ++steps;
            if (out.done != DockingDone::Running) CHECK(out.done == DockingDone::Timeout);
        }
        CHECK(steps == 2000);
        CHECK(env.state().step_count == 2000);
    }
}

TEST_CASE("violation fraction accounting") {
    SUBCASE("requires a finished episode") {
        DockingEnv env;
        env.reset(1);
        CHECK_THROWS_AS(env.violation_fraction(), std::domain_error);
    }

    SUBCASE("clean episode reports zero") {
        DockingEnv env;
        env.reset_to(state_at({0.0, 100.0, 0.0}, {0.0, 0.0, 0.0}));
        while (!env.done()) env.step({});
        CHECK(env.violation_fraction() == 0.0);
    }

    SUBCASE("permanently fast episode reports one") {
        DockingEnv env;
        env.reset_to(state_at({200.0, 0.0, 0.0}, {5.0, 0.0, 0.0}));
        while (!env.done()) env.step({});
        CHECK(env.done_tag() == DockingDone::OutOfBounds);
        CHECK(env.violation_fraction() == 1.0);
    }

    SUBCASE("fraction arithmetic") {
        // 20 of 2000 steps -> 1%
        CHECK(20.0 / 2000.0 == 0.01);
    }
}

TEST_CASE("distance-change reward telescopes over an episode") {
    DockingEnv env;
    env.reset(31);
    const double r_init = env.state().phys.position().norm();
    Rng rng(8);
    double dist_sum = 0.0;
    double dv_sum = 0.0;
    while (!env.done()) {
        const ThrustCommand u{rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
                              rng.uniform(-0.1, 0.1)};
        dv_sum += step_delta_v(u, env.config().dynamics);
        const auto out = env.step(u);
        dist_sum += out.components.dist_change;
        CHECK(out.reward == out.components.total());
    }
    const double a = std::log(2.0) / 100.0;
    const double r_final = env.state().phys.position().norm();
    CHECK(std::abs(dist_sum - 2.0 * (std::exp(-a * r_final) - std::exp(-a * r_init))) < 1e-9);
    CHECK(env.state().cumulative_delta_v == dv_sum);
}
