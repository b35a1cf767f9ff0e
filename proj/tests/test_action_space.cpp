#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxops/action_space.hpp"

using namespace proxops;

TEST_CASE("uniform choice sets are evenly spaced and contain exact endpoints") {
    const auto three = ActionSpaceSpec::discrete_uniform(3, 1.0).choice_set();
    CHECK(three == std::vector<double>{-1.0, 0.0, 1.0});

    const auto five = ActionSpaceSpec::discrete_uniform(5, 1.0).choice_set();
    CHECK(five == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});

    const auto tiny = ActionSpaceSpec::discrete_uniform(101, 0.1);
    const auto values = tiny.choice_set();
    CHECK(values.front() == -0.1);
    CHECK(values[50] == 0.0);
    CHECK(values.back() == 0.1);
}

TEST_CASE("explicit docking value lists") {
    const auto nine = ActionSpaceSpec::discrete_explicit(
        {-1.0, -0.1, -0.01, -0.001, 0.0, 0.001, 0.01, 0.1, 1.0});
    CHECK(nine.choice_set() ==
          std::vector<double>{-1.0, -0.1, -0.01, -0.001, 0.0, 0.001, 0.01, 0.1, 1.0});
    CHECK(nine.u_max() == 1.0);
    CHECK(nine.label() == "discrete-1.0/../0.001");

    const auto five = ActionSpaceSpec::discrete_explicit({-1.0, -0.1, 0.0, 0.1, 1.0});
    CHECK(five.label() == "discrete-1.0/0.1");
    CHECK(five.slug() == "discrete-1.0_0.1");
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(ActionSpaceSpec::discrete_uniform(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ActionSpaceSpec::discrete_uniform(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ActionSpaceSpec::continuous(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ActionSpaceSpec::discrete_explicit({-1.0, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ActionSpaceSpec::discrete_explicit({-1.0, 0.1, 0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ActionSpaceSpec::continuous(1.0).choice_set(), std::domain_error);
    CHECK_THROWS_AS(ActionSpaceSpec::continuous(1.0).num_choices(), std::domain_error);
}

TEST_CASE("decode maps selections to thrust") {
    const auto spec = ActionSpaceSpec::discrete_uniform(3, 1.0);
    const ThrustCommand zero = spec.decode(ActionChoice::discrete({1, 1, 1}));
    CHECK(zero.fx == 0.0);
    CHECK(zero.fy == 0.0);
    CHECK(zero.fz == 0.0);

    const auto fine = ActionSpaceSpec::discrete_uniform(101, 0.1);
    const ThrustCommand ends = fine.decode(ActionChoice::discrete({0, 50, 100}));
    CHECK(ends.fx == -0.1);
    CHECK(ends.fy == 0.0);
    CHECK(ends.fz == 0.1);

    const auto cont = ActionSpaceSpec::continuous(1.0);
    const ThrustCommand clamped = cont.decode(ActionChoice::continuous({1.3, -0.2, 0.0}));
    CHECK(clamped.fx == 1.0);
    CHECK(clamped.fy == -0.2);
    CHECK(clamped.fz == 0.0);

    CHECK_THROWS_AS(spec.decode(ActionChoice::discrete({3, 0, 0})), std::out_of_range);
    CHECK_THROWS_AS(spec.decode(ActionChoice::discrete({-1, 0, 0})), std::out_of_range);
    CHECK_THROWS_AS(spec.decode(ActionChoice::continuous({0, 0, 0})), std::domain_error);
    CHECK_THROWS_AS(cont.decode(ActionChoice::discrete({0, 0, 0})), std::domain_error);
}

TEST_CASE("the experiment grid matches the published sweep") {
    const auto inspection = experiment_grid(Task::Inspection);
    const auto docking = experiment_grid(Task::Docking);
    CHECK(inspection.size() == 22);
    CHECK(docking.size() == 24);

    for (const auto& grid : {inspection, docking}) {
        for (const ActionSpaceSpec& spec : grid) {
            if (!spec.is_discrete()) continue;
            const auto values = spec.choice_set();

            // exactly one zero, symmetric values, uniform spacing
            int zeros = 0;
            for (double v : values) zeros += v == 0.0 ? 1 : 0;
            CHECK(zeros == 1);
            for (std::size_t i = 0; i < values.size(); ++i) {
                CHECK(values[i] == -values[values.size() - 1 - i]);
            }
            if (spec.kind() == ActionSpaceKind::DiscreteUniform) {
                const double want = 2.0 * spec.u_max() / (spec.num_choices() - 1);
                for (std::size_t i = 1; i < values.size(); ++i) {
                    CHECK(std::abs(values[i] - values[i - 1] - want) < 1e-15);
                }
            }

            // decode totality: every index triple lands within bounds
            for (int k = 0; k < spec.num_choices(); ++k) {
                const ThrustCommand cmd = spec.decode(ActionChoice::discrete({k, 0, k}));
                CHECK(std::abs(cmd.fx) <= spec.u_max());
                CHECK(std::abs(cmd.fz) <= spec.u_max());
            }
        }
    }
}

TEST_CASE("specs serialize round-trip") {
    for (Task task : {Task::Inspection, Task::Docking}) {
        for (const ActionSpaceSpec& spec : experiment_grid(task)) {
            const ActionSpaceSpec back = ActionSpaceSpec::from_json(spec.to_json());
            CHECK(back == spec);
            CHECK(back.label() == spec.label());
        }
    }
}
