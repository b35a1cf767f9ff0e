#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxops/ppo_trainer.hpp"
#include "proxops/rng.hpp"
#include "support/oracles.hpp"

using namespace proxops;

namespace {

PpoConfig tiny_config(const ActionSpaceSpec& space, std::uint64_t seed) {
    PpoConfig cfg = PpoConfig::defaults_for(space);
    cfg.total_timesteps = 2048;
    cfg.num_envs = 2;
    cfg.rollout_length = 512;
    cfg.minibatch_size = 128;
    cfg.epochs = 2;
    cfg.eval_interval = 1024;
    cfg.num_eval_cases = 2;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    PpoConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.rollout_length = 1000;  // not divisible by minibatch 256
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = PpoConfig{};
    cfg.gamma = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = PpoConfig{};
    cfg.num_envs = 3;  // 4096 % 3 != 0
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("config json round-trips") {
    PpoConfig cfg = PpoConfig::defaults_for(ActionSpaceSpec::continuous(0.1));
    cfg.seed = 1234;
    cfg.total_timesteps = 77777;
    const PpoConfig back = PpoConfig::from_json(cfg.to_json());
    CHECK(back == cfg);
    CHECK(back.entropy_coef == 0.005);
    CHECK(PpoConfig::defaults_for(ActionSpaceSpec::discrete_uniform(3, 1.0)).entropy_coef == 0.0);
}

TEST_CASE("single terminal step reduces the advantage to r - V") {
    Eigen::VectorXd rewards(1), values(1), adv(1), ret(1);
    rewards << 2.5;
    values << 0.75;
    const std::vector<std::uint8_t> dones{1};
    compute_gae(rewards, values, dones, 99.0, 0.99, 0.95, adv, ret);
    CHECK(adv[0] == doctest::Approx(2.5 - 0.75).epsilon(1e-15));
    CHECK(ret[0] == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("gamma = lambda = 1 with zero values telescopes to reward-to-go") {
    constexpr int n = 6;
    Eigen::VectorXd rewards(n), values = Eigen::VectorXd::Zero(n), adv(n), ret(n);
    rewards << 1, 2, 3, 4, 5, 6;
    std::vector<std::uint8_t> dones(n, 0);
    dones[n - 1] = 1;
    compute_gae(rewards, values, dones, 123.0, 1.0, 1.0, adv, ret);
    double suffix = 0.0;
    for (int t = n - 1; t >= 0; --t) {
        suffix += rewards[t];
        CHECK(adv[t] == doctest::Approx(suffix).epsilon(1e-12));
    }
}

TEST_CASE("GAE matches the brute-force double loop") {
    Rng rng(42);
    int checked = 0;

    // exhaustive done patterns for short sequences
    for (int len = 1; len <= 6; ++len) {
        for (int pattern = 0; pattern < (1 << len); ++pattern) {
            Eigen::VectorXd rewards(len), values(len), adv(len), ret(len);
            std::vector<std::uint8_t> dones(static_cast<std::size_t>(len));
            std::vector<double> r(static_cast<std::size_t>(len)), v(static_cast<std::size_t>(len));
            for (int t = 0; t < len; ++t) {
                r[static_cast<std::size_t>(t)] = rewards[t] = rng.uniform(-2.0, 2.0);
                v[static_cast<std::size_t>(t)] = values[t] = rng.uniform(-2.0, 2.0);
                dones[static_cast<std::size_t>(t)] = (pattern >> t) & 1;
            }
            const double bootstrap = rng.uniform(-2.0, 2.0);
            compute_gae(rewards, values, dones, bootstrap, 0.99, 0.95, adv, ret);
            const auto want = test::brute_force_gae(r, v, dones, bootstrap, 0.99, 0.95);
            for (int t = 0; t < len; ++t) {
                CHECK(std::abs(adv[t] - want[static_cast<std::size_t>(t)]) < 1e-12);
                CHECK(ret[t] == adv[t] + values[t]);
            }
            ++checked;
        }
    }

    // random longer sequences with random discounts
    while (checked < 1000) {
        const int len = 1 + static_cast<int>(rng.integer(12));
        const double gamma = rng.uniform(0.5, 1.0);
        const double lambda = rng.uniform(0.5, 1.0);
        Eigen::VectorXd rewards(len), values(len), adv(len), ret(len);
        std::vector<std::uint8_t> dones(static_cast<std::size_t>(len));
        std::vector<double> r(static_cast<std::size_t>(len)), v(static_cast<std::size_t>(len));
        for (int t = 0; t < len; ++t) {
            r[static_cast<std::size_t>(t)] = rewards[t] = rng.normal();
            v[static_cast<std::size_t>(t)] = values[t] = rng.normal();
            dones[static_cast<std::size_t>(t)] = rng.uniform() < 0.2 ? 1 : 0;
        }
        const double bootstrap = rng.normal();
        compute_gae(rewards, values, dones, bootstrap, gamma, lambda, adv, ret);
        const auto want = test::brute_force_gae(r, v, dones, bootstrap, gamma, lambda);
        for (int t = 0; t < len; ++t) {
            CHECK(std::abs(adv[t] - want[static_cast<std::size_t>(t)]) < 1e-12);
        }
        ++checked;
    }
}

TEST_CASE("training runs, schedules evaluations, and reproduces bit-identically") {
    const ActionSpaceSpec space = ActionSpaceSpec::discrete_uniform(3, 1.0);
    const PpoConfig cfg = tiny_config(space, 5);

    TrainOptions quiet;
    quiet.quiet = true;
    const RunArtifacts a = train(Task::Docking, space, cfg, quiet);
    const RunArtifacts b = train(Task::Docking, space, cfg, quiet);

    CHECK(a.iterations.size() == 4);  // ceil(2048 / 512)
    CHECK(a.eval_log.size() == 2);    // ceil(2048 / 1024)
    CHECK(a.final_params.flat == b.final_params.flat);
    REQUIRE(a.eval_log.size() == b.eval_log.size());
    for (std::size_t i = 0; i < a.eval_log.size(); ++i) {
        CHECK(a.eval_log[i].timestep == b.eval_log[i].timestep);
        CHECK(a.eval_log[i].metric_iqm == b.eval_log[i].metric_iqm);
    }

    for (const TrainIterationStats& it : a.iterations) {
        CHECK(it.clip_fraction >= 0.0);
        CHECK(it.clip_fraction <= 1.0);
        CHECK(std::isfinite(it.loss));
    }
}

TEST_CASE("results do not depend on the rollout thread count") {
    const ActionSpaceSpec space = ActionSpaceSpec::continuous(0.1);
    const PpoConfig cfg = tiny_config(space, 9);

    TrainOptions one;
    one.quiet = true;
    one.threads = 1;
    TrainOptions two;
    two.quiet = true;
    two.threads = 2;
    const RunArtifacts a = train(Task::Docking, space, cfg, one);
    const RunArtifacts b = train(Task::Docking, space, cfg, two);
    CHECK(a.final_params.flat == b.final_params.flat);
}

TEST_CASE("first update with a tiny learning rate barely clips") {
    const ActionSpaceSpec space = ActionSpaceSpec::discrete_uniform(3, 1.0);
    PpoConfig cfg = tiny_config(space, 2);
    cfg.total_timesteps = 512;
    cfg.eval_interval = 512;
    cfg.epochs = 1;
    cfg.learning_rate = 1e-9;
    TrainOptions quiet;
    quiet.quiet = true;
    const RunArtifacts a = train(Task::Docking, space, cfg, quiet);
    REQUIRE(a.iterations.size() == 1);
    CHECK(a.iterations[0].clip_fraction < 0.01);
    CHECK(a.iterations[0].mean_ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("inspection training keeps the fuel weight in range") {
    const ActionSpaceSpec space = ActionSpaceSpec::discrete_uniform(3, 0.1);
    PpoConfig cfg = tiny_config(space, 3);
    cfg.total_timesteps = 1024;
    cfg.eval_interval = 1024;
    TrainOptions quiet;
    quiet.quiet = true;
    const RunArtifacts a = train(Task::Inspection, space, cfg, quiet);
    for (const TrainIterationStats& it : a.iterations) {
        CHECK(it.fuel_weight >= 0.001);
        CHECK(it.fuel_weight <= 0.1);
    }
}
