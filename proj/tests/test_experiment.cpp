#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "proxops/csv.hpp"
#include "proxops/checkpoint.hpp"
#include "proxops/experiment.hpp"

using namespace proxops;
namespace fs = std::filesystem;

namespace {

fs::path fresh_temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("proxops_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig micro_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.task = Task::Docking;
    cfg.space = ActionSpaceSpec::discrete_uniform(3, 1.0);
    cfg.ppo = PpoConfig::defaults_for(cfg.space);
    cfg.ppo.total_timesteps = 512;
    cfg.ppo.rollout_length = 256;
    cfg.ppo.num_envs = 2;
    cfg.ppo.minibatch_size = 64;
    cfg.ppo.epochs = 2;
    cfg.ppo.eval_interval = 256;
    cfg.seeds = {0};
    cfg.out_dir = out_dir;
    cfg.eval_cases_training = 2;
    cfg.eval_cases_final = 3;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("the generated grid covers both tasks at both scales") {
    const auto desk = gen_configs(Scale::Desk, "out");
    REQUIRE(desk.size() == 46);
    std::size_t inspection = 0, docking = 0, runs = 0;
    for (const ExperimentConfig& c : desk) {
        (c.task == Task::Inspection ? inspection : docking) += 1;
        runs += c.seeds.size();
        CHECK(c.ppo.total_timesteps == 300'000);
        CHECK(c.ppo.eval_interval == 30'000);
        CHECK(c.seeds == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
        if (!c.space.is_discrete()) CHECK(c.ppo.entropy_coef == 0.005);
    }
    CHECK(inspection == 22);
    CHECK(docking == 24);
    CHECK(runs == 460);

    const auto paper = gen_configs(Scale::Paper, "out");
    CHECK(paper.size() == 46);
    CHECK(paper.front().ppo.total_timesteps == 5'000'000);
    CHECK(paper.front().ppo.eval_interval == 500'000);

    const std::string note = grid_reconciliation_note(desk);
    CHECK(note.find("460") != std::string::npos);
    CHECK(note.find("480") != std::string::npos);
}

TEST_CASE("experiment configs round-trip through json") {
    for (const ExperimentConfig& c : gen_configs(Scale::Desk, "somewhere")) {
        const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
        CHECK(back.to_json().dump() == c.to_json().dump());
    }
}

TEST_CASE("config hashes track semantic fields only") {
    ExperimentConfig a = micro_config("dir_one");
    ExperimentConfig b = micro_config("dir_two");  // only out_dir differs
    CHECK(config_hash(a) == config_hash(b));

    ExperimentConfig c = a;
    c.task = Task::Inspection;
    CHECK(config_hash(c) != config_hash(a));

    c = a;
    c.space = ActionSpaceSpec::discrete_uniform(5, 1.0);
    CHECK(config_hash(c) != config_hash(a));

    c = a;
    c.ppo.learning_rate = 1e-3;
    CHECK(config_hash(c) != config_hash(a));

    c = a;
    c.seeds = {1};
    CHECK(config_hash(c) != config_hash(a));

    c = a;
    c.eval_cases_final = 7;
    CHECK(config_hash(c) != config_hash(a));
}

TEST_CASE("manifests round-trip") {
    const fs::path dir = fresh_temp_dir("manifest");
    RunManifest m;
    m.config_hash = "abc123";
    m.started = "2026-01-01T00:00:00Z";
    m.finished = "2026-01-01T00:05:00Z";
    m.artifacts = {"config.json", "final_policy.bin"};
    m.save(dir / "manifest.json");
    const RunManifest back = RunManifest::load(dir / "manifest.json");
    CHECK(back.config_hash == m.config_hash);
    CHECK(back.version == kProjectVersion);
    CHECK(back.artifacts == m.artifacts);
    fs::remove_all(dir);
}

TEST_CASE("run locks are exclusive") {
    const fs::path dir = fresh_temp_dir("lock");
    {
        RunLock lock(dir);
        CHECK_THROWS_AS(RunLock{dir}, std::runtime_error);
    }
    CHECK_NOTHROW(RunLock{dir});  // released on destruction
    fs::remove_all(dir);
}

TEST_CASE("a full micro run writes every artifact and reproduces bit-identically") {
    const fs::path root_a = fresh_temp_dir("run_a");
    const fs::path root_b = fresh_temp_dir("run_b");

    const RunResult a = run_training(micro_config(root_a.string()), 0, 1, true);
    const RunResult b = run_training(micro_config(root_b.string()), 0, 2, true);

    for (const char* name : {"config.json", "manifest.json", "train_log.csv", "eval_log.csv",
                             "final_policy.bin", "final_metrics.csv", "action_hist.csv"}) {
        CHECK(fs::exists(a.run_dir / name));
    }
    CHECK(fs::exists(a.run_dir / "trajectories" / "case_000.csv"));
    CHECK(!fs::exists(a.run_dir / "LOCK"));

    // metric CSVs are identical across reruns (and across thread counts)
    CHECK(slurp(a.run_dir / "eval_log.csv") == slurp(b.run_dir / "eval_log.csv"));
    CHECK(slurp(a.run_dir / "final_metrics.csv") == slurp(b.run_dir / "final_metrics.csv"));
    CHECK(slurp(a.run_dir / "action_hist.csv") == slurp(b.run_dir / "action_hist.csv"));

    // artifacts parse under their own readers
    const CsvTable eval_log = read_csv((a.run_dir / "eval_log.csv").string());
    CHECK(eval_log.rows.size() == 2);  // ceil(512/256)
    const CsvTable finals = read_csv((a.run_dir / "final_metrics.csv").string());
    CHECK(finals.rows.size() == 3);
    const MlpParams loaded = load_checkpoint(a.run_dir / "final_policy.bin");
    CHECK(loaded.flat == a.artifacts.final_params.flat);
    // the manifest hash matches the persisted per-run config snapshot
    const RunManifest manifest = RunManifest::load(a.run_dir / "manifest.json");
    nlohmann::json snapshot;
    std::ifstream(a.run_dir / "config.json") >> snapshot;
    CHECK(manifest.config_hash == config_hash(ExperimentConfig::from_json(snapshot)));
    CHECK(!manifest.finished.empty());

    // report over the runs root
    const auto reports = write_report(root_a, root_a / "reports");
    REQUIRE(reports.size() == 1);
    const CsvTable report = read_csv(reports.front().string());
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0][0] == "Discrete - 3");
    CHECK(report.number(0, "episodes") == 3);

    // plots render and never mutate run data
    const std::string metrics_before = slurp(a.run_dir / "final_metrics.csv");
    plot_interval(root_a, Task::Docking, "delta_v", 1.0, root_a / "interval.svg");
    plot_sample_complexity(root_a, Task::Docking, "total_reward", 1.0, root_a / "curves.svg");
    plot_action_histogram(a.run_dir / "action_hist.csv", "usage", root_a / "hist.svg");
    plot_episode(a.run_dir / "trajectories" / "case_000.csv", root_a / "episode.svg");
    plot_speed_limit(a.run_dir / "trajectories" / "case_000.csv", root_a / "speed.svg");
    for (const char* name : {"interval.svg", "curves.svg", "hist.svg", "episode.svg", "speed.svg"}) {
        CHECK(fs::file_size(root_a / name) > 500);
    }
    CHECK(slurp(a.run_dir / "final_metrics.csv") == metrics_before);

    fs::remove_all(root_a);
    fs::remove_all(root_b);
}
