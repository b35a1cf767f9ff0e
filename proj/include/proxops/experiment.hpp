#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "proxops/action_space.hpp"
#include "proxops/eval_metrics.hpp"
#include "proxops/ppo_trainer.hpp"

namespace proxops {

inline constexpr const char* kProjectVersion = "0.1.0";

enum class Scale { Paper, Desk };
Scale scale_from_name(const std::string& name);

/// One cell of the experiment grid: a task, an action space, the trainer
/// configuration, and the seed list it should be repeated over.
struct ExperimentConfig {
    Task task = Task::Docking;
    ActionSpaceSpec space = ActionSpaceSpec::continuous(1.0);
    PpoConfig ppo;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::string out_dir = "runs";
    int eval_cases_training = 10;
    int eval_cases_final = 100;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

/// The full grid: 22 inspection and 24 docking action-space configurations,
/// each over the default ten seeds. Paper scale trains 5M timesteps with
/// evaluations every 500k; desk scale 300k/30k.
std::vector<ExperimentConfig> gen_configs(Scale scale, const std::string& out_dir);

/// Count note emitted next to generated configs (grid arithmetic vs the
/// published agent count).
std::string grid_reconciliation_note(const std::vector<ExperimentConfig>& configs);

/// Hash of the semantic fields (everything but out_dir), taken over the
/// canonical sorted-key JSON serialization; stable under field reordering.
std::string config_hash(const ExperimentConfig& config);

struct RunManifest {
    std::string config_hash;
    std::string version = kProjectVersion;
    std::string started;
    std::string finished;
    std::vector<std::string> artifacts;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static RunManifest load(const std::filesystem::path& path);
};

std::filesystem::path run_directory(const ExperimentConfig& config, std::uint64_t seed);

/// Exclusive ownership of a run directory via a lock file; throws if the
/// directory is already locked by another process.
class RunLock {
public:
    explicit RunLock(const std::filesystem::path& run_dir);
    ~RunLock();
    RunLock(const RunLock&) = delete;
    RunLock& operator=(const RunLock&) = delete;

private:
    std::filesystem::path lock_path_;
};

struct RunResult {
    std::filesystem::path run_dir;
    RunArtifacts artifacts;
    std::vector<EpisodeMetrics> final_metrics;
};

/// Trains one (config, seed) cell and writes the full run directory:
/// config snapshot, manifest, train/eval logs, checkpoints, final policy,
/// final 100-case metrics, action histogram, and a case-0 trajectory log.
RunResult run_training(const ExperimentConfig& config, std::uint64_t seed, int threads = 1,
                       bool quiet = false);

/// Final evaluation artifacts for an already-trained policy.
std::vector<EpisodeMetrics> write_final_evaluation(Task task, const ActionSpaceSpec& space,
                                                   const MlpParams& params, int num_cases,
                                                   std::uint64_t seed_base,
                                                   const std::filesystem::path& out_dir,
                                                   bool deterministic = true);

/// One deterministic episode replay to CSV (states, thrusts, reward parts).
void write_trajectory_csv(Task task, const ActionSpaceSpec& space, const MlpParams& params,
                          std::uint64_t seed, const std::filesystem::path& csv_path);

/// Appendix-style tables: one row per configuration, metric IQM/STD columns,
/// pooled over every seed's final evaluation episodes. Returns the paths of
/// the CSV files written (one per task and thrust magnitude).
std::vector<std::filesystem::path> write_report(const std::filesystem::path& runs_root,
                                                const std::filesystem::path& out_dir);

// Plot artifacts (all read-only over run directories).
void plot_interval(const std::filesystem::path& runs_root, Task task, const std::string& metric,
                   double u_max, const std::filesystem::path& out_svg);
void plot_sample_complexity(const std::filesystem::path& runs_root, Task task,
                            const std::string& metric, double u_max,
                            const std::filesystem::path& out_svg);
void plot_action_histogram(const std::filesystem::path& hist_csv, const std::string& title,
                           const std::filesystem::path& out_svg);
void plot_episode(const std::filesystem::path& trajectory_csv,
                  const std::filesystem::path& out_svg);
void plot_speed_limit(const std::filesystem::path& trajectory_csv,
                      const std::filesystem::path& out_svg);

}  // namespace proxops
