#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proxops/checkpoint.hpp"
#include "proxops/experiment.hpp"

namespace {

namespace fs = std::filesystem;
using namespace proxops;

int worker_threads() {
    if (const char* env = std::getenv("PROXOPS_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

struct SpaceFlags {
    std::string space = "continuous";  // continuous | discrete | explicit
    double u_max = 1.0;
    int choices = 3;
    std::string explicit_values;

    void attach(CLI::App* cmd) {
        cmd->add_option("--space", space, "action space kind: continuous, discrete or explicit")
            ->check(CLI::IsMember({"continuous", "discrete", "explicit"}));
        cmd->add_option("--umax", u_max, "maximum thrust magnitude in newtons");
        cmd->add_option("--choices", choices, "per-axis choice count for discrete spaces");
        cmd->add_option("--explicit-values", explicit_values,
                        "comma-separated per-axis values for explicit spaces");
    }

    ActionSpaceSpec build() const {
        if (space == "continuous") return ActionSpaceSpec::continuous(u_max);
        if (space == "discrete") return ActionSpaceSpec::discrete_uniform(choices, u_max);
        std::vector<double> values;
        std::string token;
        std::stringstream ss(explicit_values);
        while (std::getline(ss, token, ',')) {
            if (!token.empty()) values.push_back(std::stod(token));
        }
        return ActionSpaceSpec::discrete_explicit(values);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spacecraft inspection/docking RL workbench"};
    app.require_subcommand(1);

    // ---- gen-configs ----
    auto* gen = app.add_subcommand("gen-configs", "write the experiment grid as config files");
    std::string gen_scale = "desk";
    std::string gen_out = "runs";
    gen->add_option("--scale", gen_scale, "paper or desk")->check(CLI::IsMember({"paper", "desk"}));
    gen->add_option("--out", gen_out, "output directory for runs and configs");

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "train one agent");
    std::string train_task = "docking";
    std::string train_scale = "desk";
    std::uint64_t train_seed = 0;
    std::string train_out = "runs";
    long long train_timesteps = 0;
    SpaceFlags train_space;
    train_cmd->add_option("--task", train_task)->check(CLI::IsMember({"inspection", "docking"}));
    train_space.attach(train_cmd);
    train_cmd->add_option("--seed", train_seed, "training seed");
    train_cmd->add_option("--scale", train_scale)->check(CLI::IsMember({"paper", "desk"}));
    train_cmd->add_option("--timesteps", train_timesteps, "override total timesteps");
    train_cmd->add_option("--out", train_out, "runs root directory");

    // ---- evaluate ----
    auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a trained policy checkpoint");
    std::string eval_task = "docking";
    std::string eval_policy;
    std::string eval_out = "eval";
    int eval_cases = 100;
    bool eval_deterministic = true;
    std::uint64_t eval_seed_base = kEvalSeedBase;
    SpaceFlags eval_space;
    eval_cmd->add_option("--task", eval_task)->check(CLI::IsMember({"inspection", "docking"}));
    eval_space.attach(eval_cmd);
    eval_cmd->add_option("--policy", eval_policy, "checkpoint file")->required();
    eval_cmd->add_option("--cases", eval_cases, "number of evaluation episodes");
    eval_cmd->add_flag("--deterministic,!--stochastic", eval_deterministic,
                       "argmax/mean actions (default) or sampled actions");
    eval_cmd->add_option("--seed-base", eval_seed_base, "first test-case seed");
    eval_cmd->add_option("--out", eval_out, "output directory");

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "aggregate finished runs into tables");
    std::string report_runs = "runs";
    std::string report_out = "reports";
    report_cmd->add_option("--runs", report_runs, "runs root directory");
    report_cmd->add_option("--out", report_out, "report output directory");

    // ---- plot ----
    auto* plot_cmd = app.add_subcommand("plot", "render SVG figures from run artifacts");
    std::string plot_kind = "interval";
    std::string plot_runs = "runs";
    std::string plot_task = "docking";
    std::string plot_metric = "delta_v";
    std::string plot_input;
    std::string plot_title;
    std::string plot_out = "plot.svg";
    double plot_umax = 1.0;
    plot_cmd->add_option("--kind", plot_kind, "interval, samplecomplexity, histogram, episode or speedlimit")
        ->check(CLI::IsMember({"interval", "samplecomplexity", "histogram", "episode", "speedlimit"}));
    plot_cmd->add_option("--runs", plot_runs, "runs root (interval/samplecomplexity)");
    plot_cmd->add_option("--task", plot_task)->check(CLI::IsMember({"inspection", "docking"}));
    plot_cmd->add_option("--metric", plot_metric, "metric column to plot");
    plot_cmd->add_option("--umax", plot_umax, "thrust magnitude filter");
    plot_cmd->add_option("--input", plot_input, "input CSV (histogram/episode/speedlimit)");
    plot_cmd->add_option("--title", plot_title, "plot title override");
    plot_cmd->add_option("--out", plot_out, "output SVG path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const auto configs = gen_configs(scale_from_name(gen_scale), gen_out);
            const fs::path config_dir = fs::path(gen_out) / "configs";
            fs::create_directories(config_dir);
            std::size_t index = 0;
            for (const ExperimentConfig& c : configs) {
                char name[128];
                std::snprintf(name, sizeof(name), "%03zu_%s_umax-%g_%s.json", index++,
                              task_name(c.task).c_str(), c.space.u_max(), c.space.slug().c_str());
                std::ofstream out(config_dir / name, std::ios::trunc);
                out << c.to_json().dump(2) << '\n';
            }
            const std::string note = grid_reconciliation_note(configs);
            std::ofstream note_out(config_dir / "grid_summary.txt", std::ios::trunc);
            note_out << note;
            std::printf("%s", note.c_str());
            std::printf("wrote %zu config files to %s\n", configs.size(),
                        config_dir.string().c_str());
        } else if (train_cmd->parsed()) {
            ExperimentConfig config;
            config.task = task_from_name(train_task);
            config.space = train_space.build();
            config.ppo = PpoConfig::defaults_for(config.space);
            if (scale_from_name(train_scale) == Scale::Paper) {
                config.ppo.total_timesteps = 5'000'000;
                config.ppo.eval_interval = 500'000;
            } else {
                config.ppo.total_timesteps = 300'000;
                config.ppo.eval_interval = 30'000;
            }
            if (train_timesteps > 0) config.ppo.total_timesteps = train_timesteps;
            config.out_dir = train_out;
            const RunResult result = run_training(config, train_seed, worker_threads(), false);
            std::printf("run complete: %s\n", result.run_dir.string().c_str());
        } else if (eval_cmd->parsed()) {
            const MlpParams params = load_checkpoint(eval_policy);
            const Task task = task_from_name(eval_task);
            const ActionSpaceSpec space = eval_space.build();
            fs::create_directories(eval_out);
            const auto episodes = write_final_evaluation(task, space, params, eval_cases,
                                                         eval_seed_base, eval_out,
                                                         eval_deterministic);
            std::vector<double> rewards;
            for (const auto& m : episodes) rewards.push_back(m.total_reward);
            std::printf("evaluated %zu cases; total-reward IQM %.4f; wrote %s\n",
                        episodes.size(), iqm(rewards),
                        (fs::path(eval_out) / "final_metrics.csv").string().c_str());
        } else if (report_cmd->parsed()) {
            const auto files = write_report(report_runs, report_out);
            for (const fs::path& f : files) std::printf("wrote %s\n", f.string().c_str());
        } else if (plot_cmd->parsed()) {
            const fs::path out = plot_out;
            if (plot_kind == "interval") {
                plot_interval(plot_runs, task_from_name(plot_task), plot_metric, plot_umax, out);
            } else if (plot_kind == "samplecomplexity") {
                plot_sample_complexity(plot_runs, task_from_name(plot_task), plot_metric,
                                       plot_umax, out);
            } else if (plot_kind == "histogram") {
                plot_action_histogram(plot_input, plot_title, out);
            } else if (plot_kind == "episode") {
                plot_episode(plot_input, out);
            } else {
                plot_speed_limit(plot_input, out);
            }
            std::printf("wrote %s\n", out.string().c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
