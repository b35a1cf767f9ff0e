#include "proxops/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "proxops/checkpoint.hpp"
#include "proxops/csv.hpp"
#include "proxops/docking_env.hpp"
#include "proxops/inspection_env.hpp"
#include "proxops/rng.hpp"
#include "proxops/svg_plot.hpp"

namespace proxops {

namespace {

namespace fs = std::filesystem;

std::string now_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_umax(double u) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", u);
    return buf;
}

/// Row label in the style of the comparison tables.
std::string table_label(const ActionSpaceSpec& spec) {
    switch (spec.kind()) {
        case ActionSpaceKind::Continuous: return "Continuous";
        case ActionSpaceKind::DiscreteUniform:
            return "Discrete - " + std::to_string(spec.num_choices());
        case ActionSpaceKind::DiscreteExplicit: {
            std::string tail = spec.label();  // discrete-1.0/0.1
            return "Discrete " + tail.substr(std::string("discrete-").size());
        }
    }
    return "?";
}

struct LoadedRun {
    ExperimentConfig config;
    std::uint64_t seed = 0;
    fs::path dir;
};

std::vector<LoadedRun> scan_runs(const fs::path& runs_root) {
    std::vector<fs::path> config_files;
    if (!fs::exists(runs_root)) {
        throw std::runtime_error("runs directory does not exist: " + runs_root.string());
    }
    for (const auto& entry : fs::recursive_directory_iterator(runs_root)) {
        if (entry.is_regular_file() && entry.path().filename() == "config.json") {
            config_files.push_back(entry.path());
        }
    }
    std::sort(config_files.begin(), config_files.end());
    std::vector<LoadedRun> runs;
    for (const fs::path& p : config_files) {
        std::ifstream in(p);
        nlohmann::json j;
        in >> j;
        LoadedRun run;
        run.config = ExperimentConfig::from_json(j);
        run.seed = run.config.ppo.seed;
        run.dir = p.parent_path();
        runs.push_back(std::move(run));
    }
    return runs;
}

/// Stable grouping key for one grid cell.
std::string group_key(Task task, const ActionSpaceSpec& spec) {
    return task_name(task) + "|umax-" + format_umax(spec.u_max()) + "|" + spec.slug();
}

std::vector<double> metric_column_values(const CsvTable& table, const std::string& name) {
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) out.push_back(table.number(r, name));
    return out;
}

int grid_sort_rank(const ActionSpaceSpec& spec) {
    switch (spec.kind()) {
        case ActionSpaceKind::Continuous: return 0;
        case ActionSpaceKind::DiscreteExplicit: return 1000 - spec.num_choices();
        case ActionSpaceKind::DiscreteUniform: return 2000 - spec.num_choices();
    }
    return 9999;
}

}  // namespace

Scale scale_from_name(const std::string& name) {
    if (name == "paper") return Scale::Paper;
    if (name == "desk") return Scale::Desk;
    throw std::invalid_argument("unknown scale: " + name + " (expected paper or desk)");
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"task", task_name(task)},
            {"space", space.to_json()},
            {"ppo", ppo.to_json()},
            {"seeds", seeds},
            {"out_dir", out_dir},
            {"eval_cases_training", eval_cases_training},
            {"eval_cases_final", eval_cases_final}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.task = task_from_name(j.at("task").get<std::string>());
    c.space = ActionSpaceSpec::from_json(j.at("space"));
    c.ppo = PpoConfig::from_json(j.at("ppo"));
    c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    c.out_dir = j.at("out_dir").get<std::string>();
    c.eval_cases_training = j.at("eval_cases_training").get<int>();
    c.eval_cases_final = j.at("eval_cases_final").get<int>();
    return c;
}

std::vector<ExperimentConfig> gen_configs(Scale scale, const std::string& out_dir) {
    std::vector<ExperimentConfig> configs;
    for (Task task : {Task::Inspection, Task::Docking}) {
        for (const ActionSpaceSpec& spec : experiment_grid(task)) {
            ExperimentConfig c;
            c.task = task;
            c.space = spec;
            c.ppo = PpoConfig::defaults_for(spec);
            if (scale == Scale::Paper) {
                c.ppo.total_timesteps = 5'000'000;
                c.ppo.eval_interval = 500'000;
            } else {
                c.ppo.total_timesteps = 300'000;
                c.ppo.eval_interval = 30'000;
            }
            c.out_dir = out_dir;
            configs.push_back(std::move(c));
        }
    }
    return configs;
}

std::string grid_reconciliation_note(const std::vector<ExperimentConfig>& configs) {
    std::size_t runs = 0;
    std::size_t inspection = 0;
    std::size_t docking = 0;
    for (const ExperimentConfig& c : configs) {
        runs += c.seeds.size();
        (c.task == Task::Inspection ? inspection : docking) += 1;
    }
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "grid: %zu inspection + %zu docking configurations x 10 seeds = %zu runs.\n"
                  "reference agent count: 480; the 20-run difference is not derivable from the\n"
                  "printed choice grid and is intentionally not generated.\n",
                  inspection, docking, runs);
    return buf;
}

std::string config_hash(const ExperimentConfig& config) {
    nlohmann::json j = config.to_json();
    j.erase("out_dir");
    const std::string canonical = j.dump();
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical)));
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    return {{"config_hash", config_hash},
            {"version", version},
            {"started", started},
            {"finished", finished},
            {"artifacts", artifacts}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.config_hash = j.at("config_hash").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.started = j.at("started").get<std::string>();
    m.finished = j.value("finished", "");
    m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
    return m;
}

void RunManifest::save(const fs::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
    out << to_json().dump(2) << '\n';
}

RunManifest RunManifest::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read manifest: " + path.string());
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

fs::path run_directory(const ExperimentConfig& config, std::uint64_t seed) {
    return fs::path(config.out_dir) / task_name(config.task) /
           ("umax-" + format_umax(config.space.u_max())) / config.space.slug() /
           ("seed-" + std::to_string(seed));
}

RunLock::RunLock(const fs::path& run_dir) : lock_path_(run_dir / "LOCK") {
    std::FILE* f = std::fopen(lock_path_.c_str(), "wx");
    if (!f) {
        throw std::runtime_error("run directory is locked by another process: " +
                                 run_dir.string());
    }
    std::fclose(f);
}

RunLock::~RunLock() {
    std::error_code ec;
    fs::remove(lock_path_, ec);
}

std::vector<EpisodeMetrics> write_final_evaluation(Task task, const ActionSpaceSpec& space,
                                                   const MlpParams& params, int num_cases,
                                                   std::uint64_t seed_base,
                                                   const fs::path& out_dir, bool deterministic) {
    fs::create_directories(out_dir / "trajectories");
    std::vector<ThrustCommand> actions;
    const std::vector<EpisodeMetrics> episodes =
        evaluate_policy(task, space, params, num_cases, seed_base, deterministic, &actions);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t c = 0; c < episodes.size(); ++c) {
        const EpisodeMetrics& m = episodes[c];
        rows.push_back({std::to_string(c), csv_number(m.total_reward),
                        std::to_string(m.success), csv_number(m.delta_v),
                        std::to_string(m.episode_length), csv_number(m.inspected_points),
                        csv_number(m.violation_percent), csv_number(m.final_speed),
                        csv_number(m.initial_distance), csv_number(m.final_distance),
                        m.outcome});
    }
    write_csv((out_dir / "final_metrics.csv").string(),
              {"case", "total_reward", "success", "delta_v", "episode_length",
               "inspected_points", "violation_percent", "final_speed", "initial_distance",
               "final_distance", "outcome"},
              rows);

    const ActionHistogram hist = action_histogram(actions, space);
    rows.clear();
    for (std::size_t i = 0; i < hist.values.size(); ++i) {
        rows.push_back({csv_number(hist.values[i]), std::to_string(hist.axis_counts[0][i]),
                        std::to_string(hist.axis_counts[1][i]),
                        std::to_string(hist.axis_counts[2][i])});
    }
    write_csv((out_dir / "action_hist.csv").string(), {"value", "count_x", "count_y", "count_z"},
              rows);

    write_trajectory_csv(task, space, params, seed_base,
                         out_dir / "trajectories" / "case_000.csv");
    return episodes;
}

void write_trajectory_csv(Task task, const ActionSpaceSpec& space, const MlpParams& params,
                          std::uint64_t seed, const fs::path& csv_path) {
    std::vector<std::vector<std::string>> rows;
    auto act = [&](std::span<const double> obs) {
        Rng unused(0);
        const ForwardResult fwd = forward(params, obs);
        return space.decode(sample_action(fwd.dist, unused, true).choice);
    };

    if (task == Task::Inspection) {
        InspectionConfig cfg;
        cfg.eval_mode = true;
        InspectionEnv env(cfg);
        auto obs = env.reset(seed);
        auto row = [&](const ThrustCommand& u, const InspectionRewardParts& parts) {
            const InspectionState& s = env.state();
            rows.push_back({std::to_string(s.step_count), csv_number(s.phys.x),
                            csv_number(s.phys.y), csv_number(s.phys.z), csv_number(s.phys.vx),
                            csv_number(s.phys.vy), csv_number(s.phys.vz), csv_number(u.fx),
                            csv_number(u.fy), csv_number(u.fz), csv_number(parts.points),
                            csv_number(parts.fuel), csv_number(parts.crash),
                            std::to_string(mask_popcount(s.inspected)),
                            csv_number(s.sun.theta)});
        };
        row({}, {});
        while (!env.done()) {
            const ThrustCommand u = act(std::span<const double>(obs.data(), obs.size()));
            const auto out = env.step(u);
            row(u, out.components);
            obs = out.observation;
        }
        write_csv(csv_path.string(),
                  {"step", "x", "y", "z", "vx", "vy", "vz", "fx", "fy", "fz", "reward_points",
                   "reward_fuel", "reward_crash", "inspected_count", "sun_theta"},
                  rows);
    } else {
        DockingEnv env;
        auto obs = env.reset(seed);
        auto row = [&](const ThrustCommand& u, const DockingRewardParts& parts) {
            const DockingState& s = env.state();
            rows.push_back(
                {std::to_string(s.step_count), csv_number(s.phys.x), csv_number(s.phys.y),
                 csv_number(s.phys.z), csv_number(s.phys.vx), csv_number(s.phys.vy),
                 csv_number(s.phys.vz), csv_number(u.fx), csv_number(u.fy), csv_number(u.fz),
                 csv_number(s.phys.velocity().norm()),
                 csv_number(max_speed(s.phys.position().norm(), env.config())),
                 csv_number(parts.dist_change), csv_number(parts.fuel),
                 csv_number(parts.violation), csv_number(parts.time), csv_number(parts.success),
                 csv_number(parts.crash)});
        };
        row({}, {});
        while (!env.done()) {
            const ThrustCommand u = act(std::span<const double>(obs.data(), obs.size()));
            const auto out = env.step(u);
            row(u, out.components);
            obs = out.observation;
        }
        write_csv(csv_path.string(),
                  {"step", "x", "y", "z", "vx", "vy", "vz", "fx", "fy", "fz", "speed",
                   "speed_limit", "reward_dist_change", "reward_fuel", "reward_violation",
                   "reward_time", "reward_success", "reward_crash"},
                  rows);
    }
}

RunResult run_training(const ExperimentConfig& config, std::uint64_t seed, int threads,
                       bool quiet) {
    ExperimentConfig run_config = config;
    run_config.ppo.seed = seed;
    run_config.ppo.num_eval_cases = config.eval_cases_training;
    run_config.seeds = {seed};

    RunResult result;
    result.run_dir = run_directory(config, seed);
    fs::create_directories(result.run_dir);
    RunLock lock(result.run_dir);

    {
        std::ofstream out(result.run_dir / "config.json", std::ios::trunc);
        out << run_config.to_json().dump(2) << '\n';
    }
    RunManifest manifest;
    manifest.config_hash = config_hash(run_config);
    manifest.started = now_utc();
    manifest.save(result.run_dir / "manifest.json");

    TrainOptions options;
    options.run_dir = result.run_dir;
    options.threads = threads;
    options.quiet = quiet;
    result.artifacts = train(run_config.task, run_config.space, run_config.ppo, options);

    result.final_metrics =
        write_final_evaluation(run_config.task, run_config.space, result.artifacts.final_params,
                               run_config.eval_cases_final, kEvalSeedBase, result.run_dir);

    manifest.finished = now_utc();
    manifest.artifacts = {"config.json",       "train_log.csv",   "eval_log.csv",
                          "final_policy.bin",  "final_metrics.csv", "action_hist.csv",
                          "trajectories/case_000.csv"};
    manifest.save(result.run_dir / "manifest.json");
    return result;
}

std::vector<fs::path> write_report(const fs::path& runs_root, const fs::path& out_dir) {
    const std::vector<LoadedRun> runs = scan_runs(runs_root);
    if (runs.empty()) throw std::runtime_error("no runs found under " + runs_root.string());
    fs::create_directories(out_dir);

    // (task, u_max) -> group key -> pooled metric rows
    struct Group {
        ActionSpaceSpec spec = ActionSpaceSpec::continuous(1.0);
        Task task = Task::Docking;
        std::map<std::string, std::vector<double>> metrics;
        std::size_t episodes = 0;
    };
    std::map<std::string, Group> groups;
    for (const LoadedRun& run : runs) {
        const fs::path metrics_path = run.dir / "final_metrics.csv";
        if (!fs::exists(metrics_path)) continue;  // unfinished run
        const CsvTable table = read_csv(metrics_path.string());
        Group& g = groups[group_key(run.config.task, run.config.space)];
        g.spec = run.config.space;
        g.task = run.config.task;
        g.episodes += table.rows.size();
        for (const std::string& col : metric_columns(run.config.task)) {
            auto vals = metric_column_values(table, col);
            auto& dst = g.metrics[col];
            dst.insert(dst.end(), vals.begin(), vals.end());
        }
    }
    if (groups.empty()) {
        throw std::runtime_error("no finished runs (final_metrics.csv) under " +
                                 runs_root.string());
    }

    std::vector<fs::path> written;
    for (Task task : {Task::Inspection, Task::Docking}) {
        for (double u_max : {1.0, 0.1}) {
            std::vector<const Group*> selected;
            for (const auto& [key, g] : groups) {
                if (g.task == task && g.spec.u_max() == u_max) selected.push_back(&g);
            }
            if (selected.empty()) continue;
            std::sort(selected.begin(), selected.end(), [](const Group* a, const Group* b) {
                return grid_sort_rank(a->spec) < grid_sort_rank(b->spec);
            });

            std::vector<std::string> header{"experiment"};
            for (const std::string& col : metric_columns(task)) {
                header.push_back(col + "_iqm");
                header.push_back(col + "_std");
            }
            header.push_back("episodes");

            std::vector<std::vector<std::string>> rows;
            for (const Group* g : selected) {
                std::vector<std::string> row{table_label(g->spec)};
                for (const std::string& col : metric_columns(task)) {
                    const std::vector<double>& vals = g->metrics.at(col);
                    row.push_back(csv_number(iqm(vals)));
                    row.push_back(csv_number(stddev(vals)));
                }
                row.push_back(std::to_string(g->episodes));
                rows.push_back(std::move(row));
            }
            const fs::path out_path =
                out_dir / ("report_" + task_name(task) + "_umax-" + format_umax(u_max) + ".csv");
            write_csv(out_path.string(), header, rows);
            written.push_back(out_path);
        }
    }
    return written;
}

void plot_interval(const fs::path& runs_root, Task task, const std::string& metric, double u_max,
                   const fs::path& out_svg) {
    const std::vector<LoadedRun> runs = scan_runs(runs_root);
    std::map<int, std::vector<double>> discrete_values;  // choices -> pooled metric
    std::vector<double> continuous_values;
    for (const LoadedRun& run : runs) {
        if (run.config.task != task || run.config.space.u_max() != u_max) continue;
        if (run.config.space.kind() == ActionSpaceKind::DiscreteExplicit) continue;
        const fs::path metrics_path = run.dir / "final_metrics.csv";
        if (!fs::exists(metrics_path)) continue;
        const CsvTable table = read_csv(metrics_path.string());
        const auto vals = metric_column_values(table, metric);
        if (run.config.space.is_discrete()) {
            auto& dst = discrete_values[run.config.space.num_choices()];
            dst.insert(dst.end(), vals.begin(), vals.end());
        } else {
            continuous_values.insert(continuous_values.end(), vals.begin(), vals.end());
        }
    }
    if (discrete_values.empty() && continuous_values.empty()) {
        throw std::runtime_error("plot_interval: no matching runs with final metrics");
    }

    SvgChart chart;
    chart.title = metric + " vs choices (" + task_name(task) + ", u_max=" + format_umax(u_max) +
                  " N)";
    chart.x_label = "number of choices";
    chart.y_label = metric;

    double x_lo = 3.0, x_hi = 101.0;
    if (!discrete_values.empty()) {
        x_lo = static_cast<double>(discrete_values.begin()->first);
        x_hi = static_cast<double>(discrete_values.rbegin()->first);
        PlotSeries s;
        s.label = "discrete";
        s.color = plot_palette()[0];
        s.markers = true;
        for (const auto& [choices, vals] : discrete_values) {
            const AggregateStat stat = aggregate(vals);
            s.x.push_back(static_cast<double>(choices));
            s.y.push_back(stat.iqm);
            s.band_low.push_back(stat.ci_low);
            s.band_high.push_back(stat.ci_high);
            chart.x_ticks.emplace_back(static_cast<double>(choices), std::to_string(choices));
        }
        chart.series.push_back(std::move(s));
    }
    if (!continuous_values.empty()) {
        // The continuous configuration has no choice count; drawn as a
        // horizontal band across the axis.
        const AggregateStat stat = aggregate(continuous_values);
        PlotSeries s;
        s.label = "continuous";
        s.color = plot_palette()[1];
        s.x = {x_lo, x_hi};
        s.y = {stat.iqm, stat.iqm};
        s.band_low = {stat.ci_low, stat.ci_low};
        s.band_high = {stat.ci_high, stat.ci_high};
        chart.series.push_back(std::move(s));
    }
    chart.render(out_svg);
}

void plot_sample_complexity(const fs::path& runs_root, Task task, const std::string& metric,
                            double u_max, const fs::path& out_svg) {
    const std::vector<LoadedRun> runs = scan_runs(runs_root);
    const auto& cols = metric_columns(task);
    if (std::find(cols.begin(), cols.end(), metric) == cols.end()) {
        throw std::invalid_argument("unknown metric for task: " + metric);
    }

    // group -> timestep -> values across seeds
    std::map<std::string, std::map<std::int64_t, std::vector<double>>> curves;
    std::map<std::string, std::string> labels;
    for (const LoadedRun& run : runs) {
        if (run.config.task != task || run.config.space.u_max() != u_max) continue;
        const fs::path eval_path = run.dir / "eval_log.csv";
        if (!fs::exists(eval_path)) continue;
        const CsvTable table = read_csv(eval_path.string());
        const std::string key = group_key(task, run.config.space);
        labels[key] = run.config.space.label();
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto timestep = static_cast<std::int64_t>(table.number(r, "timestep"));
            curves[key][timestep].push_back(table.number(r, metric + "_iqm"));
        }
    }
    if (curves.empty()) throw std::runtime_error("plot_sample_complexity: no matching runs");

    SvgChart chart;
    chart.title = metric + " sample complexity (" + task_name(task) + ", u_max=" +
                  format_umax(u_max) + " N)";
    chart.x_label = "timesteps";
    chart.y_label = metric + " IQM";
    std::size_t color_index = 0;
    for (const auto& [key, points] : curves) {
        PlotSeries s;
        s.label = labels[key];
        s.color = plot_palette()[color_index++ % plot_palette().size()];
        for (const auto& [timestep, vals] : points) {
            const AggregateStat stat = aggregate(vals);
            s.x.push_back(static_cast<double>(timestep));
            s.y.push_back(stat.iqm);
            s.band_low.push_back(stat.ci_low);
            s.band_high.push_back(stat.ci_high);
        }
        chart.series.push_back(std::move(s));
    }
    chart.render(out_svg);
}

void plot_action_histogram(const fs::path& hist_csv, const std::string& title,
                           const fs::path& out_svg) {
    const CsvTable table = read_csv(hist_csv.string());
    SvgBarChart chart;
    chart.title = title.empty() ? "action usage" : title;
    chart.x_label = "thrust value (N)";
    chart.y_label = "share of actions (%)";
    double total = 0.0;
    std::vector<double> counts;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double c = table.number(r, "count_x") + table.number(r, "count_y") +
                         table.number(r, "count_z");
        counts.push_back(c);
        total += c;
        char label[32];
        std::snprintf(label, sizeof(label), "%.4g", table.number(r, "value"));
        chart.labels.emplace_back(label);
    }
    for (double c : counts) chart.heights.push_back(total > 0.0 ? 100.0 * c / total : 0.0);
    chart.render(out_svg);
}

void plot_episode(const fs::path& trajectory_csv, const fs::path& out_svg) {
    const CsvTable table = read_csv(trajectory_csv.string());
    SvgChart chart;
    chart.title = "episode position components";
    chart.x_label = "step";
    chart.y_label = "position (m)";
    const char* comps[3] = {"x", "y", "z"};
    const char* colors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
    for (int c = 0; c < 3; ++c) {
        PlotSeries s;
        s.label = comps[c];
        s.color = colors[c];
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            s.x.push_back(table.number(r, "step"));
            s.y.push_back(table.number(r, comps[c]));
        }
        chart.series.push_back(std::move(s));
    }
    chart.render(out_svg);
}

void plot_speed_limit(const fs::path& trajectory_csv, const fs::path& out_svg) {
    const CsvTable table = read_csv(trajectory_csv.string());
    std::vector<std::pair<double, double>> limit_points;  // (r, limit)
    PlotSeries trace;
    trace.label = "episode";
    trace.color = "#1f77b4";
    double max_speed_seen = 0.0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double x = table.number(r, "x");
        const double y = table.number(r, "y");
        const double z = table.number(r, "z");
        const double dist = std::sqrt(x * x + y * y + z * z);
        const double speed = table.number(r, "speed");
        trace.x.push_back(dist);
        trace.y.push_back(speed);
        limit_points.emplace_back(dist, table.number(r, "speed_limit"));
        max_speed_seen = std::max({max_speed_seen, speed, table.number(r, "speed_limit")});
    }
    std::sort(limit_points.begin(), limit_points.end());

    SvgChart chart;
    chart.title = "speed vs distance with the docking speed limit";
    chart.x_label = "distance to chief (m)";
    chart.y_label = "speed (m/s)";

    PlotRegion safe;   // below the limit line
    PlotRegion unsafe; // above it
    safe.color = "#2ca02c";
    unsafe.color = "#d62728";
    unsafe.opacity = 0.18;
    const double ceiling = max_speed_seen * 1.1 + 1e-6;
    for (const auto& [dist, limit] : limit_points) {
        safe.x.push_back(dist);
        safe.y_low.push_back(0.0);
        safe.y_high.push_back(limit);
        unsafe.x.push_back(dist);
        unsafe.y_low.push_back(limit);
        unsafe.y_high.push_back(ceiling);
    }
    chart.regions.push_back(std::move(safe));
    chart.regions.push_back(std::move(unsafe));

    PlotSeries limit_line;
    limit_line.label = "speed limit";
    limit_line.color = "#000000";
    for (const auto& [dist, limit] : limit_points) {
        limit_line.x.push_back(dist);
        limit_line.y.push_back(limit);
    }
    chart.series.push_back(std::move(limit_line));
    chart.series.push_back(std::move(trace));
    chart.render(out_svg);
}

}  // namespace proxops
