#include "proxops/eval_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "proxops/rng.hpp"
#include "proxops/task_env.hpp"

namespace proxops {

double iqm(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("iqm: empty value list");
    std::sort(values.begin(), values.end());
    const std::size_t drop = values.size() / 4;
    double sum = 0.0;
    for (std::size_t i = drop; i < values.size() - drop; ++i) sum += values[i];
    return sum / static_cast<double>(values.size() - 2 * drop);
}

double stddev(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return std::sqrt(var / n);
}

ConfidenceInterval bootstrap_ci(const std::vector<double>& values, double level, int resamples,
                                std::uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("bootstrap_ci: empty value list");
    const double point = iqm(values);
    Rng rng(substream_seed(seed, "bootstrap"));
    std::vector<double> stats(resamples);
    std::vector<double> sample(values.size());
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            sample[i] = values[rng.integer(values.size())];
        }
        stats[static_cast<std::size_t>(b)] = iqm(sample);
    }
    std::sort(stats.begin(), stats.end());
    const double alpha = (1.0 - level) / 2.0;
    auto percentile = [&stats](double q) {
        const double pos = q * static_cast<double>(stats.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = static_cast<std::size_t>(std::ceil(pos));
        const double frac = pos - std::floor(pos);
        return stats[lo] * (1.0 - frac) + stats[hi] * frac;
    };
    ConfidenceInterval ci{percentile(alpha), percentile(1.0 - alpha)};
    ci.low = std::min(ci.low, point);
    ci.high = std::max(ci.high, point);
    return ci;
}

AggregateStat aggregate(const std::vector<double>& values, std::uint64_t bootstrap_seed) {
    AggregateStat s;
    s.iqm = iqm(values);
    s.std = stddev(values);
    const ConfidenceInterval ci = bootstrap_ci(values, 0.95, 2000, bootstrap_seed);
    s.ci_low = ci.low;
    s.ci_high = ci.high;
    s.count = values.size();
    return s;
}

namespace {

std::vector<EpisodeMetrics> run_episodes(
    Task task, int num_cases, std::uint64_t seed_base,
    const std::function<ThrustCommand(std::span<const double>)>& act,
    std::vector<ThrustCommand>* action_log) {
    std::vector<EpisodeMetrics> episodes;
    episodes.reserve(static_cast<std::size_t>(num_cases));
    for (int c = 0; c < num_cases; ++c) {
        auto env = make_task_env(task, /*eval_mode=*/true);
        std::vector<double> obs = env->reset(seed_base + static_cast<std::uint64_t>(c));
        while (!env->done()) {
            const ThrustCommand thrust = act(obs);
            if (action_log) action_log->push_back(thrust);
            obs = env->step(thrust).observation;
        }
        episodes.push_back(env->episode_metrics());
    }
    return episodes;
}

}  // namespace

std::vector<EpisodeMetrics> evaluate_policy(Task task, const ActionSpaceSpec& space,
                                            const MlpParams& params, int num_cases,
                                            std::uint64_t seed_base, bool deterministic,
                                            std::vector<ThrustCommand>* action_log) {
    Rng sample_rng(substream_seed(seed_base, "eval-sampling"));
    return run_episodes(task, num_cases, seed_base,
                        [&](std::span<const double> obs) {
                            const ForwardResult fwd = forward(params, obs);
                            const ActionSample s = sample_action(fwd.dist, sample_rng, deterministic);
                            return space.decode(s.choice);
                        },
                        action_log);
}

std::vector<EpisodeMetrics> evaluate_random_policy(Task task, const ActionSpaceSpec& space,
                                                   int num_cases, std::uint64_t seed_base) {
    Rng rng(substream_seed(seed_base, "random-policy"));
    return run_episodes(task, num_cases, seed_base,
                        [&](std::span<const double>) {
                            if (space.is_discrete()) {
                                const int k = space.num_choices();
                                std::array<int, 3> idx{};
                                for (auto& i : idx) i = static_cast<int>(rng.integer(k));
                                return space.decode(ActionChoice::discrete(idx));
                            }
                            std::array<double, 3> val{};
                            for (auto& v : val) v = rng.uniform(-space.u_max(), space.u_max());
                            return space.decode(ActionChoice::continuous(val));
                        },
                        nullptr);
}

long ActionHistogram::total_count() const {
    long total = 0;
    for (const auto& axis : axis_counts) {
        for (long c : axis) total += c;
    }
    return total;
}

ActionHistogram action_histogram(const std::vector<ThrustCommand>& actions,
                                 const ActionSpaceSpec& spec) {
    if (actions.empty()) throw std::invalid_argument("action_histogram: empty action log");
    ActionHistogram hist;
    if (spec.is_discrete()) {
        hist.values = spec.choice_set();
        for (auto& axis : hist.axis_counts) axis.assign(hist.values.size(), 0);
        for (const ThrustCommand& cmd : actions) {
            const double comps[3] = {cmd.fx, cmd.fy, cmd.fz};
            for (int a = 0; a < 3; ++a) {
                // Nearest table entry; exact matches in practice.
                std::size_t best = 0;
                double best_err = std::abs(comps[a] - hist.values[0]);
                for (std::size_t i = 1; i < hist.values.size(); ++i) {
                    const double err = std::abs(comps[a] - hist.values[i]);
                    if (err < best_err) {
                        best_err = err;
                        best = i;
                    }
                }
                ++hist.axis_counts[static_cast<std::size_t>(a)][best];
            }
        }
    } else {
        constexpr int kBins = 101;
        const double u = spec.u_max();
        const double width = 2.0 * u / kBins;
        hist.values.resize(kBins);
        for (int i = 0; i < kBins; ++i) hist.values[static_cast<std::size_t>(i)] = -u + (i + 0.5) * width;
        for (auto& axis : hist.axis_counts) axis.assign(kBins, 0);
        for (const ThrustCommand& cmd : actions) {
            const double comps[3] = {cmd.fx, cmd.fy, cmd.fz};
            for (int a = 0; a < 3; ++a) {
                int bin = static_cast<int>(std::floor((comps[a] + u) / width));
                bin = std::min(std::max(bin, 0), kBins - 1);
                ++hist.axis_counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(bin)];
            }
        }
    }
    return hist;
}

}  // namespace proxops
