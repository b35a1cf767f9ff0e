#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "proxops/action_space.hpp"
#include "proxops/policy_value_net.hpp"

namespace proxops {

/// One evaluated episode, carrying every column of the report tables.
struct EpisodeMetrics {
    double total_reward = 0.0;
    int success = 0;                 // 0/1
    double delta_v = 0.0;            // m/s
    int episode_length = 0;          // steps
    double inspected_points = 0.0;   // inspection only
    double violation_percent = 0.0;  // docking only
    double final_speed = 0.0;        // docking only, m/s
    double initial_distance = 0.0;   // m
    double final_distance = 0.0;     // m
    std::string outcome;             // terminal tag name
};

/// InterQuartile Mean: sort, drop floor(n/4) from each end, mean the rest.
/// Throws std::invalid_argument on an empty list.
double iqm(std::vector<double> values);

/// Plain (untrimmed, population) standard deviation.
double stddev(const std::vector<double>& values);

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

/// Seeded percentile bootstrap of the IQM statistic; the interval is widened
/// to include the point estimate so it always brackets the reported IQM.
ConfidenceInterval bootstrap_ci(const std::vector<double>& values, double level = 0.95,
                                int resamples = 2000, std::uint64_t seed = 0);

struct AggregateStat {
    double iqm = 0.0;
    double std = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t count = 0;
};

AggregateStat aggregate(const std::vector<double>& values, std::uint64_t bootstrap_seed = 0);

/// Runs `num_cases` episodes with reset seeds seed_base .. seed_base+n-1.
/// Inspection episodes are scored with the evaluation fuel weight w = 0.1.
/// When `action_log` is given it receives every thrust command issued.
std::vector<EpisodeMetrics> evaluate_policy(Task task, const ActionSpaceSpec& space,
                                            const MlpParams& params, int num_cases,
                                            std::uint64_t seed_base, bool deterministic = true,
                                            std::vector<ThrustCommand>* action_log = nullptr);

/// Baseline that picks uniformly random actions from the space each step.
std::vector<EpisodeMetrics> evaluate_random_policy(Task task, const ActionSpaceSpec& space,
                                                   int num_cases, std::uint64_t seed_base);

/// Per-axis action usage counts over the value set (discrete) or over 101
/// uniform bins spanning [-u_max, u_max] (continuous). Counts across the
/// three axes always sum to 3x the number of logged steps.
struct ActionHistogram {
    std::vector<double> values;                    // bin centers / choice values
    std::array<std::vector<long>, 3> axis_counts;  // per axis, aligned with values
    long total_count() const;
};

ActionHistogram action_histogram(const std::vector<ThrustCommand>& actions,
                                 const ActionSpaceSpec& spec);

}  // namespace proxops
