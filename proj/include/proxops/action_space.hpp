#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "proxops/cw_dynamics.hpp"

namespace proxops {

enum class Task { Inspection, Docking };

std::string task_name(Task task);
Task task_from_name(const std::string& name);

enum class ActionSpaceKind { Continuous, DiscreteUniform, DiscreteExplicit };

/// Per-axis selection made by the policy: indices into the choice set for
/// discrete spaces, raw (pre-clamp) force values for continuous ones.
struct ActionChoice {
    bool is_discrete = false;
    std::array<int, 3> index{};
    std::array<double, 3> value{};

    static ActionChoice discrete(std::array<int, 3> idx) { return {true, idx, {}}; }
    static ActionChoice continuous(std::array<double, 3> val) { return {false, {}, val}; }
};

/// Declarative description of the agent's action set: a continuous range, a
/// K-way uniform grid, or an explicit per-axis value list. The same set is
/// applied independently on each of the three control axes.
class ActionSpaceSpec {
public:
    static ActionSpaceSpec continuous(double u_max);
    /// `choices` must be odd and >= 3 so that 0 N is always available.
    static ActionSpaceSpec discrete_uniform(int choices, double u_max);
    /// `values` must be sorted ascending, symmetric about 0, and include 0.
    static ActionSpaceSpec discrete_explicit(std::vector<double> values);

    ActionSpaceKind kind() const { return kind_; }
    double u_max() const { return u_max_; }
    bool is_discrete() const { return kind_ != ActionSpaceKind::Continuous; }

    /// Number of per-axis choices; throws std::domain_error for continuous.
    int num_choices() const;

    /// The ordered per-axis value set; throws std::domain_error for continuous.
    std::vector<double> choice_set() const;

    /// Maps a policy selection to thrust. Discrete: table lookup (throws
    /// std::out_of_range on a bad index). Continuous: componentwise clamp
    /// to [-u_max, u_max].
    ThrustCommand decode(const ActionChoice& choice) const;

    /// Human-readable name as used in the report tables.
    std::string label() const;
    /// Filesystem-safe variant of label().
    std::string slug() const;

    nlohmann::json to_json() const;
    static ActionSpaceSpec from_json(const nlohmann::json& j);

    bool operator==(const ActionSpaceSpec& other) const;

private:
    ActionSpaceSpec() = default;

    ActionSpaceKind kind_ = ActionSpaceKind::Continuous;
    double u_max_ = 1.0;
    int choices_ = 0;             // DiscreteUniform
    std::vector<double> values_;  // DiscreteExplicit
};

/// The ablation grid: continuous plus ten uniform-discrete sizes, each at
/// u_max of 1.0 N and 0.1 N; docking adds the two explicit tapered sets.
std::vector<ActionSpaceSpec> experiment_grid(Task task);

/// The uniform-discrete sizes swept by the ablation.
const std::vector<int>& discrete_choice_counts();

}  // namespace proxops
