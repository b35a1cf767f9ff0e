#include "proxops/action_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace proxops {

namespace {

std::string format_force(double v) {
    char buf[32];
    if (v == std::floor(v)) {
        std::snprintf(buf, sizeof(buf), "%.1f", v);
    } else {
        std::snprintf(buf, sizeof(buf), "%g", v);
    }
    return buf;
}

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

std::string task_name(Task task) {
    return task == Task::Inspection ? "inspection" : "docking";
}

Task task_from_name(const std::string& name) {
    if (name == "inspection") return Task::Inspection;
    if (name == "docking") return Task::Docking;
    throw std::invalid_argument("unknown task: " + name);
}

ActionSpaceSpec ActionSpaceSpec::continuous(double u_max) {
    if (!(u_max > 0.0)) {
        throw std::invalid_argument("continuous action space requires u_max > 0");
    }
    ActionSpaceSpec s;
    s.kind_ = ActionSpaceKind::Continuous;
    s.u_max_ = u_max;
    return s;
}

ActionSpaceSpec ActionSpaceSpec::discrete_uniform(int choices, double u_max) {
    if (choices < 3 || choices % 2 == 0) {
        throw std::invalid_argument("discrete action space requires an odd choice count >= 3");
    }
    if (!(u_max > 0.0)) {
        throw std::invalid_argument("discrete action space requires u_max > 0");
    }
    ActionSpaceSpec s;
    s.kind_ = ActionSpaceKind::DiscreteUniform;
    s.u_max_ = u_max;
    s.choices_ = choices;
    return s;
}

ActionSpaceSpec ActionSpaceSpec::discrete_explicit(std::vector<double> values) {
    const std::size_t n = values.size();
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("explicit value list must have an odd size >= 3");
    }
    if (!std::is_sorted(values.begin(), values.end())) {
        throw std::invalid_argument("explicit value list must be sorted ascending");
    }
    if (values[n / 2] != 0.0) {
        throw std::invalid_argument("explicit value list must be symmetric with 0 in the middle");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] != -values[n - 1 - i]) {
            throw std::invalid_argument("explicit value list must be symmetric about 0");
        }
    }
    ActionSpaceSpec s;
    s.kind_ = ActionSpaceKind::DiscreteExplicit;
    s.u_max_ = values.back();
    s.values_ = std::move(values);
    return s;
}

int ActionSpaceSpec::num_choices() const {
    switch (kind_) {
        case ActionSpaceKind::DiscreteUniform: return choices_;
        case ActionSpaceKind::DiscreteExplicit: return static_cast<int>(values_.size());
        case ActionSpaceKind::Continuous: break;
    }
    throw std::domain_error("continuous action space has no finite choice count");
}

std::vector<double> ActionSpaceSpec::choice_set() const {
    switch (kind_) {
        case ActionSpaceKind::DiscreteUniform: {
            // Values are u_max * j / h for integer offsets j in [-h, h], so the
            // midpoint is exactly 0 and the set is exactly symmetric.
            const int h = (choices_ - 1) / 2;
            std::vector<double> values(choices_);
            for (int i = 0; i < choices_; ++i) {
                values[i] = static_cast<double>(i - h) / static_cast<double>(h) * u_max_;
            }
            return values;
        }
        case ActionSpaceKind::DiscreteExplicit: return values_;
        case ActionSpaceKind::Continuous: break;
    }
    throw std::domain_error("continuous action space has no finite choice set");
}

ThrustCommand ActionSpaceSpec::decode(const ActionChoice& choice) const {
    if (kind_ == ActionSpaceKind::Continuous) {
        if (choice.is_discrete) {
            throw std::domain_error("discrete choice given to a continuous action space");
        }
        return {clamp(choice.value[0], -u_max_, u_max_),
                clamp(choice.value[1], -u_max_, u_max_),
                clamp(choice.value[2], -u_max_, u_max_)};
    }
    if (!choice.is_discrete) {
        throw std::domain_error("continuous choice given to a discrete action space");
    }
    const std::vector<double> values = choice_set();
    ThrustCommand cmd;
    double* out[3] = {&cmd.fx, &cmd.fy, &cmd.fz};
    for (int axis = 0; axis < 3; ++axis) {
        const int idx = choice.index[axis];
        if (idx < 0 || idx >= static_cast<int>(values.size())) {
            throw std::out_of_range("action index out of range");
        }
        *out[axis] = values[idx];
    }
    return cmd;
}

std::string ActionSpaceSpec::label() const {
    switch (kind_) {
        case ActionSpaceKind::Continuous: return "continuous";
        case ActionSpaceKind::DiscreteUniform:
            return "discrete-" + std::to_string(choices_);
        case ActionSpaceKind::DiscreteExplicit: {
            // Named by the positive magnitudes, largest first, eliding the
            // middle when there are more than two: 1.0/0.1, 1.0/../0.001.
            std::vector<double> pos;
            for (auto it = values_.rbegin(); it != values_.rend(); ++it) {
                if (*it > 0.0) pos.push_back(*it);
            }
            std::string name = format_force(pos.front());
            if (pos.size() == 2) {
                name += "/" + format_force(pos.back());
            } else if (pos.size() > 2) {
                name += "/../" + format_force(pos.back());
            }
            return "discrete-" + name;
        }
    }
    return "unknown";
}

std::string ActionSpaceSpec::slug() const {
    std::string s = label();
    std::replace(s.begin(), s.end(), '/', '_');
    return s;
}

nlohmann::json ActionSpaceSpec::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case ActionSpaceKind::Continuous:
            j["kind"] = "continuous";
            j["u_max"] = u_max_;
            break;
        case ActionSpaceKind::DiscreteUniform:
            j["kind"] = "discrete_uniform";
            j["u_max"] = u_max_;
            j["choices"] = choices_;
            break;
        case ActionSpaceKind::DiscreteExplicit:
            j["kind"] = "discrete_explicit";
            j["values"] = values_;
            break;
    }
    return j;
}

ActionSpaceSpec ActionSpaceSpec::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "continuous") {
        return continuous(j.at("u_max").get<double>());
    }
    if (kind == "discrete_uniform") {
        return discrete_uniform(j.at("choices").get<int>(), j.at("u_max").get<double>());
    }
    if (kind == "discrete_explicit") {
        return discrete_explicit(j.at("values").get<std::vector<double>>());
    }
    throw std::invalid_argument("unknown action space kind: " + kind);
}

bool ActionSpaceSpec::operator==(const ActionSpaceSpec& other) const {
    return kind_ == other.kind_ && u_max_ == other.u_max_ &&
           choices_ == other.choices_ && values_ == other.values_;
}

const std::vector<int>& discrete_choice_counts() {
    static const std::vector<int> counts{3, 5, 7, 9, 11, 21, 31, 41, 51, 101};
    return counts;
}

std::vector<ActionSpaceSpec> experiment_grid(Task task) {
    std::vector<ActionSpaceSpec> grid;
    for (double u_max : {1.0, 0.1}) {
        grid.push_back(ActionSpaceSpec::continuous(u_max));
        for (int k : discrete_choice_counts()) {
            grid.push_back(ActionSpaceSpec::discrete_uniform(k, u_max));
        }
    }
    if (task == Task::Docking) {
        grid.push_back(ActionSpaceSpec::discrete_explicit({-1.0, -0.1, 0.0, 0.1, 1.0}));
        grid.push_back(ActionSpaceSpec::discrete_explicit(
            {-1.0, -0.1, -0.01, -0.001, 0.0, 0.001, 0.01, 0.1, 1.0}));
    }
    return grid;
}

}  // namespace proxops
