#include "proxops/policy_value_net.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace proxops {

namespace {

constexpr double kLogStdMin = -5.0;
constexpr double kLogStdMax = 2.0;
constexpr double kLogTwoPi = 1.8378770664093454836;  // ln(2*pi)

/// Byte offsets of each parameter block within the flat vector.
struct Layout {
    std::size_t pw1, pb1, pw2, pb2, hw, hb, log_std;
    std::size_t vw1, vb1, vw2, vb2, vw3, vb3;
    std::size_t total;

    static Layout of(const NetShape& s) {
        Layout l{};
        std::size_t off = 0;
        auto take = [&off](std::size_t n) {
            const std::size_t at = off;
            off += n;
            return at;
        };
        const auto obs = static_cast<std::size_t>(s.obs_dim);
        const auto h1 = static_cast<std::size_t>(s.hidden1);
        const auto h2 = static_cast<std::size_t>(s.hidden2);
        const auto out = static_cast<std::size_t>(s.head_out());
        l.pw1 = take(h1 * obs);
        l.pb1 = take(h1);
        l.pw2 = take(h2 * h1);
        l.pb2 = take(h2);
        l.hw = take(out * h2);
        l.hb = take(out);
        l.log_std = take(s.head == HeadKind::Gaussian ? static_cast<std::size_t>(s.axes) : 0);
        l.vw1 = take(h1 * obs);
        l.vb1 = take(h1);
        l.vw2 = take(h2 * h1);
        l.vb2 = take(h2);
        l.vw3 = take(h2);
        l.vb3 = take(1);
        l.total = off;
        return l;
    }
};

using MatMap = Eigen::Map<const Eigen::MatrixXd>;
using VecMap = Eigen::Map<const Eigen::VectorXd>;
using MutMatMap = Eigen::Map<Eigen::MatrixXd>;
using MutVecMap = Eigen::Map<Eigen::VectorXd>;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

/// Haar-distributed orthogonal matrix scaled by `gain` (thin when
/// rectangular), the usual stable initialization for small policy nets.
Eigen::MatrixXd orthogonal(int rows, int cols, double gain, Rng& rng) {
    const int big = std::max(rows, cols);
    const int small = std::min(rows, cols);
    Eigen::MatrixXd g(big, small);
    for (int c = 0; c < small; ++c) {
        for (int r = 0; r < big; ++r) g(r, c) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(small, small);
    for (int c = 0; c < small; ++c) {
        if (r(c, c) < 0.0) q.col(c) = -q.col(c);
    }
    if (rows < cols) return gain * q.transpose();
    return gain * q;
}

struct TrunkActivations {
    Eigen::MatrixXd h1;   // hidden1 x N
    Eigen::MatrixXd h2;   // hidden2 x N
    Eigen::MatrixXd out;  // head_out (or 1 for value) x N
};

}  // namespace

NetShape NetShape::for_task(Task task, const ActionSpaceSpec& spec, int hidden1, int hidden2) {
    NetShape s;
    s.obs_dim = task == Task::Inspection ? 11 : 8;
    s.hidden1 = hidden1;
    s.hidden2 = hidden2;
    if (spec.is_discrete()) {
        s.head = HeadKind::Categorical;
        s.choices = spec.num_choices();
    } else {
        s.head = HeadKind::Gaussian;
        s.choices = 0;
    }
    return s;
}

MlpParams MlpParams::zeros(const NetShape& shape) {
    MlpParams p;
    p.shape = shape;
    p.flat = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(Layout::of(shape).total));
    return p;
}

MlpParams MlpParams::initialize(const NetShape& shape, std::uint64_t seed, double u_max) {
    MlpParams p = zeros(shape);
    const Layout l = Layout::of(shape);
    Rng rng(substream_seed(seed, "policy-init"));

    const double hidden_gain = std::sqrt(2.0);
    auto put = [&p](std::size_t off, const Eigen::MatrixXd& m) {
        MutMatMap(p.flat.data() + off, m.rows(), m.cols()) = m;
    };
    put(l.pw1, orthogonal(shape.hidden1, shape.obs_dim, hidden_gain, rng));
    put(l.pw2, orthogonal(shape.hidden2, shape.hidden1, hidden_gain, rng));
    put(l.hw, orthogonal(shape.head_out(), shape.hidden2, 0.01, rng));
    put(l.vw1, orthogonal(shape.hidden1, shape.obs_dim, hidden_gain, rng));
    put(l.vw2, orthogonal(shape.hidden2, shape.hidden1, hidden_gain, rng));
    MutVecMap(p.flat.data() + l.vw3, shape.hidden2) =
        orthogonal(1, shape.hidden2, 1.0, rng).transpose();
    if (shape.head == HeadKind::Gaussian) {
        MutVecMap(p.flat.data() + l.log_std, shape.axes)
            .setConstant(std::log(0.5 * u_max));
    }
    return p;
}

namespace {

TrunkActivations run_trunk(const Eigen::VectorXd& flat, const Layout& l, const NetShape& s,
                           bool value_trunk, const Eigen::Ref<const Eigen::MatrixXd>& x) {
    const std::size_t w1 = value_trunk ? l.vw1 : l.pw1;
    const std::size_t b1 = value_trunk ? l.vb1 : l.pb1;
    const std::size_t w2 = value_trunk ? l.vw2 : l.pw2;
    const std::size_t b2 = value_trunk ? l.vb2 : l.pb2;

    MatMap W1(flat.data() + w1, s.hidden1, s.obs_dim);
    VecMap B1(flat.data() + b1, s.hidden1);
    MatMap W2(flat.data() + w2, s.hidden2, s.hidden1);
    VecMap B2(flat.data() + b2, s.hidden2);

    TrunkActivations act;
    act.h1 = (((W1 * x).colwise() + B1).array().tanh()).matrix();
    act.h2 = (((W2 * act.h1).colwise() + B2).array().tanh()).matrix();
    if (value_trunk) {
        VecMap W3(flat.data() + l.vw3, s.hidden2);
        const double b3 = flat[static_cast<Eigen::Index>(l.vb3)];
        act.out = (W3.transpose() * act.h2).array() + b3;
    } else {
        MatMap HW(flat.data() + l.hw, s.head_out(), s.hidden2);
        VecMap HB(flat.data() + l.hb, s.head_out());
        act.out = (HW * act.h2).colwise() + HB;
    }
    return act;
}

Eigen::Vector3d clamped_log_std(const Eigen::VectorXd& flat, const Layout& l, const NetShape& s) {
    Eigen::Vector3d out;
    VecMap raw(flat.data() + l.log_std, s.axes);
    for (int a = 0; a < s.axes; ++a) out[a] = clamp(raw[a], kLogStdMin, kLogStdMax);
    return out;
}

}  // namespace

ForwardResult forward(const MlpParams& params, std::span<const double> obs) {
    const NetShape& s = params.shape;
    if (static_cast<int>(obs.size()) != s.obs_dim) {
        throw std::domain_error("forward: observation length " + std::to_string(obs.size()) +
                                " does not match network input " + std::to_string(s.obs_dim));
    }
    const Layout l = Layout::of(s);
    Eigen::MatrixXd x(s.obs_dim, 1);
    for (int i = 0; i < s.obs_dim; ++i) x(i, 0) = obs[i];

    const TrunkActivations policy = run_trunk(params.flat, l, s, false, x);
    const TrunkActivations value = run_trunk(params.flat, l, s, true, x);

    ForwardResult result;
    result.value = value.out(0, 0);
    result.dist.kind = s.head;
    if (s.head == HeadKind::Categorical) {
        result.dist.logits =
            Eigen::Map<const Eigen::MatrixXd>(policy.out.data(), s.choices, s.axes);
    } else {
        result.dist.mean = policy.out.col(0).head<3>();
        result.dist.log_std = clamped_log_std(params.flat, l, s);
    }
    return result;
}

namespace {

/// Stable softmax pieces of one logit column: probabilities, log-probs and
/// the axis entropy.
struct AxisSoftmax {
    Eigen::VectorXd probs;
    Eigen::VectorXd log_probs;
    double entropy;
};

AxisSoftmax axis_softmax(const Eigen::Ref<const Eigen::VectorXd>& logits) {
    AxisSoftmax s;
    const double m = logits.maxCoeff();
    const Eigen::ArrayXd shifted = logits.array() - m;
    const Eigen::ArrayXd ex = shifted.exp();
    const double sum = ex.sum();
    const double lse = m + std::log(sum);
    s.probs = (ex / sum).matrix();
    s.log_probs = (logits.array() - lse).matrix();
    s.entropy = -(s.probs.array() * s.log_probs.array()).sum();
    return s;
}

}  // namespace

ActionSample sample_action(const ActionDistribution& dist, Rng& rng, bool deterministic) {
    ActionSample out;
    if (dist.kind == HeadKind::Categorical) {
        const int axes = static_cast<int>(dist.logits.cols());
        std::array<int, 3> idx{};
        for (int a = 0; a < axes; ++a) {
            const AxisSoftmax sm = axis_softmax(dist.logits.col(a));
            int pick = 0;
            if (deterministic) {
                dist.logits.col(a).maxCoeff(&pick);
            } else {
                const double u = rng.uniform();
                double acc = 0.0;
                pick = static_cast<int>(dist.logits.rows()) - 1;
                for (int k = 0; k < dist.logits.rows(); ++k) {
                    acc += sm.probs[k];
                    if (u < acc) {
                        pick = k;
                        break;
                    }
                }
            }
            idx[a] = pick;
            out.log_prob += sm.log_probs[pick];
            out.entropy += sm.entropy;
        }
        out.choice = ActionChoice::discrete(idx);
    } else {
        std::array<double, 3> val{};
        for (int a = 0; a < 3; ++a) {
            const double sigma = std::exp(dist.log_std[a]);
            const double x = deterministic ? dist.mean[a] : dist.mean[a] + sigma * rng.normal();
            val[a] = x;
            const double t = (x - dist.mean[a]) / sigma;
            out.log_prob += -0.5 * t * t - dist.log_std[a] - 0.5 * kLogTwoPi;
            out.entropy += dist.log_std[a] + 0.5 * (1.0 + kLogTwoPi);
        }
        out.choice = ActionChoice::continuous(val);
    }
    return out;
}

double action_log_prob(const ActionDistribution& dist, const ActionChoice& choice) {
    double log_prob = 0.0;
    if (dist.kind == HeadKind::Categorical) {
        for (int a = 0; a < dist.logits.cols(); ++a) {
            const AxisSoftmax sm = axis_softmax(dist.logits.col(a));
            log_prob += sm.log_probs[choice.index[static_cast<std::size_t>(a)]];
        }
    } else {
        for (int a = 0; a < 3; ++a) {
            const double sigma = std::exp(dist.log_std[a]);
            const double t = (choice.value[static_cast<std::size_t>(a)] - dist.mean[a]) / sigma;
            log_prob += -0.5 * t * t - dist.log_std[a] - 0.5 * kLogTwoPi;
        }
    }
    return log_prob;
}

NonFiniteLossError::NonFiniteLossError(std::size_t index)
    : std::runtime_error("non-finite PPO loss at batch index " + std::to_string(index)),
      batch_index(index) {}

LossStats ppo_loss(const MlpParams& params, const PpoLossConfig& config,
                   const TrainBatch& batch, Eigen::VectorXd* gradient) {
    const NetShape& s = params.shape;
    const Layout l = Layout::of(s);
    const Eigen::Index n = batch.size();
    if (n == 0) throw std::invalid_argument("ppo_loss: empty batch");
    if (batch.observations.rows() != s.obs_dim || batch.observations.cols() != n ||
        static_cast<Eigen::Index>(batch.actions.size()) != n ||
        batch.advantages.size() != n || batch.returns.size() != n) {
        throw std::invalid_argument("ppo_loss: inconsistent batch shapes");
    }

    const TrunkActivations policy = run_trunk(params.flat, l, s, false, batch.observations);
    const TrunkActivations value = run_trunk(params.flat, l, s, true, batch.observations);

    Eigen::Vector3d log_std;
    Eigen::Vector3d sigma;
    Eigen::VectorXd raw_log_std;
    if (s.head == HeadKind::Gaussian) {
        log_std = clamped_log_std(params.flat, l, s);
        sigma = log_std.array().exp();
        raw_log_std = VecMap(params.flat.data() + l.log_std, s.axes);
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd d_out;  // gradient wrt the policy head pre-activations
    Eigen::RowVectorXd d_value(n);
    if (gradient) d_out = Eigen::MatrixXd::Zero(s.head_out(), n);
    Eigen::Vector3d d_log_std = Eigen::Vector3d::Zero();

    LossStats stats;
    Eigen::Index clipped = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double log_prob = 0.0;
        double entropy = 0.0;

        // Per-axis softmax pieces are recomputed in the gradient pass below;
        // cache them for this sample.
        std::vector<AxisSoftmax> axis_cache;
        if (s.head == HeadKind::Categorical) {
            axis_cache.reserve(static_cast<std::size_t>(s.axes));
            for (int a = 0; a < s.axes; ++a) {
                axis_cache.push_back(
                    axis_softmax(policy.out.col(j).segment(a * s.choices, s.choices)));
                const int c = batch.actions[static_cast<std::size_t>(j)].index[a];
                log_prob += axis_cache.back().log_probs[c];
                entropy += axis_cache.back().entropy;
            }
        } else {
            for (int a = 0; a < s.axes; ++a) {
                const double act = batch.actions[static_cast<std::size_t>(j)].value[a];
                const double t = (act - policy.out(a, j)) / sigma[a];
                log_prob += -0.5 * t * t - log_std[a] - 0.5 * kLogTwoPi;
                entropy += log_std[a] + 0.5 * (1.0 + kLogTwoPi);
            }
        }

        const double adv = batch.advantages[j];
        const double ratio = std::exp(log_prob - batch.old_log_probs[j]);
        const double unclipped = ratio * adv;
        const double clipped_surr =
            clamp(ratio, 1.0 - config.clip_eps, 1.0 + config.clip_eps) * adv;
        const double policy_loss = -std::min(unclipped, clipped_surr);
        const bool use_unclipped = unclipped <= clipped_surr;
        if (std::abs(ratio - 1.0) > config.clip_eps) ++clipped;

        const double value_err = value.out(0, j) - batch.returns[j];
        const double sample_loss =
            policy_loss + config.value_coef * value_err * value_err - config.entropy_coef * entropy;
        if (!std::isfinite(sample_loss)) throw NonFiniteLossError(static_cast<std::size_t>(j));

        stats.total += sample_loss * inv_n;
        stats.policy += policy_loss * inv_n;
        stats.value += value_err * value_err * inv_n;
        stats.entropy += entropy * inv_n;
        stats.mean_ratio += ratio * inv_n;

        if (!gradient) continue;
        const double d_log_prob = use_unclipped ? -adv * ratio : 0.0;
        d_value[j] = 2.0 * config.value_coef * value_err * inv_n;
        if (s.head == HeadKind::Categorical) {
            for (int a = 0; a < s.axes; ++a) {
                const AxisSoftmax& sm = axis_cache[static_cast<std::size_t>(a)];
                const int c = batch.actions[static_cast<std::size_t>(j)].index[a];
                auto seg = d_out.col(j).segment(a * s.choices, s.choices);
                // d(-logp)/dz and d(-H)/dz terms of the loss
                seg = (-d_log_prob * sm.probs +
                       config.entropy_coef *
                           (sm.probs.array() * (sm.log_probs.array() + sm.entropy)).matrix()) *
                      inv_n;
                seg[c] += d_log_prob * inv_n;
            }
        } else {
            for (int a = 0; a < s.axes; ++a) {
                const double act = batch.actions[static_cast<std::size_t>(j)].value[a];
                const double t = (act - policy.out(a, j)) / sigma[a];
                d_out(a, j) = d_log_prob * (t / sigma[a]) * inv_n;
                const bool interior = raw_log_std[a] > kLogStdMin && raw_log_std[a] < kLogStdMax;
                if (interior) {
                    d_log_std[a] +=
                        (d_log_prob * (t * t - 1.0) - config.entropy_coef) * inv_n;
                }
            }
        }
    }
    stats.clip_fraction = static_cast<double>(clipped) / static_cast<double>(n);

    if (!gradient) return stats;

    gradient->setZero(params.flat.size());
    const double* fp = params.flat.data();
    double* gp = gradient->data();

    // Policy head and trunk.
    {
        MatMap HW(fp + l.hw, s.head_out(), s.hidden2);
        MutMatMap(gp + l.hw, s.head_out(), s.hidden2) = d_out * policy.h2.transpose();
        MutVecMap(gp + l.hb, s.head_out()) = d_out.rowwise().sum();

        Eigen::MatrixXd d_h2 = HW.transpose() * d_out;
        Eigen::MatrixXd d_pre2 =
            (d_h2.array() * (1.0 - policy.h2.array().square())).matrix();
        MatMap PW2(fp + l.pw2, s.hidden2, s.hidden1);
        MutMatMap(gp + l.pw2, s.hidden2, s.hidden1) = d_pre2 * policy.h1.transpose();
        MutVecMap(gp + l.pb2, s.hidden2) = d_pre2.rowwise().sum();

        Eigen::MatrixXd d_h1 = PW2.transpose() * d_pre2;
        Eigen::MatrixXd d_pre1 =
            (d_h1.array() * (1.0 - policy.h1.array().square())).matrix();
        MutMatMap(gp + l.pw1, s.hidden1, s.obs_dim) = d_pre1 * batch.observations.transpose();
        MutVecMap(gp + l.pb1, s.hidden1) = d_pre1.rowwise().sum();
    }
    if (s.head == HeadKind::Gaussian) {
        MutVecMap(gp + l.log_std, s.axes) = d_log_std;
    }

    // Value trunk.
    {
        VecMap VW3(fp + l.vw3, s.hidden2);
        MutVecMap(gp + l.vw3, s.hidden2) = value.h2 * d_value.transpose();
        gp[l.vb3] = d_value.sum();

        Eigen::MatrixXd d_h2 = VW3 * d_value;
        Eigen::MatrixXd d_pre2 = (d_h2.array() * (1.0 - value.h2.array().square())).matrix();
        MatMap VW2(fp + l.vw2, s.hidden2, s.hidden1);
        MutMatMap(gp + l.vw2, s.hidden2, s.hidden1) = d_pre2 * value.h1.transpose();
        MutVecMap(gp + l.vb2, s.hidden2) = d_pre2.rowwise().sum();

        Eigen::MatrixXd d_h1 = VW2.transpose() * d_pre2;
        Eigen::MatrixXd d_pre1 = (d_h1.array() * (1.0 - value.h1.array().square())).matrix();
        MutMatMap(gp + l.vw1, s.hidden1, s.obs_dim) = d_pre1 * batch.observations.transpose();
        MutVecMap(gp + l.vb1, s.hidden1) = d_pre1.rowwise().sum();
    }

    return stats;
}

}  // namespace proxops
