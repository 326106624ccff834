#include "seqdac/sigmoid_env.hpp"

#include <cmath>

namespace seqdac {

double sigmoid_target(double t, double slope, double inflection) {
    return 1.0 / (1.0 + std::exp(-slope * (t - inflection)));
}

double sigmoid_alpha(int h, double prev_action_value) {
    if (h == 0) return 1.0;
    return prev_action_value >= 0.5 ? 10.0 : 0.1;
}

SigmoidEnv::SigmoidEnv(SigmoidConfig config) : config_(std::move(config)) {
    if (config_.hyperparams <= 0 || config_.choices <= 1 || config_.horizon <= 0)
        throw std::invalid_argument("SigmoidEnv: bad config");
    if (config_.variant == SigmoidVariant::SeqRobust) {
        if (config_.robust_indices.empty()) {
            int base = config_.hyperparams / 2;
            for (int i = 0; i < config_.robust_n; ++i)
                config_.robust_indices.push_back(base + i);
        }
        for (int idx : config_.robust_indices)
            if (idx < 0 || idx >= config_.hyperparams)
                throw std::invalid_argument("SigmoidEnv: robust index out of range");
    }
    action_sizes_.assign(config_.hyperparams, config_.choices);
    instance_.slopes.assign(config_.hyperparams, 1.0);
    instance_.inflections.assign(config_.hyperparams, 0.0);
    realized_.assign(config_.hyperparams, 0);
}

int SigmoidEnv::state_dim() const {
    return config_.variant == SigmoidVariant::SeqMask ? 1
                                                      : 2 * config_.hyperparams + 1;
}

std::vector<double> SigmoidEnv::reset(Rng& context_rng) {
    double mid = config_.horizon / 2.0;
    double spread = config_.horizon / 4.0;
    for (int h = 0; h < config_.hyperparams; ++h) {
        instance_.slopes[h] = config_.variant == SigmoidVariant::SeqMask
                                  ? 1.0
                                  : context_rng.uniform(-100.0, 100.0);
        instance_.inflections[h] = context_rng.normal(mid, spread);
    }
    step_rng_ = Rng(context_rng.next_u64());
    t_ = 0;
    ready_ = true;
    return make_state();
}

std::vector<double> SigmoidEnv::make_state() const {
    if (config_.variant == SigmoidVariant::SeqMask)
        return {static_cast<double>(t_) / config_.horizon};
    std::vector<double> s;
    s.reserve(2 * config_.hyperparams + 1);
    for (double v : instance_.slopes) s.push_back(v / 100.0);
    for (double v : instance_.inflections) s.push_back(v / config_.horizon);
    s.push_back(static_cast<double>(t_) / config_.horizon);
    return s;
}

double SigmoidEnv::reward_at(int t, const std::vector<int>& action_indices) const {
    double reward = 1.0;
    double grid = static_cast<double>(config_.choices);
    for (int h = 0; h < config_.hyperparams; ++h) {
        double a = action_indices[h] / grid;
        double factor;
        if (config_.variant == SigmoidVariant::Plain) {
            double target =
                sigmoid_target(t, instance_.slopes[h], instance_.inflections[h]);
            factor = 1.0 - std::abs(target - a);
        } else {
            double prev = h > 0 ? action_indices[h - 1] / grid : 0.0;
            double alpha = sigmoid_alpha(h, prev);
            double target = sigmoid_target(t, alpha * instance_.slopes[h],
                                           instance_.inflections[h]);
            factor = 1.0 - std::min(std::abs(target - a),
                                    std::abs(1.0 - target - a));
        }
        reward *= factor;
    }
    return reward;
}

StepResult SigmoidEnv::step(const std::vector<int>& actions) {
    if (!ready_) throw std::logic_error("SigmoidEnv: step before reset");
    if (done()) throw std::logic_error("SigmoidEnv: step after done");
    check_actions(actions);

    realized_ = actions;
    if (config_.variant == SigmoidVariant::SeqRobust)
        for (int idx : config_.robust_indices)
            realized_[idx] = step_rng_.uniform_int(config_.choices);

    StepResult result;
    result.reward = reward_at(t_, realized_);
    t_ += 1;
    result.done = done();
    result.next_state = make_state();
    return result;
}

} // namespace seqdac
