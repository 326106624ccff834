#pragma once

#include "seqdac/env.hpp"

namespace seqdac {

enum class SigmoidVariant { Plain, Seq, SeqMask, SeqRobust };

// sig(t, s, p) = 1 / (1 + exp(-s * (t - p)))
double sigmoid_target(double t, double slope, double inflection);

// Scaling factor applied to agent h's slope, driven by the previous agent's
// chosen value: 1 for h=0, then 10 when the previous value >= 0.5, else 0.1.
double sigmoid_alpha(int h, double prev_action_value);

struct SigmoidConfig {
    SigmoidVariant variant = SigmoidVariant::Seq;
    int hyperparams = 5; // H: one agent per hyperparameter
    int choices = 10;    // C: grid 0/C .. (C-1)/C
    int horizon = 10;    // T: one episode covers t = 0..T inclusive
    int robust_n = 0;    // number of randomized indices (SeqRobust only)
    std::vector<int> robust_indices; // empty = floor(H/2), floor(H/2)+1, ...
};

// Per-episode task instance: slopes U(-100,100), inflections N(T/2, T/4).
struct SigmoidInstance {
    std::vector<double> slopes;
    std::vector<double> inflections;
};

// The four benchmark variants behind one env. Rewards use raw slope /
// inflection / t values; the observed state is scaled (s/100, p/T, t/T) so a
// small network sees O(1) inputs.
class SigmoidEnv : public SeqMmdpEnv {
public:
    explicit SigmoidEnv(SigmoidConfig config);

    int n_agents() const override { return config_.hyperparams; }
    const std::vector<int>& action_sizes() const override { return action_sizes_; }
    int state_dim() const override;

    std::vector<double> reset(Rng& context_rng) override;
    StepResult step(const std::vector<int>& actions) override;
    bool done() const override { return t_ > config_.horizon; }

    const SigmoidConfig& config() const { return config_; }
    const SigmoidInstance& instance() const { return instance_; }
    int current_t() const { return t_; }
    // Actions actually applied at the last step (SeqRobust overwrites some).
    const std::vector<int>& last_realized_actions() const { return realized_; }

    // Reward at time t for the given action indices on this instance; the
    // step() path and the test oracles both go through here.
    double reward_at(int t, const std::vector<int>& action_indices) const;

private:
    std::vector<double> make_state() const;

    SigmoidConfig config_;
    std::vector<int> action_sizes_;
    SigmoidInstance instance_;
    std::vector<int> realized_;
    Rng step_rng_{0};
    int t_ = 0;
    bool ready_ = false;
};

} // namespace seqdac
