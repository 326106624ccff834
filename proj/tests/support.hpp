#pragma once

// Shared test doubles and small helpers.

#include <vector>

#include "seqdac/env.hpp"

namespace seqdac::testing {

// Fixed reward each step, episode ends after `horizon` steps.
class ConstRewardEnv : public SeqMmdpEnv {
public:
    ConstRewardEnv(double reward, int horizon, int n_agents = 2, int n_actions = 3)
        : reward_(reward), horizon_(horizon), sizes_(n_agents, n_actions) {}

    int n_agents() const override { return static_cast<int>(sizes_.size()); }
    const std::vector<int>& action_sizes() const override { return sizes_; }
    int state_dim() const override { return 2; }

    std::vector<double> reset(Rng& context_rng) override {
        context_ = context_rng.uniform();
        t_ = 0;
        return state();
    }

    StepResult step(const std::vector<int>& actions) override {
        if (done()) throw std::logic_error("ConstRewardEnv: step after done");
        check_actions(actions);
        ++t_;
        return {state(), reward_, done()};
    }

    bool done() const override { return t_ >= horizon_; }

private:
    std::vector<double> state() const {
        return {context_, static_cast<double>(t_) / horizon_};
    }
    double reward_;
    int horizon_;
    std::vector<int> sizes_;
    double context_ = 0.0;
    int t_ = 0;
};

// Single-state contextual bandit over a reward table indexed by the joint
// action; every episode is one step long.
class MatrixBanditEnv : public SeqMmdpEnv {
public:
    MatrixBanditEnv(std::vector<int> sizes, std::vector<double> rewards)
        : sizes_(std::move(sizes)), rewards_(std::move(rewards)) {}

    int n_agents() const override { return static_cast<int>(sizes_.size()); }
    const std::vector<int>& action_sizes() const override { return sizes_; }
    int state_dim() const override { return 1; }

    std::vector<double> reset(Rng&) override {
        done_ = false;
        return {1.0};
    }

    StepResult step(const std::vector<int>& actions) override {
        if (done_) throw std::logic_error("MatrixBanditEnv: step after done");
        check_actions(actions);
        done_ = true;
        return {{1.0}, rewards_[flat_index(actions)], true};
    }

    bool done() const override { return done_; }

    size_t flat_index(const std::vector<int>& actions) const {
        size_t idx = 0;
        for (size_t i = 0; i < sizes_.size(); ++i) idx = idx * sizes_[i] + actions[i];
        return idx;
    }
    double reward_of(const std::vector<int>& actions) const {
        return rewards_[flat_index(actions)];
    }

private:
    std::vector<int> sizes_;
    std::vector<double> rewards_;
    bool done_ = true;
};

// Walks every joint action of a per-agent discrete grid.
inline bool next_joint_action(std::vector<int>& actions, const std::vector<int>& sizes) {
    for (size_t i = sizes.size(); i-- > 0;) {
        if (++actions[i] < sizes[i]) return true;
        actions[i] = 0;
    }
    return false;
}

} // namespace seqdac::testing
