#pragma once

#include <cmath>

#include "seqdac/learner.hpp"

namespace seqdac {

// Additive value decomposition: per-agent Q over the state only, joint value
// is the plain sum, greedy selection factorizes into independent argmaxes.
class VdnLearner : public Learner {
public:
    VdnLearner(int state_dim, std::vector<int> action_sizes, LearnerConfig cfg,
               Rng& init_rng);

    const char* kind() const override { return "vdn"; }
    int n_agents() const override { return static_cast<int>(action_sizes_.size()); }
    const std::vector<int>& action_sizes() const { return action_sizes_; }
    const LearnerConfig& config() const { return cfg_; }

    void select_actions(const std::vector<double>& state, double epsilon, Rng& rng,
                        std::vector<int>& actions) override;

    void q_values(int agent, const std::vector<double>& state,
                  std::vector<double>& out) const;
    double joint_q(const std::vector<double>& state,
                   const std::vector<int>& actions) const;
    // r + gamma * (1-done) * sum_i max_a Q_i^target(s', a)
    double td_target(const Transition& t) const;

    double update_loss(const Batch& batch);
    bool update(const Batch& batch) override {
        return std::isfinite(update_loss(batch));
    }
    long update_count() const override { return update_count_; }

    const Mlp& q_net(int agent) const { return nets_[agent]; }
    const Mlp& target_net(int agent) const { return targets_[agent]; }

    std::vector<uint8_t> checkpoint() const override;
    static std::unique_ptr<VdnLearner> from_checkpoint(
        const detail::UnpackedCheckpoint& u, const LearnerConfig& cfg);

private:
    void refresh_target_if_due();

    int state_dim_;
    std::vector<int> action_sizes_;
    LearnerConfig cfg_;
    std::vector<Mlp> nets_, targets_;
    std::vector<AdamState> opt_;
    std::vector<MlpGrads> grads_;
    long update_count_ = 0;
    mutable MlpCache cache_;
    mutable std::vector<double> out_;
};

// Base for the two sequential Q baselines: per-agent Q networks over
// [state, one-hots of prior actions], with target copies and sequential
// epsilon-greedy selection.
class SeqQLearner : public Learner {
public:
    SeqQLearner(int state_dim, std::vector<int> action_sizes, LearnerConfig cfg,
                std::vector<int> order, Rng& init_rng);

    int n_agents() const override { return wiring_.n_agents(); }
    const SeqWiring& wiring() const { return wiring_; }
    const LearnerConfig& config() const { return cfg_; }

    void select_actions(const std::vector<double>& state, double epsilon, Rng& rng,
                        std::vector<int>& actions) override;

    // Q values for the agent at `pos` given prior actions in joint_action.
    void q_values(int pos, const std::vector<double>& state,
                  const std::vector<int>& joint_action, std::vector<double>& out) const;
    void target_q_values(int pos, const std::vector<double>& state,
                         const std::vector<int>& joint_action,
                         std::vector<double>& out) const;

    // Per-position regression: one Adam step per net; false on non-finite.
    std::vector<double> update_losses(const Batch& batch);
    bool update(const Batch& batch) override;
    long update_count() const override { return update_count_; }

    const Mlp& q_net(int pos) const { return nets_[pos]; }
    const Mlp& target_net(int pos) const { return targets_[pos]; }

    std::vector<uint8_t> checkpoint() const override;

protected:
    // Regression target for position `pos` of one transition.
    virtual double position_target(int pos, const Transition& t) = 0;
    void load_nets(const detail::UnpackedCheckpoint& u);

    SeqWiring wiring_;
    LearnerConfig cfg_;
    std::vector<Mlp> nets_, targets_;
    std::vector<AdamState> opt_;
    std::vector<MlpGrads> grads_;
    long update_count_ = 0;
    mutable MlpCache cache_;
    mutable std::vector<double> input_;
    mutable std::vector<double> out_;
    mutable std::vector<int> scratch_actions_;
};

// Sequential agent Q-learning: each agent regresses independently onto the
// shared reward, bootstrapping from its own target net at the next state,
// with the next-state prefix rolled out greedily by the current nets.
class SaqlLearner : public SeqQLearner {
public:
    using SeqQLearner::SeqQLearner;
    const char* kind() const override { return "saql"; }
    static std::unique_ptr<SaqlLearner> from_checkpoint(
        const detail::UnpackedCheckpoint& u, const LearnerConfig& cfg);

protected:
    double position_target(int pos, const Transition& t) override;
};

// Chained targets: the last agent bootstraps from the first agent's target
// net at s'; every earlier agent regresses onto the next agent's maximum at
// the same state. All targets come from the lagged copies, so a batch is
// consistent regardless of apply order.
class AceLearner : public SeqQLearner {
public:
    using SeqQLearner::SeqQLearner;
    const char* kind() const override { return "ace"; }
    static std::unique_ptr<AceLearner> from_checkpoint(
        const detail::UnpackedCheckpoint& u, const LearnerConfig& cfg);

protected:
    double position_target(int pos, const Transition& t) override;
};

} // namespace seqdac
