#pragma once

#include "seqdac/learner.hpp"

namespace seqdac {

// Sequential advantage decomposition learner: one advantage network per
// agent over [state, prior one-hot actions], plus a global value network
// with a lagged target copy.
//
// Each agent's advantage is its head output shifted so the per-prefix
// maximum is exactly zero, the property a greedy policy's advantage
// satisfies (max_a A = 0). That convention makes sequential per-agent
// argmaxes recover the exhaustive argmax of V(s) + sum_i A_i over the whole
// joint-action grid, ties broken toward lower indices in both procedures,
// and it pins the level of each head so the TD regression only has to move
// action orderings, not chase the critic's drift.
class SadnLearner : public Learner {
public:
    SadnLearner(int state_dim, std::vector<int> action_sizes, LearnerConfig cfg,
                std::vector<int> order, Rng& init_rng);

    const char* kind() const override { return "sadn"; }
    int n_agents() const override { return wiring_.n_agents(); }
    const SeqWiring& wiring() const { return wiring_; }
    const LearnerConfig& config() const { return cfg_; }

    void select_actions(const std::vector<double>& state, double epsilon, Rng& rng,
                        std::vector<int>& actions) override;

    // Normalized advantages of the agent at `pos`, given the prior actions
    // recorded in joint_action. out[k] <= 0 with max exactly 0.
    void advantages(int pos, const std::vector<double>& state,
                    const std::vector<int>& joint_action,
                    std::vector<double>& out) const;

    // sum_i A_i(s, a_1..a_{i-1}, a_i)
    double global_advantage(const std::vector<double>& state,
                            const std::vector<int>& joint_action) const;

    double value(const std::vector<double>& state) const;
    double target_value(const std::vector<double>& state) const;

    // delta = r + gamma * V_target(s') * (1 - done) - V(s)
    std::vector<double> td_targets(const Batch& batch) const;

    struct Losses {
        double advantage = 0.0;
        double value = 0.0;
        bool applied = false;
    };

    // Advantage regression onto the TD error, value regression onto the
    // bootstrapped return, one Adam step each; target refresh every
    // cfg.target_interval updates.
    Losses update_losses(const Batch& batch);
    bool update(const Batch& batch) override { return update_losses(batch).applied; }

    // The two regression halves, exposed separately so the advantage
    // recursion can be exercised against a frozen value function.
    double update_advantage(const Batch& batch);
    double update_value(const Batch& batch);

    long update_count() const override { return update_count_; }

    const Mlp& advantage_net(int pos) const { return adv_nets_[pos]; }
    const Mlp& value_net() const { return value_net_; }
    const Mlp& target_value_net() const { return target_value_net_; }

    std::vector<uint8_t> checkpoint() const override;
    static std::unique_ptr<SadnLearner> from_checkpoint(
        const detail::UnpackedCheckpoint& u, const LearnerConfig& cfg);

private:
    void refresh_target_if_due();

    SeqWiring wiring_;
    LearnerConfig cfg_;
    std::vector<Mlp> adv_nets_;
    Mlp value_net_;
    Mlp target_value_net_;
    std::vector<AdamState> adv_opt_;
    AdamState value_opt_;
    long update_count_ = 0;

    // scratch reused across calls
    mutable MlpCache cache_;
    mutable std::vector<double> input_;
    mutable std::vector<double> out_;
    std::vector<MlpGrads> adv_grads_;
    MlpGrads value_grads_;
};

} // namespace seqdac
