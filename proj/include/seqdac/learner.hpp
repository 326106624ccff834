#pragma once

#include <memory>
#include <string>

#include "seqdac/env.hpp"
#include "seqdac/net.hpp"

namespace seqdac {

using Batch = std::vector<const Transition*>;

// Shared across all value-based learners so they train under identical
// settings.
struct LearnerConfig {
    int hidden = 64;
    double lr = 1e-4;
    int batch_size = 32;
    double gamma = 0.99;
    int target_interval = 200;
    double grad_clip = 10.0;
};

// Linear anneal from `start` to `final_value` over `anneal_steps`, constant
// afterwards. anneal_steps is conventionally 10% of the training budget.
struct EpsilonSchedule {
    double start = 1.0;
    double final_value = 0.05;
    long anneal_steps = 1;

    double at(long step) const {
        if (step >= anneal_steps) return final_value;
        double frac = static_cast<double>(step) / static_cast<double>(anneal_steps);
        return start + (final_value - start) * frac;
    }
};

// Input wiring for sequential agents. The agent at position j of `order`
// observes the state plus one-hot encodings of the actions already chosen by
// positions 0..j-1. Reversing `order` is how the order-ablation experiments
// are run; the environment itself never changes.
class SeqWiring {
public:
    SeqWiring(int state_dim, std::vector<int> action_sizes, std::vector<int> order);

    int n_agents() const { return static_cast<int>(action_sizes_.size()); }
    int state_dim() const { return state_dim_; }
    const std::vector<int>& action_sizes() const { return action_sizes_; }
    const std::vector<int>& order() const { return order_; }

    int agent_at(int pos) const { return order_[pos]; }
    int input_dim(int pos) const { return input_dims_[pos]; }
    int output_dim(int pos) const { return action_sizes_[order_[pos]]; }

    // Writes [state, one-hots of joint_action for positions 0..pos-1].
    void assemble(int pos, const double* state, const int* joint_action,
                  std::vector<double>& dst) const;

private:
    int state_dim_;
    std::vector<int> action_sizes_;
    std::vector<int> order_;
    std::vector<int> input_dims_;
};

std::vector<int> identity_order(int n);
std::vector<int> reverse_order(int n);

class Learner {
public:
    virtual ~Learner() = default;

    virtual const char* kind() const = 0;
    virtual int n_agents() const = 0;

    // Epsilon-greedy joint action; each agent explores independently.
    virtual void select_actions(const std::vector<double>& state, double epsilon,
                                Rng& rng, std::vector<int>& actions) = 0;

    // One gradient step on the batch. Returns false when the batch was
    // skipped (non-finite targets or losses); parameters are untouched then.
    virtual bool update(const Batch& batch) = 0;

    virtual long update_count() const = 0;

    virtual std::vector<uint8_t> checkpoint() const = 0;
};

// Learner checkpoints: header (kind, dims, agent order) followed by one
// tiny-net blob per network, FNV-1a checksum at the end.
std::unique_ptr<Learner> load_learner_checkpoint(std::span<const uint8_t> bytes,
                                                 const LearnerConfig& cfg);

namespace detail {
std::vector<uint8_t> pack_learner_checkpoint(const std::string& kind, int state_dim,
                                             const std::vector<int>& action_sizes,
                                             const std::vector<int>& order,
                                             const std::vector<const Mlp*>& nets);
struct UnpackedCheckpoint {
    std::string kind;
    int state_dim = 0;
    std::vector<int> action_sizes;
    std::vector<int> order;
    std::vector<Mlp> nets;
};
UnpackedCheckpoint unpack_learner_checkpoint(std::span<const uint8_t> bytes);
} // namespace detail

} // namespace seqdac
