#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "seqdac/rng.hpp"

namespace seqdac {

// One step of the shared-reward sequential decision process. Agents act in
// order inside the policy; the environment always receives the full joint
// action.
struct Transition {
    std::vector<double> state;
    std::vector<int> actions; // one discrete index per agent
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

struct StepResult {
    std::vector<double> next_state;
    double reward = 0.0;
    bool done = false;
};

// Contextual environment contract. reset() draws a fresh problem instance
// from the context distribution; stepping a finished episode is an error.
class SeqMmdpEnv {
public:
    virtual ~SeqMmdpEnv() = default;

    virtual int n_agents() const = 0;
    virtual const std::vector<int>& action_sizes() const = 0;
    virtual int state_dim() const = 0;

    virtual std::vector<double> reset(Rng& context_rng) = 0;
    virtual StepResult step(const std::vector<int>& actions) = 0;
    virtual bool done() const = 0;

protected:
    void check_actions(const std::vector<int>& actions) const {
        const auto& sizes = action_sizes();
        if (actions.size() != sizes.size())
            throw std::invalid_argument("step: wrong number of actions");
        for (size_t i = 0; i < actions.size(); ++i)
            if (actions[i] < 0 || actions[i] >= sizes[i])
                throw std::out_of_range("step: action index out of range");
    }
};

// Uniform ring buffer. sample() draws distinct slots; it reports a warmup
// signal (nullopt) while fewer than batch_size transitions are stored.
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity);

    void push(Transition t);
    size_t size() const { return storage_.size(); }
    size_t capacity() const { return capacity_; }
    const Transition& at(size_t i) const { return storage_[i]; }

    // Pointers remain valid until the next push.
    std::optional<std::vector<const Transition*>> sample(size_t batch_size,
                                                         Rng& rng) const;

private:
    size_t capacity_;
    size_t next_ = 0;
    std::vector<Transition> storage_;
};

} // namespace seqdac
