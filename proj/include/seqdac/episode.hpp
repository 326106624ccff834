#pragma once

#include <functional>
#include <ostream>

#include "seqdac/env.hpp"

namespace seqdac {

// Fills `actions` for the given state.
using Policy =
    std::function<void(const std::vector<double>& state, std::vector<int>& actions)>;

struct EpisodeResult {
    double total_reward = 0.0; // undiscounted sum of rewards
    int steps = 0;
};

// Optional CSV trajectory sink: "episode,step,reward,a_1..a_n".
class TrajectoryLog {
public:
    explicit TrajectoryLog(std::ostream& out) : out_(out) {}
    void header(int n_agents);
    void row(int episode, int step, double reward, const std::vector<int>& actions);
    void next_episode() { ++episode_; }
    int episode() const { return episode_; }

private:
    std::ostream& out_;
    int episode_ = 0;
};

// Resets the environment (drawing a fresh instance from context_rng) and
// rolls one episode to completion. When `collect` is given, every transition
// is pushed into it.
EpisodeResult run_episode(SeqMmdpEnv& env, const Policy& policy, Rng& context_rng,
                          ReplayBuffer* collect = nullptr,
                          TrajectoryLog* log = nullptr);

} // namespace seqdac
