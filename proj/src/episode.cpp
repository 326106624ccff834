#include "seqdac/episode.hpp"

#include <cstdio>

namespace seqdac {

void TrajectoryLog::header(int n_agents) {
    out_ << "# schema: trajectory-v1\n";
    out_ << "episode,step,reward";
    for (int i = 1; i <= n_agents; ++i) out_ << ",a_" << i;
    out_ << "\n";
}

void TrajectoryLog::row(int episode, int step, double reward,
                        const std::vector<int>& actions) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", reward);
    out_ << episode << ',' << step << ',' << buf;
    for (int a : actions) out_ << ',' << a;
    out_ << "\n";
}

EpisodeResult run_episode(SeqMmdpEnv& env, const Policy& policy, Rng& context_rng,
                          ReplayBuffer* collect, TrajectoryLog* log) {
    EpisodeResult result;
    std::vector<double> state = env.reset(context_rng);
    std::vector<int> actions(env.n_agents());
    while (!env.done()) {
        policy(state, actions);
        StepResult sr = env.step(actions);
        if (log) log->row(log->episode(), result.steps, sr.reward, actions);
        if (collect) {
            Transition t;
            t.state = state;
            t.actions = actions;
            t.reward = sr.reward;
            t.next_state = sr.next_state;
            t.done = sr.done;
            collect->push(std::move(t));
        }
        result.total_reward += sr.reward;
        result.steps += 1;
        state = std::move(sr.next_state);
    }
    if (log) log->next_episode();
    return result;
}

} // namespace seqdac
