#pragma once

#include "seqdac/env.hpp"
#include "seqdac/moead.hpp"

namespace seqdac {

// The 22-entry observation: instance descriptors, budget/stagnation ratios,
// current HV / non-dominated ratio / mean nearest-neighbor distance, their
// one-step deltas, and running statistics over the last 5 and all steps.
inline constexpr int kMoeadStateDim = 22;

struct MoeadEnvConfig {
    std::string problem = "DTLZ2";
    int m = 3;
    int d = 6;
    int population = 100;
    int episode_length = 50; // generations per episode
    MoeadConfig moead;
};

// Progress-squared reward on metric improvement: nothing happens unless the
// running best improves, and the episode total telescopes to p_final^2 / 2.
class TriangleReward {
public:
    void start(double initial_metric);
    double step(double metric_now);
    double progress() const { return progress_; }
    double best_metric() const { return best_metric_; }

private:
    double initial_metric_ = 0.0;
    double best_metric_ = 0.0;
    double progress_ = 0.0;
};

// Rolling per-generation indicator records backing the state features.
struct MoeadHistory {
    std::vector<double> hv, nd_ratio, dist;

    void clear();
    void record(double h, double nd, double di);
    // writes the 22 features for the problem descriptors and step counters
    void features(double inv_m, double inv_d, double budget_ratio,
                  double stagnation_ratio, std::vector<double>& out) const;
};

// Four agents steer one MOEA/D generation per step: neighborhood size,
// DE operator, scale factor F, and whether to run weight adaptation first.
class MoeadEnv : public SeqMmdpEnv {
public:
    explicit MoeadEnv(MoeadEnvConfig config);

    int n_agents() const override { return 4; }
    const std::vector<int>& action_sizes() const override { return action_sizes_; }
    int state_dim() const override { return kMoeadStateDim; }

    std::vector<double> reset(Rng& context_rng) override;
    StepResult step(const std::vector<int>& actions) override;
    bool done() const override { return t_ >= config_.episode_length; }

    static ActionTuple decode_action(const std::vector<int>& actions);

    const MoeadEnvConfig& config() const { return config_; }
    const MopProblem& problem() const { return *problem_; }
    const MoeadRun& run() const { return *run_; }
    const std::vector<std::vector<double>>& reference() const { return reference_; }

    double current_metric() const; // IGD of the current population
    double progress() const { return reward_.progress(); }
    double best_metric() const { return reward_.best_metric(); }
    int generation() const { return t_; }
    int stagnation() const { return n_stag_; }
    const GenerationStats& last_stats() const { return last_stats_; }

private:
    std::vector<double> make_state() const;
    void record_population();

    MoeadEnvConfig config_;
    std::unique_ptr<MopProblem> problem_;
    std::vector<std::vector<double>> reference_;
    std::vector<double> ref_scale_;     // per-dimension front maxima
    std::vector<double> hv_reference_;  // (2, ..., 2) in normalized space
    std::vector<int> action_sizes_;
    std::unique_ptr<MoeadRun> run_;
    Rng step_rng_{0};
    TriangleReward reward_;
    MoeadHistory history_;
    GenerationStats last_stats_;
    int t_ = 0;
    int n_stag_ = 0;
    bool ready_ = false;
};

} // namespace seqdac
