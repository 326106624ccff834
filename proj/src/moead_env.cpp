#include "seqdac/moead_env.hpp"

#include <cmath>
#include <limits>

#include "seqdac/indicators.hpp"

namespace seqdac {

void TriangleReward::start(double initial_metric) {
    if (!(initial_metric > 0.0))
        throw std::runtime_error("TriangleReward: initial metric must be positive");
    initial_metric_ = initial_metric;
    best_metric_ = initial_metric;
    progress_ = 0.0;
}

double TriangleReward::step(double metric_now) {
    if (!(metric_now < best_metric_)) return 0.0;
    double next = (initial_metric_ - metric_now) / initial_metric_;
    double reward = 0.5 * (next * next - progress_ * progress_);
    progress_ = next;
    best_metric_ = metric_now;
    return reward;
}

void MoeadHistory::clear() {
    hv.clear();
    nd_ratio.clear();
    dist.clear();
}

void MoeadHistory::record(double h, double nd, double di) {
    hv.push_back(h);
    nd_ratio.push_back(nd);
    dist.push_back(di);
}

namespace {

// population statistics over the trailing `window` records
void mean_std(const std::vector<double>& xs, size_t window, double& mean,
              double& stdev) {
    size_t n = std::min(window, xs.size());
    size_t begin = xs.size() - n;
    mean = 0.0;
    for (size_t i = begin; i < xs.size(); ++i) mean += xs[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (size_t i = begin; i < xs.size(); ++i) {
        double d = xs[i] - mean;
        var += d * d;
    }
    stdev = std::sqrt(var / static_cast<double>(n));
}

double delta_last(const std::vector<double>& xs) {
    return xs.size() < 2 ? 0.0 : xs.back() - xs[xs.size() - 2];
}

} // namespace

void MoeadHistory::features(double inv_m, double inv_d, double budget_ratio,
                            double stagnation_ratio, std::vector<double>& out) const {
    out.assign(kMoeadStateDim, 0.0);
    out[0] = inv_m;
    out[1] = inv_d;
    out[2] = budget_ratio;
    out[3] = stagnation_ratio;
    out[4] = hv.back();
    out[5] = nd_ratio.back();
    out[6] = dist.back();
    out[7] = delta_last(hv);
    out[8] = delta_last(nd_ratio);
    out[9] = delta_last(dist);
    mean_std(hv, 5, out[10], out[13]);
    mean_std(nd_ratio, 5, out[11], out[14]);
    mean_std(dist, 5, out[12], out[15]);
    mean_std(hv, hv.size(), out[16], out[19]);
    mean_std(nd_ratio, nd_ratio.size(), out[17], out[20]);
    mean_std(dist, dist.size(), out[18], out[21]);
}

MoeadEnv::MoeadEnv(MoeadEnvConfig config) : config_(std::move(config)) {
    problem_ = make_problem(config_.problem, config_.m, config_.d);
    reference_ = reference_front(config_.problem, config_.m);
    ref_scale_.assign(config_.m, 0.0);
    for (const auto& p : reference_)
        for (int j = 0; j < config_.m; ++j) ref_scale_[j] = std::max(ref_scale_[j], p[j]);
    hv_reference_.assign(config_.m, 2.0);
    action_sizes_ = {4, 4, 4, 2};
    config_.moead.population = config_.population;
}

ActionTuple MoeadEnv::decode_action(const std::vector<int>& actions) {
    ActionTuple tuple;
    tuple.neighborhood_size = kNeighborhoodChoices[actions[0]];
    tuple.op = actions[1];
    tuple.scale_f = kScaleFChoices[actions[2]];
    tuple.adapt_weights = actions[3] == 0; // {T, N}
    return tuple;
}

double MoeadEnv::current_metric() const {
    return igd(run_->all_objectives(), reference_);
}

void MoeadEnv::record_population() {
    const auto& objs = run_->all_objectives();
    int n = static_cast<int>(objs.size());
    int m = config_.m;

    std::vector<std::vector<double>> scaled(objs.size());
    for (size_t i = 0; i < objs.size(); ++i) {
        scaled[i].resize(m);
        for (int j = 0; j < m; ++j) scaled[i][j] = objs[i][j] / ref_scale_[j];
    }
    double hv_total = 1.0;
    for (double r : hv_reference_) hv_total *= r;
    double hv = hypervolume(scaled, hv_reference_) / hv_total;

    int nd = 0;
    for (int i = 0; i < n; ++i) {
        bool dominated = false;
        for (int j = 0; j < n && !dominated; ++j)
            if (j != i && dominates(objs[j], objs[i])) dominated = true;
        if (!dominated) ++nd;
    }

    double dist = 0.0;
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (int c = 0; c < m; ++c) {
                double diff = objs[i][c] - objs[j][c];
                d2 += diff * diff;
            }
            best = std::min(best, d2);
        }
        dist += std::sqrt(best);
    }
    dist /= static_cast<double>(n);

    history_.record(hv, nd / static_cast<double>(n), dist);
}

std::vector<double> MoeadEnv::make_state() const {
    std::vector<double> state;
    history_.features(1.0 / config_.m, 1.0 / config_.d,
                      static_cast<double>(t_) / config_.episode_length,
                      static_cast<double>(n_stag_) / config_.episode_length, state);
    return state;
}

std::vector<double> MoeadEnv::reset(Rng& context_rng) {
    run_ = std::make_unique<MoeadRun>(*problem_, config_.moead, context_rng);
    step_rng_ = Rng(context_rng.next_u64());
    t_ = 0;
    n_stag_ = 0;
    history_.clear();
    record_population();
    reward_.start(current_metric());
    ready_ = true;
    return make_state();
}

StepResult MoeadEnv::step(const std::vector<int>& actions) {
    if (!ready_) throw std::logic_error("MoeadEnv: step before reset");
    if (done()) throw std::logic_error("MoeadEnv: step after done");
    check_actions(actions);

    ActionTuple tuple = decode_action(actions);
    if (tuple.adapt_weights) run_->adapt_weights();
    last_stats_ = run_->generation(tuple, step_rng_);

    t_ += 1;
    record_population();
    double metric = current_metric();
    StepResult result;
    result.reward = reward_.step(metric);
    n_stag_ = result.reward > 0.0 ? 0 : n_stag_ + 1;
    result.done = done();
    result.next_state = make_state();
    return result;
}

} // namespace seqdac
