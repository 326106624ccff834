#include "seqdac/sadn.hpp"

#include <cmath>
#include <limits>

namespace seqdac {

namespace {

int argmax_lowest(const double* values, int n) {
    int best = 0;
    for (int k = 1; k < n; ++k)
        if (values[k] > values[best]) best = k;
    return best;
}

} // namespace

SadnLearner::SadnLearner(int state_dim, std::vector<int> action_sizes,
                         LearnerConfig cfg, std::vector<int> order, Rng& init_rng)
    : wiring_(state_dim, std::move(action_sizes), std::move(order)), cfg_(cfg) {
    int n = wiring_.n_agents();
    adv_nets_.reserve(n);
    adv_opt_.resize(n);
    adv_grads_.resize(n);
    for (int pos = 0; pos < n; ++pos) {
        adv_nets_.push_back(Mlp::make(wiring_.input_dim(pos), cfg_.hidden,
                                      wiring_.output_dim(pos), init_rng));
        adv_opt_[pos].init(adv_nets_[pos], cfg_.lr, cfg_.grad_clip);
        adv_grads_[pos].resize_like(adv_nets_[pos]);
    }
    value_net_ = Mlp::make(wiring_.state_dim(), cfg_.hidden, 1, init_rng);
    target_value_net_ = value_net_;
    value_opt_.init(value_net_, cfg_.lr, cfg_.grad_clip);
    value_grads_.resize_like(value_net_);
}

void SadnLearner::select_actions(const std::vector<double>& state, double epsilon,
                                 Rng& rng, std::vector<int>& actions) {
    int n = wiring_.n_agents();
    actions.assign(n, 0);
    for (int pos = 0; pos < n; ++pos) {
        int agent = wiring_.agent_at(pos);
        int n_actions = wiring_.output_dim(pos);
        if (rng.uniform() < epsilon) {
            actions[agent] = rng.uniform_int(n_actions);
            continue;
        }
        wiring_.assemble(pos, state.data(), actions.data(), input_);
        out_.resize(n_actions);
        forward(adv_nets_[pos], input_, cache_, out_.data());
        actions[agent] = argmax_lowest(out_.data(), n_actions);
    }
}

void SadnLearner::advantages(int pos, const std::vector<double>& state,
                             const std::vector<int>& joint_action,
                             std::vector<double>& out) const {
    wiring_.assemble(pos, state.data(), joint_action.data(), input_);
    out.resize(wiring_.output_dim(pos));
    forward(adv_nets_[pos], input_, cache_, out.data());
    double top = out[argmax_lowest(out.data(), static_cast<int>(out.size()))];
    for (double& v : out) v -= top;
}

double SadnLearner::global_advantage(const std::vector<double>& state,
                                     const std::vector<int>& joint_action) const {
    double total = 0.0;
    std::vector<double> adv;
    for (int pos = 0; pos < wiring_.n_agents(); ++pos) {
        advantages(pos, state, joint_action, adv);
        total += adv[joint_action[wiring_.agent_at(pos)]];
    }
    return total;
}

double SadnLearner::value(const std::vector<double>& state) const {
    double v;
    forward(value_net_, state, cache_, &v);
    return v;
}

double SadnLearner::target_value(const std::vector<double>& state) const {
    double v;
    forward(target_value_net_, state, cache_, &v);
    return v;
}

std::vector<double> SadnLearner::td_targets(const Batch& batch) const {
    std::vector<double> deltas(batch.size());
    for (size_t b = 0; b < batch.size(); ++b) {
        const Transition& t = *batch[b];
        double bootstrap = t.done ? 0.0 : cfg_.gamma * target_value(t.next_state);
        deltas[b] = t.reward + bootstrap - value(t.state);
    }
    return deltas;
}

double SadnLearner::update_advantage(const Batch& batch) {
    if (batch.empty()) return 0.0;
    std::vector<double> deltas = td_targets(batch);
    for (double d : deltas)
        if (!std::isfinite(d)) return std::numeric_limits<double>::quiet_NaN();

    int n = wiring_.n_agents();
    for (auto& g : adv_grads_) g.clear();
    static thread_local std::vector<MlpCache> caches;
    caches.resize(n);
    std::vector<int> chosen(n), top(n);
    double loss = 0.0;
    double inv_b = 1.0 / static_cast<double>(batch.size());

    for (size_t b = 0; b < batch.size(); ++b) {
        const Transition& t = *batch[b];
        double sum_adv = 0.0;
        for (int pos = 0; pos < n; ++pos) {
            wiring_.assemble(pos, t.state.data(), t.actions.data(), input_);
            out_.resize(wiring_.output_dim(pos));
            forward(adv_nets_[pos], input_, caches[pos], out_.data());
            int k = argmax_lowest(out_.data(), static_cast<int>(out_.size()));
            int a = t.actions[wiring_.agent_at(pos)];
            chosen[pos] = a;
            top[pos] = k;
            sum_adv += out_[a] - out_[k];
        }
        // credit assignment is implicit: one shared residual feeds every head
        double residual = sum_adv - deltas[b];
        loss += residual * residual * inv_b;
        double g = 2.0 * residual * inv_b;
        for (int pos = 0; pos < n; ++pos) {
            // subgradient of out[a] - max(out): zero when a is the argmax
            if (chosen[pos] == top[pos]) continue;
            std::pair<int, double> out_grad[2] = {{chosen[pos], g}, {top[pos], -g}};
            backward_sparse(adv_nets_[pos], caches[pos], out_grad, adv_grads_[pos]);
        }
    }

    if (!std::isfinite(loss)) return std::numeric_limits<double>::quiet_NaN();
    for (int pos = 0; pos < n; ++pos) {
        if (!adv_grads_[pos].all_finite())
            return std::numeric_limits<double>::quiet_NaN();
    }
    for (int pos = 0; pos < n; ++pos)
        adam_step(adv_nets_[pos], adv_grads_[pos], adv_opt_[pos]);
    return loss;
}

double SadnLearner::update_value(const Batch& batch) {
    if (batch.empty()) return 0.0;
    value_grads_.clear();
    double loss = 0.0;
    double inv_b = 1.0 / static_cast<double>(batch.size());
    MlpCache vcache;
    for (const Transition* tp : batch) {
        const Transition& t = *tp;
        double y = t.reward + (t.done ? 0.0 : cfg_.gamma * target_value(t.next_state));
        double v;
        forward(value_net_, t.state, vcache, &v);
        double residual = v - y;
        loss += residual * residual * inv_b;
        std::pair<int, double> out_grad[1] = {{0, 2.0 * residual * inv_b}};
        backward_sparse(value_net_, vcache, out_grad, value_grads_);
    }
    if (!std::isfinite(loss) || !value_grads_.all_finite())
        return std::numeric_limits<double>::quiet_NaN();
    adam_step(value_net_, value_grads_, value_opt_);
    return loss;
}

SadnLearner::Losses SadnLearner::update_losses(const Batch& batch) {
    Losses losses;
    losses.advantage = update_advantage(batch);
    if (!std::isfinite(losses.advantage)) return losses;
    losses.value = update_value(batch);
    if (!std::isfinite(losses.value)) return losses;
    losses.applied = true;
    update_count_ += 1;
    refresh_target_if_due();
    return losses;
}

void SadnLearner::refresh_target_if_due() {
    if (cfg_.target_interval > 0 && update_count_ % cfg_.target_interval == 0)
        target_value_net_ = value_net_;
}

std::vector<uint8_t> SadnLearner::checkpoint() const {
    std::vector<const Mlp*> nets;
    for (const Mlp& net : adv_nets_) nets.push_back(&net);
    nets.push_back(&value_net_);
    nets.push_back(&target_value_net_);
    return detail::pack_learner_checkpoint(kind(), wiring_.state_dim(),
                                           wiring_.action_sizes(), wiring_.order(),
                                           nets);
}

std::unique_ptr<SadnLearner> SadnLearner::from_checkpoint(
    const detail::UnpackedCheckpoint& u, const LearnerConfig& cfg) {
    size_t n = u.action_sizes.size();
    if (u.nets.size() != n + 2)
        throw DecodeError("sadn checkpoint: expected n+2 networks");
    Rng scratch(0);
    LearnerConfig net_cfg = cfg;
    net_cfg.hidden = u.nets[0].hidden_dim;
    auto learner = std::make_unique<SadnLearner>(u.state_dim, u.action_sizes, net_cfg,
                                                 u.order, scratch);
    for (size_t pos = 0; pos < n; ++pos) {
        if (!learner->adv_nets_[pos].same_shape(u.nets[pos]))
            throw DecodeError("sadn checkpoint: advantage net shape mismatch");
        learner->adv_nets_[pos] = u.nets[pos];
    }
    if (!learner->value_net_.same_shape(u.nets[n]) ||
        !learner->target_value_net_.same_shape(u.nets[n + 1]))
        throw DecodeError("sadn checkpoint: value net shape mismatch");
    learner->value_net_ = u.nets[n];
    learner->target_value_net_ = u.nets[n + 1];
    return learner;
}

} // namespace seqdac
