#include "seqdac/baselines.hpp"

#include <cmath>
#include <limits>

namespace seqdac {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

int argmax_lowest(const double* values, int n) {
    int best = 0;
    for (int k = 1; k < n; ++k)
        if (values[k] > values[best]) best = k;
    return best;
}

double max_of(const std::vector<double>& v) {
    double best = v[0];
    for (double x : v) best = std::max(best, x);
    return best;
}

} // namespace

// -- VDN ---------------------------------------------------------------------

VdnLearner::VdnLearner(int state_dim, std::vector<int> action_sizes,
                       LearnerConfig cfg, Rng& init_rng)
    : state_dim_(state_dim), action_sizes_(std::move(action_sizes)), cfg_(cfg) {
    int n = static_cast<int>(action_sizes_.size());
    opt_.resize(n);
    grads_.resize(n);
    for (int i = 0; i < n; ++i) {
        nets_.push_back(Mlp::make(state_dim_, cfg_.hidden, action_sizes_[i], init_rng));
        opt_[i].init(nets_[i], cfg_.lr, cfg_.grad_clip);
        grads_[i].resize_like(nets_[i]);
    }
    targets_ = nets_;
}

void VdnLearner::q_values(int agent, const std::vector<double>& state,
                          std::vector<double>& out) const {
    out.resize(action_sizes_[agent]);
    forward(nets_[agent], state, cache_, out.data());
}

double VdnLearner::joint_q(const std::vector<double>& state,
                           const std::vector<int>& actions) const {
    double total = 0.0;
    for (int i = 0; i < n_agents(); ++i) {
        q_values(i, state, out_);
        total += out_[actions[i]];
    }
    return total;
}

double VdnLearner::td_target(const Transition& t) const {
    if (t.done) return t.reward;
    double bootstrap = 0.0;
    for (int i = 0; i < n_agents(); ++i) {
        out_.resize(action_sizes_[i]);
        forward(targets_[i], t.next_state, cache_, out_.data());
        bootstrap += max_of(out_);
    }
    return t.reward + cfg_.gamma * bootstrap;
}

void VdnLearner::select_actions(const std::vector<double>& state, double epsilon,
                                Rng& rng, std::vector<int>& actions) {
    actions.assign(n_agents(), 0);
    for (int i = 0; i < n_agents(); ++i) {
        if (rng.uniform() < epsilon) {
            actions[i] = rng.uniform_int(action_sizes_[i]);
        } else {
            q_values(i, state, out_);
            actions[i] = argmax_lowest(out_.data(), action_sizes_[i]);
        }
    }
}

double VdnLearner::update_loss(const Batch& batch) {
    if (batch.empty()) return 0.0;
    int n = n_agents();
    for (auto& g : grads_) g.clear();
    static thread_local std::vector<MlpCache> caches;
    caches.resize(n);
    std::vector<int> chosen(n);
    double loss = 0.0;
    double inv_b = 1.0 / static_cast<double>(batch.size());

    for (const Transition* tp : batch) {
        const Transition& t = *tp;
        double y = td_target(t);
        double pred = 0.0;
        for (int i = 0; i < n; ++i) {
            out_.resize(action_sizes_[i]);
            forward(nets_[i], t.state, caches[i], out_.data());
            chosen[i] = t.actions[i];
            pred += out_[chosen[i]];
        }
        double residual = pred - y;
        loss += residual * residual * inv_b;
        double g = 2.0 * residual * inv_b;
        for (int i = 0; i < n; ++i) {
            std::pair<int, double> out_grad[1] = {{chosen[i], g}};
            backward_sparse(nets_[i], caches[i], out_grad, grads_[i]);
        }
    }

    if (!std::isfinite(loss)) return kNan;
    for (int i = 0; i < n; ++i)
        if (!grads_[i].all_finite()) return kNan;
    for (int i = 0; i < n; ++i) adam_step(nets_[i], grads_[i], opt_[i]);
    update_count_ += 1;
    refresh_target_if_due();
    return loss;
}

void VdnLearner::refresh_target_if_due() {
    if (cfg_.target_interval > 0 && update_count_ % cfg_.target_interval == 0)
        targets_ = nets_;
}

std::vector<uint8_t> VdnLearner::checkpoint() const {
    std::vector<const Mlp*> nets;
    for (const Mlp& net : nets_) nets.push_back(&net);
    for (const Mlp& net : targets_) nets.push_back(&net);
    return detail::pack_learner_checkpoint(kind(), state_dim_, action_sizes_,
                                           identity_order(n_agents()), nets);
}

std::unique_ptr<VdnLearner> VdnLearner::from_checkpoint(
    const detail::UnpackedCheckpoint& u, const LearnerConfig& cfg) {
    size_t n = u.action_sizes.size();
    if (u.nets.size() != 2 * n)
        throw DecodeError("vdn checkpoint: expected 2n networks");
    Rng scratch(0);
    LearnerConfig net_cfg = cfg;
    net_cfg.hidden = u.nets[0].hidden_dim;
    auto learner =
        std::make_unique<VdnLearner>(u.state_dim, u.action_sizes, net_cfg, scratch);
    for (size_t i = 0; i < n; ++i) {
        if (!learner->nets_[i].same_shape(u.nets[i]))
            throw DecodeError("vdn checkpoint: net shape mismatch");
        learner->nets_[i] = u.nets[i];
        learner->targets_[i] = u.nets[n + i];
    }
    return learner;
}

// -- sequential Q base ---------------------------------------------------------

SeqQLearner::SeqQLearner(int state_dim, std::vector<int> action_sizes,
                         LearnerConfig cfg, std::vector<int> order, Rng& init_rng)
    : wiring_(state_dim, std::move(action_sizes), std::move(order)), cfg_(cfg) {
    int n = wiring_.n_agents();
    opt_.resize(n);
    grads_.resize(n);
    for (int pos = 0; pos < n; ++pos) {
        nets_.push_back(Mlp::make(wiring_.input_dim(pos), cfg_.hidden,
                                  wiring_.output_dim(pos), init_rng));
        opt_[pos].init(nets_[pos], cfg_.lr, cfg_.grad_clip);
        grads_[pos].resize_like(nets_[pos]);
    }
    targets_ = nets_;
}

void SeqQLearner::q_values(int pos, const std::vector<double>& state,
                           const std::vector<int>& joint_action,
                           std::vector<double>& out) const {
    wiring_.assemble(pos, state.data(), joint_action.data(), input_);
    out.resize(wiring_.output_dim(pos));
    forward(nets_[pos], input_, cache_, out.data());
}

void SeqQLearner::target_q_values(int pos, const std::vector<double>& state,
                                  const std::vector<int>& joint_action,
                                  std::vector<double>& out) const {
    wiring_.assemble(pos, state.data(), joint_action.data(), input_);
    out.resize(wiring_.output_dim(pos));
    forward(targets_[pos], input_, cache_, out.data());
}

void SeqQLearner::select_actions(const std::vector<double>& state, double epsilon,
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
        q_values(pos, state, actions, out_);
        actions[agent] = argmax_lowest(out_.data(), n_actions);
    }
}

std::vector<double> SeqQLearner::update_losses(const Batch& batch) {
    int n = wiring_.n_agents();
    std::vector<double> losses(n, 0.0);
    if (batch.empty()) return losses;
    for (auto& g : grads_) g.clear();
    static thread_local std::vector<MlpCache> caches;
    caches.resize(n);
    double inv_b = 1.0 / static_cast<double>(batch.size());

    for (const Transition* tp : batch) {
        const Transition& t = *tp;
        for (int pos = 0; pos < n; ++pos) {
            double y = position_target(pos, t);
            wiring_.assemble(pos, t.state.data(), t.actions.data(), input_);
            out_.resize(wiring_.output_dim(pos));
            forward(nets_[pos], input_, caches[pos], out_.data());
            int a = t.actions[wiring_.agent_at(pos)];
            double residual = out_[a] - y;
            losses[pos] += residual * residual * inv_b;
            std::pair<int, double> out_grad[1] = {{a, 2.0 * residual * inv_b}};
            backward_sparse(nets_[pos], caches[pos], out_grad, grads_[pos]);
        }
    }

    for (int pos = 0; pos < n; ++pos)
        if (!std::isfinite(losses[pos]) || !grads_[pos].all_finite())
            return std::vector<double>(n, kNan);
    for (int pos = 0; pos < n; ++pos) adam_step(nets_[pos], grads_[pos], opt_[pos]);
    update_count_ += 1;
    if (cfg_.target_interval > 0 && update_count_ % cfg_.target_interval == 0)
        targets_ = nets_;
    return losses;
}

bool SeqQLearner::update(const Batch& batch) {
    std::vector<double> losses = update_losses(batch);
    for (double l : losses)
        if (!std::isfinite(l)) return false;
    return true;
}

std::vector<uint8_t> SeqQLearner::checkpoint() const {
    std::vector<const Mlp*> nets;
    for (const Mlp& net : nets_) nets.push_back(&net);
    for (const Mlp& net : targets_) nets.push_back(&net);
    return detail::pack_learner_checkpoint(kind(), wiring_.state_dim(),
                                           wiring_.action_sizes(), wiring_.order(),
                                           nets);
}

void SeqQLearner::load_nets(const detail::UnpackedCheckpoint& u) {
    size_t n = u.action_sizes.size();
    if (u.nets.size() != 2 * n)
        throw DecodeError("sequential Q checkpoint: expected 2n networks");
    for (size_t pos = 0; pos < n; ++pos) {
        if (!nets_[pos].same_shape(u.nets[pos]))
            throw DecodeError("sequential Q checkpoint: net shape mismatch");
        nets_[pos] = u.nets[pos];
        targets_[pos] = u.nets[n + pos];
    }
}

// -- SAQL ----------------------------------------------------------------------

double SaqlLearner::position_target(int pos, const Transition& t) {
    if (t.done) return t.reward;
    // Greedy next-state prefix with the current nets, then bootstrap from
    // this position's target net.
    scratch_actions_.assign(n_agents(), 0);
    for (int p = 0; p < pos; ++p) {
        q_values(p, t.next_state, scratch_actions_, out_);
        scratch_actions_[wiring_.agent_at(p)] =
            argmax_lowest(out_.data(), static_cast<int>(out_.size()));
    }
    target_q_values(pos, t.next_state, scratch_actions_, out_);
    return t.reward + cfg_.gamma * max_of(out_);
}

std::unique_ptr<SaqlLearner> SaqlLearner::from_checkpoint(
    const detail::UnpackedCheckpoint& u, const LearnerConfig& cfg) {
    Rng scratch(0);
    LearnerConfig net_cfg = cfg;
    net_cfg.hidden = u.nets.empty() ? cfg.hidden : u.nets[0].hidden_dim;
    auto learner = std::make_unique<SaqlLearner>(u.state_dim, u.action_sizes, net_cfg,
                                                 u.order, scratch);
    learner->load_nets(u);
    return learner;
}

// -- ACE -----------------------------------------------------------------------

double AceLearner::position_target(int pos, const Transition& t) {
    int n = n_agents();
    if (pos == n - 1) {
        if (t.done) return t.reward;
        scratch_actions_.assign(n, 0);
        target_q_values(0, t.next_state, scratch_actions_, out_);
        return t.reward + cfg_.gamma * max_of(out_);
    }
    // Intra-step link: next position's target maximum at the same state,
    // conditioned on the observed actions up to and including this position.
    target_q_values(pos + 1, t.state, t.actions, out_);
    return max_of(out_);
}

std::unique_ptr<AceLearner> AceLearner::from_checkpoint(
    const detail::UnpackedCheckpoint& u, const LearnerConfig& cfg) {
    Rng scratch(0);
    LearnerConfig net_cfg = cfg;
    net_cfg.hidden = u.nets.empty() ? cfg.hidden : u.nets[0].hidden_dim;
    auto learner = std::make_unique<AceLearner>(u.state_dim, u.action_sizes, net_cfg,
                                                u.order, scratch);
    learner->load_nets(u);
    return learner;
}

} // namespace seqdac
