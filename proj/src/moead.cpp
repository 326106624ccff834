#include "seqdac/moead.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "seqdac/indicators.hpp"

namespace seqdac {

double tch(std::span<const double> objectives, std::span<const double> weight,
           std::span<const double> ideal) {
    if (objectives.size() != weight.size() || objectives.size() != ideal.size())
        throw std::invalid_argument("tch: dimension mismatch");
    double worst = 0.0;
    for (size_t i = 0; i < objectives.size(); ++i)
        worst = std::max(worst, weight[i] * std::fabs(objectives[i] - ideal[i]));
    return worst;
}

double vicinity_sparsity(std::span<const double> point,
                         const std::vector<std::vector<double>>& others,
                         int m_nearest, int self_index) {
    if (static_cast<int>(others.size()) <= m_nearest + (self_index >= 0 ? 1 : 0))
        throw std::invalid_argument("vicinity_sparsity: too few neighbors");
    std::vector<double> dists;
    dists.reserve(others.size());
    for (size_t p = 0; p < others.size(); ++p) {
        if (static_cast<int>(p) == self_index) continue;
        double d2 = 0.0;
        for (size_t j = 0; j < point.size(); ++j) {
            double diff = point[j] - others[p][j];
            d2 += diff * diff;
        }
        dists.push_back(d2);
    }
    std::partial_sort(dists.begin(), dists.begin() + m_nearest, dists.end());
    double sl = 1.0;
    for (int j = 0; j < m_nearest; ++j) sl *= std::sqrt(dists[j]);
    return sl;
}

std::vector<double> apply_de_operator(int op, std::span<const double> base,
                                      const std::vector<std::vector<double>>& parents,
                                      double scale_f, double k) {
    size_t need = op == 0 ? 2 : op == 1 ? 4 : op == 2 ? 5 : 3;
    if (op < 0 || op > 3) throw std::invalid_argument("apply_de_operator: bad op");
    if (parents.size() < need)
        throw std::invalid_argument("apply_de_operator: not enough parents");
    size_t d = base.size();
    std::vector<double> x(base.begin(), base.end());
    auto add_diff = [&](const std::vector<double>& a, const std::vector<double>& b,
                        double factor) {
        for (size_t i = 0; i < d; ++i) x[i] += factor * (a[i] - b[i]);
    };
    switch (op) {
    case 0: // x + F(r1 - r2)
        add_diff(parents[0], parents[1], scale_f);
        break;
    case 1: // x + F(r1 - r2) + F(r3 - r4)
        add_diff(parents[0], parents[1], scale_f);
        add_diff(parents[2], parents[3], scale_f);
        break;
    case 2: // x + K(x - r1) + F(r2 - r3) + F(r4 - r5)
        for (size_t i = 0; i < d; ++i) x[i] += k * (base[i] - parents[0][i]);
        add_diff(parents[1], parents[2], scale_f);
        add_diff(parents[3], parents[4], scale_f);
        break;
    case 3: // x + K(x - r1) + F(r2 - r3)
        for (size_t i = 0; i < d; ++i) x[i] += k * (base[i] - parents[0][i]);
        add_diff(parents[1], parents[2], scale_f);
        break;
    }
    return x;
}

void repair_and_mutate(std::vector<double>& x, const MopProblem& problem, double eta,
                       Rng& rng) {
    int d = problem.dim();
    for (int i = 0; i < d; ++i)
        x[i] = std::clamp(x[i], problem.lower(i), problem.upper(i));
    double rate = 1.0 / d;
    for (int i = 0; i < d; ++i) {
        if (rng.uniform() >= rate) continue;
        double lo = problem.lower(i), hi = problem.upper(i);
        double span = hi - lo;
        if (span <= 0.0) continue;
        double u = rng.uniform();
        double delta;
        if (u < 0.5) {
            double dl = (x[i] - lo) / span;
            double b = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - dl, eta + 1.0);
            delta = std::pow(b, 1.0 / (eta + 1.0)) - 1.0;
        } else {
            double du = (hi - x[i]) / span;
            double b = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - du, eta + 1.0);
            delta = 1.0 - std::pow(b, 1.0 / (eta + 1.0));
        }
        x[i] = std::clamp(x[i] + delta * span, lo, hi);
    }
}

std::vector<std::vector<double>> simplex_lattice_weights(int m, int n) {
    if (m < 2 || n < m) throw std::invalid_argument("simplex_lattice_weights: bad dims");
    auto count = [m](int h) {
        double c = 1.0;
        for (int i = 1; i <= m - 1; ++i) c = c * (h + i) / i;
        return c;
    };
    int h = 1;
    while (count(h) < n) ++h;

    std::vector<std::vector<double>> lattice;
    std::vector<int> parts(m, 0);
    // enumerate compositions of h into m parts, lexicographically
    std::function<void(int, int)> rec = [&](int level, int rest) {
        if (level == m - 1) {
            parts[level] = rest;
            std::vector<double> w(m);
            for (int i = 0; i < m; ++i) w[i] = static_cast<double>(parts[i]) / h;
            lattice.push_back(std::move(w));
            return;
        }
        for (int v = 0; v <= rest; ++v) {
            parts[level] = v;
            rec(level + 1, rest - v);
        }
    };
    rec(0, h);

    // keep n evenly spaced entries so coverage stays balanced
    size_t total = lattice.size();
    std::vector<std::vector<double>> weights;
    weights.reserve(n);
    for (int i = 0; i < n; ++i) {
        size_t idx = static_cast<size_t>(
            (static_cast<long double>(i) * total) / n);
        weights.push_back(lattice[idx]);
    }
    return weights;
}

// -- MoeadRun -------------------------------------------------------------------

MoeadRun::MoeadRun(const MopProblem& problem, MoeadConfig config, Rng& rng)
    : problem_(&problem),
      config_(config),
      neighborhood_size_(config.default_neighborhood) {
    int n = config_.population;
    int d = problem.dim();
    int m = problem.objectives();
    if (neighborhood_size_ > n) neighborhood_size_ = n;

    weights_ = simplex_lattice_weights(m, n);
    xs_.resize(n);
    objs_.resize(n);
    for (int i = 0; i < n; ++i) {
        xs_[i].resize(d);
        for (int j = 0; j < d; ++j)
            xs_[i][j] = rng.uniform(problem.lower(j), problem.upper(j));
        objs_[i] = problem.evaluate(xs_[i]);
        ++total_evaluations_;
    }
    z_star_.assign(m, std::numeric_limits<double>::infinity());
    for (const auto& f : objs_) update_ideal(f);
    rebuild_neighborhoods();
    for (int i = 0; i < n; ++i) archive_insert(xs_[i], objs_[i]);
}

size_t MoeadRun::archive_capacity() const {
    return static_cast<size_t>(config_.archive_ratio * config_.population);
}

void MoeadRun::set_neighborhood_size(int size) {
    size = std::min(size, population_size());
    if (size == neighborhood_size_) return;
    neighborhood_size_ = size;
    rebuild_neighborhoods();
}

void MoeadRun::rebuild_neighborhoods() {
    int n = population_size();
    neighborhoods_.assign(n, {});
    std::vector<std::pair<double, int>> by_dist(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double d2 = 0.0;
            for (size_t c = 0; c < weights_[i].size(); ++c) {
                double diff = weights_[i][c] - weights_[j][c];
                d2 += diff * diff;
            }
            by_dist[j] = {d2, j};
        }
        std::sort(by_dist.begin(), by_dist.end());
        neighborhoods_[i].reserve(neighborhood_size_);
        for (int t = 0; t < neighborhood_size_; ++t)
            neighborhoods_[i].push_back(by_dist[t].second);
    }
}

void MoeadRun::update_ideal(const std::vector<double>& f) {
    for (size_t j = 0; j < z_star_.size(); ++j)
        z_star_[j] = std::min(z_star_[j], f[j]);
}

std::vector<double> MoeadRun::make_offspring(int i, const ActionTuple& action,
                                             Rng& rng) {
    // five distinct parents from the neighborhood, never the base itself;
    // whole-population fallback when the neighborhood is too small
    const std::vector<int>* pool = &neighborhoods_[i];
    std::vector<int> full;
    int usable = 0;
    for (int idx : *pool)
        if (idx != i) ++usable;
    if (usable < 5) {
        full.resize(population_size());
        for (int v = 0; v < population_size(); ++v) full[v] = v;
        pool = &full;
    }
    std::vector<int> picks;
    picks.reserve(5);
    while (picks.size() < 5) {
        int cand = (*pool)[rng.uniform_int(static_cast<int>(pool->size()))];
        if (cand == i) continue;
        if (std::find(picks.begin(), picks.end(), cand) != picks.end()) continue;
        picks.push_back(cand);
    }
    std::vector<std::vector<double>> parents;
    parents.reserve(5);
    for (int p : picks) parents.push_back(xs_[p]);
    std::vector<double> child =
        apply_de_operator(action.op, xs_[i], parents, action.scale_f, config_.de_k);
    repair_and_mutate(child, *problem_, config_.mutation_eta, rng);
    return child;
}

GenerationStats MoeadRun::generation(const ActionTuple& action, Rng& rng) {
    set_neighborhood_size(action.neighborhood_size);
    GenerationStats stats;
    for (int i = 0; i < population_size(); ++i) {
        std::vector<double> child = make_offspring(i, action, rng);
        std::vector<double> f = problem_->evaluate(child);
        ++total_evaluations_;
        ++stats.evaluations;
        for (double v : f)
            if (!std::isfinite(v))
                throw std::runtime_error("MoeadRun: non-finite objective value");
        update_ideal(f);
        for (int j : neighborhoods_[i]) {
            double g_new = tch(f, weights_[j], z_star_);
            double g_old = tch(objs_[j], weights_[j], z_star_);
            if (g_new < g_old) {
                stats.worst_replacement_delta =
                    std::max(stats.worst_replacement_delta, g_new - g_old);
                xs_[j] = child;
                objs_[j] = f;
                ++stats.replacements;
            }
        }
        archive_insert(child, f);
    }
    return stats;
}

void MoeadRun::archive_insert(const std::vector<double>& x,
                              const std::vector<double>& f) {
    for (const auto& ef : elite_objs_)
        if (dominates(ef, f) || ef == f) return;
    for (size_t p = elite_objs_.size(); p-- > 0;) {
        if (dominates(f, elite_objs_[p])) {
            elite_objs_.erase(elite_objs_.begin() + p);
            elite_xs_.erase(elite_xs_.begin() + p);
        }
    }
    elite_xs_.push_back(x);
    elite_objs_.push_back(f);
    size_t cap = archive_capacity();
    while (elite_objs_.size() > cap) {
        // drop the most crowded member
        int m = problem_->objectives();
        size_t worst = 0;
        double worst_sl = std::numeric_limits<double>::infinity();
        for (size_t p = 0; p < elite_objs_.size(); ++p) {
            double sl = vicinity_sparsity(elite_objs_[p], elite_objs_, m,
                                          static_cast<int>(p));
            if (sl < worst_sl) {
                worst_sl = sl;
                worst = p;
            }
        }
        elite_objs_.erase(elite_objs_.begin() + worst);
        elite_xs_.erase(elite_xs_.begin() + worst);
    }
}

std::vector<double> MoeadRun::new_weight_for(const std::vector<double>& f) const {
    // AWA construction: weight components inversely proportional to the
    // objective gap from the ideal point.
    int m = problem_->objectives();
    std::vector<double> w(m);
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
        w[j] = 1.0 / (f[j] - z_star_[j] + 1e-6);
        total += w[j];
    }
    for (double& v : w) v /= total;
    return w;
}

void MoeadRun::adapt_weights() {
    int n = population_size();
    int m = problem_->objectives();
    int slots = static_cast<int>(config_.adapt_fraction * n);
    if (slots <= 0) return;

    // remove the `slots` most crowded subproblems
    std::vector<std::pair<double, int>> by_sl(n);
    for (int i = 0; i < n; ++i)
        by_sl[i] = {vicinity_sparsity(objs_[i], objs_, m, i), i};
    std::sort(by_sl.begin(), by_sl.end());
    std::vector<int> doomed;
    for (int r = 0; r < slots; ++r) doomed.push_back(by_sl[r].second);
    std::sort(doomed.rbegin(), doomed.rend());
    for (int idx : doomed) {
        xs_.erase(xs_.begin() + idx);
        objs_.erase(objs_.begin() + idx);
        weights_.erase(weights_.begin() + idx);
    }

    // refill from the elite archive, sparsest-first w.r.t. the current
    // population; duplicate the sparsest member if the archive is empty
    for (int r = 0; r < slots; ++r) {
        int pick = -1;
        double best_sl = -1.0;
        for (size_t p = 0; p < elite_objs_.size(); ++p) {
            double sl = vicinity_sparsity(elite_objs_[p], objs_, m, -1);
            if (sl > best_sl) {
                best_sl = sl;
                pick = static_cast<int>(p);
            }
        }
        if (pick >= 0) {
            xs_.push_back(elite_xs_[pick]);
            objs_.push_back(elite_objs_[pick]);
            weights_.push_back(new_weight_for(elite_objs_[pick]));
        } else {
            int fallback = 0;
            double fb_sl = -1.0;
            for (size_t i = 0; i < objs_.size(); ++i) {
                double sl = vicinity_sparsity(objs_[i], objs_, m, static_cast<int>(i));
                if (sl > fb_sl) {
                    fb_sl = sl;
                    fallback = static_cast<int>(i);
                }
            }
            xs_.push_back(xs_[fallback]);
            objs_.push_back(objs_[fallback]);
            weights_.push_back(new_weight_for(objs_[fallback]));
        }
    }
    rebuild_neighborhoods();
}

void MoeadRun::force_solution(int i, std::vector<double> x) {
    objs_[i] = problem_->evaluate(x);
    xs_[i] = std::move(x);
    update_ideal(objs_[i]);
}

} // namespace seqdac
