#pragma once

#include "seqdac/mop.hpp"
#include "seqdac/rng.hpp"

namespace seqdac {

// Configurable pieces of one MOEA/D step, one entry per controlling agent.
// The canonical agent order is (neighborhood, operator, F, weights).
struct ActionTuple {
    int neighborhood_size = 20; // one of 15, 20, 25, 30
    int op = 0;                 // 0..3 selecting OP1..OP4
    double scale_f = 0.5;       // DE scaling factor F
    bool adapt_weights = false; // T/N weight adaptation this generation
};

inline constexpr int kNeighborhoodChoices[4] = {15, 20, 25, 30};
inline constexpr double kScaleFChoices[4] = {0.4, 0.5, 0.6, 0.7};

struct MoeadConfig {
    int population = 100;
    int default_neighborhood = 20;
    double de_k = 0.5;            // fixed K for OP3/OP4
    double mutation_eta = 20.0;   // polynomial mutation distribution index
    double archive_ratio = 1.5;   // elite capacity = floor(ratio * N)
    double adapt_fraction = 0.05; // floor(fraction * N) removals/additions
};

// Tchebycheff aggregation g(x | w, z*) = max_i w_i * |f_i - z*_i|.
double tch(std::span<const double> objectives, std::span<const double> weight,
           std::span<const double> ideal);

// Vicinity-distance sparsity: product of the distances to the m nearest
// neighbors of `point` among `others` (self-matches excluded by index).
double vicinity_sparsity(std::span<const double> point,
                         const std::vector<std::vector<double>>& others,
                         int m_nearest, int self_index = -1);

// DE variation: base + scaled parent differences per the selected operator.
// Pure formula; no bounds handling.
std::vector<double> apply_de_operator(int op, std::span<const double> base,
                                      const std::vector<std::vector<double>>& parents,
                                      double scale_f, double k);

// In-place clip to the problem box, then polynomial mutation (rate 1/D).
void repair_and_mutate(std::vector<double>& x, const MopProblem& problem,
                       double eta, Rng& rng);

// Simplex-lattice weight vectors truncated to exactly n by dropping evenly
// spaced lattice entries.
std::vector<std::vector<double>> simplex_lattice_weights(int m, int n);

struct GenerationStats {
    int evaluations = 0;
    int replacements = 0;
    // max over replacements of g(new) - g(old) at the then-current ideal
    // point; strictly negative whenever any replacement happened
    double worst_replacement_delta = -1.0;
};

class MoeadRun {
public:
    MoeadRun(const MopProblem& problem, MoeadConfig config, Rng& rng);

    const MopProblem& problem() const { return *problem_; }
    const MoeadConfig& config() const { return config_; }
    int population_size() const { return static_cast<int>(xs_.size()); }

    const std::vector<double>& solution(int i) const { return xs_[i]; }
    const std::vector<double>& objectives(int i) const { return objs_[i]; }
    const std::vector<std::vector<double>>& all_objectives() const { return objs_; }
    const std::vector<double>& weight(int i) const { return weights_[i]; }
    const std::vector<int>& neighborhood(int i) const { return neighborhoods_[i]; }
    const std::vector<double>& ideal_point() const { return z_star_; }
    int neighborhood_size() const { return neighborhood_size_; }
    long total_evaluations() const { return total_evaluations_; }

    const std::vector<std::vector<double>>& archive_solutions() const {
        return elite_xs_;
    }
    const std::vector<std::vector<double>>& archive_objectives() const {
        return elite_objs_;
    }
    size_t archive_capacity() const;

    void set_neighborhood_size(int size); // rebuilds neighborhoods on change

    // One full generation: N offspring, ideal-point updates, neighborhood
    // replacement, archive maintenance. Exactly N evaluations.
    GenerationStats generation(const ActionTuple& action, Rng& rng);

    // AWA step: drop the floor(0.05N) most crowded subproblems, refill from
    // the elite archive with freshly constructed weights.
    void adapt_weights();

    // test hooks
    void force_solution(int i, std::vector<double> x);

private:
    std::vector<double> make_offspring(int i, const ActionTuple& action, Rng& rng);
    void update_ideal(const std::vector<double>& f);
    void archive_insert(const std::vector<double>& x, const std::vector<double>& f);
    void rebuild_neighborhoods();
    std::vector<double> new_weight_for(const std::vector<double>& f) const;

    const MopProblem* problem_;
    MoeadConfig config_;
    int neighborhood_size_;
    std::vector<std::vector<double>> xs_, objs_;
    std::vector<std::vector<double>> weights_;
    std::vector<std::vector<int>> neighborhoods_;
    std::vector<double> z_star_;
    std::vector<std::vector<double>> elite_xs_, elite_objs_;
    long total_evaluations_ = 0;
};

} // namespace seqdac
