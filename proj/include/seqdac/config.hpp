#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "seqdac/learner.hpp"
#include "seqdac/moead_env.hpp"
#include "seqdac/sigmoid_env.hpp"

namespace seqdac {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat "key = value" text format with '#' comments and an `include <path>`
// directive (paths relative to the including file). Later keys win.
class KeyValueConfig {
public:
    static KeyValueConfig from_file(const std::filesystem::path& path);
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    long get_long(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    void parse(const std::string& text, const std::filesystem::path& dir, int depth);
    std::map<std::string, std::string> entries_;
};

// Everything one training run needs. Defaults reproduce the shared learner
// settings (lr 1e-4, batch 32, gamma 0.99, target 200, clip 10, hidden 64).
struct RunConfig {
    std::string learner = "sadn";         // sadn | vdn | saql | ace
    std::string env = "sigmoid";          // sigmoid | moead
    SigmoidConfig sigmoid;
    MoeadEnvConfig moead;
    std::string agent_order = "identity"; // identity | reverse | comma list
    long total_steps = 200000;
    long eval_interval = 10000;
    int eval_episodes = 20;
    std::vector<uint64_t> seeds = {1};
    LearnerConfig learner_cfg;
    size_t buffer_capacity = 50000;
    long warmup = 1000;
    double eps_start = 1.0;
    double eps_final = 0.05;
    double eps_fraction = 0.10; // anneal over this share of total_steps
    bool trajectory_log = false;

    std::vector<int> resolve_order(int n_agents) const;
    bool lower_metric_is_better() const { return env == "moead"; }
};

RunConfig parse_run_config(const KeyValueConfig& kv);
RunConfig load_run_config(const std::filesystem::path& path);

// Resolved snapshot, parseable by KeyValueConfig again.
std::string run_config_snapshot(const RunConfig& cfg, uint64_t seed);

std::unique_ptr<SeqMmdpEnv> make_env(const RunConfig& cfg);
std::unique_ptr<Learner> make_learner(const RunConfig& cfg, const SeqMmdpEnv& env,
                                      Rng& init_rng);

} // namespace seqdac
