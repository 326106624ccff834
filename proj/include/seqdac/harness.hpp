#pragma once

#include <filesystem>

#include "seqdac/config.hpp"
#include "seqdac/episode.hpp"

namespace seqdac {

struct EvalPoint {
    long step = 0;
    double mean = 0.0;   // mean return, or mean final IGD for the moead env
    double stddev = 0.0; // population std over eval episodes
    int episodes = 0;
};

// Greedy-policy evaluation on freshly sampled instances. The learner is not
// updated and nothing is written to any buffer.
EvalPoint evaluate_policy(const RunConfig& cfg, Learner& learner, long step,
                          uint64_t eval_seed);

struct TrainResult {
    std::vector<EvalPoint> curve;
    std::filesystem::path run_dir;
    std::vector<uint8_t> checkpoint;
};

// Trains one seed: writes config snapshot, train.csv (one row per eval) and
// the final checkpoint into out_dir. Fully deterministic in (cfg, seed).
TrainResult train_one(const RunConfig& cfg, uint64_t seed,
                      const std::filesystem::path& out_dir);

// Runs every seed of the config under out_dir/seed<k>/.
std::vector<TrainResult> train_all(const RunConfig& cfg,
                                   const std::filesystem::path& out_dir);

// Per-run aggregate over the seeds found in a run directory.
struct RunSummary {
    std::string label;
    std::string learner;
    std::string env;
    bool lower_is_better = false;
    std::vector<double> final_values; // last eval row per seed
    double mean = 0.0;
    double stddev = 0.0;
    int rank = 0;
};

RunSummary summarize_run(const std::filesystem::path& run_dir);

// Ranks the runs (ties share the better rank) and renders the comparison;
// every run must use the same env kind.
std::vector<RunSummary> compare_runs(const std::vector<std::filesystem::path>& dirs);
std::string comparison_table(const std::vector<RunSummary>& summaries);
std::string comparison_csv(const std::vector<RunSummary>& summaries);

// eval subcommand core: greedy episodes from a checkpoint, one CSV row per
// episode plus an aggregate row.
std::string eval_checkpoint_csv(const RunConfig& cfg,
                                std::span<const uint8_t> checkpoint_bytes,
                                int episodes, uint64_t seed);

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const uint8_t> bytes);

} // namespace seqdac
