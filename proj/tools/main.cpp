// seqdac command line front end: train / eval / compare / bench.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "seqdac/harness.hpp"
#include "seqdac/indicators.hpp"

namespace fs = std::filesystem;
using namespace seqdac;

namespace {

int cmd_train(const std::string& config_path, const std::string& out_dir,
              long seed_override) {
    RunConfig cfg = load_run_config(config_path);
    if (seed_override >= 0) cfg.seeds = {static_cast<uint64_t>(seed_override)};
    std::vector<TrainResult> results = train_all(cfg, out_dir);
    for (const TrainResult& r : results) {
        const EvalPoint& last = r.curve.back();
        std::cout << r.run_dir.string() << ": step " << last.step << " eval_mean "
                  << last.mean << " (" << last.episodes << " episodes)\n";
    }
    return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& config_path,
             int episodes, uint64_t seed, const std::string& out_path) {
    RunConfig cfg = load_run_config(config_path);
    std::vector<uint8_t> bytes = read_file_bytes(checkpoint_path);
    std::string csv = eval_checkpoint_csv(cfg, bytes, episodes, seed);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << csv;
    }
    return 0;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& csv_path) {
    std::vector<fs::path> paths(dirs.begin(), dirs.end());
    std::vector<RunSummary> summaries = compare_runs(paths);
    std::cout << comparison_table(summaries);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error("cannot write " + csv_path);
        out << comparison_csv(summaries);
    }
    return 0;
}

// quick environment shakeout: seeded reset determinism plus reward stats
// under a random policy
int cmd_bench(const std::string& config_path, uint64_t seed, int episodes) {
    RunConfig cfg = load_run_config(config_path);
    std::unique_ptr<SeqMmdpEnv> env = make_env(cfg);
    std::unique_ptr<SeqMmdpEnv> twin = make_env(cfg);
    Rng rng_a(seed), rng_b(seed);
    std::vector<double> sa = env->reset(rng_a);
    std::vector<double> sb = twin->reset(rng_b);
    if (sa != sb) {
        std::cerr << "bench: reset is not deterministic under a fixed seed\n";
        return 2;
    }
    std::cout << "env " << cfg.env << ": " << env->n_agents() << " agents, state dim "
              << env->state_dim() << "\n";

    Rng context(mix_seed(seed, 2));
    Rng actor(mix_seed(seed, 3));
    Policy random_policy = [&](const std::vector<double>&, std::vector<int>& actions) {
        const auto& sizes = env->action_sizes();
        actions.resize(sizes.size());
        for (size_t i = 0; i < sizes.size(); ++i) actions[i] = actor.uniform_int(sizes[i]);
    };
    double total = 0.0, best = -1e300, worst = 1e300;
    for (int e = 0; e < episodes; ++e) {
        EpisodeResult r = run_episode(*env, random_policy, context);
        total += r.total_reward;
        best = std::max(best, r.total_reward);
        worst = std::min(worst, r.total_reward);
        std::cout << "episode " << e << ": return " << r.total_reward << " (" << r.steps
                  << " steps)";
        if (cfg.env == "moead")
            std::cout << " final_igd " << static_cast<MoeadEnv&>(*env).current_metric();
        std::cout << "\n";
    }
    std::cout << "random policy over " << episodes << " episodes: mean "
              << total / episodes << " min " << worst << " max " << best << "\n";
    return 0;
}

int cmd_dump_front(const std::string& problem, int m, const std::string& out_path) {
    auto front = reference_front(problem, m);
    if (out_path.empty()) {
        write_front_csv(std::cout, problem, m, front);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        write_front_csv(out, problem, m, front);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential multi-agent dynamic algorithm configuration harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "runs/out", checkpoint_path, out_path, csv_path;
    std::string problem = "DTLZ2";
    long seed_override = -1;
    uint64_t seed = 1;
    int episodes = 10, m = 3;
    std::vector<std::string> dirs;

    CLI::App* train = app.add_subcommand("train", "train a learner per the config");
    train->add_option("--config", config_path, "run config file")->required();
    train->add_option("--out", out_dir, "output directory");
    train->add_option("--seed", seed_override, "train a single seed");

    CLI::App* eval = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
    eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
    eval->add_option("--config", config_path, "env config file")->required();
    eval->add_option("--episodes", episodes, "evaluation episodes");
    eval->add_option("--seed", seed, "evaluation seed");
    eval->add_option("--out", out_path, "CSV output path (default stdout)");

    CLI::App* compare = app.add_subcommand("compare", "aggregate runs into a table");
    compare->add_option("dirs", dirs, "run directories")->expected(-2);
    compare->add_option("--csv", csv_path, "also write CSV here");

    CLI::App* bench = app.add_subcommand("bench", "environment micro-tests");
    bench->add_option("--config", config_path, "env config file")->required();
    bench->add_option("--seed", seed, "seed");
    bench->add_option("--episodes", episodes, "random-policy episodes");

    CLI::App* dump = app.add_subcommand("dump-front", "write a reference front CSV");
    dump->add_option("--problem", problem, "problem name")->required();
    dump->add_option("--m", m, "objective count");
    dump->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
        if (train->parsed()) return cmd_train(config_path, out_dir, seed_override);
        if (eval->parsed())
            return cmd_eval(checkpoint_path, config_path, episodes, seed, out_path);
        if (compare->parsed()) return cmd_compare(dirs, csv_path);
        if (bench->parsed()) return cmd_bench(config_path, seed, episodes);
        if (dump->parsed()) return cmd_dump_front(problem, m, out_path);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
