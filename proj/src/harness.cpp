#include "seqdac/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace seqdac {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void mean_std(const std::vector<double>& xs, double& mean, double& stdev) {
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    stdev = std::sqrt(var / static_cast<double>(xs.size()));
}

} // namespace

EvalPoint evaluate_policy(const RunConfig& cfg, Learner& learner, long step,
                          uint64_t eval_seed) {
    std::unique_ptr<SeqMmdpEnv> env = make_env(cfg);
    Rng eval_rng(mix_seed(eval_seed, 0x9d5c));
    Policy greedy = [&](const std::vector<double>& state, std::vector<int>& actions) {
        learner.select_actions(state, 0.0, eval_rng, actions);
    };
    std::vector<double> values;
    values.reserve(cfg.eval_episodes);
    for (int e = 0; e < cfg.eval_episodes; ++e) {
        EpisodeResult r = run_episode(*env, greedy, eval_rng);
        if (cfg.env == "moead")
            values.push_back(static_cast<MoeadEnv&>(*env).current_metric());
        else
            values.push_back(r.total_reward);
    }
    EvalPoint point;
    point.step = step;
    point.episodes = cfg.eval_episodes;
    mean_std(values, point.mean, point.stddev);
    return point;
}

TrainResult train_one(const RunConfig& cfg, uint64_t seed,
                      const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream snap(out_dir / "config.txt");
        snap << run_config_snapshot(cfg, seed);
    }

    Rng init_rng(mix_seed(seed, 1));
    Rng context_rng(mix_seed(seed, 2));
    Rng action_rng(mix_seed(seed, 3));
    Rng sample_rng(mix_seed(seed, 4));

    std::unique_ptr<SeqMmdpEnv> env = make_env(cfg);
    std::unique_ptr<Learner> learner = make_learner(cfg, *env, init_rng);
    ReplayBuffer buffer(cfg.buffer_capacity);
    EpsilonSchedule schedule{cfg.eps_start, cfg.eps_final,
                             std::max<long>(1, static_cast<long>(cfg.total_steps *
                                                                 cfg.eps_fraction))};

    std::ofstream csv(out_dir / "train.csv");
    csv << "# schema: train-v1\n";
    csv << "step,eval_mean,eval_std,episodes\n";

    std::ofstream traj_stream;
    std::unique_ptr<TrajectoryLog> traj;
    if (cfg.trajectory_log) {
        traj_stream.open(out_dir / "trajectory.csv");
        traj = std::make_unique<TrajectoryLog>(traj_stream);
        traj->header(env->n_agents());
    }

    TrainResult result;
    result.run_dir = out_dir;
    auto emit_eval = [&](long step) {
        EvalPoint p = evaluate_policy(cfg, *learner, step, mix_seed(seed, 5000 + step));
        csv << p.step << ',' << fmt(p.mean) << ',' << fmt(p.stddev) << ','
            << p.episodes << "\n";
        result.curve.push_back(p);
    };

    emit_eval(0);
    std::vector<double> state;
    std::vector<int> actions(env->n_agents());
    bool episode_open = false;
    int episode_step = 0;
    for (long step = 1; step <= cfg.total_steps; ++step) {
        if (!episode_open) {
            state = env->reset(context_rng);
            episode_open = true;
            episode_step = 0;
        }
        double eps = schedule.at(step - 1);
        learner->select_actions(state, eps, action_rng, actions);
        StepResult sr = env->step(actions);
        if (traj) traj->row(traj->episode(), episode_step, sr.reward, actions);
        Transition t;
        t.state = std::move(state);
        t.actions = actions;
        t.reward = sr.reward;
        t.next_state = sr.next_state;
        t.done = sr.done;
        buffer.push(std::move(t));
        state = std::move(sr.next_state);
        ++episode_step;
        if (sr.done) {
            episode_open = false;
            if (traj) traj->next_episode();
        }

        if (buffer.size() >= static_cast<size_t>(cfg.warmup)) {
            auto batch = buffer.sample(cfg.learner_cfg.batch_size, sample_rng);
            if (batch) learner->update(*batch);
        }

        if (step % cfg.eval_interval == 0 || step == cfg.total_steps) emit_eval(step);
    }

    result.checkpoint = learner->checkpoint();
    write_file_bytes(out_dir / "checkpoint.bin", result.checkpoint);
    return result;
}

std::vector<TrainResult> train_all(const RunConfig& cfg,
                                   const std::filesystem::path& out_dir) {
    std::vector<TrainResult> results;
    for (uint64_t seed : cfg.seeds) {
        RunConfig one = cfg;
        one.seeds = {seed};
        results.push_back(
            train_one(one, seed, out_dir / ("seed" + std::to_string(seed))));
    }
    return results;
}

namespace {

// last data row of a train.csv
EvalPoint read_final_row(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path.string());
    std::string line, last;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("step,", 0) == 0) continue;
        last = line;
    }
    if (last.empty()) throw std::runtime_error("no data rows in " + csv_path.string());
    EvalPoint p;
    std::istringstream ss(last);
    std::string cell;
    std::getline(ss, cell, ',');
    p.step = std::stol(cell);
    std::getline(ss, cell, ',');
    p.mean = std::stod(cell);
    std::getline(ss, cell, ',');
    p.stddev = std::stod(cell);
    std::getline(ss, cell, ',');
    p.episodes = std::stoi(cell);
    return p;
}

} // namespace

RunSummary summarize_run(const std::filesystem::path& run_dir) {
    RunSummary summary;
    summary.label = run_dir.filename().string();
    if (summary.label.empty()) summary.label = run_dir.parent_path().filename().string();
    bool have_config = false;
    std::vector<std::filesystem::path> seed_dirs;
    for (const auto& entry : std::filesystem::directory_iterator(run_dir))
        if (entry.is_directory() &&
            std::filesystem::exists(entry.path() / "train.csv"))
            seed_dirs.push_back(entry.path());
    if (std::filesystem::exists(run_dir / "train.csv")) seed_dirs.push_back(run_dir);
    if (seed_dirs.empty())
        throw std::runtime_error("no train.csv found under " + run_dir.string());
    std::sort(seed_dirs.begin(), seed_dirs.end());
    for (const auto& dir : seed_dirs) {
        summary.final_values.push_back(read_final_row(dir / "train.csv").mean);
        if (!have_config && std::filesystem::exists(dir / "config.txt")) {
            KeyValueConfig kv = KeyValueConfig::from_file(dir / "config.txt");
            summary.learner = kv.get("learner", "?");
            summary.env = kv.get("env", "?");
            summary.lower_is_better = summary.env == "moead";
            have_config = true;
        }
    }
    mean_std(summary.final_values, summary.mean, summary.stddev);
    return summary;
}

std::vector<RunSummary> compare_runs(const std::vector<std::filesystem::path>& dirs) {
    if (dirs.size() < 2)
        throw std::invalid_argument("compare: need at least two run directories");
    std::vector<RunSummary> summaries;
    for (const auto& dir : dirs) summaries.push_back(summarize_run(dir));
    for (const auto& s : summaries)
        if (s.env != summaries.front().env)
            throw std::runtime_error("compare: mismatched environments (" + s.env +
                                     " vs " + summaries.front().env + ")");
    // competition ranking on the mean; equal means share a rank
    bool lower = summaries.front().lower_is_better;
    for (auto& s : summaries) {
        int rank = 1;
        for (const auto& other : summaries) {
            if (&other == &s) continue;
            bool better = lower ? (other.mean < s.mean) : (other.mean > s.mean);
            if (better) ++rank;
        }
        s.rank = rank;
    }
    return summaries;
}

std::string comparison_table(const std::vector<RunSummary>& summaries) {
    std::ostringstream out;
    out << "run                      learner  seeds  mean          std           rank\n";
    for (const auto& s : summaries) {
        char line[160];
        std::snprintf(line, sizeof line, "%-24s %-8s %5zu  %-13.6g %-13.6g %d\n",
                      s.label.c_str(), s.learner.c_str(), s.final_values.size(),
                      s.mean, s.stddev, s.rank);
        out << line;
    }
    return out.str();
}

std::string comparison_csv(const std::vector<RunSummary>& summaries) {
    std::ostringstream out;
    out << "# schema: compare-v1\n";
    out << "run,learner,env,seeds,mean,std,rank\n";
    for (const auto& s : summaries)
        out << s.label << ',' << s.learner << ',' << s.env << ','
            << s.final_values.size() << ',' << fmt(s.mean) << ',' << fmt(s.stddev)
            << ',' << s.rank << "\n";
    return out.str();
}

std::string eval_checkpoint_csv(const RunConfig& cfg,
                                std::span<const uint8_t> checkpoint_bytes,
                                int episodes, uint64_t seed) {
    std::unique_ptr<SeqMmdpEnv> env = make_env(cfg);
    detail::UnpackedCheckpoint meta = detail::unpack_learner_checkpoint(checkpoint_bytes);
    if (meta.state_dim != env->state_dim() || meta.action_sizes != env->action_sizes())
        throw std::runtime_error(
            "eval: checkpoint/env shape mismatch (checkpoint state_dim=" +
            std::to_string(meta.state_dim) + " actions=" +
            std::to_string(meta.action_sizes.size()) + ", env state_dim=" +
            std::to_string(env->state_dim()) + " actions=" +
            std::to_string(env->action_sizes().size()) + ")");
    std::unique_ptr<Learner> learner =
        load_learner_checkpoint(checkpoint_bytes, cfg.learner_cfg);

    bool moead = cfg.env == "moead";
    std::ostringstream out;
    out << "# schema: " << (moead ? "eval-moead-v1" : "eval-sigmoid-v1") << "\n";
    out << (moead ? "episode,return,final_igd" : "episode,return") << "\n";
    Rng eval_rng(mix_seed(seed, 0x9d5c));
    Policy greedy = [&](const std::vector<double>& state, std::vector<int>& actions) {
        learner->select_actions(state, 0.0, eval_rng, actions);
    };
    std::vector<double> returns, metrics;
    for (int e = 0; e < episodes; ++e) {
        EpisodeResult r = run_episode(*env, greedy, eval_rng);
        returns.push_back(r.total_reward);
        out << e << ',' << fmt(r.total_reward);
        if (moead) {
            double igd_now = static_cast<MoeadEnv&>(*env).current_metric();
            metrics.push_back(igd_now);
            out << ',' << fmt(igd_now);
        }
        out << "\n";
    }
    double rm, rs;
    mean_std(returns, rm, rs);
    out << "mean," << fmt(rm);
    if (moead) {
        double mm, ms;
        mean_std(metrics, mm, ms);
        out << ',' << fmt(mm) << "\nstd," << fmt(rs) << ',' << fmt(ms) << "\n";
    } else {
        out << "\nstd," << fmt(rs) << "\n";
    }
    return out.str();
}

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

} // namespace seqdac
