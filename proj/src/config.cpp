#include "seqdac/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "seqdac/baselines.hpp"
#include "seqdac/sadn.hpp"

namespace seqdac {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    KeyValueConfig kv;
    kv.parse(ss.str(), path.parent_path(), 0);
    return kv;
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
    KeyValueConfig kv;
    kv.parse(text, std::filesystem::current_path(), 0);
    return kv;
}

void KeyValueConfig::parse(const std::string& text, const std::filesystem::path& dir,
                           int depth) {
    if (depth > 8) throw ConfigError("include depth exceeded");
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("include ", 0) == 0) {
            std::filesystem::path inc = dir / trim(line.substr(8));
            std::ifstream f(inc);
            if (!f) throw ConfigError("cannot open include: " + inc.string());
            std::stringstream ss;
            ss << f.rdbuf();
            parse(ss.str(), inc.parent_path(), depth + 1);
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key");
        entries_[key] = value;
    }
}

bool KeyValueConfig::has(const std::string& key) const {
    return entries_.count(key) != 0;
}

std::string KeyValueConfig::get(const std::string& key,
                                const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        return std::stol(it->second);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer");
    }
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number");
    }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "': not a boolean");
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

std::vector<int> RunConfig::resolve_order(int n_agents) const {
    if (agent_order == "identity" || agent_order.empty())
        return identity_order(n_agents);
    if (agent_order == "reverse") return reverse_order(n_agents);
    std::vector<int> order;
    std::istringstream ss(agent_order);
    std::string cell;
    while (std::getline(ss, cell, ',')) order.push_back(std::stoi(trim(cell)));
    if (static_cast<int>(order.size()) != n_agents)
        throw ConfigError("agent_order: expected " + std::to_string(n_agents) +
                          " entries");
    return order;
}

RunConfig parse_run_config(const KeyValueConfig& kv) {
    RunConfig cfg;
    cfg.learner = kv.get("learner", cfg.learner);
    if (cfg.learner != "sadn" && cfg.learner != "vdn" && cfg.learner != "saql" &&
        cfg.learner != "ace")
        throw ConfigError("learner must be one of sadn/vdn/saql/ace");
    cfg.env = kv.get("env", cfg.env);
    if (cfg.env != "sigmoid" && cfg.env != "moead")
        throw ConfigError("env must be sigmoid or moead");

    std::string variant = kv.get("sigmoid.variant", "seq");
    if (variant == "plain") cfg.sigmoid.variant = SigmoidVariant::Plain;
    else if (variant == "seq") cfg.sigmoid.variant = SigmoidVariant::Seq;
    else if (variant == "seq_mask") cfg.sigmoid.variant = SigmoidVariant::SeqMask;
    else if (variant == "seq_robust") cfg.sigmoid.variant = SigmoidVariant::SeqRobust;
    else throw ConfigError("sigmoid.variant must be plain/seq/seq_mask/seq_robust");
    cfg.sigmoid.hyperparams = static_cast<int>(kv.get_long("sigmoid.h", 5));
    cfg.sigmoid.choices = static_cast<int>(kv.get_long("sigmoid.c", 10));
    cfg.sigmoid.horizon = static_cast<int>(kv.get_long("sigmoid.t", 10));
    cfg.sigmoid.robust_n = static_cast<int>(kv.get_long("sigmoid.robust_n", 1));

    cfg.moead.problem = kv.get("moead.problem", "DTLZ2");
    cfg.moead.m = static_cast<int>(kv.get_long("moead.m", 3));
    cfg.moead.d = static_cast<int>(kv.get_long("moead.d", 6));
    cfg.moead.population = static_cast<int>(kv.get_long("moead.n", 100));
    cfg.moead.episode_length = static_cast<int>(kv.get_long("moead.t_episode", 50));

    cfg.agent_order = kv.get("agent_order", cfg.agent_order);
    cfg.total_steps = kv.get_long("total_steps", cfg.total_steps);
    cfg.eval_interval = kv.get_long("eval_interval", cfg.eval_interval);
    cfg.eval_episodes = static_cast<int>(kv.get_long("eval_episodes", cfg.eval_episodes));
    if (cfg.total_steps < 0 || cfg.eval_interval <= 0 || cfg.eval_episodes <= 0)
        throw ConfigError("step/eval settings must be positive");

    if (kv.has("seeds")) {
        cfg.seeds.clear();
        std::istringstream ss(kv.get("seeds", ""));
        std::string cell;
        while (std::getline(ss, cell, ','))
            cfg.seeds.push_back(std::stoull(trim(cell)));
        if (cfg.seeds.empty()) throw ConfigError("seeds: empty list");
    }

    cfg.learner_cfg.hidden = static_cast<int>(kv.get_long("hidden", 64));
    cfg.learner_cfg.lr = kv.get_double("lr", 1e-4);
    cfg.learner_cfg.batch_size = static_cast<int>(kv.get_long("batch_size", 32));
    cfg.learner_cfg.gamma = kv.get_double("gamma", 0.99);
    cfg.learner_cfg.target_interval =
        static_cast<int>(kv.get_long("target_interval", 200));
    cfg.learner_cfg.grad_clip = kv.get_double("grad_clip", 10.0);

    cfg.buffer_capacity = static_cast<size_t>(kv.get_long("buffer_capacity", 50000));
    cfg.warmup = kv.get_long("warmup", 1000);
    cfg.eps_start = kv.get_double("eps_start", 1.0);
    cfg.eps_final = kv.get_double("eps_final", 0.05);
    cfg.eps_fraction = kv.get_double("eps_fraction", 0.10);
    cfg.trajectory_log = kv.get_bool("trajectory_log", false);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(KeyValueConfig::from_file(path));
}

std::string run_config_snapshot(const RunConfig& cfg, uint64_t seed) {
    std::ostringstream out;
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "# schema: runconfig-v1\n";
    out << "learner = " << cfg.learner << "\n";
    out << "env = " << cfg.env << "\n";
    if (cfg.env == "sigmoid") {
        const char* names[] = {"plain", "seq", "seq_mask", "seq_robust"};
        out << "sigmoid.variant = " << names[static_cast<int>(cfg.sigmoid.variant)]
            << "\n";
        out << "sigmoid.h = " << cfg.sigmoid.hyperparams << "\n";
        out << "sigmoid.c = " << cfg.sigmoid.choices << "\n";
        out << "sigmoid.t = " << cfg.sigmoid.horizon << "\n";
        if (cfg.sigmoid.variant == SigmoidVariant::SeqRobust)
            out << "sigmoid.robust_n = " << cfg.sigmoid.robust_n << "\n";
    } else {
        out << "moead.problem = " << cfg.moead.problem << "\n";
        out << "moead.m = " << cfg.moead.m << "\n";
        out << "moead.d = " << cfg.moead.d << "\n";
        out << "moead.n = " << cfg.moead.population << "\n";
        out << "moead.t_episode = " << cfg.moead.episode_length << "\n";
    }
    out << "agent_order = " << cfg.agent_order << "\n";
    out << "total_steps = " << cfg.total_steps << "\n";
    out << "eval_interval = " << cfg.eval_interval << "\n";
    out << "eval_episodes = " << cfg.eval_episodes << "\n";
    out << "seeds = " << seed << "\n";
    out << "hidden = " << cfg.learner_cfg.hidden << "\n";
    out << "lr = " << num(cfg.learner_cfg.lr) << "\n";
    out << "batch_size = " << cfg.learner_cfg.batch_size << "\n";
    out << "gamma = " << num(cfg.learner_cfg.gamma) << "\n";
    out << "target_interval = " << cfg.learner_cfg.target_interval << "\n";
    out << "grad_clip = " << num(cfg.learner_cfg.grad_clip) << "\n";
    out << "buffer_capacity = " << cfg.buffer_capacity << "\n";
    out << "warmup = " << cfg.warmup << "\n";
    out << "eps_start = " << num(cfg.eps_start) << "\n";
    out << "eps_final = " << num(cfg.eps_final) << "\n";
    out << "eps_fraction = " << num(cfg.eps_fraction) << "\n";
    out << "trajectory_log = " << (cfg.trajectory_log ? "true" : "false") << "\n";
    return out.str();
}

std::unique_ptr<SeqMmdpEnv> make_env(const RunConfig& cfg) {
    if (cfg.env == "sigmoid") return std::make_unique<SigmoidEnv>(cfg.sigmoid);
    return std::make_unique<MoeadEnv>(cfg.moead);
}

std::unique_ptr<Learner> make_learner(const RunConfig& cfg, const SeqMmdpEnv& env,
                                      Rng& init_rng) {
    std::vector<int> order = cfg.resolve_order(env.n_agents());
    if (cfg.learner == "sadn")
        return std::make_unique<SadnLearner>(env.state_dim(), env.action_sizes(),
                                             cfg.learner_cfg, order, init_rng);
    if (cfg.learner == "vdn")
        return std::make_unique<VdnLearner>(env.state_dim(), env.action_sizes(),
                                            cfg.learner_cfg, init_rng);
    if (cfg.learner == "saql")
        return std::make_unique<SaqlLearner>(env.state_dim(), env.action_sizes(),
                                             cfg.learner_cfg, order, init_rng);
    return std::make_unique<AceLearner>(env.state_dim(), env.action_sizes(),
                                        cfg.learner_cfg, order, init_rng);
}

} // namespace seqdac
