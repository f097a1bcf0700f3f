#include "config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace pbtzero {

const char* run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Pbt: return "pbt";
        case RunMode::Baseline: return "baseline";
        case RunMode::AblationReplaceOnly: return "ablation-replace-only";
        case RunMode::AblationNeither: return "ablation-neither";
    }
    return "unknown";
}

double LrSchedule::rate_at(int iteration) const {
    double rate = steps.front().second;
    for (const auto& [start, r] : steps) {
        if (iteration >= start) rate = r;
    }
    return rate;
}

int TrainConfig::resolved_threads() const {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Hyperparams TrainConfig::initial_hp_for_agent(int index) const {
    if (hp_grid.empty()) return hp;
    return hp_grid[index % hp_grid.size()];
}

const std::vector<ConfigKey>& config_schema() {
    static const std::vector<ConfigKey> schema = {
        {"mode", "enum", "pbt", false,
         "pbt | baseline | ablation-replace-only | ablation-neither (set by the CLI subcommand)"},
        {"population", "int", "16", true, "population size P; even in population modes"},
        {"games_per_iteration", "int", "5000", true,
         "self-play games per iteration, shared by the whole population"},
        {"iterations", "int", "200", true, "training iterations"},
        {"batch_size", "int", "256", false, "optimization batch size"},
        {"steps_per_iteration", "int", "0", false,
         "SGD steps per agent per iteration; 0 = one pass over the fresh examples"},
        {"replay_window", "int", "4", false, "replay buffer window, in iterations"},
        {"eval_games_per_pairing", "int", "6", true,
         "round-robin games per agent pair in the evaluation phase (even)"},
        {"seed", "uint", "1", false, "master seed; runs are reproducible per seed"},
        {"threads", "int", "0", false, "worker threads; 0 = all hardware threads"},
        {"run_dir", "string", "run", false, "output directory (checkpoints, metrics, lineage)"},
        {"sgf_dir", "string", "", false, "if set, finished self-play games are dumped as SGF"},
        {"board.size", "int", "9", true, "board edge length (2..19)"},
        {"board.komi", "number", "7", true, "points added to White; integer komi permits draws"},
        {"board.superko", "bool", "true", false, "positional superko enforcement"},
        {"net.blocks", "int", "3", true, "residual blocks"},
        {"net.filters", "int", "64", true, "conv filters per layer"},
        {"net.value_head", "enum", "single", false, "single | multi (one value output per komi)"},
        {"net.komi_list", "list", "", true,
         "multi head komi values, e.g. 2,3,...,12 or 2..12 (must include board.komi)"},
        {"search.simulations", "int", "64", false, "MCTS simulations per move"},
        {"search.c_puct", "number", "1.5", false, "PUCT exploration constant"},
        {"search.dirichlet_alpha", "number", "auto", false,
         "root noise concentration; auto = 10 / board points"},
        {"search.dirichlet_epsilon", "number", "0.25", false,
         "root noise weight in self-play (evaluation always plays without noise)"},
        {"search.temperature_moves", "int", "auto", false,
         "self-play moves sampled at temperature 1 before argmax; auto = board points / 4"},
        {"hp.learning_rate", "number", "2e-2", true, "initial learning rate"},
        {"hp.value_loss_ratio", "number", "1", true, "initial value loss ratio x"},
        {"hp.l2", "number", "1e-4", true, "L2 regularization coefficient"},
        {"hp.lr_schedule", "schedule", "", true,
         "baseline only: piecewise rates, e.g. 2e-2@1,2e-3@101"},
        {"hp.grid", "grid", "", true,
         "population init grid lr:x;lr:x;... agents take entries round-robin"},
    };
    return schema;
}

std::string config_help_text() {
    std::ostringstream ss;
    ss << "Config keys (file lines or --set key=value):\n";
    for (const auto& k : config_schema()) {
        ss << "  " << k.key;
        for (size_t i = std::strlen(k.key); i < 26; ++i) ss << ' ';
        ss << "[" << k.type << ", default " << (k.default_value[0] ? k.default_value : "none")
           << ", " << (k.reference ? "reference setting" : "implementation default") << "]\n"
           << "      " << k.description << "\n";
    }
    return ss.str();
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

int64_t parse_int(const std::string& v, const std::string& key) {
    try {
        size_t used = 0;
        int64_t out = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

double parse_number(const std::string& v, const std::string& key) {
    try {
        size_t used = 0;
        double out = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(out)) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

// komi lists accept "2,3,4" and the range form "2..12" (step 1)
std::vector<double> parse_komi_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    const size_t dots = v.find("..");
    if (dots != std::string::npos) {
        const double lo = parse_number(trim(v.substr(0, dots)), key);
        const double hi = parse_number(trim(v.substr(dots + 2)), key);
        if (hi < lo) throw ConfigError(key + ": descending range");
        for (double k = lo; k <= hi + 1e-9; k += 1.0) out.push_back(k);
        return out;
    }
    for (const auto& item : split(v, ',')) {
        if (!item.empty()) out.push_back(parse_number(item, key));
    }
    return out;
}

LrSchedule parse_schedule(const std::string& v, const std::string& key) {
    LrSchedule sched;
    for (const auto& item : split(v, ',')) {
        if (item.empty()) continue;
        const size_t at = item.find('@');
        if (at == std::string::npos)
            throw ConfigError(key + ": entries look like rate@start_iteration");
        const double rate = parse_number(trim(item.substr(0, at)), key);
        const int start = static_cast<int>(parse_int(trim(item.substr(at + 1)), key));
        sched.steps.emplace_back(start, rate);
    }
    std::sort(sched.steps.begin(), sched.steps.end());
    if (!sched.steps.empty() && sched.steps.front().first != 1)
        throw ConfigError(key + ": the first entry must start at iteration 1");
    return sched;
}

std::vector<Hyperparams> parse_grid(const std::string& v, const std::string& key, double l2) {
    std::vector<Hyperparams> grid;
    for (const auto& item : split(v, ';')) {
        if (item.empty()) continue;
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw ConfigError(key + ": entries look like lr:value_loss_ratio");
        Hyperparams h;
        h.learning_rate = parse_number(parts[0], key);
        h.value_loss_ratio = parse_number(parts[1], key);
        h.l2_coefficient = l2;
        grid.push_back(h);
    }
    return grid;
}

}  // namespace

TrainConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
    std::map<std::string, std::string> kv;
    auto set_pair = [&](const std::string& line, const std::string& what) {
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(what + " '" + line + "': expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool known = false;
        for (const auto& k : config_schema()) {
            if (key == k.key) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("unknown config key '" + key + "'");
        kv[key] = value;
    };

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        set_pair(line, "config line");
    }
    for (const auto& o : overrides) set_pair(o, "override");

    TrainConfig cfg;
    bool population_set = false;
    std::string dirichlet_alpha = "auto";
    std::string temperature_moves = "auto";

    for (const auto& [key, value] : kv) {
        if (key == "mode") {
            if (value == "pbt")
                cfg.mode = RunMode::Pbt;
            else if (value == "baseline")
                cfg.mode = RunMode::Baseline;
            else if (value == "ablation-replace-only")
                cfg.mode = RunMode::AblationReplaceOnly;
            else if (value == "ablation-neither")
                cfg.mode = RunMode::AblationNeither;
            else
                throw ConfigError("mode: unknown mode '" + value + "'");
        } else if (key == "population") {
            cfg.population = static_cast<int>(parse_int(value, key));
            population_set = true;
        } else if (key == "games_per_iteration") {
            cfg.games_per_iteration = static_cast<int>(parse_int(value, key));
        } else if (key == "iterations") {
            cfg.iterations = static_cast<int>(parse_int(value, key));
        } else if (key == "batch_size") {
            cfg.batch_size = static_cast<int>(parse_int(value, key));
        } else if (key == "steps_per_iteration") {
            cfg.steps_per_iteration = static_cast<int>(parse_int(value, key));
        } else if (key == "replay_window") {
            cfg.replay_window = static_cast<int>(parse_int(value, key));
        } else if (key == "eval_games_per_pairing") {
            cfg.eval_games_per_pairing = static_cast<int>(parse_int(value, key));
        } else if (key == "seed") {
            cfg.seed = static_cast<uint64_t>(parse_int(value, key));
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_int(value, key));
        } else if (key == "run_dir") {
            cfg.run_dir = value;
        } else if (key == "sgf_dir") {
            cfg.sgf_dir = value;
        } else if (key == "board.size") {
            cfg.board.board_size = static_cast<int>(parse_int(value, key));
        } else if (key == "board.komi") {
            cfg.board.komi = parse_number(value, key);
        } else if (key == "board.superko") {
            cfg.board.superko = parse_bool(value, key);
        } else if (key == "net.blocks") {
            cfg.net.residual_blocks = static_cast<int>(parse_int(value, key));
        } else if (key == "net.filters") {
            cfg.net.filters = static_cast<int>(parse_int(value, key));
        } else if (key == "net.value_head") {
            if (value == "single")
                cfg.net.value_head = ValueHeadKind::Single;
            else if (value == "multi")
                cfg.net.value_head = ValueHeadKind::MultiKomi;
            else
                throw ConfigError("net.value_head: expected single or multi");
        } else if (key == "net.komi_list") {
            cfg.net.komi_values = parse_komi_list(value, key);
        } else if (key == "search.simulations") {
            cfg.search.simulations = static_cast<int>(parse_int(value, key));
        } else if (key == "search.c_puct") {
            cfg.search.c_puct = parse_number(value, key);
        } else if (key == "search.dirichlet_alpha") {
            dirichlet_alpha = value;
        } else if (key == "search.dirichlet_epsilon") {
            cfg.search.dirichlet_epsilon = parse_number(value, key);
        } else if (key == "search.temperature_moves") {
            temperature_moves = value;
        } else if (key == "hp.learning_rate") {
            cfg.hp.learning_rate = parse_number(value, key);
        } else if (key == "hp.value_loss_ratio") {
            cfg.hp.value_loss_ratio = parse_number(value, key);
        } else if (key == "hp.l2") {
            cfg.hp.l2_coefficient = parse_number(value, key);
        } else if (key == "hp.lr_schedule") {
            cfg.lr_schedule = parse_schedule(value, key);
        } else if (key == "hp.grid") {
            cfg.hp_grid = parse_grid(value, key, cfg.hp.l2_coefficient);
        }
    }

    // grid entries share hp.l2 even when hp.l2 parses after hp.grid
    for (auto& g : cfg.hp_grid) g.l2_coefficient = cfg.hp.l2_coefficient;

    cfg.net.board_size = cfg.board.board_size;
    cfg.search.dirichlet_alpha = dirichlet_alpha == "auto"
                                     ? default_dirichlet_alpha(cfg.board.board_size)
                                     : parse_number(dirichlet_alpha, "search.dirichlet_alpha");
    cfg.search.temperature_moves =
        temperature_moves == "auto"
            ? default_temperature_moves(cfg.board.board_size)
            : static_cast<int>(parse_int(temperature_moves, "search.temperature_moves"));

    if (cfg.mode == RunMode::Baseline && !population_set) cfg.population = 1;

    // validation
    if (!cfg.board.valid())
        throw ConfigError("board.size must be in " + std::to_string(kMinBoardSize) + ".." +
                          std::to_string(kMaxBoardSize) + " and komi finite");
    if (!cfg.net.valid())
        throw ConfigError("invalid network settings (blocks/filters >= 1; multi head needs a "
                          "strictly increasing net.komi_list)");
    if (!cfg.search.valid()) throw ConfigError("invalid search settings");
    if (cfg.mode == RunMode::Baseline) {
        if (cfg.population != 1) throw ConfigError("baseline mode trains a single agent");
        if (!cfg.hp_grid.empty()) throw ConfigError("hp.grid has no effect in baseline mode");
    } else {
        if (cfg.population < 2 || cfg.population % 2 != 0)
            throw ConfigError("population must be even and >= 2, got " +
                              std::to_string(cfg.population));
        if (!cfg.lr_schedule.empty())
            throw ConfigError("hp.lr_schedule only applies to baseline mode");
    }
    if (cfg.games_per_iteration < 2 || cfg.games_per_iteration % 2 != 0)
        throw ConfigError("games_per_iteration must be even and positive");
    if (cfg.iterations < 0) throw ConfigError("iterations must be >= 0");
    if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (cfg.steps_per_iteration < 0) throw ConfigError("steps_per_iteration must be >= 0");
    if (cfg.replay_window < 1) throw ConfigError("replay_window must be >= 1");
    if (cfg.eval_games_per_pairing < 2 || cfg.eval_games_per_pairing % 2 != 0)
        throw ConfigError("eval_games_per_pairing must be even and positive");
    if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
    if (!cfg.hp.valid()) throw ConfigError("initial hyperparameters must be positive and finite");
    for (const auto& g : cfg.hp_grid) {
        if (!g.valid()) throw ConfigError("hp.grid entries must be positive and finite");
    }
    if (cfg.net.value_head == ValueHeadKind::MultiKomi) {
        bool found = false;
        for (double k : cfg.net.komi_values) {
            if (k == cfg.board.komi) found = true;
        }
        if (!found)
            throw ConfigError("net.komi_list must include board.komi so games can be searched "
                              "at the game komi");
    }
    return cfg;
}

TrainConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides);
}

std::string config_to_text(const TrainConfig& cfg) {
    std::ostringstream ss;
    ss.precision(17);
    ss << "mode = " << run_mode_name(cfg.mode) << "\n";
    ss << "population = " << cfg.population << "\n";
    ss << "games_per_iteration = " << cfg.games_per_iteration << "\n";
    ss << "iterations = " << cfg.iterations << "\n";
    ss << "batch_size = " << cfg.batch_size << "\n";
    ss << "steps_per_iteration = " << cfg.steps_per_iteration << "\n";
    ss << "replay_window = " << cfg.replay_window << "\n";
    ss << "eval_games_per_pairing = " << cfg.eval_games_per_pairing << "\n";
    ss << "seed = " << cfg.seed << "\n";
    ss << "threads = " << cfg.threads << "\n";
    ss << "run_dir = " << cfg.run_dir << "\n";
    if (!cfg.sgf_dir.empty()) ss << "sgf_dir = " << cfg.sgf_dir << "\n";
    ss << "board.size = " << cfg.board.board_size << "\n";
    ss << "board.komi = " << cfg.board.komi << "\n";
    ss << "board.superko = " << (cfg.board.superko ? "true" : "false") << "\n";
    ss << "net.blocks = " << cfg.net.residual_blocks << "\n";
    ss << "net.filters = " << cfg.net.filters << "\n";
    ss << "net.value_head = "
       << (cfg.net.value_head == ValueHeadKind::Single ? "single" : "multi") << "\n";
    if (!cfg.net.komi_values.empty()) {
        ss << "net.komi_list = ";
        for (size_t i = 0; i < cfg.net.komi_values.size(); ++i) {
            if (i) ss << ",";
            ss << cfg.net.komi_values[i];
        }
        ss << "\n";
    }
    ss << "search.simulations = " << cfg.search.simulations << "\n";
    ss << "search.c_puct = " << cfg.search.c_puct << "\n";
    ss << "search.dirichlet_alpha = " << cfg.search.dirichlet_alpha << "\n";
    ss << "search.dirichlet_epsilon = " << cfg.search.dirichlet_epsilon << "\n";
    ss << "search.temperature_moves = " << cfg.search.temperature_moves << "\n";
    ss << "hp.learning_rate = " << cfg.hp.learning_rate << "\n";
    ss << "hp.value_loss_ratio = " << cfg.hp.value_loss_ratio << "\n";
    ss << "hp.l2 = " << cfg.hp.l2_coefficient << "\n";
    if (!cfg.lr_schedule.empty()) {
        ss << "hp.lr_schedule = ";
        for (size_t i = 0; i < cfg.lr_schedule.steps.size(); ++i) {
            if (i) ss << ",";
            ss << cfg.lr_schedule.steps[i].second << "@" << cfg.lr_schedule.steps[i].first;
        }
        ss << "\n";
    }
    if (!cfg.hp_grid.empty()) {
        ss << "hp.grid = ";
        for (size_t i = 0; i < cfg.hp_grid.size(); ++i) {
            if (i) ss << ";";
            ss << cfg.hp_grid[i].learning_rate << ":" << cfg.hp_grid[i].value_loss_ratio;
        }
        ss << "\n";
    }
    return ss.str();
}

}  // namespace pbtzero
