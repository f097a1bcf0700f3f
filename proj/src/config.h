#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "board.h"
#include "mcts.h"
#include "network.h"
#include "pbt.h"

namespace pbtzero {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RunMode : uint8_t { Pbt = 0, Baseline = 1, AblationReplaceOnly = 2, AblationNeither = 3 };

const char* run_mode_name(RunMode mode);

// Piecewise-constant learning rate schedule for baseline runs, e.g.
// "2e-2@1,2e-3@101" switches at iteration 101. Iterations are 1-based.
struct LrSchedule {
    std::vector<std::pair<int, double>> steps;  // (start_iteration, rate), ascending

    bool empty() const { return steps.empty(); }
    double rate_at(int iteration) const;
};

struct TrainConfig {
    RunMode mode = RunMode::Pbt;
    BoardConfig board;
    NetworkConfig net;
    SearchConfig search;

    int population = 16;
    int games_per_iteration = 5000;
    int iterations = 200;
    int batch_size = 256;
    int steps_per_iteration = 0;  // 0 = auto: about one pass over the fresh examples
    int replay_window = 4;
    int eval_games_per_pairing = 6;
    uint64_t seed = 1;
    int threads = 0;  // 0 = all hardware threads
    std::string run_dir = "run";
    std::string sgf_dir;  // empty = no SGF dump

    Hyperparams hp;                   // initial hyperparameters
    LrSchedule lr_schedule;           // baseline mode only
    std::vector<Hyperparams> hp_grid; // population init grid, agents take entries round-robin
    HyperparamBounds bounds;

    int resolved_threads() const;
    int effective_population() const { return mode == RunMode::Baseline ? 1 : population; }
    Hyperparams initial_hp_for_agent(int index) const;
};

// One documented config key. `reference` marks values that follow the
// published training recipe for this scheme; the rest are this
// implementation's defaults.
struct ConfigKey {
    const char* key;
    const char* type;
    const char* default_value;
    bool reference;
    const char* description;
};

const std::vector<ConfigKey>& config_schema();
std::string config_help_text();

// Parses `key = value` lines ('#' starts a comment), then applies overrides
// of the form "key=value" in order. Unknown keys and ill-typed values raise
// ConfigError.
TrainConfig parse_config_text(const std::string& text,
                              const std::vector<std::string>& overrides = {});
TrainConfig load_config_file(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// The resolved configuration, re-emittable as a valid config file.
std::string config_to_text(const TrainConfig& config);

}  // namespace pbtzero
