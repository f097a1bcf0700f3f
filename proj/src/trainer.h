#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.h"
#include "metrics.h"
#include "pbt.h"
#include "population_io.h"
#include "replay.h"

namespace pbtzero {

/// Runs the iteration loop: self-play into the shared replay buffer, one
/// optimization pass per agent on its own hyperparameters, round-robin
/// evaluation, then exploit/explore depending on the mode. Iterations are
/// atomic: any phase failure rolls the population and buffer back to the
/// pre-iteration state before rethrowing.
class Trainer {
public:
    explicit Trainer(const TrainConfig& config);

    // Continues from the newest checkpoint under config.run_dir. The stored
    // board/network/search settings must match the config exactly.
    static Trainer resume(const TrainConfig& config);

    IterationReport run_iteration();

    // Full run: checkpoints every iteration under run_dir/<iteration> and
    // appends to the metrics stream. `log` gets one progress line per
    // iteration.
    void run(std::ostream& log);

    const TrainConfig& config() const { return cfg_; }
    const PopulationState& population() const { return state_; }
    const ReplayBuffer& replay() const { return buffer_; }

private:
    Trainer(const TrainConfig& config, PopulationState state, ReplayBuffer buffer);

    void persist_iteration(const IterationReport& report);

    TrainConfig cfg_;
    PopulationState state_;
    ReplayBuffer buffer_;
};

// Cross-run comparison: every `every` iterations, each run's representative
// agent (the top-ranked agent of that iteration's evaluation; the lone agent
// for baselines) plays a color-balanced match against every other run's.
struct CrossRunTable {
    std::vector<std::string> run_dirs;
    int games_per_matchup = 0;
    struct Row {
        int64_t iteration;
        int run;       // index into run_dirs
        int opponent;  // index into run_dirs
        double win_rate;
    };
    std::vector<Row> rows;

    double min_rate(int64_t iteration, int run) const;
    double avg_rate(int64_t iteration, int run) const;
};

CrossRunTable cross_run_tournament(const std::vector<std::string>& run_dirs, int every,
                                   int games_per_matchup, int opening_temperature_moves,
                                   uint64_t seed, int threads);

// Long rows plus per-run min/avg summary columns.
void write_cross_run_csv(const CrossRunTable& table, const std::string& path);

}  // namespace pbtzero
