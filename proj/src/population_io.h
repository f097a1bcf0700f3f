#pragma once

#include <optional>
#include <string>

#include "binfile.h"
#include "config.h"
#include "pbt.h"
#include "replay.h"

namespace pbtzero {

constexpr uint32_t kPopulationFormatVersion = 1;
constexpr uint32_t kReplayFormatVersion = 1;

// Checkpoint directory layout, one directory per iteration:
//   <run_dir>/<iteration>/population.meta   iteration counter, rng state,
//                                           hyperparameters, lineage, ranking
//   <run_dir>/<iteration>/agent_<id>.ckpt   weight container per agent
//   <run_dir>/<iteration>/replay.bin        examples generated that iteration
// Loading an iteration restores the replay window from the trailing
// iteration directories.

void save_population(const PopulationState& state, const BoardConfig& board,
                     const SearchConfig& search, const std::string& dir);

struct LoadedPopulation {
    PopulationState state;
    BoardConfig board;
    SearchConfig search;
};

LoadedPopulation load_population(const std::string& dir);

void save_replay_group(const std::vector<TrainingExample>& examples, int64_t iteration,
                       const std::string& path);
std::vector<TrainingExample> load_replay_group(const std::string& path, int64_t expect_iteration);

// Restores the buffer contents for a resume at `iteration`: loads the spill
// files of the last `window` iterations that exist under run_dir.
ReplayBuffer load_replay_window(const std::string& run_dir, int64_t iteration, int window);

std::string iteration_dir(const std::string& run_dir, int64_t iteration);

// Highest iteration with a population.meta under run_dir, if any.
std::optional<int64_t> latest_checkpoint_iteration(const std::string& run_dir);

}  // namespace pbtzero
