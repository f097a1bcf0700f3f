#pragma once

#include <utility>
#include <vector>

#include "board.h"
#include "mcts.h"
#include "network.h"
#include "replay.h"

namespace pbtzero {

struct PairingPlan {
    std::vector<std::pair<int, int>> pairs;  // unordered agent-id pairs, a perfect matching
};

// Uniformly random perfect matching over the agent ids. Throws on an odd
// population.
PairingPlan make_pairings(const std::vector<int>& agent_ids, Rng& rng);

// Splits an even total into per-pair counts: the largest equal even share per
// pair, with the shortfall handed out two games at a time by pair index.
std::vector<int> plan_pair_game_counts(int total_games, int num_pairs);

struct GameRecord {
    std::vector<int> moves;
    std::vector<std::vector<float>> pi;  // one distribution per move, over n*n+1
    GameResult result;
    int black_agent = 0;
    int white_agent = 0;
};

// One self-play game; every move is chosen by the mover's evaluator through
// MCTS with root noise. The first temperature_moves moves are sampled from
// the visit distribution, later moves take the argmax.
GameRecord play_selfplay_game(const Evaluator& black, const Evaluator& white, int black_agent,
                              int white_agent, const BoardConfig& board,
                              const SearchConfig& config, Rng& rng);

// n_games color-balanced games between two agents: even game indices give
// agent_a Black, odd give agent_b Black. Per-game seeds derive from the rng
// once up front, so games are independent tasks and the result is identical
// for any thread count.
std::vector<GameRecord> play_pair_games(const Evaluator& eval_a, const Evaluator& eval_b,
                                        int agent_a, int agent_b, int n_games,
                                        const SearchConfig& search, const BoardConfig& board,
                                        Rng& rng, int threads = 1);

// One example per move, from the mover's perspective. For a MultiKomi head
// the outcome is re-scored against every komi in the list; the per-komi
// targets are checked to be non-increasing in komi from Black's view.
std::vector<TrainingExample> to_examples(const GameRecord& record, const BoardConfig& board,
                                         const NetworkConfig& net, int64_t iteration);

}  // namespace pbtzero
