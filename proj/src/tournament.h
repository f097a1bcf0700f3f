#pragma once

#include <vector>

#include "board.h"
#include "mcts.h"

namespace pbtzero {

/// Move selection policy for tournament and match play.
class Player {
public:
    virtual ~Player() = default;
    virtual int select_move(const GameState& state, Rng& rng) const = 0;
};

/// MCTS player: root noise off, argmax move selection. The first
/// opening_temperature_moves moves are sampled from the visit distribution
/// instead, which gives match play game variety without changing how either
/// side is searched.
class MctsPlayer : public Player {
public:
    MctsPlayer(const Evaluator& evaluator, SearchConfig config, int opening_temperature_moves = 0)
        : evaluator_(evaluator), config_(config), opening_moves_(opening_temperature_moves) {
        config_.dirichlet_epsilon = 0.0;
        config_.temperature_moves = 0;
    }
    int select_move(const GameState& state, Rng& rng) const override;

private:
    const Evaluator& evaluator_;
    SearchConfig config_;
    int opening_moves_;
};

/// Uniform choice over legal moves except the pass, which is only taken when
/// nothing else is legal. Used as the weakest reference opponent.
class RandomPlayer : public Player {
public:
    int select_move(const GameState& state, Rng& rng) const override;
};

Winner play_game(const Player& black, const Player& white, const BoardConfig& board, Rng& rng);

struct PairCell {
    int wins = 0;
    int draws = 0;
    int losses = 0;
};

struct TournamentResult {
    std::vector<int> agent_ids;      // row/column order
    int games_per_pairing = 0;
    std::vector<PairCell> matrix;    // P*P, row agent vs column agent
    std::vector<double> win_rate;    // per agent: (wins + draws/2) / games
    std::vector<int> ranking;        // agent ids, best first

    const PairCell& cell(int row, int col) const {
        return matrix[row * agent_ids.size() + col];
    }
};

// Round-robin among the population: every unordered pair plays
// games_per_pairing games with colors split evenly. Evaluation games use
// argmax selection with noise off, so they are deterministic and measure the
// networks rather than exploration. Draws count as half a win.
TournamentResult run_round_robin(const std::vector<const Evaluator*>& agents,
                                 const std::vector<int>& agent_ids,
                                 const SearchConfig& search_config, const BoardConfig& board,
                                 int games_per_pairing = 6, int threads = 1);

// Descending win rate; ties broken by head-to-head score among the tied
// agents, then by lower agent id.
std::vector<int> rank_agents(const TournamentResult& result);

struct MatchOptions {
    int games = 100;  // even; colors split equally
    int opening_temperature_moves = 4;
    uint64_t seed = 1;
    int threads = 1;
};

struct MatchOutcome {
    int wins_a = 0;
    int draws = 0;
    int wins_b = 0;
    double score_a() const { return (wins_a + 0.5 * draws) / (wins_a + draws + wins_b); }
};

// Color-balanced head-to-head match: even game indices give side A Black.
MatchOutcome play_match(const Player& a, const Player& b, const BoardConfig& board,
                        const MatchOptions& options);

}  // namespace pbtzero
