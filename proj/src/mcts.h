#pragma once

#include <memory>
#include <vector>

#include "board.h"
#include "rng.h"

namespace pbtzero {

struct SearchConfig {
    int simulations = 64;
    double c_puct = 1.5;
    double dirichlet_alpha = 0.12;   // self-play root noise concentration
    double dirichlet_epsilon = 0.25; // root prior mixing weight; 0 disables noise
    int temperature_moves = 0;       // moves sampled at temperature 1 by the self-play loop

    bool valid() const {
        return simulations >= 1 && c_puct > 0 && dirichlet_alpha > 0 &&
               dirichlet_epsilon >= 0.0 && dirichlet_epsilon <= 1.0 && temperature_moves >= 0;
    }
};

// Scales the root-noise concentration with the board so the noise mass per
// legal move stays comparable across sizes.
inline double default_dirichlet_alpha(int board_size) {
    return 10.0 / (board_size * board_size);
}
inline int default_temperature_moves(int board_size) { return board_size * board_size / 4; }

/// Position evaluator used by the search. policy is filled over all
/// n*n+1 move indices; value is from the side to move's perspective.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual void evaluate(const GameState& state, std::vector<double>& policy,
                          double& value) const = 0;
};

// Uniform policy, zero value. Handy for tests and as a weakest baseline.
class UniformEvaluator : public Evaluator {
public:
    void evaluate(const GameState& state, std::vector<double>& policy,
                  double& value) const override {
        policy.assign(num_moves(state.size()), 1.0 / num_moves(state.size()));
        value = 0.0;
    }
};

struct SearchResult {
    std::vector<double> pi;         // normalized root visit counts over n*n+1 moves
    std::vector<int> visit_counts;  // same indexing; sums to config.simulations
    int chosen_move = -1;           // argmax of visits, lowest index on ties
    double root_value = 0.0;        // mean backed-up value at the root, in [-1,1]
};

/// Runs `simulations` select-expand-evaluate-backup passes of PUCT search
/// from a non-terminal state. Child selection maximizes
///   Q(s,a) + c_puct * P(s,a) * sqrt(N(s)) / (1 + N(s,a))
/// with unvisited children at Q = 0. Terminal nodes back up the true game
/// result. Root priors are mixed with Dirichlet noise when
/// dirichlet_epsilon > 0 (the only use of rng; with epsilon == 0 the search
/// consumes no randomness and rng may be null).
SearchResult search(const GameState& state, const Evaluator& evaluator, const SearchConfig& config,
                    Rng* rng);

// pi_a proportional to N(a)^(1/temperature); temperature 0 yields the argmax
// one-hot with ties broken by lowest move index.
std::vector<double> policy_target(const std::vector<int>& visit_counts, double temperature);

// Draws an index from a normalized distribution.
int sample_index(const std::vector<double>& distribution, Rng& rng);

}  // namespace pbtzero
