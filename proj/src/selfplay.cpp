#include "selfplay.h"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pbtzero {

PairingPlan make_pairings(const std::vector<int>& agent_ids, Rng& rng) {
    if (agent_ids.size() % 2 != 0 || agent_ids.empty()) {
        throw std::invalid_argument("pairings need an even, non-empty population");
    }
    std::vector<int> ids = agent_ids;
    for (size_t i = ids.size() - 1; i > 0; --i) {
        const size_t j = rng.next_below(i + 1);
        std::swap(ids[i], ids[j]);
    }
    PairingPlan plan;
    for (size_t i = 0; i < ids.size(); i += 2) {
        plan.pairs.emplace_back(ids[i], ids[i + 1]);
    }
    return plan;
}

std::vector<int> plan_pair_game_counts(int total_games, int num_pairs) {
    if (num_pairs < 1) throw std::invalid_argument("need at least one pair");
    if (total_games < 0 || total_games % 2 != 0) {
        throw std::invalid_argument("total games must be even");
    }
    const int base = (total_games / (2 * num_pairs)) * 2;
    std::vector<int> counts(num_pairs, base);
    int rest = total_games - base * num_pairs;
    for (int p = 0; rest > 0; p = (p + 1) % num_pairs) {
        counts[p] += 2;
        rest -= 2;
    }
    return counts;
}

GameRecord play_selfplay_game(const Evaluator& black, const Evaluator& white, int black_agent,
                              int white_agent, const BoardConfig& board,
                              const SearchConfig& config, Rng& rng) {
    GameRecord rec;
    rec.black_agent = black_agent;
    rec.white_agent = white_agent;
    GameState state = GameState::new_game(board);
    while (!state.is_terminal()) {
        const Evaluator& mover = state.to_move() == Color::Black ? black : white;
        SearchResult sr = search(state, mover, config, &rng);
        int move;
        if (state.move_count() < config.temperature_moves) {
            move = sample_index(sr.pi, rng);
        } else {
            move = sr.chosen_move;
        }
        rec.moves.push_back(move);
        rec.pi.emplace_back(sr.pi.begin(), sr.pi.end());
        state = state.play(move);
    }
    rec.result = state.score();
    return rec;
}

std::vector<GameRecord> play_pair_games(const Evaluator& eval_a, const Evaluator& eval_b,
                                        int agent_a, int agent_b, int n_games,
                                        const SearchConfig& search_cfg, const BoardConfig& board,
                                        Rng& rng, int threads) {
    if (n_games < 0 || n_games % 2 != 0) {
        throw std::invalid_argument("per-pair game count must be even");
    }
    const uint64_t base_seed = rng.next_u64();
    std::vector<GameRecord> records(n_games);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
#endif
    for (int g = 0; g < n_games; ++g) {
        Rng game_rng(mix_seed(base_seed, static_cast<uint64_t>(g)));
        const bool a_is_black = g % 2 == 0;
        const Evaluator& black = a_is_black ? eval_a : eval_b;
        const Evaluator& white = a_is_black ? eval_b : eval_a;
        records[g] = play_selfplay_game(black, white, a_is_black ? agent_a : agent_b,
                                        a_is_black ? agent_b : agent_a, board, search_cfg,
                                        game_rng);
    }
    return records;
}

std::vector<TrainingExample> to_examples(const GameRecord& record, const BoardConfig& board,
                                         const NetworkConfig& net, int64_t iteration) {
    if (record.pi.size() != record.moves.size()) {
        throw std::invalid_argument("incomplete game record: pi count != move count");
    }
    const double black_margin =
        record.result.black_score - (record.result.white_score - board.komi);

    // Outcome for a Black move at a given komi; White moves negate it.
    auto z_black_at = [&](double komi) -> int8_t {
        const double m = black_margin - komi;
        if (m > 0) return 1;
        if (m < 0) return -1;
        return 0;
    };

    std::vector<int8_t> z_black;
    if (net.value_head == ValueHeadKind::Single) {
        z_black.push_back(z_black_at(board.komi));
    } else {
        int8_t prev = 2;
        for (double k : net.komi_values) {
            int8_t zk = z_black_at(k);
            if (prev != 2 && zk > prev) {
                throw std::logic_error("per-komi targets must be non-increasing in komi");
            }
            prev = zk;
            z_black.push_back(zk);
        }
    }

    std::vector<TrainingExample> out;
    out.reserve(record.moves.size());
    GameState state = GameState::new_game(board);
    for (size_t i = 0; i < record.moves.size(); ++i) {
        const bool black_to_move = state.to_move() == Color::Black;
        TrainingExample ex;
        FeatureTensor ft = encode_features(state);
        ex.features.assign(ft.data.begin(), ft.data.end());
        ex.pi = record.pi[i];
        ex.z.resize(z_black.size());
        for (size_t k = 0; k < z_black.size(); ++k) {
            ex.z[k] = black_to_move ? z_black[k] : static_cast<int8_t>(-z_black[k]);
        }
        ex.source_agent = black_to_move ? record.black_agent : record.white_agent;
        ex.iteration = iteration;
        out.push_back(std::move(ex));
        state = state.play(record.moves[i]);
    }
    if (!state.is_terminal()) {
        throw std::invalid_argument("incomplete game record: move list does not end the game");
    }
    return out;
}

}  // namespace pbtzero
