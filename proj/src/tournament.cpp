#include "tournament.h"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pbtzero {

int MctsPlayer::select_move(const GameState& state, Rng& rng) const {
    SearchResult sr = search(state, evaluator_, config_, nullptr);
    if (state.move_count() < opening_moves_) {
        return sample_index(sr.pi, rng);
    }
    return sr.chosen_move;
}

int RandomPlayer::select_move(const GameState& state, Rng& rng) const {
    const std::vector<int> moves = state.legal_moves();
    if (moves.size() > 1) {
        // legal_moves always lists the pass last
        return moves[rng.next_below(moves.size() - 1)];
    }
    return moves[0];
}

Winner play_game(const Player& black, const Player& white, const BoardConfig& board, Rng& rng) {
    GameState state = GameState::new_game(board);
    while (!state.is_terminal()) {
        const Player& mover = state.to_move() == Color::Black ? black : white;
        state = state.play(mover.select_move(state, rng));
    }
    return state.score().winner;
}

TournamentResult run_round_robin(const std::vector<const Evaluator*>& agents,
                                 const std::vector<int>& agent_ids,
                                 const SearchConfig& search_config, const BoardConfig& board,
                                 int games_per_pairing, int threads) {
    const int p = static_cast<int>(agents.size());
    if (p < 2 || agents.size() != agent_ids.size())
        throw std::invalid_argument("round robin needs at least two agents");
    if (games_per_pairing < 2 || games_per_pairing % 2 != 0)
        throw std::invalid_argument("games_per_pairing must be even and positive");

    TournamentResult result;
    result.agent_ids = agent_ids;
    result.games_per_pairing = games_per_pairing;
    result.matrix.assign(static_cast<size_t>(p) * p, PairCell{});

    struct Task {
        int row, col, game;
    };
    std::vector<Task> tasks;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            for (int g = 0; g < games_per_pairing; ++g) tasks.push_back({i, j, g});
        }
    }
    std::vector<int8_t> outcome(tasks.size());  // +1 row wins, 0 draw, -1 col wins

    std::vector<MctsPlayer> players;
    players.reserve(p);
    for (const Evaluator* e : agents) players.emplace_back(*e, search_config, 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
#endif
    for (size_t t = 0; t < tasks.size(); ++t) {
        const Task& task = tasks[t];
        const bool row_black = task.game % 2 == 0;
        const MctsPlayer& black = players[row_black ? task.row : task.col];
        const MctsPlayer& white = players[row_black ? task.col : task.row];
        Rng rng(mix_seed(0x9047ULL, task.row, task.col, task.game));  // unused by argmax play
        const Winner w = play_game(black, white, board, rng);
        if (w == Winner::Draw)
            outcome[t] = 0;
        else if ((w == Winner::Black) == row_black)
            outcome[t] = 1;
        else
            outcome[t] = -1;
    }

    for (size_t t = 0; t < tasks.size(); ++t) {
        const Task& task = tasks[t];
        PairCell& rc = result.matrix[task.row * p + task.col];
        PairCell& cc = result.matrix[task.col * p + task.row];
        if (outcome[t] == 0) {
            rc.draws++;
            cc.draws++;
        } else if (outcome[t] > 0) {
            rc.wins++;
            cc.losses++;
        } else {
            rc.losses++;
            cc.wins++;
        }
    }

    result.win_rate.resize(p);
    const double games_per_agent = static_cast<double>(games_per_pairing) * (p - 1);
    for (int i = 0; i < p; ++i) {
        double pts = 0.0;
        for (int j = 0; j < p; ++j) {
            if (j == i) continue;
            const PairCell& c = result.cell(i, j);
            pts += c.wins + 0.5 * c.draws;
        }
        result.win_rate[i] = pts / games_per_agent;
    }
    result.ranking = rank_agents(result);
    return result;
}

std::vector<int> rank_agents(const TournamentResult& result) {
    const int p = static_cast<int>(result.agent_ids.size());
    std::vector<int> order(p);
    for (int i = 0; i < p; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (result.win_rate[a] != result.win_rate[b])
            return result.win_rate[a] > result.win_rate[b];
        return false;
    });

    // break ties inside each equal-rate group by head-to-head points, then id
    std::vector<int> ranked;
    ranked.reserve(p);
    size_t start = 0;
    while (start < order.size()) {
        size_t end = start + 1;
        while (end < order.size() &&
               result.win_rate[order[end]] == result.win_rate[order[start]]) {
            ++end;
        }
        std::vector<int> group(order.begin() + start, order.begin() + end);
        if (group.size() > 1) {
            std::vector<double> h2h(p, 0.0);
            for (int a : group) {
                for (int b : group) {
                    if (a == b) continue;
                    const PairCell& c = result.cell(a, b);
                    h2h[a] += c.wins + 0.5 * c.draws;
                }
            }
            std::sort(group.begin(), group.end(), [&](int a, int b) {
                if (h2h[a] != h2h[b]) return h2h[a] > h2h[b];
                return result.agent_ids[a] < result.agent_ids[b];
            });
        }
        for (int g : group) ranked.push_back(g);
        start = end;
    }

    std::vector<int> ids(p);
    for (int i = 0; i < p; ++i) ids[i] = result.agent_ids[ranked[i]];
    return ids;
}

MatchOutcome play_match(const Player& a, const Player& b, const BoardConfig& board,
                        const MatchOptions& options) {
    if (options.games < 2 || options.games % 2 != 0)
        throw std::invalid_argument("match game count must be even and positive");
    std::vector<int8_t> outcome(options.games);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, options.threads))
#endif
    for (int g = 0; g < options.games; ++g) {
        Rng rng(mix_seed(options.seed, 0x6d617463ULL, static_cast<uint64_t>(g)));
        const bool a_black = g % 2 == 0;
        const Winner w = play_game(a_black ? a : b, a_black ? b : a, board, rng);
        if (w == Winner::Draw)
            outcome[g] = 0;
        else if ((w == Winner::Black) == a_black)
            outcome[g] = 1;
        else
            outcome[g] = -1;
    }

    MatchOutcome out;
    for (int8_t o : outcome) {
        if (o > 0)
            out.wins_a++;
        else if (o < 0)
            out.wins_b++;
        else
            out.draws++;
    }
    return out;
}

}  // namespace pbtzero
