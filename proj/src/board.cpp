#include "board.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rng.h"

namespace pbtzero {

const char* move_error_name(MoveError e) {
    switch (e) {
        case MoveError::None: return "none";
        case MoveError::OutOfBounds: return "out_of_bounds";
        case MoveError::Occupied: return "occupied";
        case MoveError::Suicide: return "suicide";
        case MoveError::Superko: return "superko";
        case MoveError::GameOver: return "game_over";
    }
    return "unknown";
}

namespace {

// One shared Zobrist table covers all board sizes; points are addressed on a
// 19x19 grid so smaller boards use a consistent subset.
struct Zobrist {
    std::vector<uint64_t> keys;  // [point19][color-1]
    uint64_t white_to_move;
    Zobrist() {
        uint64_t s = 0x9d3c5a7b1e2f4680ULL;
        keys.resize(kMaxBoardSize * kMaxBoardSize * 2);
        for (auto& k : keys) k = splitmix64(s);
        white_to_move = splitmix64(s);
    }
    uint64_t stone(int x, int y, Color c) const {
        return keys[(y * kMaxBoardSize + x) * 2 + (static_cast<int>(c) - 1)];
    }
};

const Zobrist& zobrist() {
    static const Zobrist z;
    return z;
}

// Scratch buffers for flood fills, reused across calls per thread.
struct Scratch {
    std::vector<int> stack;
    std::vector<uint32_t> mark;
    uint32_t stamp = 0;

    void prepare(int points) {
        if (static_cast<int>(mark.size()) < points) mark.assign(points, 0);
        ++stamp;
        if (stamp == 0) {  // wrapped
            std::fill(mark.begin(), mark.end(), 0);
            stamp = 1;
        }
        stack.clear();
    }
    bool marked(int p) const { return mark[p] == stamp; }
    void set_mark(int p) { mark[p] = stamp; }
};

thread_local Scratch tls_scratch;

struct Neighbors {
    int pts[4];
    int count;
};

inline Neighbors neighbors(int p, int n) {
    Neighbors out;
    out.count = 0;
    const int x = p % n;
    const int y = p / n;
    if (x > 0) out.pts[out.count++] = p - 1;
    if (x + 1 < n) out.pts[out.count++] = p + 1;
    if (y > 0) out.pts[out.count++] = p - n;
    if (y + 1 < n) out.pts[out.count++] = p + n;
    return out;
}

// Flood-fills the group at `start`, appending its stones to `group`.
// Returns true if the group has at least one liberty.
bool collect_group(const std::vector<Color>& board, int n, int start, std::vector<int>& group) {
    const Color color = board[start];
    Scratch& s = tls_scratch;
    s.prepare(n * n);
    group.clear();
    bool liberty = false;
    s.stack.push_back(start);
    s.set_mark(start);
    while (!s.stack.empty()) {
        int p = s.stack.back();
        s.stack.pop_back();
        group.push_back(p);
        Neighbors nb = neighbors(p, n);
        for (int i = 0; i < nb.count; ++i) {
            int q = nb.pts[i];
            if (board[q] == Color::Empty) {
                liberty = true;
            } else if (board[q] == color && !s.marked(q)) {
                s.set_mark(q);
                s.stack.push_back(q);
            }
        }
    }
    return liberty;
}

}  // namespace

GameState GameState::new_game(const BoardConfig& config) {
    if (!config.valid()) {
        throw std::invalid_argument("invalid board config: size " +
                                    std::to_string(config.board_size) + ", komi " +
                                    std::to_string(config.komi));
    }
    GameState s;
    s.cfg_ = config;
    s.board_.assign(config.board_size * config.board_size, Color::Empty);
    s.to_move_ = Color::Black;
    s.passes_ = 0;
    s.move_count_ = 0;
    s.stone_hash_ = 0;
    s.state_history_.push_back(s.state_hash());
    s.position_history_.push_back(0);
    return s;
}

uint64_t GameState::state_hash() const {
    return to_move_ == Color::White ? (stone_hash_ ^ zobrist().white_to_move) : stone_hash_;
}

MoveError GameState::apply_placement(int move) {
    const int n = cfg_.board_size;
    const Color me = to_move_;
    const Color opp = opponent(me);

    board_[move] = me;
    stone_hash_ ^= zobrist().stone(move % n, move / n, me);

    // Remove opponent groups left without liberties.
    std::vector<int> group;
    Neighbors nb = neighbors(move, n);
    for (int i = 0; i < nb.count; ++i) {
        int q = nb.pts[i];
        if (board_[q] != opp) continue;
        if (!collect_group(board_, n, q, group)) {
            for (int p : group) {
                board_[p] = Color::Empty;
                stone_hash_ ^= zobrist().stone(p % n, p / n, opp);
            }
        }
    }

    if (!collect_group(board_, n, move, group)) return MoveError::Suicide;

    if (cfg_.superko) {
        for (uint64_t h : position_history_) {
            if (h == stone_hash_) return MoveError::Superko;
        }
    }
    return MoveError::None;
}

MoveError GameState::classify_move(int move) const {
    if (is_terminal()) return MoveError::GameOver;
    const int n = cfg_.board_size;
    if (move == pass_move(n)) return MoveError::None;
    if (move < 0 || move > pass_move(n)) return MoveError::OutOfBounds;
    if (board_[move] != Color::Empty) return MoveError::Occupied;

    GameState probe = *this;
    return probe.apply_placement(move);
}

std::vector<int> GameState::legal_moves() const {
    if (is_terminal()) throw std::logic_error("legal_moves on a terminal state");
    std::vector<int> out;
    const int n = cfg_.board_size;
    out.reserve(n * n + 1);
    for (int p = 0; p < n * n; ++p) {
        if (classify_move(p) == MoveError::None) out.push_back(p);
    }
    out.push_back(pass_move(n));
    return out;
}

GameState GameState::play(int move) const {
    const MoveError pre = is_terminal() ? MoveError::GameOver
                          : (move < 0 || move > pass_move(cfg_.board_size))
                              ? MoveError::OutOfBounds
                              : MoveError::None;
    if (pre != MoveError::None) throw IllegalMoveError(pre, move);

    GameState next = *this;
    if (is_pass(move, cfg_.board_size)) {
        next.passes_ += 1;
    } else {
        if (board_[move] != Color::Empty) throw IllegalMoveError(MoveError::Occupied, move);
        MoveError err = next.apply_placement(move);
        if (err != MoveError::None) throw IllegalMoveError(err, move);
        next.passes_ = 0;
    }
    next.to_move_ = opponent(to_move_);
    next.move_count_ += 1;
    next.state_history_.push_back(next.state_hash());
    next.position_history_.push_back(next.stone_hash_);
    return next;
}

GameResult GameState::score() const {
    if (!is_terminal()) throw std::logic_error("score on a non-terminal state");
    const int n = cfg_.board_size;
    int black = 0;
    int white = 0;
    for (int p = 0; p < n * n; ++p) {
        if (board_[p] == Color::Black) ++black;
        if (board_[p] == Color::White) ++white;
    }

    // Empty regions: counted for a color iff they border stones of that
    // color only.
    Scratch& s = tls_scratch;
    s.prepare(n * n);
    std::vector<int> region;
    for (int start = 0; start < n * n; ++start) {
        if (board_[start] != Color::Empty || s.marked(start)) continue;
        region.clear();
        bool touches_black = false;
        bool touches_white = false;
        s.set_mark(start);
        region.push_back(start);
        for (size_t i = 0; i < region.size(); ++i) {
            Neighbors nb = neighbors(region[i], n);
            for (int k = 0; k < nb.count; ++k) {
                int q = nb.pts[k];
                if (board_[q] == Color::Empty) {
                    if (!s.marked(q)) {
                        s.set_mark(q);
                        region.push_back(q);
                    }
                } else if (board_[q] == Color::Black) {
                    touches_black = true;
                } else {
                    touches_white = true;
                }
            }
        }
        if (touches_black && !touches_white) black += static_cast<int>(region.size());
        if (touches_white && !touches_black) white += static_cast<int>(region.size());
    }

    GameResult r;
    r.black_score = black;
    r.white_score = white + cfg_.komi;
    if (r.black_score > r.white_score)
        r.winner = Winner::Black;
    else if (r.white_score > r.black_score)
        r.winner = Winner::White;
    else
        r.winner = Winner::Draw;
    return r;
}

std::string GameState::to_string() const {
    const int n = cfg_.board_size;
    std::ostringstream ss;
    for (int y = n - 1; y >= 0; --y) {
        for (int x = 0; x < n; ++x) {
            Color c = board_[y * n + x];
            ss << (c == Color::Empty ? '.' : c == Color::Black ? 'X' : 'O');
            if (x + 1 < n) ss << ' ';
        }
        ss << '\n';
    }
    ss << (to_move_ == Color::Black ? "X" : "O") << " to move\n";
    return ss.str();
}

FeatureTensor encode_features(const GameState& state) {
    const int n = state.size();
    FeatureTensor t;
    t.board_size = n;
    t.planes = kFeaturePlanes;
    t.data.assign(kFeaturePlanes * n * n, 0.0f);
    const Color me = state.to_move();
    for (int p = 0; p < n * n; ++p) {
        Color c = state.at(p);
        if (c == me)
            t.data[p] = 1.0f;
        else if (c != Color::Empty)
            t.data[n * n + p] = 1.0f;
    }
    if (me == Color::Black) {
        std::fill(t.data.begin() + 2 * n * n, t.data.end(), 1.0f);
    }
    return t;
}

}  // namespace pbtzero
