#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbtzero {

enum class Color : uint8_t { Empty = 0, Black = 1, White = 2 };

inline Color opponent(Color c) { return c == Color::Black ? Color::White : Color::Black; }

enum class Winner : uint8_t { Black, White, Draw };

constexpr int kMinBoardSize = 2;
constexpr int kMaxBoardSize = 19;

struct BoardConfig {
    int board_size = 9;
    double komi = 7.0;  // points added to White's score
    bool superko = true;  // positional superko

    bool valid() const {
        return board_size >= kMinBoardSize && board_size <= kMaxBoardSize && std::isfinite(komi);
    }
};

// Moves are plain indices: 0..n*n-1 are board points in row-major order,
// n*n is the pass move.
inline int pass_move(int board_size) { return board_size * board_size; }
inline int num_moves(int board_size) { return board_size * board_size + 1; }
inline bool is_pass(int move, int board_size) { return move == pass_move(board_size); }

struct GameResult {
    double black_score = 0.0;  // black area
    double white_score = 0.0;  // white area plus komi
    Winner winner = Winner::Draw;
};

enum class MoveError : uint8_t { None, OutOfBounds, Occupied, Suicide, Superko, GameOver };

const char* move_error_name(MoveError e);

class IllegalMoveError : public std::runtime_error {
public:
    IllegalMoveError(MoveError code, int move)
        : std::runtime_error(std::string("illegal move ") + std::to_string(move) + ": " +
                             move_error_name(code)),
          code_(code) {}
    MoveError code() const { return code_; }

private:
    MoveError code_;
};

/// Immutable Go position. All operations are pure: play() returns a new
/// state and never mutates the receiver, so states can be shared freely
/// across threads.
///
/// Rules: area scoring (stones plus empty regions bordering exactly one
/// color), suicide forbidden, optional positional superko, game ends after
/// two consecutive passes or when the move cap of 2*n^2 is reached, at which
/// point the board is scored as it stands.
class GameState {
public:
    static GameState new_game(const BoardConfig& config);

    const BoardConfig& config() const { return cfg_; }
    int size() const { return cfg_.board_size; }
    Color to_move() const { return to_move_; }
    Color at(int point) const { return board_[point]; }
    int move_count() const { return move_count_; }
    int consecutive_passes() const { return passes_; }
    int move_cap() const { return 2 * cfg_.board_size * cfg_.board_size; }
    bool is_terminal() const { return passes_ >= 2 || move_count_ >= move_cap(); }

    // Zobrist hash of the stone configuration only (superko identity).
    uint64_t position_hash() const { return stone_hash_; }
    // Stone configuration plus side to move; one entry appended per move.
    uint64_t state_hash() const;
    const std::vector<uint64_t>& history_hashes() const { return state_history_; }

    MoveError classify_move(int move) const;
    bool is_legal(int move) const { return classify_move(move) == MoveError::None; }
    std::vector<int> legal_moves() const;

    GameState play(int move) const;
    GameResult score() const;

    std::string to_string() const;

private:
    GameState() = default;

    // Applies a stone placement to board/hash in place; returns Suicide or
    // Superko on failure (board left dirty, caller discards).
    MoveError apply_placement(int move);

    BoardConfig cfg_;
    std::vector<Color> board_;
    Color to_move_ = Color::Black;
    int passes_ = 0;
    int move_count_ = 0;
    uint64_t stone_hash_ = 0;
    std::vector<uint64_t> state_history_;     // state hashes, including initial position
    std::vector<uint64_t> position_history_;  // stone-only hashes seen so far
};

// Feature planes fed to the network, from the side to move's perspective:
// plane 0 own stones, plane 1 opponent stones, plane 2 all-ones when Black
// is to move and all-zeros otherwise. Values are exactly 0 or 1.
constexpr int kFeaturePlanes = 3;

struct FeatureTensor {
    int board_size = 0;
    int planes = 0;
    std::vector<float> data;  // plane-major, planes * n * n
};

FeatureTensor encode_features(const GameState& state);

}  // namespace pbtzero
