#include "sgf.h"

#include <cmath>
#include <sstream>

namespace pbtzero {

namespace {

std::string sgf_coord(int move, int n) {
    if (is_pass(move, n)) return "";
    const char x = static_cast<char>('a' + move % n);
    const char y = static_cast<char>('a' + move / n);
    return std::string{x, y};
}

std::string trim_number(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

}  // namespace

std::string to_sgf(const BoardConfig& config, const std::vector<int>& moves,
                   const std::optional<GameResult>& result, const std::string& black_name,
                   const std::string& white_name) {
    std::ostringstream ss;
    ss << "(;FF[4]GM[1]SZ[" << config.board_size << "]KM[" << trim_number(config.komi) << "]";
    if (!black_name.empty()) ss << "PB[" << black_name << "]";
    if (!white_name.empty()) ss << "PW[" << white_name << "]";
    if (result) {
        if (result->winner == Winner::Draw) {
            ss << "RE[0]";
        } else if (result->winner == Winner::Black) {
            ss << "RE[B+" << trim_number(result->black_score - result->white_score) << "]";
        } else {
            ss << "RE[W+" << trim_number(result->white_score - result->black_score) << "]";
        }
    }
    Color c = Color::Black;
    for (int m : moves) {
        ss << ";" << (c == Color::Black ? 'B' : 'W') << "[" << sgf_coord(m, config.board_size)
           << "]";
        c = opponent(c);
    }
    ss << ")\n";
    return ss.str();
}

}  // namespace pbtzero
