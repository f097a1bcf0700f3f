#pragma once

#include <optional>
#include <string>
#include <vector>

#include "board.h"

namespace pbtzero {

// FF[4] record of a finished game. Moves use the same indices as GameState;
// passes are written as empty move values.
std::string to_sgf(const BoardConfig& config, const std::vector<int>& moves,
                   const std::optional<GameResult>& result,
                   const std::string& black_name = "", const std::string& white_name = "");

}  // namespace pbtzero
