#pragma once

#include <string>

#include "network.h"

namespace pbtzero {

// Weight checkpoint container: magic "PZWT", format version, NetworkConfig,
// then the parameter vector as little-endian 32-bit floats, closed by a
// checksum. Parameters are f32-exact in memory, so save/load round-trips are
// lossless in both directions.
constexpr uint32_t kWeightsFormatVersion = 1;

void save_weights(const Network& net, const std::string& path);
Network load_weights(const std::string& path);

}  // namespace pbtzero
