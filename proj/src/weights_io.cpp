#include "weights_io.h"

#include "binfile.h"

namespace pbtzero {

namespace {
constexpr char kMagic[4] = {'P', 'Z', 'W', 'T'};
}

void save_weights(const Network& net, const std::string& path) {
    BinWriter w;
    w.bytes(kMagic, 4);
    w.u32(kWeightsFormatVersion);
    const NetworkConfig& cfg = net.config();
    w.u32(cfg.board_size);
    w.u32(cfg.residual_blocks);
    w.u32(cfg.filters);
    w.u8(static_cast<uint8_t>(cfg.value_head));
    w.u32(static_cast<uint32_t>(cfg.komi_values.size()));
    for (double k : cfg.komi_values) w.f64(k);
    w.u64(net.parameter_count());
    for (double p : net.parameters()) w.f32(static_cast<float>(p));
    w.finish();
    w.write_file(path);
}

Network load_weights(const std::string& path) {
    BinReader r = BinReader::from_file(path);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw CheckpointError(path + ": not a weight checkpoint");
    const uint32_t version = r.u32();
    if (version != kWeightsFormatVersion) {
        throw CheckpointError(path + ": unsupported weight format version " +
                              std::to_string(version) + " (expected " +
                              std::to_string(kWeightsFormatVersion) + ")");
    }
    NetworkConfig cfg;
    cfg.board_size = static_cast<int>(r.u32());
    cfg.residual_blocks = static_cast<int>(r.u32());
    cfg.filters = static_cast<int>(r.u32());
    cfg.value_head = static_cast<ValueHeadKind>(r.u8());
    const uint32_t komi_count = r.u32();
    cfg.komi_values.resize(komi_count);
    for (auto& k : cfg.komi_values) k = r.f64();
    if (!cfg.valid()) throw CheckpointError(path + ": invalid network config");

    Network net(cfg);
    const uint64_t count = r.u64();
    if (count != net.parameter_count())
        throw CheckpointError(path + ": parameter count mismatch");
    std::vector<double> theta(count);
    for (auto& p : theta) p = static_cast<double>(r.f32());
    net.set_parameters(std::move(theta));
    return net;
}

}  // namespace pbtzero
