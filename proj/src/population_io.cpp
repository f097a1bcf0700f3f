#include "population_io.h"

#include <filesystem>

#include "weights_io.h"

namespace fs = std::filesystem;

namespace pbtzero {

namespace {
constexpr char kMetaMagic[4] = {'P', 'Z', 'P', 'M'};
constexpr char kReplayMagic[4] = {'P', 'Z', 'R', 'B'};
}  // namespace

std::string iteration_dir(const std::string& run_dir, int64_t iteration) {
    return (fs::path(run_dir) / std::to_string(iteration)).string();
}

void save_population(const PopulationState& state, const BoardConfig& board,
                     const SearchConfig& search, const std::string& dir) {
    fs::create_directories(dir);

    BinWriter w;
    w.bytes(kMetaMagic, 4);
    w.u32(kPopulationFormatVersion);
    w.i64(state.iteration);
    w.u32(board.board_size);
    w.f64(board.komi);
    w.u8(board.superko ? 1 : 0);
    w.u32(search.simulations);
    w.f64(search.c_puct);
    w.f64(search.dirichlet_alpha);
    w.f64(search.dirichlet_epsilon);
    w.u32(search.temperature_moves);
    const auto rng_state = state.master_rng.state();
    for (uint64_t word : rng_state) w.u64(word);
    w.u32(static_cast<uint32_t>(state.last_ranking.size()));
    for (int id : state.last_ranking) w.u32(static_cast<uint32_t>(id));
    w.u32(static_cast<uint32_t>(state.slots.size()));
    for (const auto& slot : state.slots) {
        w.u32(static_cast<uint32_t>(slot.agent_id));
        w.f64(slot.hp.learning_rate);
        w.f64(slot.hp.value_loss_ratio);
        w.f64(slot.hp.l2_coefficient);
        w.u32(static_cast<uint32_t>(slot.lineage.size()));
        for (const auto& ev : slot.lineage) {
            w.i64(ev.iteration);
            w.u8(static_cast<uint8_t>(ev.kind));
            w.u32(static_cast<uint32_t>(ev.source_agent));
            w.f64(ev.lr_factor);
            w.f64(ev.x_factor);
        }
    }
    w.finish();
    w.write_file((fs::path(dir) / "population.meta").string());

    for (const auto& slot : state.slots) {
        save_weights(slot.net,
                     (fs::path(dir) / ("agent_" + std::to_string(slot.agent_id) + ".ckpt"))
                         .string());
    }
}

LoadedPopulation load_population(const std::string& dir) {
    BinReader r = BinReader::from_file((fs::path(dir) / "population.meta").string());
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMetaMagic, 4) != 0)
        throw CheckpointError(dir + ": not a population checkpoint");
    const uint32_t version = r.u32();
    if (version != kPopulationFormatVersion)
        throw CheckpointError(dir + ": unsupported population format version " +
                              std::to_string(version) + " (expected " +
                              std::to_string(kPopulationFormatVersion) + ")");

    LoadedPopulation out;
    out.state.iteration = r.i64();
    out.board.board_size = static_cast<int>(r.u32());
    out.board.komi = r.f64();
    out.board.superko = r.u8() != 0;
    out.search.simulations = static_cast<int>(r.u32());
    out.search.c_puct = r.f64();
    out.search.dirichlet_alpha = r.f64();
    out.search.dirichlet_epsilon = r.f64();
    out.search.temperature_moves = static_cast<int>(r.u32());
    std::array<uint64_t, 4> rng_state;
    for (auto& word : rng_state) word = r.u64();
    out.state.master_rng.set_state(rng_state);
    const uint32_t ranking_count = r.u32();
    out.state.last_ranking.resize(ranking_count);
    for (auto& id : out.state.last_ranking) id = static_cast<int>(r.u32());
    const uint32_t slot_count = r.u32();
    for (uint32_t i = 0; i < slot_count; ++i) {
        const int32_t id = static_cast<int32_t>(r.u32());
        Hyperparams hp;
        hp.learning_rate = r.f64();
        hp.value_loss_ratio = r.f64();
        hp.l2_coefficient = r.f64();
        const uint32_t events = r.u32();
        std::vector<LineageEvent> lineage(events);
        for (auto& ev : lineage) {
            ev.iteration = r.i64();
            ev.kind = static_cast<LineageEvent::Kind>(r.u8());
            ev.source_agent = static_cast<int32_t>(r.u32());
            ev.lr_factor = r.f64();
            ev.x_factor = r.f64();
        }
        Network net =
            load_weights((fs::path(dir) / ("agent_" + std::to_string(id) + ".ckpt")).string());
        AgentSlot slot(id, std::move(net), hp);
        slot.lineage = std::move(lineage);
        out.state.slots.push_back(std::move(slot));
    }
    return out;
}

void save_replay_group(const std::vector<TrainingExample>& examples, int64_t iteration,
                       const std::string& path) {
    BinWriter w;
    w.bytes(kReplayMagic, 4);
    w.u32(kReplayFormatVersion);
    w.i64(iteration);
    w.u64(examples.size());
    for (const auto& ex : examples) {
        w.u32(static_cast<uint32_t>(ex.source_agent));
        w.u32(static_cast<uint32_t>(ex.features.size()));
        w.bytes(ex.features.data(), ex.features.size());
        w.u32(static_cast<uint32_t>(ex.pi.size()));
        for (float x : ex.pi) w.f32(x);
        w.u32(static_cast<uint32_t>(ex.z.size()));
        w.bytes(ex.z.data(), ex.z.size());
    }
    w.finish();
    w.write_file(path);
}

std::vector<TrainingExample> load_replay_group(const std::string& path, int64_t expect_iteration) {
    BinReader r = BinReader::from_file(path);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kReplayMagic, 4) != 0)
        throw CheckpointError(path + ": not a replay spill file");
    const uint32_t version = r.u32();
    if (version != kReplayFormatVersion)
        throw CheckpointError(path + ": unsupported replay format version " +
                              std::to_string(version));
    const int64_t iteration = r.i64();
    if (iteration != expect_iteration)
        throw CheckpointError(path + ": holds iteration " + std::to_string(iteration) +
                              ", expected " + std::to_string(expect_iteration));
    const uint64_t count = r.u64();
    std::vector<TrainingExample> out;
    out.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        TrainingExample ex;
        ex.iteration = iteration;
        ex.source_agent = static_cast<int32_t>(r.u32());
        ex.features.resize(r.u32());
        r.bytes(ex.features.data(), ex.features.size());
        ex.pi.resize(r.u32());
        for (auto& x : ex.pi) x = r.f32();
        ex.z.resize(r.u32());
        r.bytes(ex.z.data(), ex.z.size());
        out.push_back(std::move(ex));
    }
    return out;
}

ReplayBuffer load_replay_window(const std::string& run_dir, int64_t iteration, int window) {
    ReplayBuffer buffer(window);
    for (int64_t it = std::max<int64_t>(1, iteration - window + 1); it <= iteration; ++it) {
        const std::string path = (fs::path(iteration_dir(run_dir, it)) / "replay.bin").string();
        if (!fs::exists(path)) {
            throw CheckpointError("cannot resume: missing replay spill " + path);
        }
        buffer.append_iteration(it, load_replay_group(path, it));
    }
    return buffer;
}

std::optional<int64_t> latest_checkpoint_iteration(const std::string& run_dir) {
    if (!fs::is_directory(run_dir)) return std::nullopt;
    std::optional<int64_t> best;
    for (const auto& entry : fs::directory_iterator(run_dir)) {
        if (!entry.is_directory()) continue;
        const std::string name = entry.path().filename().string();
        if (name.empty() || name.find_first_not_of("0123456789") != std::string::npos) continue;
        if (!fs::exists(entry.path() / "population.meta")) continue;
        const int64_t it = std::stoll(name);
        if (!best || it > *best) best = it;
    }
    return best;
}

}  // namespace pbtzero
