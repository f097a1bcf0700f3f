#pragma once

#include <cstdint>
#include <vector>

#include "network.h"
#include "rng.h"

namespace pbtzero {

struct LineageEvent {
    enum class Kind : uint8_t { ReplacedBy = 0, Perturbed = 1 };
    int64_t iteration = 0;
    Kind kind = Kind::ReplacedBy;
    int32_t source_agent = -1;  // ReplacedBy
    double lr_factor = 0.0;     // Perturbed
    double x_factor = 0.0;

    bool operator==(const LineageEvent&) const = default;
};

struct AgentSlot {
    int32_t agent_id = 0;
    Network net;
    Hyperparams hp;
    std::vector<LineageEvent> lineage;  // append-only

    AgentSlot(int32_t id, Network n, Hyperparams h)
        : agent_id(id), net(std::move(n)), hp(h) {}
};

struct PopulationState {
    std::vector<AgentSlot> slots;
    int64_t iteration = 0;
    Rng master_rng;
    std::vector<int> last_ranking;  // agent ids from the latest evaluation, best first

    AgentSlot& slot_by_id(int32_t id);
    const AgentSlot& slot_by_id(int32_t id) const;
    std::vector<int> agent_ids() const;
};

// Guard rails for runaway multiplicative perturbation.
struct HyperparamBounds {
    double lr_min = 1e-6, lr_max = 1.0;
    double x_min = 0.01, x_max = 100.0;
};

inline int truncation_count(int population) { return population / 5; }  // floor(0.2 * P)

// Truncation selection: the bottom floor(0.2*P) agents of the ranking are
// overwritten (weights and hyperparameters) by the top agents one-to-one,
// worst from best, 2nd-worst from 2nd-best, and so on. Returns the replaced
// agent ids; each replaced slot gets a ReplacedBy lineage event stamped with
// state.iteration.
std::vector<int> exploit(PopulationState& state, const std::vector<int>& ranking);

// Multiplies each tunable hyperparameter (learning rate, value loss ratio)
// of every replaced agent by 0.8 or 1.2 independently with probability 1/2,
// then clamps to bounds. Untouched agents are left bit-identical.
void explore(PopulationState& state, const std::vector<int>& replaced_ids,
             const HyperparamBounds& bounds, Rng& rng);

}  // namespace pbtzero
