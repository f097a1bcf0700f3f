#include "pbt.h"

#include <algorithm>
#include <stdexcept>

namespace pbtzero {

AgentSlot& PopulationState::slot_by_id(int32_t id) {
    for (auto& s : slots) {
        if (s.agent_id == id) return s;
    }
    throw std::out_of_range("no agent with id " + std::to_string(id));
}

const AgentSlot& PopulationState::slot_by_id(int32_t id) const {
    for (const auto& s : slots) {
        if (s.agent_id == id) return s;
    }
    throw std::out_of_range("no agent with id " + std::to_string(id));
}

std::vector<int> PopulationState::agent_ids() const {
    std::vector<int> ids;
    ids.reserve(slots.size());
    for (const auto& s : slots) ids.push_back(s.agent_id);
    return ids;
}

std::vector<int> exploit(PopulationState& state, const std::vector<int>& ranking) {
    const int p = static_cast<int>(state.slots.size());
    if (static_cast<int>(ranking.size()) != p) {
        throw std::invalid_argument("ranking does not cover the population");
    }
    const int k = truncation_count(p);
    std::vector<int> replaced;
    for (int t = 0; t < k; ++t) {
        const int source_id = ranking[t];           // t-th best
        const int target_id = ranking[p - 1 - t];   // t-th worst
        AgentSlot& target = state.slot_by_id(target_id);
        const AgentSlot& source = state.slot_by_id(source_id);
        target.net = source.net;
        target.hp = source.hp;
        target.lineage.push_back(LineageEvent{state.iteration, LineageEvent::Kind::ReplacedBy,
                                              source.agent_id, 0.0, 0.0});
        replaced.push_back(target_id);
    }
    return replaced;
}

void explore(PopulationState& state, const std::vector<int>& replaced_ids,
             const HyperparamBounds& bounds, Rng& rng) {
    for (int id : replaced_ids) {
        AgentSlot& slot = state.slot_by_id(id);
        const double lr_factor = rng.next_bool() ? 1.2 : 0.8;
        const double x_factor = rng.next_bool() ? 1.2 : 0.8;
        slot.hp.learning_rate =
            std::clamp(slot.hp.learning_rate * lr_factor, bounds.lr_min, bounds.lr_max);
        slot.hp.value_loss_ratio =
            std::clamp(slot.hp.value_loss_ratio * x_factor, bounds.x_min, bounds.x_max);
        slot.lineage.push_back(
            LineageEvent{state.iteration, LineageEvent::Kind::Perturbed, -1, lr_factor, x_factor});
    }
}

}  // namespace pbtzero
