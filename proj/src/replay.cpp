#include "replay.h"

namespace pbtzero {

void ReplayBuffer::append_iteration(int64_t iteration, std::vector<TrainingExample> examples) {
    if (!groups_.empty() && iteration <= groups_.back().iteration) {
        throw std::invalid_argument("replay iterations must be appended in increasing order");
    }
    total_ += examples.size();
    groups_.push_back(Group{iteration, std::move(examples)});
    while (static_cast<int>(groups_.size()) > window_) {
        total_ -= groups_.front().examples.size();
        groups_.pop_front();
    }
}

void ReplayBuffer::drop_last_iteration() {
    if (groups_.empty()) return;
    total_ -= groups_.back().examples.size();
    groups_.pop_back();
}

std::vector<const TrainingExample*> ReplayBuffer::sample_batch(size_t batch_size, Rng& rng) const {
    if (empty()) throw std::logic_error("sample_batch on an empty replay buffer");
    std::vector<const TrainingExample*> out;
    out.reserve(batch_size);
    for (size_t i = 0; i < batch_size; ++i) {
        uint64_t idx = rng.next_below(total_);
        for (const auto& g : groups_) {
            if (idx < g.examples.size()) {
                out.push_back(&g.examples[idx]);
                break;
            }
            idx -= g.examples.size();
        }
    }
    return out;
}

}  // namespace pbtzero
