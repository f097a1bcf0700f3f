#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "rng.h"

namespace pbtzero {

struct TrainingExample {
    std::vector<uint8_t> features;  // kFeaturePlanes * n * n, values 0/1
    std::vector<float> pi;          // n * n + 1, normalized visit distribution
    std::vector<int8_t> z;          // one entry per value output, each in {-1, 0, +1}
    int32_t source_agent = 0;
    int64_t iteration = 0;

    bool operator==(const TrainingExample&) const = default;
};

/// Sliding-window store shared by the whole population: examples are grouped
/// by iteration and the oldest iteration is dropped whole once the window is
/// exceeded. Sampling is uniform with replacement over everything retained.
///
/// Appends happen between phases (single writer); sampling during the
/// optimization phase is read-only and safe from any number of threads.
class ReplayBuffer {
public:
    explicit ReplayBuffer(int window_iterations) : window_(window_iterations) {
        if (window_iterations < 1) throw std::invalid_argument("replay window must be >= 1");
    }

    int window_iterations() const { return window_; }
    size_t size() const { return total_; }
    bool empty() const { return total_ == 0; }

    void append_iteration(int64_t iteration, std::vector<TrainingExample> examples);
    // Drops the newest iteration (used to roll back a failed iteration).
    void drop_last_iteration();

    std::vector<const TrainingExample*> sample_batch(size_t batch_size, Rng& rng) const;

    // Oldest-first view of the retained groups.
    struct Group {
        int64_t iteration;
        std::vector<TrainingExample> examples;
    };
    const std::deque<Group>& groups() const { return groups_; }

private:
    int window_;
    size_t total_ = 0;
    std::deque<Group> groups_;
};

}  // namespace pbtzero
