#pragma once

#include <span>

#include "network.h"
#include "replay.h"

namespace pbtzero {

class TrainStepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Batch-mean loss and its gradient with respect to theta. The batch is split
// into a fixed number of blocks; per-block partial sums are reduced in block
// order, so the result is bit-identical for every thread count (threads only
// decides how many blocks run concurrently).
//
// grad must have layout.total entries; it is overwritten.
LossBreakdown batch_loss_and_gradient(const NetworkConfig& cfg, const NetLayout& layout,
                                      const std::vector<double>& theta,
                                      std::span<const TrainingExample* const> batch,
                                      const Hyperparams& hp, std::vector<double>& grad,
                                      int threads);

// Straightforward single-pass serial implementation, kept as the reference
// the blocked/parallel kernel is tested and benchmarked against.
LossBreakdown reference_loss_and_gradient(const NetworkConfig& cfg, const NetLayout& layout,
                                          const std::vector<double>& theta,
                                          std::span<const TrainingExample* const> batch,
                                          const Hyperparams& hp, std::vector<double>& grad);

// Batch-mean loss only (used by the finite-difference oracle in tests).
LossBreakdown batch_loss(const NetworkConfig& cfg, const NetLayout& layout,
                         const std::vector<double>& theta,
                         std::span<const TrainingExample* const> batch, const Hyperparams& hp);

// One SGD step on the mean loss over the batch. Returns the pre-update batch
// mean breakdown. Throws TrainStepError on an empty batch or a non-finite
// gradient (weights are left untouched in both cases).
LossBreakdown train_step(Network& net, std::span<const TrainingExample* const> batch,
                         const Hyperparams& hp, int threads = 1);

}  // namespace pbtzero
