#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "board.h"

namespace pbtzero {

enum class ValueHeadKind : uint8_t { Single = 0, MultiKomi = 1 };

struct NetworkConfig {
    int board_size = 9;
    int residual_blocks = 3;
    int filters = 64;
    ValueHeadKind value_head = ValueHeadKind::Single;
    std::vector<double> komi_values;  // MultiKomi only, strictly increasing

    int value_outputs() const {
        return value_head == ValueHeadKind::Single ? 1 : static_cast<int>(komi_values.size());
    }
    bool valid() const;
    bool operator==(const NetworkConfig&) const = default;
};

struct Hyperparams {
    double learning_rate = 2e-2;
    double value_loss_ratio = 1.0;  // multiplier on the value error term
    double l2_coefficient = 1e-4;

    bool valid() const {
        return learning_rate > 0 && value_loss_ratio > 0 && l2_coefficient > 0 &&
               std::isfinite(learning_rate) && std::isfinite(value_loss_ratio) &&
               std::isfinite(l2_coefficient);
    }
};

struct NetworkOutput {
    std::vector<double> p;  // distribution over n*n+1 moves, sums to 1
    std::vector<double> v;  // one entry (Single) or one per komi (MultiKomi), each in [-1,1]
};

// Components of L = x * value_term + policy_term + reg_term. value_term is
// stored unscaled so the identity is checkable directly.
struct LossBreakdown {
    double value_term = 0.0;   // mean (z-v)^2, averaged over komi outputs for MultiKomi
    double policy_term = 0.0;  // -pi^T log p
    double reg_term = 0.0;     // l2 * ||theta||^2
    double total = 0.0;
};

// Parameter offsets within the flat weight vector. The architecture is a
// conv trunk with residual blocks and two heads:
//
//   stem:     3x3 conv, kFeaturePlanes -> F, ReLU
//   block i:  3x3 conv F -> F, ReLU, 3x3 conv F -> F, add input, ReLU
//   policy:   1x1 conv F -> 2, ReLU, fc 2*N^2 -> N^2+1, softmax
//   value:    1x1 conv F -> 1, ReLU, fc N^2 -> V, tanh     (V = value outputs)
//
// Every conv and fc carries a bias, so with N = board_size, F = filters and
// B = residual_blocks the parameter count is
//
//   (9*kFeaturePlanes*F + F)                stem
//   + B * 2 * (9*F*F + F)                   residual blocks
//   + (2*F + 2)                             policy 1x1 conv
//   + (2*N^2)*(N^2+1) + (N^2+1)             policy fc
//   + (F + 1)                               value 1x1 conv
//   + N^2*V + V                             value fc
struct NetLayout {
    struct Block {
        size_t w1, b1, w2, b2;
    };
    size_t stem_w = 0, stem_b = 0;
    std::vector<Block> blocks;
    size_t pconv_w = 0, pconv_b = 0, pfc_w = 0, pfc_b = 0;
    size_t vconv_w = 0, vconv_b = 0, vfc_w = 0, vfc_b = 0;
    size_t total = 0;

    static NetLayout build(const NetworkConfig& cfg);
};

// Scratch activations for one forward/backward pass. Reuse one instance per
// thread; never share a live instance between threads.
struct NetWorkspace {
    std::vector<double> input;
    std::vector<double> trunk;  // (B+1) activation maps of F*N*N each
    std::vector<double> t1;     // B intermediate maps (post-ReLU of first block conv)
    std::vector<double> pc, logits, p;
    std::vector<double> vc, v;
    std::vector<double> d_a, d_b, d_t1, d_pc, d_vc, d_logits, d_v;

    void resize_for(const NetworkConfig& cfg);
};

/// Policy/value network with hand-written forward and backward passes.
///
/// Math runs in double precision; parameter values are kept exactly
/// representable as 32-bit floats at all times (initialization, every SGD
/// update) so that weight checkpoints, which store f32, round-trip without
/// loss.
class Network {
public:
    explicit Network(NetworkConfig cfg);  // zero weights

    // He-style scaled uniform initialization, deterministic per seed.
    static Network init(const NetworkConfig& cfg, uint64_t seed);

    const NetworkConfig& config() const { return cfg_; }
    const NetLayout& layout() const { return layout_; }
    size_t parameter_count() const { return layout_.total; }
    const std::vector<double>& parameters() const { return theta_; }
    void set_parameters(std::vector<double> theta);  // quantizes to f32 values

    NetworkOutput forward(const FeatureTensor& features) const;
    NetworkOutput forward(const FeatureTensor& features, NetWorkspace& ws) const;

private:
    NetworkConfig cfg_;
    NetLayout layout_;
    std::vector<double> theta_;
};

inline double quantize_to_f32(double x) { return static_cast<double>(static_cast<float>(x)); }

// Raw forward over a double input buffer (kFeaturePlanes*N*N). Exposed so the
// training path and the finite-difference oracle can evaluate the network at
// arbitrary (unquantized) parameter vectors.
void run_forward(const NetworkConfig& cfg, const NetLayout& layout, const double* theta,
                 const double* input, NetWorkspace& ws);

// Eq-style loss on explicit outputs and targets:
//   L = x * mean_k (z_k - v_k)^2  -  pi^T log p  +  l2 * ||theta||^2
// Throws std::invalid_argument on an unnormalized pi, a z component outside
// {-1, 0, +1}, mismatched sizes, or non-finite inputs.
LossBreakdown compute_loss(const NetworkOutput& output, const std::vector<double>& target_pi,
                           const std::vector<double>& z, const Hyperparams& hp,
                           const std::vector<double>& theta);

// Value output for a specific komi. MultiKomi heads require an exact match
// against the configured list; Single heads return the lone output (the
// caller is responsible for only asking about the game komi).
double value_for_komi(const NetworkOutput& output, const NetworkConfig& cfg, double komi);

}  // namespace pbtzero
